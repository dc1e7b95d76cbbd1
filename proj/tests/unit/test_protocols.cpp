#include <doctest.h>

#include <cmath>
#include <random>

#include "netcon/errors.hpp"
#include "netcon/protocols.hpp"
#include "netcon/stability.hpp"
#include "test_helpers.hpp"

using namespace netcon;

namespace {

ProtocolSpec two_agent_first_order() {
    return ProtocolSpec::first_order(Graph(2, {{1, 2}}), {ScalarFn::constant(1.0), ScalarFn::constant(1.0)},
                                     {ScalarFn::linear(1.0)});
}

}  // namespace

TEST_CASE("first-order rhs hand evaluation") {
    const auto spec = two_agent_first_order();
    const Vec xdot = rhs_first_order_nonlinear(spec, {1.0, 0.0});
    CHECK(xdot[0] == doctest::Approx(-1.0));
    CHECK(xdot[1] == doctest::Approx(1.0));

    // Consensus is an equilibrium (a_ij(0) = 0).
    const Vec at_consensus = rhs_first_order_nonlinear(spec, {3.7, 3.7});
    CHECK(at_consensus[0] == 0.0);
    CHECK(at_consensus[1] == 0.0);
}

TEST_CASE("first-order flow balance: sum of xdot_i / gamma_i vanishes") {
    // Building-style setup: bump gains, linear conductivities.
    Graph g(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
    std::vector<ScalarFn> gains = {
        ScalarFn::constant(0.02), ScalarFn::bump_reciprocal(50.0, 500.0, 23.0, 0.4),
        ScalarFn::constant(0.02), ScalarFn::bump_reciprocal(50.0, 500.0, 23.0, 0.4)};
    std::vector<ScalarFn> inter(4, ScalarFn::linear(1.8));
    const auto spec = ProtocolSpec::first_order(g, gains, inter);

    const Vec x = {24.0, 20.0, 29.0, 22.5};
    const Vec xdot = rhs_first_order_nonlinear(spec, x);
    double balance = 0.0;
    for (std::size_t i = 0; i < 4; ++i) balance += xdot[i] / gains[i](x[i]);
    CHECK(std::abs(balance) < 1e-12);
}

TEST_CASE("second-order rhs hand evaluation and bounded acceleration") {
    Graph g(2, {{1, 2}});
    auto spec = ProtocolSpec::second_order(g, {ScalarFn::constant(1.0), ScalarFn::constant(1.0)},
                                           {ScalarFn::linear(1.0)}, {ScalarFn::linear(1.0)});
    Vec xdot, vdot;
    rhs_second_order_nonlinear(spec, {1.0, 0.0}, {0.0, 0.0}, xdot, vdot);
    CHECK(xdot[0] == 0.0);
    CHECK(vdot[0] == doctest::Approx(-1.0));
    CHECK(vdot[1] == doctest::Approx(1.0));

    // Satellite gain 1/(|v|+c) keeps vdot finite even at v = 0.
    const double c = 0.1;
    auto sat = ProtocolSpec::second_order(
        g, {ScalarFn::reciprocal_abs_shift(c), ScalarFn::reciprocal_abs_shift(c)},
        {ScalarFn::exp_sgn(20.0)}, {ScalarFn::exp_sgn(10.0)});
    rhs_second_order_nonlinear(sat, {5.0, -5.0}, {0.0, 0.0}, xdot, vdot);
    const double worst_flow = 20.0 * (std::exp(10.0) - 1.0);
    CHECK(std::isfinite(vdot[0]));
    CHECK(std::abs(vdot[0]) <= worst_flow / c + 1.0);
}

TEST_CASE("damped rhs hand evaluation and energy-rate identity") {
    Graph g(2, {{1, 2}});
    auto spec = ProtocolSpec::second_order_damped(
        g, {ScalarFn::constant(1.0), ScalarFn::constant(1.0)}, {ScalarFn::linear(1.0)});
    Vec xdot, vdot;
    rhs_second_order_damped(spec, {1.0, 0.0}, {1.0, 1.0}, xdot, vdot);
    CHECK(vdot[0] == doctest::Approx(-2.0));
    CHECK(vdot[1] == doctest::Approx(0.0));

    rhs_second_order_damped(spec, {2.5, 2.5}, {0.0, 0.0}, xdot, vdot);
    CHECK(vdot[0] == 0.0);
    CHECK(vdot[1] == 0.0);

    // d/dt E = sum_i (kappa_i(x_i) xdot_i + vdot_i) = 0 along any state.
    std::mt19937 rng(53);
    Graph g5(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}});
    std::vector<ScalarFn> kappas = {ScalarFn::constant(1.0), ScalarFn::constant(2.0),
                                    ScalarFn::reciprocal_abs_shift(0.5), ScalarFn::constant(0.7),
                                    ScalarFn::bump_reciprocal(1.0, 1.0, 0.0, 1.0)};
    std::vector<ScalarFn> inter(5, ScalarFn::exp_sgn(0.5));
    auto spec5 = ProtocolSpec::second_order_damped(g5, kappas, inter);
    for (int rep = 0; rep < 20; ++rep) {
        const Vec x = testing::random_vec(rng, 5, -2.0, 2.0);
        const Vec v = testing::random_vec(rng, 5, -2.0, 2.0);
        rhs_second_order_damped(spec5, x, v, xdot, vdot);
        double rate = 0.0;
        for (std::size_t i = 0; i < 5; ++i) rate += kappas[i](x[i]) * xdot[i] + vdot[i];
        CHECK(std::abs(rate) < 1e-10);
    }
}

TEST_CASE("PI single: equilibrium, conserved mean and drift") {
    Graph g(3, {{1, 2}, {2, 3}});
    const Vec anchor = {2.0, 2.0, 2.0};
    auto spec = ProtocolSpec::pi_single(g, 1.0, 2.0, 0.5, {}, anchor);
    Vec zdot, xdot;
    rhs_pi_single(spec, {0.0, 0.0, 0.0}, anchor, zdot, xdot);
    for (double v : xdot) CHECK(v == 0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(zdot[i] == anchor[i]);  // zdot tracks x

    // delta = 0, d = 0: the mean position is conserved for any state.
    auto nodrift = ProtocolSpec::pi_single(g, 1.0, 2.0, 0.0, {}, {});
    std::mt19937 rng(59);
    for (int rep = 0; rep < 20; ++rep) {
        const Vec z = testing::random_vec(rng, 3, -5.0, 5.0);
        const Vec x = testing::random_vec(rng, 3, -5.0, 5.0);
        rhs_pi_single(nodrift, z, x, zdot, xdot);
        CHECK(std::abs(vec_sum(xdot)) < 1e-12);
    }

    // Unbalanced disturbance: the sum drifts at exactly 1^T d.
    const Vec d = {0.5, -0.2, 1.1};
    auto drift = ProtocolSpec::pi_single(g, 1.0, 2.0, 0.0, d, {});
    const Vec z = testing::random_vec(rng, 3, -5.0, 5.0);
    const Vec x = testing::random_vec(rng, 3, -5.0, 5.0);
    rhs_pi_single(drift, z, x, zdot, xdot);
    CHECK(vec_sum(xdot) == doctest::Approx(vec_sum(d)).epsilon(1e-12));
}

TEST_CASE("PI double: robot string setup, hand product") {
    Graph g(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}});
    const Vec d = {1.0, 0.0, 0.0, 0.0, 0.0};
    const Vec x0 = {5.0, -6.0, 8.0, 4.0, 5.0};
    auto spec = ProtocolSpec::pi_double(g, 1.0, 5.0, 3.0, 0.0, d, x0);

    Vec zdot, xdot, vdot;
    rhs_pi_double(spec, Vec(5, 0.0), x0, Vec(5, 0.0), zdot, xdot, vdot);
    // L x0 on the path graph: (11, -25, 18, -5, 1); vdot = d - 5 L x0.
    const Vec expect = {1.0 - 55.0, 125.0, -90.0, 25.0, -5.0};
    for (std::size_t i = 0; i < 5; ++i) CHECK(vdot[i] == doctest::Approx(expect[i]));

    // Consensus rest state with constant z offset is an equilibrium in (x, v).
    const auto nod = ProtocolSpec::pi_double(g, 1.0, 5.0, 3.0, 0.0, {}, {});
    rhs_pi_double(nod, Vec(5, 3.3), Vec(5, 1.0), Vec(5, 0.0), zdot, xdot, vdot);
    for (double v : vdot) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("PI double flat rhs equals the block-matrix form when delta = 0") {
    std::mt19937 rng(61);
    const Graph g = testing::random_connected_graph(rng, 3, 6);
    const std::size_t n = g.vertex_count();
    const double a = 0.7, b = 2.1, gamma = 1.3;
    const Vec d = testing::random_vec(rng, n, -1.0, 1.0);
    auto spec = ProtocolSpec::pi_double(g, a, b, gamma, 0.0, d, {});
    const Matrix A = assemble_pi_double(g, a, b, gamma, 0.0);

    for (int rep = 0; rep < 10; ++rep) {
        const Vec s = testing::random_vec(rng, 3 * n, -2.0, 2.0);
        Vec ds;
        spec.rhs(0.0, s, ds);
        Vec expect = A * s;
        for (std::size_t i = 0; i < n; ++i) expect[2 * n + i] += d[i];
        for (std::size_t i = 0; i < 3 * n; ++i)
            CHECK(ds[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("pairwise interaction flows cancel (Newton's third law)") {
    std::mt19937 rng(67);
    for (int rep = 0; rep < 20; ++rep) {
        const Graph g = testing::random_connected_graph(rng);
        std::vector<ScalarFn> inter;
        for (std::size_t k = 0; k < g.edge_count(); ++k)
            inter.push_back(k % 2 == 0 ? ScalarFn::exp_sgn(1.0) : ScalarFn::linear(2.0));
        const Vec x = testing::random_vec(rng, g.vertex_count(), -3.0, 3.0);
        CHECK(std::abs(vec_sum(interaction_flow(g, inter, x))) < 1e-12);
    }
}

TEST_CASE("PI translation invariance") {
    std::mt19937 rng(71);
    const Graph g = testing::random_connected_graph(rng, 3, 6);
    const std::size_t n = g.vertex_count();
    const Vec d = testing::random_vec(rng, n, -1.0, 1.0);
    const Vec anchor = testing::random_vec(rng, n, -1.0, 1.0);
    auto spec = ProtocolSpec::pi_single(g, 0.8, 1.5, 0.4, d, anchor);

    const double c = 2.75;
    Vec anchor_shifted = anchor;
    for (double& v : anchor_shifted) v += c;
    auto shifted = ProtocolSpec::pi_single(g, 0.8, 1.5, 0.4, d, anchor_shifted);

    const Vec z = testing::random_vec(rng, n, -2.0, 2.0);
    const Vec x = testing::random_vec(rng, n, -2.0, 2.0);
    Vec x_shift = x;
    for (double& v : x_shift) v += c;

    Vec zdot1, xdot1, zdot2, xdot2;
    rhs_pi_single(spec, z, x, zdot1, xdot1);
    rhs_pi_single(shifted, z, x_shift, zdot2, xdot2);
    for (std::size_t i = 0; i < n; ++i) CHECK(xdot1[i] == doctest::Approx(xdot2[i]).epsilon(1e-11));
}

TEST_CASE("constructor contract violations") {
    Graph g(2, {{1, 2}});
    // Gain fails positivity.
    CHECK_THROWS_AS(ProtocolSpec::first_order(g, {ScalarFn::constant(-1.0), ScalarFn::constant(1.0)},
                                              {ScalarFn::linear(1.0)}),
                    InputError);
    // Interaction fails oddness.
    CHECK_THROWS_AS(ProtocolSpec::first_order(g, {ScalarFn::constant(1.0), ScalarFn::constant(1.0)},
                                              {ScalarFn::constant(1.0)}),
                    InputError);
    // Wrong counts.
    CHECK_THROWS_AS(ProtocolSpec::first_order(g, {ScalarFn::constant(1.0)}, {ScalarFn::linear(1.0)}),
                    InputError);
    CHECK_THROWS_AS(ProtocolSpec::first_order(g, {ScalarFn::constant(1.0), ScalarFn::constant(1.0)},
                                              {ScalarFn::linear(1.0), ScalarFn::linear(1.0)}),
                    InputError);
    // PI gain constraints (a = 0 is allowed; negatives are not).
    CHECK_NOTHROW(ProtocolSpec::pi_double(g, 0.0, 5.0, 3.0, 0.0, {}, {}));
    CHECK_THROWS_AS(ProtocolSpec::pi_double(g, -1.0, 5.0, 3.0, 0.0, {}, {}), InputError);
    CHECK_THROWS_AS(ProtocolSpec::pi_double(g, 1.0, 0.0, 3.0, 0.0, {}, {}), InputError);
    CHECK_THROWS_AS(ProtocolSpec::pi_double(g, 1.0, 5.0, 0.0, 0.0, {}, {}), InputError);
    CHECK_THROWS_AS(ProtocolSpec::pi_single(g, 1.0, 1.0, -0.1, {}, {}), InputError);
    // Disturbance dimension mismatch.
    CHECK_THROWS_AS(ProtocolSpec::pi_single(g, 1.0, 1.0, 0.0, {1.0}, {}), InputError);
}

TEST_CASE("pack/unpack round trip for every kind") {
    Graph g(3, {{1, 2}, {2, 3}});
    std::vector<ScalarFn> gains(3, ScalarFn::constant(1.0));
    std::vector<ScalarFn> inter(2, ScalarFn::linear(1.0));

    const AgentState s{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}, {7.0, 8.0, 9.0}};

    auto fo = ProtocolSpec::first_order(g, gains, inter);
    AgentState r = fo.unpack(fo.pack({s.x, {}, {}}));
    CHECK(r.x == s.x);
    CHECK(r.v.empty());

    auto so = ProtocolSpec::second_order(g, gains, inter, inter);
    r = so.unpack(so.pack({s.x, s.v, {}}));
    CHECK(r.x == s.x);
    CHECK(r.v == s.v);

    auto pd = ProtocolSpec::pi_double(g, 1.0, 1.0, 1.0, 0.0, {}, {});
    r = pd.unpack(pd.pack(s));
    CHECK(r.x == s.x);
    CHECK(r.v == s.v);
    CHECK(r.z == s.z);
    CHECK(pd.state_size() == 9);
    CHECK(pd.z_offset() == 0);
    CHECK(pd.x_offset() == 3);
    CHECK(pd.v_offset() == 6);
}

TEST_CASE("exact consensus is an equilibrium of every kind") {
    std::mt19937 rng(151);
    const Graph g = testing::random_connected_graph(rng, 3, 6);
    const std::size_t n = g.vertex_count();
    std::vector<ScalarFn> gains(n, ScalarFn::reciprocal_abs_shift(0.4));
    std::vector<ScalarFn> inter(g.edge_count(), ScalarFn::exp_sgn(1.0));
    const double c = -1.7, w = 0.9;

    // First order: xdot = 0 at x = c 1.
    {
        const auto spec = ProtocolSpec::first_order(g, gains, inter);
        Vec ds;
        spec.rhs(0.0, Vec(n, c), ds);
        for (double v : ds) CHECK(v == 0.0);
    }
    // Second order: x = c 1, v = w 1 gives vdot = 0 (and xdot = v).
    {
        const auto spec = ProtocolSpec::second_order(g, gains, inter, inter);
        Vec s(2 * n, c);
        for (std::size_t i = 0; i < n; ++i) s[n + i] = w;
        Vec ds;
        spec.rhs(0.0, s, ds);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(ds[i] == w);
            CHECK(ds[n + i] == 0.0);
        }
    }
    // Damped: consensus at rest.
    {
        const auto spec = ProtocolSpec::second_order_damped(g, gains, inter);
        Vec s(2 * n, c);
        for (std::size_t i = 0; i < n; ++i) s[n + i] = 0.0;
        Vec ds;
        spec.rhs(0.0, s, ds);
        for (std::size_t i = 0; i < n; ++i) CHECK(ds[n + i] == 0.0);
    }
    // PI kinds: z constant, x at the anchor, v = 0.
    {
        const auto spec = ProtocolSpec::pi_single(g, 1.0, 2.0, 0.3, {}, Vec(n, c));
        Vec s(2 * n, 0.5);  // z block constant
        for (std::size_t i = 0; i < n; ++i) s[n + i] = c;
        Vec ds;
        spec.rhs(0.0, s, ds);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ds[n + i]) < 1e-15);
    }
    {
        const auto spec = ProtocolSpec::pi_double(g, 1.0, 2.0, 1.5, 0.3, {}, Vec(n, c));
        Vec s(3 * n, 0.5);
        for (std::size_t i = 0; i < n; ++i) {
            s[n + i] = c;
            s[2 * n + i] = 0.0;
        }
        Vec ds;
        spec.rhs(0.0, s, ds);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ds[2 * n + i]) < 1e-15);
    }
}

TEST_CASE("PI double translation invariance") {
    std::mt19937 rng(157);
    const Graph g = testing::random_connected_graph(rng, 3, 6);
    const std::size_t n = g.vertex_count();
    const Vec d = testing::random_vec(rng, n, -1.0, 1.0);
    const Vec anchor = testing::random_vec(rng, n, -1.0, 1.0);
    const double c = -3.25;
    Vec anchor_shifted = anchor;
    for (double& v : anchor_shifted) v += c;

    auto spec = ProtocolSpec::pi_double(g, 0.9, 2.0, 1.1, 0.6, d, anchor);
    auto shifted = ProtocolSpec::pi_double(g, 0.9, 2.0, 1.1, 0.6, d, anchor_shifted);

    const Vec z = testing::random_vec(rng, n, -2.0, 2.0);
    const Vec x = testing::random_vec(rng, n, -2.0, 2.0);
    const Vec v = testing::random_vec(rng, n, -2.0, 2.0);
    Vec x_shift = x;
    for (double& e : x_shift) e += c;

    Vec z1, x1, v1, z2, x2, v2;
    rhs_pi_double(spec, z, x, v, z1, x1, v1);
    rhs_pi_double(shifted, z, x_shift, v, z2, x2, v2);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(v1[i] == doctest::Approx(v2[i]).epsilon(1e-11));
}
