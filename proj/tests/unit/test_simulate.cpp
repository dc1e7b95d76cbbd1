#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "netcon/errors.hpp"
#include "netcon/simulate.hpp"
#include "netcon/stability.hpp"
#include "test_helpers.hpp"

using namespace netcon;

namespace {

ProtocolSpec small_first_order() {
    Graph g(3, {{1, 2}, {2, 3}, {1, 3}});
    std::vector<ScalarFn> gains = {ScalarFn::constant(1.0), ScalarFn::reciprocal_abs_shift(0.8),
                                   ScalarFn::constant(0.6)};
    std::vector<ScalarFn> inter = {ScalarFn::linear(1.0), ScalarFn::exp_sgn(0.5),
                                   ScalarFn::linear(0.7)};
    return ProtocolSpec::first_order(std::move(g), std::move(gains), std::move(inter));
}

}  // namespace

TEST_CASE("diameter basics") {
    CHECK(disagreement_diameter(Vec(4, 2.5)) == 0.0);
    CHECK(disagreement_diameter({1.0, -1.0}) == 2.0);
    CHECK(disagreement_diameter({5.0, -6.0, 8.0, 4.0, 5.0}) == 14.0);
    CHECK_THROWS_AS(disagreement_diameter({}), InputError);
}

TEST_CASE("consensus initial state converges at the first streak") {
    const auto spec = small_first_order();
    RunConfig cfg;
    cfg.t_end = 50.0;
    cfg.h = 1e-3;
    cfg.record_every = 10;
    const auto traj = run(spec, Vec(3, 1.5), {}, cfg);
    CHECK(traj.status == RunStatus::Converged);
    for (const auto& s : traj.states)
        for (double x : s) CHECK(x == 1.5);
}

TEST_CASE("first-order run conserves E and decreases V") {
    const auto spec = small_first_order();
    RunConfig cfg;
    cfg.t_end = 100.0;
    cfg.h = 1e-3;
    cfg.record_every = 50;
    const Vec x0 = {1.2, -0.7, 0.4};
    const auto traj = run(spec, x0, {}, cfg);
    CHECK(traj.status == RunStatus::Converged);

    const auto* e = traj.channel("E");
    REQUIRE(e != nullptr);
    double drift = 0.0;
    for (double v : e->samples) drift = std::max(drift, std::abs(v - e->samples.front()));
    CHECK(drift <= 1e-6 * (1.0 + std::abs(e->samples.front())));

    const auto* lyap = traj.channel("V");
    REQUIRE(lyap != nullptr);
    for (std::size_t k = 1; k < lyap->samples.size(); ++k)
        CHECK(lyap->samples[k] <= lyap->samples[k - 1] + 1e-8 * (1.0 + std::abs(lyap->samples[k - 1])));

    // Terminal state agrees with the integral-equation prediction.
    const auto pred = predict_first_order(spec.gains(), x0);
    for (double x : traj.final_state()) CHECK(std::abs(x - pred.value) < 1e-3);

    // The p channel is undefined for this kind.
    CHECK(std::isnan(traj.channel("p")->samples.front()));
}

TEST_CASE("runs are bit-identical across invocations") {
    const auto spec = small_first_order();
    RunConfig cfg;
    cfg.t_end = 20.0;
    cfg.h = 1e-3;
    cfg.record_every = 100;
    const Vec x0 = {0.3, -1.1, 0.9};
    const auto a = run(spec, x0, {}, cfg);
    const auto b = run(spec, x0, {}, cfg);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        CHECK(a.times[k] == b.times[k]);
        for (std::size_t i = 0; i < a.states[k].size(); ++i)
            CHECK(a.states[k][i] == b.states[k][i]);
    }
}

TEST_CASE("halving the step barely moves the terminal state") {
    const auto spec = small_first_order();
    RunConfig cfg;
    cfg.t_end = 40.0;
    cfg.h = 2e-3;
    cfg.record_every = 1000000;  // final sample only
    cfg.conv_tol = 0.0;          // disable early stopping for the comparison
    const Vec x0 = {1.2, -0.7, 0.4};
    const auto coarse = run(spec, x0, {}, cfg);
    cfg.h = 1e-3;
    const auto fine = run(spec, x0, {}, cfg);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(std::abs(coarse.final_state()[i] - fine.final_state()[i]) < 1e-6);
}

TEST_CASE("PI single dichotomy: drift rate and boundedness") {
    std::mt19937 rng(127);
    const Graph g = testing::random_connected_graph(rng, 4, 6);
    const std::size_t n = g.vertex_count();

    // Unbalanced disturbance: relative convergence while the mean drifts at
    // (1/n) 1^T d.
    Vec d = testing::random_vec(rng, n, 0.2, 1.0);
    auto spec = ProtocolSpec::pi_single(g, 1.0, 2.0, 0.0, d, {});
    RunConfig cfg;
    cfg.t_end = 400.0;
    cfg.h = 2e-3;
    cfg.record_every = 100;
    const Vec x0 = testing::random_vec(rng, n, -2.0, 2.0);
    const auto traj = run(spec, x0, {}, cfg);
    CHECK(traj.status == RunStatus::Converged);  // diameter criterion only

    const auto* mean = traj.channel("mean");
    const std::size_t last = traj.times.size() - 1;
    const std::size_t mid = last / 2;
    const double rate = (mean->samples[last] - mean->samples[mid]) /
                        (traj.times[last] - traj.times[mid]);
    CHECK(std::abs(rate - vec_sum(d) / static_cast<double>(n)) < 1e-4);

    // Balanced disturbance: absolute states stay bounded.
    Vec balanced = d;
    balanced[0] -= vec_sum(d);
    auto spec_b = ProtocolSpec::pi_single(g, 1.0, 2.0, 0.0, balanced, {});
    const auto traj_b = run(spec_b, x0, {}, cfg);
    CHECK(traj_b.status != RunStatus::Diverged);
    double sup = 0.0;
    for (const auto& s : traj_b.states) sup = std::max(sup, inf_norm(s));
    CHECK(sup < 100.0);

    // Anchored, disturbance-free: terminal state is the initial average.
    auto spec_anchor = ProtocolSpec::pi_single(g, 1.0, 2.0, 0.5, {}, x0);
    const auto traj_a = run(spec_anchor, x0, {}, cfg);
    const double want = vec_mean(x0);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(traj_a.final_state()[spec_anchor.x_offset() + i] - want) < 1e-4);
}

TEST_CASE("trajectory CSV schema") {
    const auto spec = small_first_order();
    RunConfig cfg;
    cfg.t_end = 1.0;
    cfg.h = 1e-2;
    cfg.record_every = 10;
    const auto traj = run(spec, {1.0, 0.0, -1.0}, {}, cfg);
    const std::string path = "test_traj_tmp.csv";
    write_trajectory_csv(traj, spec, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x1,x2,x3,E,p,V,diam,mean");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == traj.times.size());
    in.close();
    std::remove(path.c_str());

    const std::string meta = "test_traj_tmp.json";
    write_trajectory_sidecar(traj, spec, cfg, meta);
    std::ifstream jin(meta);
    std::stringstream buf;
    buf << jin.rdbuf();
    CHECK(buf.str().find("\"status\"") != std::string::npos);
    CHECK(buf.str().find("first_order_nonlinear") != std::string::npos);
    jin.close();
    std::remove(meta.c_str());

    // PI double header carries v and z blocks.
    Graph g(2, {{1, 2}});
    auto pd = ProtocolSpec::pi_double(g, 1.0, 5.0, 3.0, 0.0, {}, {});
    RunConfig cfg2;
    cfg2.t_end = 0.5;
    cfg2.h = 1e-2;
    cfg2.record_every = 10;
    const auto traj2 = run(pd, {1.0, 0.0}, {0.0, 0.0}, cfg2);
    write_trajectory_csv(traj2, pd, path);
    std::ifstream in2(path);
    std::getline(in2, header);
    CHECK(header == "t,x1,x2,v1,v2,z1,z2,E,p,V,diam,mean");
    in2.close();
    std::remove(path.c_str());
}

TEST_CASE("dimension mismatches rejected") {
    const auto spec = small_first_order();
    RunConfig cfg;
    CHECK_THROWS_AS(run(spec, {1.0}, {}, cfg), InputError);
    CHECK_THROWS_AS(run(spec, {1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}, cfg), InputError);
}

TEST_CASE("spectral classification predicts the simulated fate of PI runs") {
    std::mt19937 rng(137);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    while (done < 20) {
        const Graph g = testing::random_connected_graph(rng, 3, 6);
        const std::size_t n = g.vertex_count();
        const double b = 1.0 + 2.0 * u(rng), gamma = 1.0 + 2.0 * u(rng);
        const bool want_stable = done % 2 == 0;
        const double a = want_stable ? (0.1 + 0.5 * u(rng)) * b * gamma
                                     : (1.3 + 0.7 * u(rng)) * b * gamma;
        const auto report = classify_pi_double(g, a, b, gamma);
        // Keep margins away from zero so the finite horizon is decisive.
        if (std::abs(report.classification.margin) < 0.12) continue;
        ++done;

        const Vec x0 = testing::random_vec(rng, n, -1.5, 1.5);
        auto spec = ProtocolSpec::pi_double(g, a, b, gamma, 0.0, {}, {});
        RunConfig cfg;
        cfg.h = 2e-3;
        cfg.record_every = 100;
        cfg.conv_tol = 0.0;  // no early stop; read the horizon diameter
        if (want_stable) {
            CHECK(report.classification.kind == StabilityKind::Hurwitz);
            cfg.t_end = 200.0;
            const auto traj = run(spec, x0, Vec(n, 0.0), cfg);
            CHECK(traj.status == RunStatus::TimedOut);
            CHECK(traj.channel("diam")->samples.back() < 1e-6);
        } else {
            CHECK(report.classification.kind == StabilityKind::Unstable);
            cfg.t_end = 500.0;
            const auto traj = run(spec, x0, Vec(n, 0.0), cfg);
            CHECK(traj.status == RunStatus::Diverged);
        }
    }
}
