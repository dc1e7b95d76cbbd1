#include "netcon/invariants.hpp"

#include <cmath>

#include "netcon/errors.hpp"
#include "netcon/numerics.hpp"

namespace netcon {

namespace {

// int y/f(y) dy over [lo, hi]; closed form for the gain families.
double reciprocal_moment(const ScalarFn& f, double lo, double hi) {
    switch (f.family()) {
        case FnFamily::Constant:
            return (hi * hi - lo * lo) / (2.0 * f.params()[0]);
        case FnFamily::ReciprocalAbsShift: {
            // y/f = y(|y| + c): primitive |y|^3/3 + c y^2/2.
            const double c = f.params()[0];
            auto prim = [c](double y) {
                const double ay = std::abs(y);
                return ay * ay * ay / 3.0 + c * y * y / 2.0;
            };
            return prim(hi) - prim(lo);
        }
        case FnFamily::BumpReciprocal: {
            // y/f = y(base + amp e^{-u^2}), u = (y-center)/width.
            const double base = f.params()[0], amp = f.params()[1], center = f.params()[2],
                         width = f.params()[3];
            auto prim = [=](double y) {
                const double u = (y - center) / width;
                return base * y * y / 2.0 - amp * width * width / 2.0 * std::exp(-u * u) +
                       center * amp * width * std::sqrt(M_PI) / 2.0 * std::erf(u);
            };
            return prim(hi) - prim(lo);
        }
        default:
            return quad_adaptive([&](double y) { return y / f(y); }, lo, hi, 1e-12);
    }
}

// int_{ref}^{x} (y - ref)/f(y) dy, the per-agent integral Lyapunov term.
double shifted_reciprocal_integral(const ScalarFn& f, double ref, double x) {
    return reciprocal_moment(f, ref, x) - ref * f.reciprocal_antiderivative(ref, x);
}

}  // namespace

double conserved_E_first(const std::vector<ScalarFn>& gains, const Vec& x) {
    if (gains.size() != x.size()) throw InputError("conserved_E_first: dimension mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) e += gains[i].reciprocal_antiderivative(0.0, x[i]);
    return e;
}

double conserved_p_second(const std::vector<ScalarFn>& gains, const Vec& v) {
    return conserved_E_first(gains, v);
}

double conserved_E_damped(const std::vector<ScalarFn>& dampings, const Vec& x, const Vec& v) {
    if (dampings.size() != x.size() || v.size() != x.size())
        throw InputError("conserved_E_damped: dimension mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        e += dampings[i].antiderivative(0.0, x[i]) + v[i];
    return e;
}

double lyapunov_first(const std::vector<ScalarFn>& gains, const Vec& x, double x_star) {
    if (gains.size() != x.size()) throw InputError("lyapunov_first: dimension mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        v += shifted_reciprocal_integral(gains[i], x_star, x[i]);
    return v;
}

double lyapunov_second(const std::vector<ScalarFn>& gains, const std::vector<ScalarFn>& inter_a,
                       const Graph& g, const Vec& x, const Vec& v, double v_star) {
    if (gains.size() != v.size() || x.size() != g.vertex_count() ||
        inter_a.size() != g.edge_count())
        throw InputError("lyapunov_second: dimension mismatch");
    double val = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        val += shifted_reciprocal_integral(gains[i], v_star, v[i]);
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        const auto [i1, j1] = g.edges()[k];
        // int_0^{xbar} a is even in xbar, so the edge orientation is immaterial.
        val += inter_a[k].antiderivative(0.0, x[i1 - 1] - x[j1 - 1]);
    }
    return val;
}

double lyapunov_damped(const std::vector<ScalarFn>& inter_a, const Graph& g, const Vec& x,
                       const Vec& v) {
    if (x.size() != g.vertex_count() || v.size() != x.size() || inter_a.size() != g.edge_count())
        throw InputError("lyapunov_damped: dimension mismatch");
    double val = 0.0;
    for (double vi : v) val += vi * vi / 2.0;
    // Each edge once: this is the form whose derivative along the damped flow
    // is -sum_i kappa_i v_i^2 (the linear case reduces to v'v/2 + x'Lx/2).
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        const auto [i1, j1] = g.edges()[k];
        val += inter_a[k].antiderivative(0.0, x[i1 - 1] - x[j1 - 1]);
    }
    return val;
}

}  // namespace netcon
