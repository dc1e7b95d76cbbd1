#include "netcon/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "netcon/errors.hpp"
#include "netcon/numerics.hpp"

namespace netcon {

namespace {

void check_gains_positive(const std::vector<ScalarFn>& gains, const Vec& x0) {
    const auto [lo_it, hi_it] = std::minmax_element(x0.begin(), x0.end());
    const double lo = *lo_it - 1.0, hi = *hi_it + 1.0;
    for (const auto& g : gains) {
        if (!validate_gain(g, lo, hi, 101).ok)
            throw InputError("equilibrium: gain is not positive over the initial range");
    }
}

EquilibriumPrediction solve_conservation(const std::vector<ScalarFn>& fns, const Vec& x0,
                                         double target, bool reciprocal) {
    auto G = [&](double s) {
        double acc = 0.0;
        for (const auto& f : fns)
            acc += reciprocal ? f.reciprocal_antiderivative(0.0, s) : f.antiderivative(0.0, s);
        return acc;
    };
    const auto [lo_it, hi_it] = std::minmax_element(x0.begin(), x0.end());
    const double value = solve_monotone(G, target, *lo_it, *hi_it);
    const double residual = std::abs(G(value) - target);

    bool closed = true;
    for (const auto& f : fns)
        closed = closed && (reciprocal ? f.reciprocal_closed_form() : f.antiderivative_closed_form());
    return {value, residual, closed ? PredictionMethod::ClosedForm : PredictionMethod::Quadrature};
}

}  // namespace

EquilibriumPrediction predict_first_order(const std::vector<ScalarFn>& gains, const Vec& x0) {
    if (gains.size() != x0.size()) throw InputError("predict_first_order: dimension mismatch");
    if (x0.empty()) throw InputError("predict_first_order: empty state");
    check_gains_positive(gains, x0);
    double target = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i)
        target += gains[i].reciprocal_antiderivative(0.0, x0[i]);
    return solve_conservation(gains, x0, target, /*reciprocal=*/true);
}

EquilibriumPrediction predict_second_order_velocity(const std::vector<ScalarFn>& gains,
                                                    const Vec& v0) {
    return predict_first_order(gains, v0);
}

EquilibriumPrediction predict_damped_position(const std::vector<ScalarFn>& dampings, const Vec& x0,
                                              const Vec& v0) {
    if (dampings.size() != x0.size() || v0.size() != x0.size())
        throw InputError("predict_damped_position: dimension mismatch");
    if (x0.empty()) throw InputError("predict_damped_position: empty state");
    check_gains_positive(dampings, x0);
    double target = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i)
        target += dampings[i].antiderivative(0.0, x0[i]) + v0[i];
    return solve_conservation(dampings, x0, target, /*reciprocal=*/false);
}

double predict_pi_average(const Vec& x0) {
    if (x0.empty()) throw InputError("predict_pi_average: empty state");
    return vec_mean(x0);
}

PowerSteadyState power_steady_state_from_parts(const Matrix& lk, const Vec& damping, const Vec& p_m,
                                               double b, double omega_ref) {
    if (!(b > 0.0)) throw InputError("power_steady_state: integral gain b must be positive");
    const std::size_t n = damping.size();
    if (lk.rows() != n || p_m.size() != n) throw InputError("power_steady_state: dimension mismatch");
    Matrix a = lk;
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) += b;
        rhs[i] = damping[i] * omega_ref - p_m[i];
    }
    PowerSteadyState out;
    out.z0 = solve_linear(std::move(a), std::move(rhs));
    out.omega0.assign(n, omega_ref);
    return out;
}

}  // namespace netcon
