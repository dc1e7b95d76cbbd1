#pragma once

#include <vector>

#include "netcon/functions.hpp"
#include "netcon/graph.hpp"
#include "netcon/linalg.hpp"

namespace netcon {

enum class PredictionMethod { ClosedForm, Quadrature };

struct EquilibriumPrediction {
    double value;     // x* or v*
    double residual;  // |LHS - RHS| of the integral equation at `value`
    PredictionMethod method;
};

/// Consensus value of the first-order nonlinear protocol: the unique x* with
/// sum_i int_0^{x0_i} 1/gamma_i = int_0^{x*} sum_i 1/gamma_i.
EquilibriumPrediction predict_first_order(const std::vector<ScalarFn>& gains, const Vec& x0);

/// Same conservation law in the velocities for the second-order protocol.
EquilibriumPrediction predict_second_order_velocity(const std::vector<ScalarFn>& gains,
                                                    const Vec& v0);

/// Consensus point of the damped second-order protocol: the dampings enter
/// directly rather than reciprocally, and initial velocities shift the budget:
/// sum_i (int_0^{x0_i} kappa_i + v0_i) = int_0^{x*} sum_i kappa_i.
EquilibriumPrediction predict_damped_position(const std::vector<ScalarFn>& dampings, const Vec& x0,
                                              const Vec& v0);

/// Average-consensus value of the PI protocols in the disturbance-free case.
double predict_pi_average(const Vec& x0);

struct PowerSteadyState {
    Vec z0;      // integral states at equilibrium
    Vec omega0;  // = omega_ref * 1
};

/// Steady state of the decentralized frequency controller:
/// z0 = (b I + L_k)^{-1} (D omega_ref 1 - p_m), omega0 = omega_ref 1.
/// `lk` is the weighted Laplacian; `omega_ref` in rad/s.
PowerSteadyState power_steady_state_from_parts(const Matrix& lk, const Vec& damping, const Vec& p_m,
                                               double b, double omega_ref);

}  // namespace netcon
