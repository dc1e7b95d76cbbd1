#pragma once

#include <vector>

#include "netcon/functions.hpp"
#include "netcon/graph.hpp"
#include "netcon/linalg.hpp"

namespace netcon {

/// Stored quantity of the first-order protocol: E(x) = sum_i int_0^{x_i} 1/gamma_i.
/// Time-invariant along trajectories; it pins down the consensus value.
double conserved_E_first(const std::vector<ScalarFn>& gains, const Vec& x);

/// Momentum analogue for the second-order protocol: p(v) = sum_i int_0^{v_i} 1/gamma_i.
double conserved_p_second(const std::vector<ScalarFn>& gains, const Vec& v);

/// Damped second-order invariant: E(x, v) = sum_i (int_0^{x_i} kappa_i + v_i).
double conserved_E_damped(const std::vector<ScalarFn>& dampings, const Vec& x, const Vec& v);

/// V(x) = sum_i int_{x*}^{x_i} (y - x*)/gamma_i(y) dy. Nonnegative, zero only
/// at exact consensus, nonincreasing along the protocol flow.
double lyapunov_first(const std::vector<ScalarFn>& gains, const Vec& x, double x_star);

/// V(xbar, v) = sum_i int_{v*}^{v_i} (y - v*)/gamma_i + sum_edges int_0^{xbar_e} a_e,
/// with xbar = B^T x the edge differences.
double lyapunov_second(const std::vector<ScalarFn>& gains, const std::vector<ScalarFn>& inter_a,
                       const Graph& g, const Vec& x, const Vec& v, double v_star);

/// V(x, v) = sum_i v_i^2/2 + sum_edges int_0^{xbar_e} a_e, each edge counted
/// once; its derivative along the damped flow is -sum_i kappa_i(x_i) v_i^2.
double lyapunov_damped(const std::vector<ScalarFn>& inter_a, const Graph& g, const Vec& x,
                       const Vec& v);

}  // namespace netcon
