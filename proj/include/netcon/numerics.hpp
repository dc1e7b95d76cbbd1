#pragma once

#include <functional>
#include <vector>

#include "netcon/linalg.hpp"

namespace netcon {

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
/// Antisymmetric under swapping the limits. Throws NumericalError if the
/// refinement depth cap (50) is exhausted.
double quad_adaptive(const std::function<double(double)>& f, double lo, double hi,
                     double tol = 1e-10);

/// Solves F(x) = target for strictly increasing continuous F. The initial
/// bracket [lo_seed, hi_seed] is expanded geometrically (up to 200 doublings)
/// until it straddles the target, then refined by Brent's method to
/// |F(x) - target| <= 1e-10 * (1 + |target|).
double solve_monotone(const std::function<double(double)>& F, double target,
                      double lo_seed, double hi_seed);
double solve_monotone(const std::function<double(double)>& F, double target,
                      double bracket_seed);

/// Dense linear solve by LU with partial pivoting. Throws NumericalError when
/// a pivot falls below 1e-12 * ||A||_inf (singular to working precision).
Vec solve_linear(Matrix a, Vec b);

/// Eigenvalues (with multiplicity) of a real square matrix: Householder
/// reduction to Hessenberg form followed by Francis double-shift QR with
/// 2x2 deflation for complex pairs. Throws NumericalError if the iteration
/// does not converge within 100*n sweeps.
std::vector<Complex> eigenvalues_general(const Matrix& a);

struct Polynomial2 {
    double a2, a1, a0;  // a2*s^2 + a1*s + a0, a2 != 0
};

struct Polynomial3 {
    double a3, a2, a1, a0;
};

enum class StabilityKind { Hurwitz, Marginal, Unstable };

struct StabilityClass {
    StabilityKind kind;
    double margin;  // max real part of the roots
};

const char* to_string(StabilityKind k);

/// Tolerance for classifying a real part or Routh minor as zero.
inline constexpr double kMarginalTol = 1e-7;

/// Routh-Hurwitz test for a2*s^2 + a1*s + a0 with a2 > 0. Hurwitz iff
/// a1, a0 > 0; marginal when a coefficient vanishes (within tol) while the
/// rest are nonnegative.
StabilityClass routh_hurwitz_2(const Polynomial2& p, double tol = kMarginalTol);

/// Routh-Hurwitz test for the cubic: Hurwitz iff a2, a1, a0 > 0 and
/// a2*a1 > a3*a0; marginal on the boundary a2*a1 = a3*a0 (within tol) with
/// positive coefficients, or when a0 ~ 0 with the remaining quadratic stable.
StabilityClass routh_hurwitz_3(const Polynomial3& p, double tol = kMarginalTol);

/// Roots of a quadratic/cubic with real coefficients (closed form; the cubic
/// uses the trigonometric/Cardano formulas). Used for analytic stability
/// margins independent of the QR eigensolver.
std::vector<Complex> quadratic_roots(const Polynomial2& p);
std::vector<Complex> cubic_roots(const Polynomial3& p);

}  // namespace netcon
