#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "netcon/linalg.hpp"

namespace netcon {

enum class FnFamily {
    Constant,            // c
    Linear,              // k*y
    ExpSgn,              // k*(e^|y| - 1)*sgn(y)
    ReciprocalAbsShift,  // 1/(|y| + c)
    BumpReciprocal,      // 1/(base + amp*exp(-((y-center)/width)^2))
    PiecewiseLinear,     // odd piecewise-linear interpolant
};

const char* family_name(FnFamily f);
FnFamily family_from_name(const std::string& name);

/// Scalar function descriptor for gains, dampings and interaction functions.
/// Immutable value type; evaluation and antiderivatives are closed-form where
/// the family allows, with an adaptive-quadrature fallback otherwise.
class ScalarFn {
public:
    static ScalarFn constant(double c);
    static ScalarFn linear(double k);
    static ScalarFn exp_sgn(double k);
    static ScalarFn reciprocal_abs_shift(double c);
    static ScalarFn bump_reciprocal(double base, double amp, double center, double width);
    /// Knots for y >= 0 as (y, value) pairs with 0 < y1 < y2 < ...; the
    /// function passes through the origin and is mirrored to y < 0, so the
    /// result is odd by construction. Beyond the last knot it continues with
    /// the final segment's slope.
    static ScalarFn piecewise_linear_odd(std::vector<std::pair<double, double>> knots);

    /// Generic factory used by the config parser.
    static ScalarFn make(FnFamily family, const Vec& params);

    FnFamily family() const { return family_; }
    const Vec& params() const { return params_; }

    double operator()(double y) const;

    /// Integral of f over [lo, hi]; closed form except BumpReciprocal.
    double antiderivative(double lo, double hi) const;
    bool antiderivative_closed_form() const;

    /// Integral of 1/f over [lo, hi]; closed form for the gain families
    /// (Constant, ReciprocalAbsShift, BumpReciprocal), quadrature otherwise.
    double reciprocal_antiderivative(double lo, double hi) const;
    bool reciprocal_closed_form() const;

private:
    ScalarFn(FnFamily family, Vec params) : family_(family), params_(std::move(params)) {}
    FnFamily family_;
    Vec params_;  // flattened family parameters; PiecewiseLinear: y1,v1,y2,v2,...
};

struct GainReport {
    double gamma_lower;
    double gamma_upper;
    bool ok;  // strictly positive over the sampled range
};

/// Samples f on a uniform grid over [lo, hi] and reports the empirical bounds.
GainReport validate_gain(const ScalarFn& f, double lo, double hi, std::size_t samples);

struct InteractionReport {
    bool odd_ok;
    bool sign_ok;  // y*f(y) > 0 for sampled y != 0
    double lipschitz_estimate;
};

InteractionReport validate_interaction(const ScalarFn& f, double lo, double hi,
                                       std::size_t samples);

}  // namespace netcon
