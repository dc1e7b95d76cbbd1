#include "netcon/functions.hpp"

#include <algorithm>
#include <cmath>

#include "netcon/errors.hpp"
#include "netcon/numerics.hpp"

namespace netcon {

namespace {

double sgn(double y) { return y > 0.0 ? 1.0 : (y < 0.0 ? -1.0 : 0.0); }

}  // namespace

const char* family_name(FnFamily f) {
    switch (f) {
        case FnFamily::Constant: return "constant";
        case FnFamily::Linear: return "linear";
        case FnFamily::ExpSgn: return "exp_sgn";
        case FnFamily::ReciprocalAbsShift: return "reciprocal_abs_shift";
        case FnFamily::BumpReciprocal: return "bump_reciprocal";
        case FnFamily::PiecewiseLinear: return "piecewise_linear";
    }
    return "unknown";
}

FnFamily family_from_name(const std::string& name) {
    if (name == "constant") return FnFamily::Constant;
    if (name == "linear") return FnFamily::Linear;
    if (name == "exp_sgn") return FnFamily::ExpSgn;
    if (name == "reciprocal_abs_shift") return FnFamily::ReciprocalAbsShift;
    if (name == "bump_reciprocal") return FnFamily::BumpReciprocal;
    if (name == "piecewise_linear") return FnFamily::PiecewiseLinear;
    throw InputError("unknown function family: " + name);
}

ScalarFn ScalarFn::constant(double c) { return ScalarFn(FnFamily::Constant, {c}); }
ScalarFn ScalarFn::linear(double k) { return ScalarFn(FnFamily::Linear, {k}); }
ScalarFn ScalarFn::exp_sgn(double k) { return ScalarFn(FnFamily::ExpSgn, {k}); }

ScalarFn ScalarFn::reciprocal_abs_shift(double c) {
    if (!(c > 0.0)) throw InputError("reciprocal_abs_shift: shift must be positive");
    return ScalarFn(FnFamily::ReciprocalAbsShift, {c});
}

ScalarFn ScalarFn::bump_reciprocal(double base, double amp, double center, double width) {
    if (!(base > 0.0) || amp < 0.0 || !(width > 0.0))
        throw InputError("bump_reciprocal: need base > 0, amp >= 0, width > 0");
    return ScalarFn(FnFamily::BumpReciprocal, {base, amp, center, width});
}

ScalarFn ScalarFn::piecewise_linear_odd(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw InputError("piecewise_linear: at least one knot required");
    double prev = 0.0;
    Vec params;
    params.reserve(knots.size() * 2);
    for (auto [y, v] : knots) {
        if (!(y > prev)) throw InputError("piecewise_linear: knot positions must be increasing and > 0");
        prev = y;
        params.push_back(y);
        params.push_back(v);
    }
    return ScalarFn(FnFamily::PiecewiseLinear, std::move(params));
}

ScalarFn ScalarFn::make(FnFamily family, const Vec& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n) throw InputError("function params: wrong count for family");
    };
    switch (family) {
        case FnFamily::Constant: need(1); return constant(params[0]);
        case FnFamily::Linear: need(1); return linear(params[0]);
        case FnFamily::ExpSgn: need(1); return exp_sgn(params[0]);
        case FnFamily::ReciprocalAbsShift: need(1); return reciprocal_abs_shift(params[0]);
        case FnFamily::BumpReciprocal: need(4);
            return bump_reciprocal(params[0], params[1], params[2], params[3]);
        case FnFamily::PiecewiseLinear: {
            if (params.size() < 2 || params.size() % 2 != 0)
                throw InputError("piecewise_linear params: expected y,v pairs");
            std::vector<std::pair<double, double>> knots;
            for (std::size_t i = 0; i < params.size(); i += 2)
                knots.emplace_back(params[i], params[i + 1]);
            return piecewise_linear_odd(std::move(knots));
        }
    }
    throw InputError("function params: unknown family");
}

double ScalarFn::operator()(double y) const {
    switch (family_) {
        case FnFamily::Constant:
            return params_[0];
        case FnFamily::Linear:
            return params_[0] * y;
        case FnFamily::ExpSgn:
            return params_[0] * (std::exp(std::abs(y)) - 1.0) * sgn(y);
        case FnFamily::ReciprocalAbsShift:
            return 1.0 / (std::abs(y) + params_[0]);
        case FnFamily::BumpReciprocal: {
            const double u = (y - params_[2]) / params_[3];
            return 1.0 / (params_[0] + params_[1] * std::exp(-u * u));
        }
        case FnFamily::PiecewiseLinear: {
            const double ay = std::abs(y);
            const std::size_t nk = params_.size() / 2;
            double y0 = 0.0, v0 = 0.0;
            for (std::size_t k = 0; k < nk; ++k) {
                const double y1 = params_[2 * k], v1 = params_[2 * k + 1];
                if (ay <= y1)
                    return sgn(y) * (v0 + (v1 - v0) * (ay - y0) / (y1 - y0));
                y0 = y1;
                v0 = v1;
            }
            // Extrapolate with the last segment's slope.
            const std::size_t last = nk - 1;
            const double yl = params_[2 * last], vl = params_[2 * last + 1];
            const double yp = last == 0 ? 0.0 : params_[2 * (last - 1)];
            const double vp = last == 0 ? 0.0 : params_[2 * (last - 1) + 1];
            const double slope = (vl - vp) / (yl - yp);
            return sgn(y) * (vl + slope * (ay - yl));
        }
    }
    return 0.0;
}

namespace {

// Primitive of k*(e^|y| - 1)*sgn(y); even, zero at the origin.
double exp_sgn_primitive(double k, double y) {
    const double ay = std::abs(y);
    return k * (std::exp(ay) - ay - 1.0);
}

// Primitive of 1/(|y| + c); odd, zero at the origin.
double recip_abs_primitive(double c, double y) {
    return sgn(y) * std::log1p(std::abs(y) / c);
}

// Primitive of |y| + c.
double abs_shift_primitive(double c, double y) {
    return sgn(y) * y * y / 2.0 + c * y;
}

}  // namespace

bool ScalarFn::antiderivative_closed_form() const {
    return family_ != FnFamily::BumpReciprocal;
}

double ScalarFn::antiderivative(double lo, double hi) const {
    switch (family_) {
        case FnFamily::Constant:
            return params_[0] * (hi - lo);
        case FnFamily::Linear:
            return params_[0] * (hi * hi - lo * lo) / 2.0;
        case FnFamily::ExpSgn:
            return exp_sgn_primitive(params_[0], hi) - exp_sgn_primitive(params_[0], lo);
        case FnFamily::ReciprocalAbsShift:
            return recip_abs_primitive(params_[0], hi) - recip_abs_primitive(params_[0], lo);
        case FnFamily::BumpReciprocal:
            return quad_adaptive([this](double y) { return (*this)(y); }, lo, hi, 1e-12);
        case FnFamily::PiecewiseLinear: {
            // Even primitive of an odd piecewise-linear function, exact per segment.
            auto primitive_abs = [this](double a) {
                const std::size_t nk = params_.size() / 2;
                double acc = 0.0, y0 = 0.0, v0 = 0.0;
                for (std::size_t k = 0; k < nk; ++k) {
                    const double y1 = params_[2 * k], v1 = params_[2 * k + 1];
                    if (a <= y1) {
                        const double va = v0 + (v1 - v0) * (a - y0) / (y1 - y0);
                        return acc + 0.5 * (v0 + va) * (a - y0);
                    }
                    acc += 0.5 * (v0 + v1) * (y1 - y0);
                    y0 = y1;
                    v0 = v1;
                }
                const std::size_t last = nk - 1;
                const double yl = params_[2 * last], vl = params_[2 * last + 1];
                const double yp = last == 0 ? 0.0 : params_[2 * (last - 1)];
                const double vp = last == 0 ? 0.0 : params_[2 * (last - 1) + 1];
                const double slope = (vl - vp) / (yl - yp);
                const double va = vl + slope * (a - yl);
                return acc + 0.5 * (vl + va) * (a - yl);
            };
            return primitive_abs(std::abs(hi)) - primitive_abs(std::abs(lo));
        }
    }
    return 0.0;
}

bool ScalarFn::reciprocal_closed_form() const {
    return family_ == FnFamily::Constant || family_ == FnFamily::ReciprocalAbsShift ||
           family_ == FnFamily::BumpReciprocal;
}

double ScalarFn::reciprocal_antiderivative(double lo, double hi) const {
    switch (family_) {
        case FnFamily::Constant:
            return (hi - lo) / params_[0];
        case FnFamily::ReciprocalAbsShift:
            return abs_shift_primitive(params_[0], hi) - abs_shift_primitive(params_[0], lo);
        case FnFamily::BumpReciprocal: {
            // 1/f = base + amp*exp(-((y-center)/width)^2); Gaussian term via erf.
            const double base = params_[0], amp = params_[1], center = params_[2],
                         width = params_[3];
            const double gauss = amp * width * std::sqrt(M_PI) / 2.0 *
                                 (std::erf((hi - center) / width) - std::erf((lo - center) / width));
            return base * (hi - lo) + gauss;
        }
        default:
            return quad_adaptive([this](double y) { return 1.0 / (*this)(y); }, lo, hi, 1e-12);
    }
}

GainReport validate_gain(const ScalarFn& f, double lo, double hi, std::size_t samples) {
    if (samples < 2) throw InputError("validate_gain: need at least 2 samples");
    double mn = f(lo), mx = mn;
    for (std::size_t i = 1; i < samples; ++i) {
        const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double v = f(y);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    return {mn, mx, mn > 0.0};
}

InteractionReport validate_interaction(const ScalarFn& f, double lo, double hi,
                                       std::size_t samples) {
    if (samples < 2) throw InputError("validate_interaction: need at least 2 samples");
    bool odd_ok = true, sign_ok = true;
    double lips = 0.0;
    double prev_y = lo, prev_v = f(lo);
    for (std::size_t i = 0; i < samples; ++i) {
        const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double v = f(y);
        if (std::abs(f(-y) + v) > 1e-9) odd_ok = false;
        if (std::abs(y) > 1e-12 && !(y * v > 0.0)) sign_ok = false;
        if (i > 0 && y > prev_y) lips = std::max(lips, std::abs(v - prev_v) / (y - prev_y));
        prev_y = y;
        prev_v = v;
    }
    return {odd_ok, sign_ok, lips};
}

}  // namespace netcon
