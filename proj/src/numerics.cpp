#include "netcon/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netcon/errors.hpp"

namespace netcon {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double eps, int depth) {
    if (depth > 50) throw NumericalError("quad_adaptive: refinement depth exhausted");
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    // A minimum depth guards against coincidental cancellation in the
    // top-level error estimate (integrands with |y| kinks).
    if (depth >= 3 && std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

}  // namespace

double quad_adaptive(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (lo == hi) return 0.0;
    if (!(tol > 0.0)) throw InputError("quad_adaptive: tol must be positive");
    const double sign = lo < hi ? 1.0 : -1.0;
    const double a = std::min(lo, hi), b = std::max(lo, hi);
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson(a, b, fa, fm, fb);
    return sign * adapt(f, a, b, fa, fm, fb, whole, tol, 0);
}

double solve_monotone(const std::function<double(double)>& F, double target, double lo_seed,
                      double hi_seed) {
    double lo = std::min(lo_seed, hi_seed);
    double hi = std::max(lo_seed, hi_seed);
    double width = std::max(hi - lo, 1e-3 * (1.0 + std::abs(lo) + std::abs(hi)));

    double flo = F(lo) - target;
    double fhi = F(hi) - target;
    int doublings = 0;
    while (flo > 0.0) {
        if (++doublings > 200) throw NumericalError("solve_monotone: bracket expansion failed (low side)");
        lo -= width;
        width *= 2.0;
        flo = F(lo) - target;
    }
    while (fhi < 0.0) {
        if (++doublings > 200) throw NumericalError("solve_monotone: bracket expansion failed (high side)");
        hi += width;
        width *= 2.0;
        fhi = F(hi) - target;
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;

    const double ftol = 1e-10 * (1.0 + std::abs(target));

    // Brent's method on [lo, hi].
    double a = lo, b = hi, fa = flo, fb = fhi;
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-300;
        const double xm = 0.5 * (c - b);
        if (std::abs(fb) <= ftol) return b;
        if (std::abs(xm) <= tol1) break;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = F(b) - target;
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
    }
    if (std::abs(fb) <= 10.0 * ftol) return b;
    throw NumericalError("solve_monotone: did not reach requested residual");
}

double solve_monotone(const std::function<double(double)>& F, double target, double bracket_seed) {
    return solve_monotone(F, target, bracket_seed, bracket_seed);
}

Vec solve_linear(Matrix a, Vec b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw InputError("solve_linear: shape mismatch");
    const double pivot_floor = 1e-12 * std::max(a.inf_norm(), 1e-300);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                piv = i;
            }
        }
        if (best < pivot_floor) throw NumericalError("solve_linear: matrix singular to working precision");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
            b[i] -= m * b[k];
        }
    }
    Vec x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= a(ii, j) * x[j];
        x[ii] = acc / a(ii, ii);
    }
    return x;
}

namespace {

void hessenberg_reduce(Matrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(h(i, k));
        if (scale == 0.0) continue;
        double alpha = 0.0;
        Vec v(n, 0.0);
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k) / scale;
            alpha += v[i] * v[i];
        }
        alpha = std::sqrt(alpha);
        if (v[k + 1] > 0.0) alpha = -alpha;
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        // H <- P H P with P = I - beta v v^T
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= s * v[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
        h(k + 1, k) = scale * alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

void eig_2x2(double a, double b, double c, double d, std::vector<Complex>& out) {
    const double half_tr = 0.5 * (a + d);
    const double disc = 0.25 * (a - d) * (a - d) + b * c;
    if (disc >= 0.0) {
        const double r = std::sqrt(disc);
        out.emplace_back(half_tr + r, 0.0);
        out.emplace_back(half_tr - r, 0.0);
    } else {
        const double r = std::sqrt(-disc);
        out.emplace_back(half_tr, r);
        out.emplace_back(half_tr, -r);
    }
}

// One implicit double-shift (Francis) sweep on the active block [lo, hi].
void francis_step(Matrix& h, std::size_t lo, std::size_t hi, double shift_sum, double shift_prod) {
    const std::size_t n = h.rows();
    const double eps = std::numeric_limits<double>::epsilon();

    // Scan upward for a safe row to start the bulge: below two consecutive
    // small subdiagonals the shift information would otherwise be destroyed.
    std::size_t start = hi - 2;
    double x = 0.0, y = 0.0, z = 0.0;
    for (;; --start) {
        x = h(start, start) * h(start, start) + h(start, start + 1) * h(start + 1, start) -
            shift_sum * h(start, start) + shift_prod;
        y = h(start + 1, start) * (h(start, start) + h(start + 1, start + 1) - shift_sum);
        z = h(start + 1, start) * h(start + 2, start + 1);
        if (start == lo) break;
        const double coupling = std::abs(h(start, start - 1)) * (std::abs(y) + std::abs(z));
        const double local = std::abs(x) * (std::abs(h(start - 1, start - 1)) +
                                            std::abs(h(start, start)) +
                                            std::abs(h(start + 1, start + 1)));
        if (coupling <= eps * local) break;
    }

    for (std::size_t k = start; k < hi; ++k) {
        // Householder reflector annihilating (y, z) against x.
        const std::size_t r = std::min(k + 2, hi);  // rows touched: k..r
        double vx = x, vy = y, vz = (r == k + 2) ? z : 0.0;
        const double scale = std::abs(vx) + std::abs(vy) + std::abs(vz);
        if (scale != 0.0) {
            vx /= scale;
            vy /= scale;
            vz /= scale;
            double alpha = std::sqrt(vx * vx + vy * vy + vz * vz);
            if (vx > 0.0) alpha = -alpha;
            if (alpha != 0.0) {
                vx -= alpha;
                const double vnorm2 = vx * vx + vy * vy + vz * vz;
                if (vnorm2 > 0.0) {
                    const double beta = 2.0 / vnorm2;
                    // Apply P = I - beta v v^T from the left (rows k..r) ...
                    for (std::size_t j = (k > 0 ? k - 1 : 0); j < n; ++j) {
                        double s = vx * h(k, j) + vy * h(k + 1, j);
                        if (r == k + 2) s += vz * h(k + 2, j);
                        s *= beta;
                        h(k, j) -= s * vx;
                        h(k + 1, j) -= s * vy;
                        if (r == k + 2) h(k + 2, j) -= s * vz;
                    }
                    // ... and from the right (cols k..r).
                    const std::size_t imax = std::min(hi, k + 3);
                    for (std::size_t i = 0; i <= imax; ++i) {
                        double s = vx * h(i, k) + vy * h(i, k + 1);
                        if (r == k + 2) s += vz * h(i, k + 2);
                        s *= beta;
                        h(i, k) -= s * vx;
                        h(i, k + 1) -= s * vy;
                        if (r == k + 2) h(i, k + 2) -= s * vz;
                    }
                }
            }
        }
        x = h(k + 1, k);
        if (k + 2 <= hi) y = h(k + 2, k);
        if (k + 3 <= hi) z = h(k + 3, k);
    }
    // Clean entries below the first subdiagonal inside the window.
    for (std::size_t i = lo + 2; i <= hi; ++i)
        for (std::size_t j = lo; j + 1 < i; ++j) h(i, j) = 0.0;
}

}  // namespace

std::vector<Complex> eigenvalues_general(const Matrix& a) {
    if (a.rows() != a.cols()) throw InputError("eigenvalues_general: matrix not square");
    const std::size_t n = a.rows();
    if (n > 400) throw InputError("eigenvalues_general: n exceeds the desk-scale bound (400)");
    if (n == 0) return {};
    Matrix h = a;
    hessenberg_reduce(h);

    const double eps = std::numeric_limits<double>::epsilon();
    const double norm_floor = eps * std::max(h.frobenius_norm(), 1e-300);

    std::vector<Complex> eig;
    eig.reserve(n);

    std::size_t hi = n - 1;
    std::size_t since_deflation = 0;
    const std::size_t step_cap = 100 * n;  // sweeps per active block

    while (true) {
        // Zero negligible subdiagonals, then find the active block [lo, hi].
        std::size_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double local = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (sub <= std::max(eps * local, norm_floor)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }

        if (lo == hi) {
            eig.emplace_back(h(hi, hi), 0.0);
            since_deflation = 0;
            if (hi == 0) break;
            --hi;
            continue;
        }
        if (lo + 1 == hi) {
            eig_2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi), eig);
            since_deflation = 0;
            if (lo == 0) break;
            hi = lo - 1;
            continue;
        }

        if (++since_deflation > step_cap)
            throw NumericalError("eigenvalues_general: QR iteration did not converge");

        double shift_sum = h(hi - 1, hi - 1) + h(hi, hi);
        double shift_prod = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
        if (since_deflation % 10 == 0) {
            // Exceptional shift centered on the trailing diagonal entry; the
            // offsets at the eigenvalue-perturbation scale break
            // clustered-eigenvalue stalls where the Wilkinson shift produces
            // no bulge. sqrt(|sub*super|) estimates the cluster spread.
            const double sub = std::abs(h(hi, hi - 1));
            const double s = std::max(sub + std::abs(h(hi - 1, hi - 2)),
                                      std::sqrt(sub * std::abs(h(hi - 1, hi))));
            const double d = h(hi, hi);
            shift_sum = 2.0 * d + 1.5 * s;
            shift_prod = d * d + 1.5 * s * d - 0.4375 * s * s;
        }
        francis_step(h, lo, hi, shift_sum, shift_prod);
    }

    if (eig.size() != n) throw NumericalError("eigenvalues_general: internal deflation mismatch");
    return eig;
}

const char* to_string(StabilityKind k) {
    switch (k) {
        case StabilityKind::Hurwitz: return "hurwitz";
        case StabilityKind::Marginal: return "marginal";
        case StabilityKind::Unstable: return "unstable";
    }
    return "unknown";
}

std::vector<Complex> quadratic_roots(const Polynomial2& p) {
    const double a = p.a2, b = p.a1, c = p.a0;
    if (a == 0.0) throw InputError("quadratic_roots: a2 must be nonzero");
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
        const double r1 = q / a;
        const double r2 = (q != 0.0) ? c / q : -b / a - r1;
        return {Complex(r1, 0.0), Complex(r2, 0.0)};
    }
    const double re = -b / (2.0 * a);
    const double im = std::sqrt(-disc) / (2.0 * a);
    return {Complex(re, im), Complex(re, -im)};
}

std::vector<Complex> cubic_roots(const Polynomial3& poly) {
    if (poly.a3 == 0.0) throw InputError("cubic_roots: a3 must be nonzero");
    const double b = poly.a2 / poly.a3, c = poly.a1 / poly.a3, d = poly.a0 / poly.a3;
    // Depressed form t^3 + p t + q with s = t - b/3.
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;
    const double disc = -4.0 * p * p * p - 27.0 * q * q;

    std::vector<Complex> roots;
    if (std::abs(p) < 1e-300 && std::abs(q) < 1e-300) {
        roots.assign(3, Complex(shift, 0.0));
        return roots;
    }
    if (disc >= 0.0 && p < 0.0) {
        // Three real roots (trigonometric form).
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double t = m * std::cos(theta - 2.0 * M_PI * k / 3.0);
            roots.emplace_back(t + shift, 0.0);
        }
        return roots;
    }
    // One real root (Cardano), then the conjugate pair from deflation.
    const double half_q = 0.5 * q;
    const double rad = std::sqrt(std::max(half_q * half_q + p * p * p / 27.0, 0.0));
    const double u = std::cbrt(-half_q + rad);
    const double v = std::cbrt(-half_q - rad);
    double t0 = u + v;
    // Newton polish on the depressed cubic.
    for (int it = 0; it < 3; ++it) {
        const double f = t0 * t0 * t0 + p * t0 + q;
        const double fp = 3.0 * t0 * t0 + p;
        if (fp != 0.0) t0 -= f / fp;
    }
    roots.emplace_back(t0 + shift, 0.0);
    // Remaining quadratic t^2 + t0 t + (p + t0^2); discriminant -3 t0^2 - 4p.
    const double qdisc = -3.0 * t0 * t0 - 4.0 * p;
    if (qdisc >= 0.0) {
        const double r = std::sqrt(qdisc) / 2.0;
        roots.emplace_back(-t0 / 2.0 + r + shift, 0.0);
        roots.emplace_back(-t0 / 2.0 - r + shift, 0.0);
    } else {
        const double im = std::sqrt(-qdisc) / 2.0;
        roots.emplace_back(-t0 / 2.0 + shift, im);
        roots.emplace_back(-t0 / 2.0 + shift, -im);
    }
    return roots;
}

namespace {

double max_real(const std::vector<Complex>& roots) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::max(m, r.real());
    return m;
}

}  // namespace

StabilityClass routh_hurwitz_2(const Polynomial2& p, double tol) {
    if (!(p.a2 > 0.0)) throw InputError("routh_hurwitz_2: leading coefficient must be positive");
    const double scale = std::max({std::abs(p.a2), std::abs(p.a1), std::abs(p.a0)});
    const double tau = tol * scale;
    const double margin = max_real(quadratic_roots(p));
    if (p.a1 < -tau || p.a0 < -tau) return {StabilityKind::Unstable, margin};
    if (p.a1 > tau && p.a0 > tau) return {StabilityKind::Hurwitz, margin};
    return {StabilityKind::Marginal, margin};
}

StabilityClass routh_hurwitz_3(const Polynomial3& p, double tol) {
    if (!(p.a3 > 0.0)) throw InputError("routh_hurwitz_3: leading coefficient must be positive");
    const double scale = std::max({std::abs(p.a3), std::abs(p.a2), std::abs(p.a1), std::abs(p.a0)});
    const double tau = tol * scale;
    const double margin = max_real(cubic_roots(p));
    if (p.a2 < -tau || p.a1 < -tau || p.a0 < -tau) return {StabilityKind::Unstable, margin};
    if (std::abs(p.a0) <= tau) {
        // s = 0 root plus the quadratic a3 s^2 + a2 s + a1 (nonnegative coefficients).
        return {StabilityKind::Marginal, margin};
    }
    const double minor = p.a2 * p.a1 - p.a3 * p.a0;
    const double mtau = tol * std::max(std::abs(p.a2 * p.a1), std::abs(p.a3 * p.a0));
    if (minor > mtau && p.a2 > tau && p.a1 > tau) return {StabilityKind::Hurwitz, margin};
    if (std::abs(minor) <= mtau && p.a2 > tau && p.a1 > tau) return {StabilityKind::Marginal, margin};
    return {StabilityKind::Unstable, margin};
}

}  // namespace netcon
