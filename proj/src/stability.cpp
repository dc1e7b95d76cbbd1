#include "netcon/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netcon/errors.hpp"

namespace netcon {

Matrix assemble_pi_single(const Graph& g, double a, double b, double delta) {
    const std::size_t n = g.vertex_count();
    const Matrix L = laplacian(g, /*weighted=*/false);
    Matrix A(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) A(i, n + i) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            A(n + i, j) = -a * L(i, j);
            A(n + i, n + j) = -b * L(i, j);
        }
        A(n + i, n + i) -= delta;
    }
    return A;
}

Matrix assemble_pi_double(const Graph& g, double a, double b, double gamma, double delta) {
    const std::size_t n = g.vertex_count();
    const Matrix L = laplacian(g, /*weighted=*/false);
    Matrix A(3 * n, 3 * n);
    for (std::size_t i = 0; i < n; ++i) {
        A(i, n + i) = 1.0;
        A(n + i, 2 * n + i) = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            A(2 * n + i, j) = -a * L(i, j);
            A(2 * n + i, n + j) = -b * L(i, j);
        }
        A(2 * n + i, n + i) -= delta;
        A(2 * n + i, 2 * n + i) = -gamma;
    }
    return A;
}

std::vector<Complex> deflate_and_spectrum(const Matrix& a, DeflationKind kind) {
    const std::size_t blocks = kind == DeflationKind::PiSingle ? 2 : 3;
    if (a.rows() != a.cols() || a.rows() % blocks != 0)
        throw InputError("deflate_and_spectrum: matrix shape does not match the kind");
    const std::size_t n = a.rows() / blocks;
    if (n < 2) return {};  // no disagreement modes to keep
    const Matrix S = disagreement_basis(n);
    const Matrix St = S.transposed();
    const std::size_t r = n - 1;
    Matrix reduced(blocks * r, blocks * r);
    for (std::size_t bi = 0; bi < blocks; ++bi) {
        for (std::size_t bj = 0; bj < blocks; ++bj) {
            Matrix block(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) block(i, j) = a(bi * n + i, bj * n + j);
            reduced.set_block(bi * r, bj * r, St * block * S);
        }
    }
    return eigenvalues_general(reduced);
}

double spectral_margin(const std::vector<Complex>& spectrum) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& s : spectrum) m = std::max(m, s.real());
    return m;
}

StabilityClass classify_margin(double margin, double tol) {
    if (margin > tol) return {StabilityKind::Unstable, margin};
    if (margin < -tol) return {StabilityKind::Hurwitz, margin};
    return {StabilityKind::Marginal, margin};
}

namespace {

StabilityKind worst(StabilityKind a, StabilityKind b) {
    auto rank = [](StabilityKind k) {
        switch (k) {
            case StabilityKind::Hurwitz: return 0;
            case StabilityKind::Marginal: return 1;
            case StabilityKind::Unstable: return 2;
        }
        return 2;
    };
    return rank(a) >= rank(b) ? a : b;
}

Vec positive_laplacian_modes(const Graph& g) {
    if (!is_connected(g)) throw InputError("classify: graph must be connected");
    const auto spec = symmetric_eigenvalues(laplacian(g, /*weighted=*/false));
    // lambda_1 ~ 0 is the consensus mode; the rest are strictly positive.
    return Vec(spec.eigenvalues.begin() + 1, spec.eigenvalues.end());
}

// The two routes must agree; at the knife edge of the shared tolerance the
// conservative tie goes to Marginal.
StabilityClass reconcile_routes(const StabilityClass& analytic, double spectral) {
    const StabilityClass spectral_cls = classify_margin(spectral);
    if (analytic.kind == spectral_cls.kind) return analytic;
    const bool tie_band =
        std::abs(analytic.margin) <= 100.0 * kMarginalTol && std::abs(spectral) <= 100.0 * kMarginalTol;
    if (tie_band && (analytic.kind == StabilityKind::Marginal ||
                     spectral_cls.kind == StabilityKind::Marginal))
        return {StabilityKind::Marginal, analytic.margin};
    throw NumericalError("stability: analytic and spectral routes disagree");
}

}  // namespace

StabilityReport classify_pi_single(const Graph& g, double a, double b) {
    if (a < 0.0 || !(b > 0.0)) throw InputError("classify_pi_single: need a >= 0, b > 0");
    StabilityReport rep;
    StabilityClass overall{StabilityKind::Hurwitz, -std::numeric_limits<double>::infinity()};
    for (double lam : positive_laplacian_modes(g)) {
        const auto cls = routh_hurwitz_2({1.0, lam * b, lam * a});
        rep.per_mode.push_back({lam, cls});
        overall = {worst(overall.kind, cls.kind), std::max(overall.margin, cls.margin)};
    }
    rep.spectrum = deflate_and_spectrum(assemble_pi_single(g, a, b, 0.0), DeflationKind::PiSingle);
    rep.classification = reconcile_routes(overall, spectral_margin(rep.spectrum));
    return rep;
}

StabilityReport classify_pi_double(const Graph& g, double a, double b, double gamma) {
    if (a < 0.0 || !(b > 0.0) || !(gamma > 0.0))
        throw InputError("classify_pi_double: need a >= 0, b > 0, gamma > 0");
    StabilityReport rep;
    rep.boundary = b * gamma;
    StabilityClass overall{StabilityKind::Hurwitz, -std::numeric_limits<double>::infinity()};
    for (double lam : positive_laplacian_modes(g)) {
        const auto cls = routh_hurwitz_3({1.0, gamma, lam * b, lam * a});
        rep.per_mode.push_back({lam, cls});
        overall = {worst(overall.kind, cls.kind), std::max(overall.margin, cls.margin)};
    }
    rep.spectrum = deflate_and_spectrum(assemble_pi_double(g, a, b, gamma, 0.0), DeflationKind::PiDouble);
    rep.classification = reconcile_routes(overall, spectral_margin(rep.spectrum));
    return rep;
}

Matrix assemble_power_centralized_reduced(const PowerNetwork& net, double a, double b) {
    const std::size_t n = net.bus_count();
    if (n < 2) throw InputError("power centralized: need at least 2 buses");
    const Matrix Lk = net.weighted_laplacian();
    const Matrix S = disagreement_basis(n);
    const Vec m = net.inertia();
    const Vec d = net.damping();

    // State (omega_hat, delta'' in R^{n-1}, omega in R^n).
    const std::size_t dim = 2 * n;
    Matrix A(dim, dim);
    for (std::size_t j = 0; j < n; ++j) A(0, n + j) = -b / static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(1 + i, n + j) = S(j, i);  // S^T
    const Matrix LkS = Lk * S;
    for (std::size_t i = 0; i < n; ++i) {
        A(n + i, 0) = a / m[i];
        for (std::size_t j = 0; j + 1 < n; ++j) A(n + i, 1 + j) = -LkS(i, j) / m[i];
        A(n + i, n + i) = -(d[i] + a) / m[i];
    }
    return A;
}

StabilityReport classify_power_centralized(const PowerNetwork& net, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw InputError("classify_power_centralized: need a, b > 0");
    StabilityReport rep;
    rep.spectrum = eigenvalues_general(assemble_power_centralized_reduced(net, a, b));
    rep.classification = classify_margin(spectral_margin(rep.spectrum));
    return rep;
}

Matrix assemble_power_decentralized(const PowerNetwork& net, double a, double b) {
    const std::size_t n = net.bus_count();
    const Matrix Lk = net.weighted_laplacian();
    const Vec m = net.inertia();
    const Vec d = net.damping();
    Matrix A(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) A(i, n + i) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A(n + i, j) = -Lk(i, j) / m[i];
        A(n + i, i) -= b / m[i];
        A(n + i, n + i) = -(d[i] + a) / m[i];
    }
    return A;
}

StabilityReport classify_power_decentralized(const PowerNetwork& net, double a, double b) {
    if (!(a > 0.0) || b < 0.0) throw InputError("classify_power_decentralized: need a > 0, b >= 0");
    StabilityReport rep;
    rep.spectrum = eigenvalues_general(assemble_power_decentralized(net, a, b));
    rep.classification = classify_margin(spectral_margin(rep.spectrum));
    return rep;
}

std::string stability_report_json(const StabilityReport& report) {
    std::ostringstream out;
    out.precision(12);
    out << "{\"classification\":\"" << to_string(report.classification.kind) << "\"";
    out << ",\"margin\":" << report.classification.margin;
    if (report.boundary) out << ",\"boundary\":" << *report.boundary;
    else out << ",\"boundary\":null";
    out << ",\"per_mode\":[";
    for (std::size_t i = 0; i < report.per_mode.size(); ++i) {
        if (i) out << ",";
        out << "{\"lambda\":" << report.per_mode[i].lambda << ",\"class\":\""
            << to_string(report.per_mode[i].cls.kind) << "\",\"margin\":"
            << report.per_mode[i].cls.margin << "}";
    }
    out << "],\"spectrum\":[";
    for (std::size_t i = 0; i < report.spectrum.size(); ++i) {
        if (i) out << ",";
        out << "{\"re\":" << report.spectrum[i].real() << ",\"im\":" << report.spectrum[i].imag()
            << "}";
    }
    out << "]}";
    return out.str();
}

}  // namespace netcon
