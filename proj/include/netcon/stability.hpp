#pragma once

#include <optional>
#include <vector>

#include "netcon/graph.hpp"
#include "netcon/numerics.hpp"
#include "netcon/power.hpp"

namespace netcon {

struct ModeReport {
    double lambda;  // Laplacian eigenvalue driving this mode
    StabilityClass cls;
};

struct StabilityReport {
    StabilityClass classification;
    std::vector<ModeReport> per_mode;    // analytic route (homogeneous PI kinds)
    std::vector<Complex> spectrum;       // deflated / assembled spectrum
    std::optional<double> boundary;      // a_crit = b*gamma where one exists
};

/// Closed-loop matrix of the single-integrator PI protocol in (z, x)
/// coordinates: [[0, I], [-a L, -b L - delta I]].
Matrix assemble_pi_single(const Graph& g, double a, double b, double delta);

/// Double-integrator PI closed loop in (z, x, v):
/// [[0, I, 0], [0, 0, I], [-a L, -b L - delta I, -gamma I]].
Matrix assemble_pi_double(const Graph& g, double a, double b, double gamma, double delta);

enum class DeflationKind { PiSingle, PiDouble };

/// Removes the consensus modes by conjugating every n x n block of the
/// closed-loop matrix with the disagreement basis S (the proofs' coordinate
/// change), then returns the reduced spectrum.
std::vector<Complex> deflate_and_spectrum(const Matrix& a, DeflationKind kind);

/// Per-mode quadratic s^2 + lambda_i b s + lambda_i a over the positive
/// Laplacian eigenvalues, classified by Routh-Hurwitz, cross-checked against
/// the deflated spectrum.
StabilityReport classify_pi_single(const Graph& g, double a, double b);

/// Per-mode cubic s^3 + gamma s^2 + lambda_i b s + lambda_i a; Hurwitz iff
/// a < b*gamma. The report carries the analytic boundary b*gamma.
StabilityReport classify_pi_double(const Graph& g, double a, double b, double gamma);

/// Reduced closed-loop matrix of the centralized frequency controller
/// (the unobservable phase-consensus mode removed via S), classified by its
/// spectrum.
StabilityReport classify_power_centralized(const PowerNetwork& net, double a, double b);
Matrix assemble_power_centralized_reduced(const PowerNetwork& net, double a, double b);

/// Decentralized controller closed loop [[0, I], [-M L_k - b M, -M D - a M]];
/// no zero modes remain (the b M term shifts the Laplacian nullspace).
StabilityReport classify_power_decentralized(const PowerNetwork& net, double a, double b);
Matrix assemble_power_decentralized(const PowerNetwork& net, double a, double b);

/// Maximum real part of a spectrum.
double spectral_margin(const std::vector<Complex>& spectrum);

/// Classification from a margin under the shared tolerance.
StabilityClass classify_margin(double margin, double tol = kMarginalTol);

/// StabilityReport -> JSON text ({classification, boundary, margin, per_mode, spectrum}).
std::string stability_report_json(const StabilityReport& report);

}  // namespace netcon
