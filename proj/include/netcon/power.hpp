#pragma once

#include <string>
#include <vector>

#include "netcon/equilibrium.hpp"
#include "netcon/errors.hpp"
#include "netcon/graph.hpp"
#include "netcon/ode.hpp"

namespace netcon {

struct Bus {
    double m;      // inertia
    double d;      // damping
    double p_m;    // net mechanical power (generation minus load), W
    double v_mag;  // voltage magnitude, V
};

struct Line {
    int i, j;            // 1-based bus indices
    double susceptance;  // S
};

/// Swing-equation network. The per-line coupling is k_ij = |V_i||V_j| b_ij.
class PowerNetwork {
public:
    PowerNetwork(std::vector<Bus> buses, std::vector<Line> lines);

    std::size_t bus_count() const { return buses_.size(); }
    const std::vector<Bus>& buses() const { return buses_; }
    const std::vector<Line>& lines() const { return lines_; }
    const Vec& couplings() const { return k_; }

    Vec inertia() const;
    Vec damping() const;
    Vec mech_power() const;

    /// Weighted Laplacian L_k with edge weights k_ij.
    Matrix weighted_laplacian() const;
    const Graph& coupling_graph() const { return graph_; }

private:
    std::vector<Bus> buses_;
    std::vector<Line> lines_;
    Vec k_;
    Graph graph_;
};

enum class PowerIngestCode {
    MalformedRow,
    MissingSection,
    BadIndex,
    DuplicateLine,
    NonpositiveParameter,
    Disconnected,
};

class PowerIngestError : public InputError {
public:
    PowerIngestError(PowerIngestCode code, const std::string& what)
        : InputError(what), code_(code) {}
    PowerIngestCode code() const { return code_; }

private:
    PowerIngestCode code_;
};

/// Two-section CSV: `#buses` with header `bus,m,d,p_m,v_mag`, then `#lines`
/// with header `i,j,susceptance`. Omitted bus columns default to
/// m = 1e5 kg m^2, d = 1 s^-1, p_m = 0 W, v_mag = 132 kV; a warning per
/// defaulted column is appended to `warnings` when non-null.
PowerNetwork ingest_network(const std::string& path, std::vector<std::string>* warnings = nullptr);

enum class CtrlMode { Centralized, Decentralized };

struct FreqController {
    CtrlMode mode;
    double a;             // proportional gain
    double b;             // integral gain
    double omega_ref_hz;  // reference frequency, Hz (rad/s internally)

    double omega_ref() const;  // rad/s
};

/// State layout: [delta(n) | omega(n) | aux], where aux is the scalar
/// reference state omega_hat (centralized) or the n integral states z with
/// zdot = omega_ref - omega (decentralized). omega is absolute, rad/s.
std::size_t power_state_size(const PowerNetwork& net, const FreqController& ctrl);

/// Swing dynamics m_i omegadot_i = -sum_j k_ij (delta_i - delta_j) - d_i omega_i
/// + p_m_i + u_i under the selected controller. `p_m_override` substitutes the
/// network's nominal injections (used by the step experiment).
Vec rhs_power(const PowerNetwork& net, const FreqController& ctrl, const Vec& state,
              const Vec* p_m_override = nullptr);

/// Per-bus control signals u_i at a given state.
Vec power_control_signals(const PowerNetwork& net, const FreqController& ctrl, const Vec& state,
                          double* omega_hat_out = nullptr);

/// Steady state of the decentralized controller (spec formula):
/// z0 = (b I + L_k)^{-1} (D omega_ref 1 - p_m), omega0 = omega_ref 1.
PowerSteadyState power_steady_state(const PowerNetwork& net, double b, double omega_ref);

/// Exact pre-step equilibrium state for either controller mode.
Vec power_equilibrium_state(const PowerNetwork& net, const FreqController& ctrl);

struct LoadStep {
    int bus;         // 1-based
    double delta_p;  // load increase in W (enters the swing equation as -delta_p)
    double t_step;
};

struct PowerRunConfig {
    double t_end = 100.0;
    double h = 5e-3;
    std::size_t record_every = 200;
};

/// Starts at the computed equilibrium, applies the load steps, and records
/// omega (rad/s), u and the controller state as monitor channels.
Trajectory step_load_experiment(const PowerNetwork& net, const FreqController& ctrl,
                                const std::vector<LoadStep>& steps, const PowerRunConfig& config);

/// Trajectory CSV with per-bus `omega_<i>` (Hz) and `u_<i>` columns plus the
/// controller channels (`omega_hat` in Hz, or `z_<i>`).
void write_power_csv(const Trajectory& traj, const PowerNetwork& net, const FreqController& ctrl,
                     const std::string& path);

}  // namespace netcon
