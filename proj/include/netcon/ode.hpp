#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "netcon/linalg.hpp"

namespace netcon {

enum class RunStatus { Running, Converged, TimedOut, Diverged, Failed };

const char* to_string(RunStatus s);

struct MonitorChannel {
    std::string name;
    Vec samples;
};

/// Sampled solution of an ODE run. `states` holds the flat state vector at
/// each recorded time; protocol-specific layers slice it into (x, v, z).
struct Trajectory {
    Vec times;
    std::vector<Vec> states;
    std::vector<MonitorChannel> channels;
    RunStatus status = RunStatus::Running;
    double status_time = 0.0;  // convergence/divergence/failure instant, else t_end

    const Vec& final_state() const { return states.back(); }
    const MonitorChannel* channel(const std::string& name) const;
};

using OdeRhs = std::function<void(double t, const Vec& x, Vec& dxdt)>;
using OdeMonitor = std::function<double(double t, const Vec& x)>;
/// Evaluated at sample times; returning true stops the run as Converged.
using StopCheck = std::function<bool(double t, const Vec& x)>;

struct IntegrateOptions {
    double t_end = 1.0;
    double h = 1e-3;
    std::size_t record_every = 100;
    double divergence_cap = 1e9;
    std::vector<std::pair<std::string, OdeMonitor>> monitors;
    StopCheck stop;
};

/// Classic fixed-step RK4. Samples are recorded at t=0, every `record_every`
/// steps, and at the final step. A state with infinity norm beyond
/// `divergence_cap` ends the run as Diverged; NaN/Inf from the rhs ends it as
/// Failed at the last valid time.
Trajectory integrate_ode(const OdeRhs& rhs, const Vec& x0, const IntegrateOptions& opts);

struct AdaptiveOptions {
    double t_end = 1.0;
    double sample_dt = 1e-2;
    double rtol = 1e-10;
    double atol = 1e-12;
    double divergence_cap = 1e9;
    std::vector<std::pair<std::string, OdeMonitor>> monitors;
    StopCheck stop;
};

/// Embedded Dormand-Prince RK45 with deterministic proportional step control.
/// Steps are clipped so samples land exactly on the uniform grid. Used for
/// runs whose initial transients are too stiff for a practical fixed step.
Trajectory integrate_ode_rk45(const OdeRhs& rhs, const Vec& x0, const AdaptiveOptions& opts);

}  // namespace netcon
