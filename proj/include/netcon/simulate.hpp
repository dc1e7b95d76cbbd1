#pragma once

#include <string>

#include "netcon/equilibrium.hpp"
#include "netcon/invariants.hpp"
#include "netcon/ode.hpp"
#include "netcon/protocols.hpp"

namespace netcon {

enum class ConvMetric { PositionsOnly, PositionsAndVelocities };

enum class Integrator { Rk4Fixed, Rk45Adaptive };

struct RunConfig {
    double t_end = 100.0;
    double h = 1e-3;
    std::size_t record_every = 100;
    double conv_tol = 1e-6;
    ConvMetric conv_metric = ConvMetric::PositionsOnly;
    Integrator integrator = Integrator::Rk4Fixed;
    double rtol = 1e-10;  // adaptive only
    double atol = 1e-12;
    double divergence_cap = 1e9;
};

double disagreement_diameter(const Vec& x);

/// Integrates the protocol from (x0, v0, z=0) and attaches the monitor
/// channels E, p, V, diam and mean (NaN where a channel is undefined for the
/// protocol kind). Convergence is declared when the disagreement diameter
/// (positions, plus velocities under PositionsAndVelocities) stays below
/// conv_tol for 100 consecutive samples. The Lyapunov channel is evaluated
/// around the equilibrium module's prediction, so its monotonicity also
/// exercises the prediction.
Trajectory run(const ProtocolSpec& spec, const Vec& x0, const Vec& v0, const RunConfig& config);

/// CSV rows `t,x1..xn[,v1..vn][,z1..zn],E,p,V,diam,mean`.
void write_trajectory_csv(const Trajectory& traj, const ProtocolSpec& spec,
                          const std::string& path);

/// Status and run metadata as a JSON sidecar.
void write_trajectory_sidecar(const Trajectory& traj, const ProtocolSpec& spec,
                              const RunConfig& config, const std::string& path);

}  // namespace netcon
