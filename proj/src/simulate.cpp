#include "netcon/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>

#include "netcon/errors.hpp"

namespace netcon {

double disagreement_diameter(const Vec& x) {
    if (x.empty()) throw InputError("disagreement_diameter: empty vector");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Vec slice(const Vec& flat, std::size_t offset, std::size_t n) {
    return Vec(flat.begin() + offset, flat.begin() + offset + n);
}

}  // namespace

Trajectory run(const ProtocolSpec& spec, const Vec& x0, const Vec& v0, const RunConfig& config) {
    const std::size_t n = spec.agent_count();
    if (x0.size() != n) throw InputError("run: x0 dimension mismatch");
    if (spec.has_velocity() && v0.size() != n) throw InputError("run: v0 dimension mismatch");
    if (!spec.has_velocity() && !v0.empty()) throw InputError("run: v0 given for a first-order kind");

    AgentState init;
    init.x = x0;
    init.v = v0;
    const Vec flat0 = spec.pack(init);

    const std::size_t xo = spec.x_offset();
    const std::size_t vo = spec.has_velocity() ? spec.v_offset() : 0;
    const bool has_v = spec.has_velocity();

    // Equilibrium feed for the Lyapunov channels.
    double ref = kNan;
    switch (spec.kind()) {
        case ProtocolKind::FirstOrderNonlinear:
            ref = predict_first_order(spec.gains(), x0).value;
            break;
        case ProtocolKind::SecondOrderNonlinear:
            ref = predict_second_order_velocity(spec.gains(), v0).value;
            break;
        default:
            break;
    }

    std::vector<std::pair<std::string, OdeMonitor>> monitors;
    monitors.emplace_back("E", [&spec, n, xo, vo, has_v](double, const Vec& s) {
        switch (spec.kind()) {
            case ProtocolKind::FirstOrderNonlinear:
                return conserved_E_first(spec.gains(), slice(s, xo, n));
            case ProtocolKind::SecondOrderDamped:
                return conserved_E_damped(spec.gains(), slice(s, xo, n),
                                          has_v ? slice(s, vo, n) : Vec{});
            default:
                return kNan;
        }
    });
    monitors.emplace_back("p", [&spec, n, vo](double, const Vec& s) {
        if (spec.kind() != ProtocolKind::SecondOrderNonlinear) return kNan;
        return conserved_p_second(spec.gains(), slice(s, vo, n));
    });
    monitors.emplace_back("V", [&spec, n, xo, vo, ref](double, const Vec& s) {
        switch (spec.kind()) {
            case ProtocolKind::FirstOrderNonlinear:
                return lyapunov_first(spec.gains(), slice(s, xo, n), ref);
            case ProtocolKind::SecondOrderNonlinear:
                return lyapunov_second(spec.gains(), spec.interactions_a(), spec.graph(),
                                       slice(s, xo, n), slice(s, vo, n), ref);
            case ProtocolKind::SecondOrderDamped:
                return lyapunov_damped(spec.interactions_a(), spec.graph(), slice(s, xo, n),
                                       slice(s, vo, n));
            default:
                return kNan;
        }
    });
    monitors.emplace_back("diam", [n, xo](double, const Vec& s) {
        return disagreement_diameter(slice(s, xo, n));
    });
    monitors.emplace_back("mean", [n, xo](double, const Vec& s) {
        return vec_mean(slice(s, xo, n));
    });

    // 100 consecutive sub-threshold samples declare convergence.
    auto streak = std::make_shared<std::size_t>(0);
    const bool both = config.conv_metric == ConvMetric::PositionsAndVelocities && has_v;
    StopCheck stop = [streak, n, xo, vo, both, tol = config.conv_tol](double, const Vec& s) {
        double d = disagreement_diameter(slice(s, xo, n));
        if (both) d = std::max(d, disagreement_diameter(slice(s, vo, n)));
        *streak = d < tol ? *streak + 1 : 0;
        return *streak >= 100;
    };

    auto rhs = [&spec](double t, const Vec& s, Vec& ds) { spec.rhs(t, s, ds); };

    if (config.integrator == Integrator::Rk45Adaptive) {
        AdaptiveOptions opts;
        opts.t_end = config.t_end;
        opts.sample_dt = config.h * static_cast<double>(config.record_every);
        opts.rtol = config.rtol;
        opts.atol = config.atol;
        opts.divergence_cap = config.divergence_cap;
        opts.monitors = std::move(monitors);
        opts.stop = std::move(stop);
        return integrate_ode_rk45(rhs, flat0, opts);
    }
    IntegrateOptions opts;
    opts.t_end = config.t_end;
    opts.h = config.h;
    opts.record_every = config.record_every;
    opts.divergence_cap = config.divergence_cap;
    opts.monitors = std::move(monitors);
    opts.stop = std::move(stop);
    return integrate_ode(rhs, flat0, opts);
}

void write_trajectory_csv(const Trajectory& traj, const ProtocolSpec& spec,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    out.precision(12);
    const std::size_t n = spec.agent_count();

    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",x" << i;
    if (spec.has_velocity())
        for (std::size_t i = 1; i <= n; ++i) out << ",v" << i;
    if (spec.has_integral())
        for (std::size_t i = 1; i <= n; ++i) out << ",z" << i;
    out << ",E,p,V,diam,mean\n";

    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Vec& st = traj.states[s];
        out << traj.times[s];
        for (std::size_t i = 0; i < n; ++i) out << "," << st[spec.x_offset() + i];
        if (spec.has_velocity())
            for (std::size_t i = 0; i < n; ++i) out << "," << st[spec.v_offset() + i];
        if (spec.has_integral())
            for (std::size_t i = 0; i < n; ++i) out << "," << st[spec.z_offset() + i];
        for (const auto& c : traj.channels) out << "," << c.samples[s];
        out << "\n";
    }
}

void write_trajectory_sidecar(const Trajectory& traj, const ProtocolSpec& spec,
                              const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    out.precision(12);
    out << "{\"status\":\"" << to_string(traj.status) << "\""
        << ",\"status_time\":" << traj.status_time
        << ",\"protocol\":\"" << to_string(spec.kind()) << "\""
        << ",\"agents\":" << spec.agent_count()
        << ",\"t_end\":" << config.t_end
        << ",\"h\":" << config.h
        << ",\"record_every\":" << config.record_every
        << ",\"conv_tol\":" << config.conv_tol
        << ",\"integrator\":\""
        << (config.integrator == Integrator::Rk45Adaptive ? "rk45" : "rk4") << "\""
        << ",\"samples\":" << traj.times.size() << "}\n";
}

}  // namespace netcon
