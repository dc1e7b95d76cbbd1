#include "netcon/ode.hpp"

#include <algorithm>
#include <cmath>

#include "netcon/errors.hpp"

namespace netcon {

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Running: return "running";
        case RunStatus::Converged: return "converged";
        case RunStatus::TimedOut: return "timed_out";
        case RunStatus::Diverged: return "diverged";
        case RunStatus::Failed: return "failed";
    }
    return "unknown";
}

const MonitorChannel* Trajectory::channel(const std::string& name) const {
    for (const auto& c : channels)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Records the sample; returns true when the run should stop (converged).
bool record_sample(Trajectory& traj, double t, const Vec& x,
                   const std::vector<std::pair<std::string, OdeMonitor>>& monitors,
                   const StopCheck& stop) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    for (std::size_t c = 0; c < monitors.size(); ++c)
        traj.channels[c].samples.push_back(monitors[c].second(t, x));
    return stop && stop(t, x);
}

}  // namespace

Trajectory integrate_ode(const OdeRhs& rhs, const Vec& x0, const IntegrateOptions& opts) {
    if (!(opts.h > 0.0)) throw InputError("integrate_ode: step size must be positive");
    if (!(opts.t_end > 0.0)) throw InputError("integrate_ode: t_end must be positive");
    const std::size_t n = x0.size();
    const std::size_t steps = static_cast<std::size_t>(std::llround(opts.t_end / opts.h));
    const std::size_t every = std::max<std::size_t>(1, opts.record_every);

    Trajectory traj;
    traj.channels.reserve(opts.monitors.size());
    for (const auto& m : opts.monitors) traj.channels.push_back({m.first, {}});

    Vec x = x0, k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0.0;
    if (record_sample(traj, t, x, opts.monitors, opts.stop)) {
        traj.status = RunStatus::Converged;
        traj.status_time = t;
        return traj;
    }

    const double h = opts.h;
    for (std::size_t step = 1; step <= steps; ++step) {
        rhs(t, x, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double t_new = static_cast<double>(step) * h;

        if (!all_finite(x)) {
            traj.status = RunStatus::Failed;
            traj.status_time = t;  // last valid time
            return traj;
        }
        t = t_new;
        if (inf_norm(x) > opts.divergence_cap) {
            record_sample(traj, t, x, opts.monitors, nullptr);
            traj.status = RunStatus::Diverged;
            traj.status_time = t;
            return traj;
        }
        if (step % every == 0 || step == steps) {
            if (record_sample(traj, t, x, opts.monitors, opts.stop)) {
                traj.status = RunStatus::Converged;
                traj.status_time = t;
                return traj;
            }
        }
    }
    traj.status = RunStatus::TimedOut;
    traj.status_time = t;
    return traj;
}

Trajectory integrate_ode_rk45(const OdeRhs& rhs, const Vec& x0, const AdaptiveOptions& opts) {
    if (!(opts.sample_dt > 0.0) || !(opts.t_end > 0.0))
        throw InputError("integrate_ode_rk45: t_end and sample_dt must be positive");
    const std::size_t n = x0.size();

    // Dormand-Prince 5(4) tableau.
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    // b (5th) minus b-hat (4th): error weights.
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    Trajectory traj;
    traj.channels.reserve(opts.monitors.size());
    for (const auto& m : opts.monitors) traj.channels.push_back({m.first, {}});

    Vec x = x0;
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), xn(n);
    double t = 0.0;
    if (record_sample(traj, t, x, opts.monitors, opts.stop)) {
        traj.status = RunStatus::Converged;
        traj.status_time = t;
        return traj;
    }

    double h_ctrl = opts.sample_dt / 100.0;  // controller's preferred step
    std::size_t sample_idx = 1;
    const std::size_t max_attempts = 50'000'000;

    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        const double t_target = std::min(static_cast<double>(sample_idx) * opts.sample_dt, opts.t_end);
        bool clipped = false;
        double h = h_ctrl;
        if (t + h >= t_target) {
            h = t_target - t;
            clipped = true;
        }
        if (!clipped && h < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericalError("integrate_ode_rk45: step size underflow");

        rhs(t, x, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * a21 * k1[i];
        rhs(t + h / 5.0, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + 3.0 * h / 10.0, tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + 4.0 * h / 5.0, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + 8.0 * h / 9.0, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            xn[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, xn, k7);

        if (!all_finite(xn)) {
            // Retry with a smaller step before declaring failure.
            h_ctrl = 0.25 * h;
            if (h_ctrl < 1e-15) {
                traj.status = RunStatus::Failed;
                traj.status_time = t;
                return traj;
            }
            continue;
        }

        double err2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc = opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(xn[i]));
            err2 += (ei / sc) * (ei / sc);
        }
        const double err = std::sqrt(err2 / static_cast<double>(n));

        if (err <= 1.0) {
            t = clipped ? t_target : t + h;
            x = xn;
            if (inf_norm(x) > opts.divergence_cap) {
                record_sample(traj, t, x, opts.monitors, nullptr);
                traj.status = RunStatus::Diverged;
                traj.status_time = t;
                return traj;
            }
            if (clipped) {
                if (record_sample(traj, t, x, opts.monitors, opts.stop)) {
                    traj.status = RunStatus::Converged;
                    traj.status_time = t;
                    return traj;
                }
                if (t >= opts.t_end - 1e-12 * opts.t_end) {
                    traj.status = RunStatus::TimedOut;
                    traj.status_time = t;
                    return traj;
                }
                ++sample_idx;
            }
            if (!clipped) {
                const double factor =
                    err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
                h_ctrl = h * factor;
            }
        } else {
            // Rejected: shrink, whether or not the step was clipped.
            const double factor = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            h_ctrl = h * factor;
        }
    }
    throw NumericalError("integrate_ode_rk45: attempt budget exhausted");
}

}  // namespace netcon
