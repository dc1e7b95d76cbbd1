#include "netcon/power.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "netcon/numerics.hpp"

namespace netcon {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PowerNetwork::PowerNetwork(std::vector<Bus> buses, std::vector<Line> lines)
    : buses_(std::move(buses)),
      lines_(std::move(lines)),
      graph_(buses_.size(),
             [&] {
                 std::vector<std::pair<int, int>> e;
                 for (const auto& l : lines_) e.emplace_back(l.i, l.j);
                 return e;
             }(),
             [&] {
                 Vec w;
                 for (const auto& l : lines_) {
                     const int i = l.i, j = l.j;
                     if (i < 1 || j < 1 || i > static_cast<int>(buses_.size()) ||
                         j > static_cast<int>(buses_.size()))
                         throw PowerIngestError(PowerIngestCode::BadIndex,
                                                "power network: line endpoint out of range");
                     w.push_back(buses_[i - 1].v_mag * buses_[j - 1].v_mag * l.susceptance);
                 }
                 return w;
             }()) {
    for (const auto& b : buses_) {
        if (!(b.m > 0.0) || !(b.d > 0.0) || !(b.v_mag > 0.0))
            throw PowerIngestError(PowerIngestCode::NonpositiveParameter,
                                   "power network: m, d and v_mag must be positive");
    }
    for (const auto& l : lines_) {
        if (!(l.susceptance > 0.0))
            throw PowerIngestError(PowerIngestCode::NonpositiveParameter,
                                   "power network: susceptance must be positive");
    }
    k_ = graph_.weights();
    if (!is_connected(graph_))
        throw PowerIngestError(PowerIngestCode::Disconnected, "power network: graph not connected");
}

Vec PowerNetwork::inertia() const {
    Vec v(buses_.size());
    for (std::size_t i = 0; i < buses_.size(); ++i) v[i] = buses_[i].m;
    return v;
}

Vec PowerNetwork::damping() const {
    Vec v(buses_.size());
    for (std::size_t i = 0; i < buses_.size(); ++i) v[i] = buses_[i].d;
    return v;
}

Vec PowerNetwork::mech_power() const {
    Vec v(buses_.size());
    for (std::size_t i = 0; i < buses_.size(); ++i) v[i] = buses_[i].p_m;
    return v;
}

Matrix PowerNetwork::weighted_laplacian() const { return laplacian(graph_, /*weighted=*/true); }

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

PowerNetwork ingest_network(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open network file: " + path);

    // Defaults for omitted columns.
    constexpr double kDefaultM = 1e5;      // kg m^2
    constexpr double kDefaultD = 1.0;      // s^-1
    constexpr double kDefaultVmag = 132e3; // V
    constexpr double kDefaultPm = 0.0;

    enum class Section { None, Buses, Lines } section = Section::None;
    std::vector<std::string> bus_header, line_header;
    std::vector<Bus> buses;
    std::vector<Line> lines;
    std::vector<int> bus_ids;
    std::set<std::pair<int, int>> seen_lines;
    bool warned_m = false, warned_d = false, warned_v = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "#buses") {
            section = Section::Buses;
            bus_header.clear();
            continue;
        }
        if (t == "#lines") {
            section = Section::Lines;
            line_header.clear();
            continue;
        }
        if (section == Section::None)
            throw PowerIngestError(PowerIngestCode::MissingSection,
                                   "network file must start with a #buses section");
        auto fields = split_csv(t);
        for (auto& f : fields) f = trim(f);

        if (section == Section::Buses) {
            if (bus_header.empty()) {
                bus_header = fields;
                if (bus_header.empty() || bus_header[0] != "bus")
                    throw PowerIngestError(PowerIngestCode::MalformedRow,
                                           "bus header must start with 'bus'");
                continue;
            }
            if (fields.size() != bus_header.size())
                throw PowerIngestError(PowerIngestCode::MalformedRow,
                                       "network file line " + std::to_string(lineno) +
                                           ": field count does not match bus header");
            Bus b{kDefaultM, kDefaultD, kDefaultPm, kDefaultVmag};
            int id = -1;
            bool have_m = false, have_d = false, have_v = false;
            try {
                for (std::size_t c = 0; c < bus_header.size(); ++c) {
                    const std::string& key = bus_header[c];
                    if (key == "bus") id = std::stoi(fields[c]);
                    else if (key == "m") { b.m = std::stod(fields[c]); have_m = true; }
                    else if (key == "d") { b.d = std::stod(fields[c]); have_d = true; }
                    else if (key == "p_m") b.p_m = std::stod(fields[c]);
                    else if (key == "v_mag") { b.v_mag = std::stod(fields[c]); have_v = true; }
                    else throw PowerIngestError(PowerIngestCode::MalformedRow,
                                                "unknown bus column: " + key);
                }
            } catch (const PowerIngestError&) {
                throw;
            } catch (const std::exception&) {
                throw PowerIngestError(PowerIngestCode::MalformedRow,
                                       "network file line " + std::to_string(lineno) +
                                           ": malformed bus row");
            }
            if (id != static_cast<int>(buses.size()) + 1)
                throw PowerIngestError(PowerIngestCode::BadIndex,
                                       "bus ids must be 1..n in order");
            if (warnings) {
                if (!have_m && !warned_m) { warnings->push_back("bus column 'm' missing; default 1e5 kg m^2 applied"); warned_m = true; }
                if (!have_d && !warned_d) { warnings->push_back("bus column 'd' missing; default 1 s^-1 applied"); warned_d = true; }
                if (!have_v && !warned_v) { warnings->push_back("bus column 'v_mag' missing; default 132 kV applied"); warned_v = true; }
            }
            buses.push_back(b);
            bus_ids.push_back(id);
        } else {
            if (line_header.empty()) {
                line_header = fields;
                if (line_header != std::vector<std::string>{"i", "j", "susceptance"})
                    throw PowerIngestError(PowerIngestCode::MalformedRow,
                                           "line header must be i,j,susceptance");
                continue;
            }
            if (fields.size() != line_header.size() || fields.size() != 3)
                throw PowerIngestError(PowerIngestCode::MalformedRow,
                                       "network file line " + std::to_string(lineno) +
                                           ": expected i,j,susceptance");
            Line l{};
            try {
                l.i = std::stoi(fields[0]);
                l.j = std::stoi(fields[1]);
                l.susceptance = std::stod(fields[2]);
            } catch (const std::exception&) {
                throw PowerIngestError(PowerIngestCode::MalformedRow,
                                       "network file line " + std::to_string(lineno) +
                                           ": malformed line row");
            }
            if (l.i == l.j)
                throw PowerIngestError(PowerIngestCode::BadIndex, "line endpoints must differ");
            const auto key = std::minmax(l.i, l.j);
            if (!seen_lines.insert(key).second)
                throw PowerIngestError(PowerIngestCode::DuplicateLine,
                                       "duplicate line between buses " + std::to_string(l.i) +
                                           " and " + std::to_string(l.j));
            lines.push_back(l);
        }
    }
    if (buses.empty())
        throw PowerIngestError(PowerIngestCode::MissingSection, "no buses in network file");
    try {
        return PowerNetwork(std::move(buses), std::move(lines));
    } catch (const PowerIngestError&) {
        throw;
    }
}

double FreqController::omega_ref() const { return kTwoPi * omega_ref_hz; }

std::size_t power_state_size(const PowerNetwork& net, const FreqController& ctrl) {
    const std::size_t n = net.bus_count();
    return 2 * n + (ctrl.mode == CtrlMode::Centralized ? 1 : n);
}

Vec power_control_signals(const PowerNetwork& net, const FreqController& ctrl, const Vec& state,
                          double* omega_hat_out) {
    const std::size_t n = net.bus_count();
    const double wref = ctrl.omega_ref();
    Vec u(n);
    if (ctrl.mode == CtrlMode::Centralized) {
        const double what = state[2 * n];
        if (omega_hat_out) *omega_hat_out = what;
        for (std::size_t i = 0; i < n; ++i) u[i] = ctrl.a * (what - state[n + i]);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            u[i] = ctrl.a * (wref - state[n + i]) + ctrl.b * state[2 * n + i];
    }
    return u;
}

Vec rhs_power(const PowerNetwork& net, const FreqController& ctrl, const Vec& state,
              const Vec* p_m_override) {
    const std::size_t n = net.bus_count();
    if (state.size() != power_state_size(net, ctrl))
        throw InputError("rhs_power: state dimension mismatch");
    const double wref = ctrl.omega_ref();
    const Vec p_m = p_m_override ? *p_m_override : net.mech_power();

    Vec deriv(state.size(), 0.0);
    // delta_dot = omega
    for (std::size_t i = 0; i < n; ++i) deriv[i] = state[n + i];

    // Coupling flows sum_j k_ij (delta_i - delta_j), edge-wise.
    Vec flow(n, 0.0);
    const auto& g = net.coupling_graph();
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
        const auto [i1, j1] = g.edges()[k];
        const double f = net.couplings()[k] * (state[i1 - 1] - state[j1 - 1]);
        flow[i1 - 1] += f;
        flow[j1 - 1] -= f;
    }

    const Vec u = power_control_signals(net, ctrl, state);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& bus = net.buses()[i];
        deriv[n + i] = (-flow[i] - bus.d * state[n + i] + p_m[i] + u[i]) / bus.m;
    }

    if (ctrl.mode == CtrlMode::Centralized) {
        double mean_w = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean_w += state[n + i];
        mean_w /= static_cast<double>(n);
        deriv[2 * n] = ctrl.b * (wref - mean_w);
    } else {
        for (std::size_t i = 0; i < n; ++i) deriv[2 * n + i] = wref - state[n + i];
    }
    return deriv;
}

PowerSteadyState power_steady_state(const PowerNetwork& net, double b, double omega_ref) {
    return power_steady_state_from_parts(net.weighted_laplacian(), net.damping(), net.mech_power(),
                                         b, omega_ref);
}

namespace {

// Solves L_k y = r with 1^T r = 0, returning the zero-mean solution. Uses the
// rank-completion (L + (1/n) 1 1^T) y = r.
Vec laplacian_solve_zero_mean(const Matrix& lk, Vec r) {
    const std::size_t n = lk.rows();
    Matrix a = lk;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) += inv_n;
    Vec y = solve_linear(std::move(a), std::move(r));
    const double mean = vec_mean(y);
    for (double& v : y) v -= mean;
    return y;
}

}  // namespace

Vec power_equilibrium_state(const PowerNetwork& net, const FreqController& ctrl) {
    const std::size_t n = net.bus_count();
    const double wref = ctrl.omega_ref();
    const Vec d = net.damping();
    const Vec pm = net.mech_power();
    Vec state(power_state_size(net, ctrl), 0.0);
    for (std::size_t i = 0; i < n; ++i) state[n + i] = wref;

    if (ctrl.mode == CtrlMode::Decentralized) {
        const auto ss = power_steady_state(net, ctrl.b, wref);
        // L_k delta0 = p_m + b z0 - D wref 1 = -L_k z0, so delta0 = -z0 (zero-mean).
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = pm[i] + ctrl.b * ss.z0[i] - d[i] * wref;
        const Vec delta0 = laplacian_solve_zero_mean(net.weighted_laplacian(), std::move(r));
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = delta0[i];
            state[2 * n + i] = ss.z0[i];
        }
    } else {
        if (!(ctrl.a > 0.0)) throw InputError("power_equilibrium_state: a must be positive");
        double dsum = 0.0, psum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            dsum += d[i];
            psum += pm[i];
        }
        const double what0 = wref + (wref * dsum - psum) / (static_cast<double>(n) * ctrl.a);
        const double u0 = ctrl.a * (what0 - wref);
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = pm[i] + u0 - d[i] * wref;
        const Vec delta0 = laplacian_solve_zero_mean(net.weighted_laplacian(), std::move(r));
        for (std::size_t i = 0; i < n; ++i) state[i] = delta0[i];
        state[2 * n] = what0;
    }
    return state;
}

Trajectory step_load_experiment(const PowerNetwork& net, const FreqController& ctrl,
                                const std::vector<LoadStep>& steps, const PowerRunConfig& config) {
    const std::size_t n = net.bus_count();
    for (const auto& s : steps) {
        if (s.bus < 1 || s.bus > static_cast<int>(n))
            throw InputError("step_load_experiment: bus index out of range");
        if (s.t_step < 0.0 || s.t_step > config.t_end)
            throw InputError("step_load_experiment: step time outside the horizon");
    }

    const Vec x0 = power_equilibrium_state(net, ctrl);
    const Vec pm_base = net.mech_power();

    auto p_m_at = [&, steps](double t) {
        Vec pm = pm_base;
        for (const auto& s : steps)
            if (t >= s.t_step) pm[s.bus - 1] -= s.delta_p;  // load increase
        return pm;
    };

    IntegrateOptions opts;
    opts.t_end = config.t_end;
    opts.h = config.h;
    opts.record_every = config.record_every;
    opts.divergence_cap = 1e12;  // omega_ref-scale states are ~1e2 already

    for (std::size_t i = 0; i < n; ++i) {
        opts.monitors.emplace_back("u_" + std::to_string(i + 1),
                                   [&net, ctrl, i](double, const Vec& s) {
                                       return power_control_signals(net, ctrl, s)[i];
                                   });
    }

    auto rhs = [&net, ctrl, p_m_at](double t, const Vec& s, Vec& ds) {
        const Vec pm = p_m_at(t);
        ds = rhs_power(net, ctrl, s, &pm);
    };
    return integrate_ode(rhs, x0, opts);
}

void write_power_csv(const Trajectory& traj, const PowerNetwork& net, const FreqController& ctrl,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open output file: " + path);
    const std::size_t n = net.bus_count();
    out.precision(12);

    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",omega_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",u_" << i;
    if (ctrl.mode == CtrlMode::Centralized) out << ",omega_hat";
    else
        for (std::size_t i = 1; i <= n; ++i) out << ",z_" << i;
    out << "\n";

    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Vec& st = traj.states[s];
        out << traj.times[s];
        for (std::size_t i = 0; i < n; ++i) out << "," << st[n + i] / kTwoPi;  // Hz
        for (std::size_t i = 0; i < n; ++i) out << "," << traj.channels[i].samples[s];
        if (ctrl.mode == CtrlMode::Centralized) out << "," << st[2 * n] / kTwoPi;
        else
            for (std::size_t i = 0; i < n; ++i) out << "," << st[2 * n + i];
        out << "\n";
    }
}

}  // namespace netcon
