#include "netcon/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netcon/errors.hpp"

namespace netcon {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// ---- building -------------------------------------------------------------
// Six rooms around a corridor (vertex 7); thermal storage in rooms 2 and 5
// holds their temperature under the 23 C phase-transition point. Units:
// hours, kJ, degrees C, so the 0.5 W/C conductivity becomes 1.8 kJ/(h C).
Scenario make_building() {
    Graph g(7, {{1, 2}, {2, 3}, {1, 7}, {2, 7}, {3, 7}, {4, 7}, {5, 7}, {6, 7}, {4, 5}, {5, 6}});
    std::vector<ScalarFn> gains;
    for (int room = 1; room <= 7; ++room) {
        if (room == 2 || room == 5)
            gains.push_back(ScalarFn::bump_reciprocal(50.0, 500.0, 23.0, 0.4));
        else
            gains.push_back(ScalarFn::constant(1.0 / 50.0));
    }
    std::vector<ScalarFn> inter(g.edge_count(), ScalarFn::linear(1.8));

    Scenario s;
    s.name = "building";
    s.protocol = ProtocolSpec::first_order(std::move(g), std::move(gains), std::move(inter));
    s.x0 = {24.0, 20.0, 20.0, 20.0, 20.0, 29.0, 22.0};
    s.run.t_end = 600.0;
    s.run.h = 0.01;
    s.run.record_every = 20;
    s.run.conv_tol = 1e-6;
    s.outcomes = OutcomeSet::Building;
    return s;
}

// ---- satellites ------------------------------------------------------------
// Five satellites, relative measurements only; the engine-power model gives
// the velocity-dependent gain 1/(|v|+c). The initial velocity spread makes
// the first milliseconds extremely stiff, hence the adaptive integrator.
Scenario make_satellites(double c) {
    Graph g(5, {{1, 2}, {3, 2}, {3, 4}, {3, 5}});
    std::vector<ScalarFn> gains(5, ScalarFn::reciprocal_abs_shift(c));
    std::vector<ScalarFn> inter_a(4, ScalarFn::exp_sgn(20.0));
    std::vector<ScalarFn> inter_b(4, ScalarFn::exp_sgn(10.0));

    Scenario s;
    s.name = "satellites";
    s.protocol = ProtocolSpec::second_order(std::move(g), std::move(gains), std::move(inter_a),
                                            std::move(inter_b));
    s.x0 = {-4.0, 0.0, 3.0, -1.0, -5.0};
    s.v0 = {-3.0, -7.0, 3.0, -1.0, 0.0};
    s.run.t_end = 25.0;
    s.run.h = 1e-4;
    s.run.record_every = 100;  // sample spacing 0.01
    s.run.conv_tol = 1e-6;
    s.run.conv_metric = ConvMetric::PositionsAndVelocities;
    s.run.integrator = Integrator::Rk45Adaptive;
    s.outcomes = OutcomeSet::Satellites;
    return s;
}

// ---- robots ----------------------------------------------------------------
// String of five mobile robots under a constant disturbance at robot 1;
// the PI gain a sweeps the stability boundary a = b*gamma = 15.
Scenario make_robots(double a) {
    Graph g(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}});
    Vec d = {1.0, 0.0, 0.0, 0.0, 0.0};
    Vec x0 = {5.0, -6.0, 8.0, 4.0, 5.0};

    Scenario s;
    s.name = "robots";
    s.protocol = ProtocolSpec::pi_double(std::move(g), a, 5.0, 3.0, 0.0, d, x0);
    s.x0 = x0;
    s.v0 = Vec(5, 0.0);
    s.run.t_end = 150.0;
    s.run.h = 1e-3;
    s.run.record_every = 100;
    s.run.conv_tol = 1e-6;
    s.run.conv_metric = ConvMetric::PositionsAndVelocities;
    s.outcomes = OutcomeSet::Robots;
    s.variant_a = a;
    return s;
}

// ---- power6 ----------------------------------------------------------------
// Desk-scale six-bus ring with one chord. Baseline injections balance the
// damping losses at 50 Hz, so the pre-step integral states are zero; loads
// then step by 200 W at buses 2, 3 and 5.
PowerNetwork make_power6_network() {
    std::vector<Bus> buses;
    const double wref = kTwoPi * 50.0;
    for (int i = 0; i < 6; ++i) buses.push_back({1.0, 1.0, wref, 100.0});
    std::vector<Line> lines = {{1, 2, 3e-3}, {2, 3, 3e-3}, {3, 4, 3e-3},
                               {4, 5, 3e-3}, {5, 6, 3e-3}, {6, 1, 3e-3},
                               {2, 5, 3e-3}};
    return PowerNetwork(std::move(buses), std::move(lines));
}

Scenario make_power6(CtrlMode mode, double b) {
    Scenario s;
    s.name = "power6";
    s.network = make_power6_network();
    s.controller = FreqController{mode, 0.8, b, 50.0};
    s.steps = {{2, 200.0, 1.0}, {3, 200.0, 1.0}, {5, 200.0, 1.0}};
    s.power_run.t_end = b < 0.1 ? 900.0 : 100.0;
    s.power_run.h = 5e-3;
    s.power_run.record_every = 200;
    s.outcomes = OutcomeSet::Power6;
    return s;
}

double variant_lookup(const VariantMap& v, const std::string& key, const std::string& fallback) {
    const auto it = v.find(key);
    return std::stod(it == v.end() ? fallback : it->second);
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
    return {"building", "satellites", "robots", "power6"};
}

bool is_builtin_name(const std::string& name) {
    for (const auto& n : builtin_scenario_names())
        if (n == name) return true;
    return false;
}

Scenario make_builtin(const std::string& name, const VariantMap& variant) {
    if (name == "building") return make_building();
    if (name == "satellites") {
        const double c = variant_lookup(variant, "c", "0.1");
        if (!(c > 0.0)) throw InputError("satellites: variant c must be positive");
        return make_satellites(c);
    }
    if (name == "robots") {
        const double a = variant_lookup(variant, "a", "1");
        if (a != 0.0 && a != 1.0 && a != 15.0 && a != 20.0)
            throw InputError("robots: variant a must be one of 0, 1, 15, 20");
        return make_robots(a);
    }
    if (name == "power6") {
        const auto mode_it = variant.find("mode");
        const std::string mode = mode_it == variant.end() ? "dec" : mode_it->second;
        if (mode != "dec" && mode != "cen")
            throw InputError("power6: variant mode must be dec or cen");
        const double b = variant_lookup(variant, "b", "0.04");
        if (b != 0.04 && b != 0.8) throw InputError("power6: variant b must be 0.04 or 0.8");
        return make_power6(mode == "dec" ? CtrlMode::Decentralized : CtrlMode::Centralized, b);
    }
    throw InputError("unknown scenario: " + name);
}

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> all;
    all.push_back(make_building());
    all.push_back(make_satellites(0.1));
    for (double a : {0.0, 1.0, 15.0, 20.0}) all.push_back(make_robots(a));
    for (auto mode : {CtrlMode::Decentralized, CtrlMode::Centralized})
        for (double b : {0.04, 0.8}) all.push_back(make_power6(mode, b));
    return all;
}

// ---------------------------------------------------------------------------
// JSON configuration files.

namespace {

json fn_to_json(const ScalarFn& f) {
    return json{{"family", family_name(f.family())}, {"params", f.params()}};
}

ScalarFn fn_from_json(const json& j) {
    return ScalarFn::make(family_from_name(j.at("family").get<std::string>()),
                          j.at("params").get<Vec>());
}

json fns_to_json(const std::vector<ScalarFn>& fns) {
    json arr = json::array();
    for (const auto& f : fns) arr.push_back(fn_to_json(f));
    return arr;
}

std::vector<ScalarFn> fns_from_json(const json& arr) {
    std::vector<ScalarFn> out;
    for (const auto& j : arr) out.push_back(fn_from_json(j));
    return out;
}

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& [i, j] : g.edges()) edges.push_back(json::array({i, j}));
    return json{{"n", g.vertex_count()}, {"edges", edges}, {"weights", g.weights()}};
}

Graph graph_from_json(const json& j) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    Vec weights;
    if (j.contains("weights")) weights = j.at("weights").get<Vec>();
    return Graph(j.at("n").get<std::size_t>(), std::move(edges), std::move(weights));
}

ProtocolKind protocol_kind_from_name(const std::string& name) {
    for (auto k : {ProtocolKind::FirstOrderNonlinear, ProtocolKind::SecondOrderNonlinear,
                   ProtocolKind::SecondOrderDamped, ProtocolKind::PiSingle, ProtocolKind::PiDouble})
        if (name == to_string(k)) return k;
    throw InputError("unknown protocol kind: " + name);
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["version"] = 1;
    j["name"] = s.name;
    if (s.is_power()) {
        j["kind"] = "power";
        json buses = json::array();
        for (const auto& b : s.network->buses())
            buses.push_back(json{{"m", b.m}, {"d", b.d}, {"p_m", b.p_m}, {"v_mag", b.v_mag}});
        json lines = json::array();
        for (const auto& l : s.network->lines())
            lines.push_back(json{{"i", l.i}, {"j", l.j}, {"susceptance", l.susceptance}});
        j["network"] = json{{"buses", buses}, {"lines", lines}};
        j["controller"] =
            json{{"mode", s.controller->mode == CtrlMode::Centralized ? "centralized"
                                                                      : "decentralized"},
                 {"a", s.controller->a},
                 {"b", s.controller->b},
                 {"omega_ref_hz", s.controller->omega_ref_hz}};
        json steps = json::array();
        for (const auto& st : s.steps)
            steps.push_back(json{{"bus", st.bus}, {"delta_p", st.delta_p}, {"t_step", st.t_step}});
        j["steps"] = steps;
        j["power_run"] = json{{"t_end", s.power_run.t_end},
                              {"h", s.power_run.h},
                              {"record_every", s.power_run.record_every}};
        return j.dump(2);
    }

    j["kind"] = "agents";
    const ProtocolSpec& p = *s.protocol;
    j["graph"] = graph_to_json(p.graph());
    json proto;
    proto["kind"] = to_string(p.kind());
    if (!p.gains().empty()) proto["gains"] = fns_to_json(p.gains());
    if (!p.interactions_a().empty()) proto["interactions_a"] = fns_to_json(p.interactions_a());
    if (!p.interactions_b().empty()) proto["interactions_b"] = fns_to_json(p.interactions_b());
    if (p.has_integral()) {
        proto["pi"] = json{{"a", p.pi().a},
                           {"b", p.pi().b},
                           {"gamma", p.pi().gamma},
                           {"delta", p.pi().delta}};
        proto["disturbance"] = p.disturbance();
        proto["x_anchor"] = p.x_anchor();
    }
    j["protocol"] = proto;
    j["x0"] = s.x0;
    if (!s.v0.empty()) j["v0"] = s.v0;
    j["run"] = json{
        {"t_end", s.run.t_end},
        {"h", s.run.h},
        {"record_every", s.run.record_every},
        {"conv_tol", s.run.conv_tol},
        {"conv_metric", s.run.conv_metric == ConvMetric::PositionsAndVelocities ? "xv" : "x"},
        {"integrator", s.run.integrator == Integrator::Rk45Adaptive ? "rk45" : "rk4"},
        {"rtol", s.run.rtol},
        {"atol", s.run.atol}};
    return j.dump(2);
}

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("config parse error: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != 1) throw InputError("config: unsupported version");
        Scenario s;
        s.name = j.value("name", "config");
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "power") {
            std::vector<Bus> buses;
            for (const auto& b : j.at("network").at("buses"))
                buses.push_back({b.at("m").get<double>(), b.at("d").get<double>(),
                                 b.at("p_m").get<double>(), b.at("v_mag").get<double>()});
            std::vector<Line> lines;
            for (const auto& l : j.at("network").at("lines"))
                lines.push_back({l.at("i").get<int>(), l.at("j").get<int>(),
                                 l.at("susceptance").get<double>()});
            s.network = PowerNetwork(std::move(buses), std::move(lines));
            const auto& c = j.at("controller");
            s.controller = FreqController{
                c.at("mode").get<std::string>() == "centralized" ? CtrlMode::Centralized
                                                                 : CtrlMode::Decentralized,
                c.at("a").get<double>(), c.at("b").get<double>(),
                c.at("omega_ref_hz").get<double>()};
            if (j.contains("steps"))
                for (const auto& st : j.at("steps"))
                    s.steps.push_back({st.at("bus").get<int>(), st.at("delta_p").get<double>(),
                                       st.at("t_step").get<double>()});
            if (j.contains("power_run")) {
                const auto& r = j.at("power_run");
                s.power_run.t_end = r.value("t_end", s.power_run.t_end);
                s.power_run.h = r.value("h", s.power_run.h);
                s.power_run.record_every = r.value("record_every", s.power_run.record_every);
            }
            return s;
        }
        if (kind != "agents") throw InputError("config: kind must be agents or power");

        Graph g = graph_from_json(j.at("graph"));
        const auto& pj = j.at("protocol");
        const ProtocolKind pk = protocol_kind_from_name(pj.at("kind").get<std::string>());
        switch (pk) {
            case ProtocolKind::FirstOrderNonlinear:
                s.protocol = ProtocolSpec::first_order(std::move(g), fns_from_json(pj.at("gains")),
                                                       fns_from_json(pj.at("interactions_a")));
                break;
            case ProtocolKind::SecondOrderNonlinear:
                s.protocol = ProtocolSpec::second_order(
                    std::move(g), fns_from_json(pj.at("gains")),
                    fns_from_json(pj.at("interactions_a")), fns_from_json(pj.at("interactions_b")));
                break;
            case ProtocolKind::SecondOrderDamped:
                s.protocol = ProtocolSpec::second_order_damped(
                    std::move(g), fns_from_json(pj.at("gains")),
                    fns_from_json(pj.at("interactions_a")));
                break;
            case ProtocolKind::PiSingle: {
                const auto& pi = pj.at("pi");
                s.protocol = ProtocolSpec::pi_single(
                    std::move(g), pi.at("a").get<double>(), pi.at("b").get<double>(),
                    pi.at("delta").get<double>(), pj.value("disturbance", Vec{}),
                    pj.value("x_anchor", Vec{}));
                break;
            }
            case ProtocolKind::PiDouble: {
                const auto& pi = pj.at("pi");
                s.protocol = ProtocolSpec::pi_double(
                    std::move(g), pi.at("a").get<double>(), pi.at("b").get<double>(),
                    pi.at("gamma").get<double>(), pi.at("delta").get<double>(),
                    pj.value("disturbance", Vec{}), pj.value("x_anchor", Vec{}));
                break;
            }
        }
        s.x0 = j.at("x0").get<Vec>();
        s.v0 = j.value("v0", Vec{});
        if (j.contains("run")) {
            const auto& r = j.at("run");
            s.run.t_end = r.value("t_end", s.run.t_end);
            s.run.h = r.value("h", s.run.h);
            s.run.record_every = r.value("record_every", s.run.record_every);
            s.run.conv_tol = r.value("conv_tol", s.run.conv_tol);
            s.run.conv_metric = r.value("conv_metric", std::string("x")) == "xv"
                                    ? ConvMetric::PositionsAndVelocities
                                    : ConvMetric::PositionsOnly;
            s.run.integrator = r.value("integrator", std::string("rk4")) == "rk45"
                                   ? Integrator::Rk45Adaptive
                                   : Integrator::Rk4Fixed;
            s.run.rtol = r.value("rtol", s.run.rtol);
            s.run.atol = r.value("atol", s.run.atol);
        }
        return s;
    } catch (const json::exception& e) {
        throw InputError(std::string("config field error: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(buf.str());
}

// ---------------------------------------------------------------------------
// Expected-outcome checks.

Trajectory run_scenario(const Scenario& s) {
    if (s.is_power()) return step_load_experiment(*s.network, *s.controller, s.steps, s.power_run);
    return run(*s.protocol, s.x0, s.v0, s.run);
}

namespace {

void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
         const std::string& detail) {
    out.push_back({name, pass, detail});
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::vector<CheckResult> check_building(const Scenario& s) {
    std::vector<CheckResult> out;
    const Trajectory traj = run_scenario(s);
    const auto& spec = *s.protocol;
    const std::size_t n = spec.agent_count();

    double max_storage_temp = -1e300;
    for (const auto& st : traj.states)
        max_storage_temp = std::max({max_storage_temp, st[1], st[4]});  // rooms 2 and 5
    add(out, "storage rooms stay at or below 23 C", max_storage_temp <= 23.0,
        "max over run " + fmt(max_storage_temp));

    const auto pred = predict_first_order(spec.gains(), s.x0);
    const Vec& xT = traj.final_state();
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(xT[i] - pred.value));
    add(out, "temperatures converge to the predicted value (1e-3)",
        traj.status == RunStatus::Converged && dev <= 1e-3,
        "x* = " + fmt(pred.value) + ", max deviation " + fmt(dev));
    add(out, "common temperature below 23 C", pred.value < 23.0, "x* = " + fmt(pred.value));

    const auto* e = traj.channel("E");
    double drift = 0.0;
    for (double v : e->samples) drift = std::max(drift, std::abs(v - e->samples.front()));
    const double tol = 1e-6 * (1.0 + std::abs(e->samples.front()));
    add(out, "stored energy invariant (1e-6 relative)", drift <= tol,
        "max drift " + fmt(drift) + " vs " + fmt(tol));
    return out;
}

std::vector<CheckResult> check_satellites(const Scenario& s) {
    std::vector<CheckResult> out;
    const Trajectory traj = run_scenario(s);
    const auto& spec = *s.protocol;
    const std::size_t n = spec.agent_count();

    add(out, "consensus reached in x and v (1e-6)", traj.status == RunStatus::Converged,
        std::string("status ") + to_string(traj.status));

    const auto pred = predict_second_order_velocity(spec.gains(), s.v0);
    const Vec vT = Vec(traj.final_state().begin() + n, traj.final_state().end());
    double dev = 0.0;
    for (double v : vT) dev = std::max(dev, std::abs(v - pred.value));
    add(out, "terminal velocity matches the integral equation (1e-3)", dev <= 1e-3,
        "v* = " + fmt(pred.value) + ", max deviation " + fmt(dev));

    const auto* p = traj.channel("p");
    double drift = 0.0;
    for (double v : p->samples) drift = std::max(drift, std::abs(v - p->samples.front()));
    const double tol = 1e-6 * (1.0 + std::abs(p->samples.front()));
    add(out, "momentum invariant (1e-6 relative)", drift <= tol,
        "max drift " + fmt(drift) + " vs " + fmt(tol));
    return out;
}

std::vector<CheckResult> check_robots(const Scenario& s) {
    std::vector<CheckResult> out;
    const auto& spec = *s.protocol;
    const double a = s.variant_a;
    const auto report = classify_pi_double(spec.graph(), a, spec.pi().b, spec.pi().gamma);
    const Trajectory traj = run_scenario(s);
    const double diam_T = traj.channel("diam")->samples.back();

    if (a == 0.0) {
        add(out, "without integral action the disturbance is not rejected",
            traj.status != RunStatus::Converged && diam_T > 0.01,
            "terminal diameter " + fmt(diam_T));
    } else if (a == 1.0) {
        add(out, "classified asymptotically stable (a < b*gamma)",
            report.classification.kind == StabilityKind::Hurwitz,
            std::string("class ") + to_string(report.classification.kind));
        add(out, "consensus reached under the disturbance",
            traj.status == RunStatus::Converged, std::string("status ") + to_string(traj.status));
    } else if (a == 15.0) {
        add(out, "marginally stable exactly at a = b*gamma",
            report.classification.kind == StabilityKind::Marginal &&
                std::abs(spectral_margin(report.spectrum)) < 1e-6,
            "spectral margin " + fmt(spectral_margin(report.spectrum)));
        add(out, "trajectory neither converges nor diverges",
            traj.status == RunStatus::TimedOut, std::string("status ") + to_string(traj.status));
    } else if (a == 20.0) {
        add(out, "classified unstable beyond the boundary",
            report.classification.kind == StabilityKind::Unstable,
            std::string("class ") + to_string(report.classification.kind));
        add(out, "trajectory diverges", traj.status == RunStatus::Diverged,
            std::string("status ") + to_string(traj.status));
    }
    return out;
}

std::vector<CheckResult> check_power6(const Scenario& s) {
    std::vector<CheckResult> out;
    const auto& net = *s.network;
    const auto& ctrl = *s.controller;
    const std::size_t n = net.bus_count();
    const double wref = ctrl.omega_ref();

    const auto report = ctrl.mode == CtrlMode::Centralized
                            ? classify_power_centralized(net, ctrl.a, ctrl.b)
                            : classify_power_decentralized(net, ctrl.a, ctrl.b);
    add(out, "closed loop classified Hurwitz",
        report.classification.kind == StabilityKind::Hurwitz,
        "margin " + fmt(report.classification.margin));

    const Trajectory traj = run_scenario(s);
    const Vec& sT = traj.final_state();
    double wdev = 0.0;
    for (std::size_t i = 0; i < n; ++i) wdev = std::max(wdev, std::abs(sT[n + i] - wref));
    add(out, "frequencies restored to 50 Hz within 1e-3 Hz", wdev / kTwoPi <= 1e-3,
        "max deviation " + fmt(wdev / kTwoPi) + " Hz");

    if (ctrl.mode == CtrlMode::Decentralized) {
        Vec pm = net.mech_power();
        for (const auto& st : s.steps) pm[st.bus - 1] -= st.delta_p;
        const auto ss = power_steady_state_from_parts(net.weighted_laplacian(), net.damping(), pm,
                                                      ctrl.b, wref);
        double zdev = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            zdev = std::max(zdev, std::abs(sT[2 * n + i] - ss.z0[i]));
        add(out, "integral states settle on the closed-form steady state (1e-4)", zdev <= 1e-4,
            "max |z - z0| = " + fmt(zdev));
    } else {
        const Vec u = power_control_signals(net, ctrl, sT);
        const double spread = disagreement_diameter(u);
        add(out, "generation increase shared uniformly", spread <= 1e-3,
            "u spread " + fmt(spread) + " W");
    }
    return out;
}

}  // namespace

std::vector<CheckResult> check_scenario(const Scenario& s) {
    switch (s.outcomes) {
        case OutcomeSet::Building: return check_building(s);
        case OutcomeSet::Satellites: return check_satellites(s);
        case OutcomeSet::Robots: return check_robots(s);
        case OutcomeSet::Power6: return check_power6(s);
        case OutcomeSet::None: break;
    }
    throw InputError("scenario has no expected-outcome assertions: " + s.name);
}

}  // namespace netcon
