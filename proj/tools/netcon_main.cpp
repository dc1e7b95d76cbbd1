#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netcon/scenarios.hpp"

namespace {

using namespace netcon;

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

VariantMap parse_variants(const std::vector<std::string>& kvs) {
    VariantMap out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("variant must be key=value: " + kv);
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

Scenario resolve_scenario(const std::string& target, const std::vector<std::string>& variant_kvs) {
    if (is_builtin_name(target)) return make_builtin(target, parse_variants(variant_kvs));
    return load_scenario(target);
}

int cmd_simulate(const std::string& target, const std::vector<std::string>& variants,
                 const std::string& out_dir, double h_override, double t_end_override) {
    Scenario s = resolve_scenario(target, variants);
    if (h_override > 0.0) (s.is_power() ? s.power_run.h : s.run.h) = h_override;
    if (t_end_override > 0.0) (s.is_power() ? s.power_run.t_end : s.run.t_end) = t_end_override;

    std::filesystem::create_directories(out_dir);
    const std::string base = (std::filesystem::path(out_dir) / s.name).string();

    const Trajectory traj = run_scenario(s);
    if (s.is_power()) {
        write_power_csv(traj, *s.network, *s.controller, base + "_trajectory.csv");
        std::ofstream meta(base + "_run.json");
        meta << "{\"status\":\"" << to_string(traj.status) << "\",\"status_time\":"
             << traj.status_time << ",\"t_end\":" << s.power_run.t_end
             << ",\"h\":" << s.power_run.h
             << ",\"note\":\"omega columns in Hz; internal integration in rad/s\"}\n";
    } else {
        write_trajectory_csv(traj, *s.protocol, base + "_trajectory.csv");
        write_trajectory_sidecar(traj, *s.protocol, s.run, base + "_run.json");
    }
    std::cout << "status: " << to_string(traj.status) << " at t=" << traj.status_time << "\n"
              << "wrote " << base << "_trajectory.csv\n";
    if (traj.status == RunStatus::Failed) return kExitNumerical;
    return kExitOk;
}

int cmd_predict(const std::string& target, const std::vector<std::string>& variants) {
    Scenario s = resolve_scenario(target, variants);
    std::cout.precision(12);
    if (s.is_power()) {
        const auto ss = power_steady_state(*s.network, s.controller->b, s.controller->omega_ref());
        std::cout << "omega0 (Hz): " << s.controller->omega_ref_hz << " at every bus\nz0:";
        for (double z : ss.z0) std::cout << " " << z;
        std::cout << "\n";
        return kExitOk;
    }
    const auto& spec = *s.protocol;
    auto print = [](const char* label, const EquilibriumPrediction& p) {
        std::cout << label << " = " << p.value << "  (residual " << p.residual << ", "
                  << (p.method == PredictionMethod::ClosedForm ? "closed-form" : "quadrature")
                  << ")\n";
    };
    switch (spec.kind()) {
        case ProtocolKind::FirstOrderNonlinear:
            print("x*", predict_first_order(spec.gains(), s.x0));
            break;
        case ProtocolKind::SecondOrderNonlinear:
            print("v*", predict_second_order_velocity(spec.gains(), s.v0));
            break;
        case ProtocolKind::SecondOrderDamped:
            print("x*", predict_damped_position(spec.gains(), s.x0, s.v0));
            break;
        case ProtocolKind::PiSingle:
        case ProtocolKind::PiDouble:
            std::cout << "x* = " << predict_pi_average(s.x0)
                      << "  (initial average; exact for delta > 0, d = 0)\n";
            break;
    }
    return kExitOk;
}

int cmd_stability(const std::string& target, const std::vector<std::string>& variants) {
    Scenario s = resolve_scenario(target, variants);
    StabilityReport report;
    if (s.is_power()) {
        report = s.controller->mode == CtrlMode::Centralized
                     ? classify_power_centralized(*s.network, s.controller->a, s.controller->b)
                     : classify_power_decentralized(*s.network, s.controller->a, s.controller->b);
    } else {
        const auto& spec = *s.protocol;
        if (spec.kind() == ProtocolKind::PiSingle)
            report = classify_pi_single(spec.graph(), spec.pi().a, spec.pi().b);
        else if (spec.kind() == ProtocolKind::PiDouble)
            report = classify_pi_double(spec.graph(), spec.pi().a, spec.pi().b, spec.pi().gamma);
        else
            throw InputError("stability reports apply to PI and power scenarios");
    }
    std::cout << stability_report_json(report) << "\n";
    return kExitOk;
}

int cmd_check(const std::string& target, const std::vector<std::string>& variants, bool all) {
    std::vector<Scenario> list;
    if (all) {
        list = builtin_scenarios();
    } else {
        list.push_back(resolve_scenario(target, variants));
    }
    bool ok = true;
    for (const auto& s : list) {
        std::string label = s.name;
        if (s.outcomes == OutcomeSet::Robots) label += " (a=" + std::to_string(int(s.variant_a)) + ")";
        if (s.outcomes == OutcomeSet::Power6)
            label += std::string(" (") +
                     (s.controller->mode == CtrlMode::Centralized ? "centralized" : "decentralized") +
                     ", b=" + std::to_string(s.controller->b).substr(0, 4) + ")";
        for (const auto& r : check_scenario(s)) {
            std::cout << (r.pass ? "PASS" : "FAIL") << "  [" << label << "] " << r.name << " — "
                      << r.detail << "\n";
            ok = ok && r.pass;
        }
    }
    return ok ? kExitOk : kExitAssertion;
}

int cmd_validate(const std::string& target, const std::vector<std::string>& variants) {
    Scenario s = resolve_scenario(target, variants);
    bool ok = true;
    std::cout.precision(6);
    if (s.is_power()) {
        const auto& net = *s.network;
        std::cout << "network: " << net.bus_count() << " buses, " << net.lines().size()
                  << " lines, connected: yes\n";
        for (std::size_t k = 0; k < net.couplings().size(); ++k)
            std::cout << "  line " << net.lines()[k].i << "-" << net.lines()[k].j
                      << ": k = " << net.couplings()[k] << "\n";
        return kExitOk;
    }
    const auto& spec = *s.protocol;
    if (spec.has_integral()) {
        std::cout << "PI protocol (a=" << spec.pi().a << ", b=" << spec.pi().b
                  << ", gamma=" << spec.pi().gamma << ", delta=" << spec.pi().delta
                  << "): no function assumptions to validate\n";
    }
    for (std::size_t i = 0; i < spec.gains().size(); ++i) {
        const auto rep = validate_gain(spec.gains()[i], -10.0, 10.0, 201);
        std::cout << "gain " << i + 1 << ": bounds [" << rep.gamma_lower << ", "
                  << rep.gamma_upper << "] " << (rep.ok ? "ok" : "NOT POSITIVE") << "\n";
        ok = ok && rep.ok;
    }
    auto report_interactions = [&](const std::vector<ScalarFn>& fns, const char* tag) {
        for (std::size_t k = 0; k < fns.size(); ++k) {
            const auto rep = validate_interaction(fns[k], -5.0, 5.0, 201);
            std::cout << tag << " " << k + 1 << ": odd " << (rep.odd_ok ? "ok" : "VIOLATED")
                      << ", sign " << (rep.sign_ok ? "ok" : "VIOLATED") << ", Lipschitz est "
                      << rep.lipschitz_estimate << "\n";
            ok = ok && rep.odd_ok && rep.sign_ok;
        }
    };
    report_interactions(spec.interactions_a(), "interaction a");
    report_interactions(spec.interactions_b(), "interaction b");
    return ok ? kExitOk : kExitAssertion;
}

int cmd_power_steady_state(const std::string& network_path, double a, double b,
                           double omega_ref_hz) {
    (void)a;  // steady state depends on b only; a kept for interface symmetry
    std::vector<std::string> warnings;
    const PowerNetwork net = ingest_network(network_path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const double wref = 2.0 * M_PI * omega_ref_hz;
    const auto ss = power_steady_state(net, b, wref);
    std::cout.precision(12);
    std::cout << "omega0 (Hz): " << omega_ref_hz << " at every bus\nz0:";
    for (double z : ss.z0) std::cout << " " << z;
    std::cout << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Networked consensus and frequency-control toolkit"};
    app.require_subcommand(1);

    std::string target, out_dir = "./out", network_path;
    std::vector<std::string> variants;
    double h_override = -1.0, t_end_override = -1.0;
    double a = 0.8, b = 0.04, omega_ref_hz = 50.0;
    bool all = false;

    auto* sim = app.add_subcommand("simulate", "integrate a scenario and write CSV output");
    sim->set_help_flag("--help", "print help");  // frees -h/--h for the step size
    sim->add_option("scenario", target, "builtin name or config path")->required();
    sim->add_option("--variant", variants, "builtin variant key=value");
    sim->add_option("--out", out_dir, "output directory");
    sim->add_option("--h", h_override, "step-size override");
    sim->add_option("--t-end", t_end_override, "horizon override");

    auto* pre = app.add_subcommand("predict", "print the predicted equilibrium");
    pre->add_option("scenario", target)->required();
    pre->add_option("--variant", variants);

    auto* sta = app.add_subcommand("stability", "print the stability report JSON");
    sta->add_option("scenario", target)->required();
    sta->add_option("--variant", variants);

    auto* chk = app.add_subcommand("check", "run expected-outcome assertions");
    chk->add_option("scenario", target);
    chk->add_option("--variant", variants);
    chk->add_flag("--all", all, "check every builtin scenario variant");

    auto* val = app.add_subcommand("validate", "assumption reports for a scenario/config");
    val->add_option("scenario", target)->required();
    val->add_option("--variant", variants);

    auto* pow = app.add_subcommand("power", "power-network utilities");
    auto* ss = pow->add_subcommand("steady-state", "closed-form decentralized steady state");
    ss->add_option("network", network_path, "network CSV file")->required();
    ss->add_option("--a", a, "proportional gain");
    ss->add_option("--b", b, "integral gain")->required();
    ss->add_option("--omega-ref", omega_ref_hz, "reference frequency in Hz");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(target, variants, out_dir, h_override, t_end_override);
        if (pre->parsed()) return cmd_predict(target, variants);
        if (sta->parsed()) return cmd_stability(target, variants);
        if (chk->parsed()) {
            if (!all && target.empty()) {
                std::cerr << "error: check needs a scenario name or --all\n";
                return kExitInput;
            }
            return cmd_check(target, variants, all);
        }
        if (val->parsed()) return cmd_validate(target, variants);
        if (pow->parsed() && ss->parsed())
            return cmd_power_steady_state(network_path, a, b, omega_ref_hz);
        std::cerr << "error: no subcommand\n";
        return kExitInput;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
