#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netcon/power.hpp"
#include "netcon/protocols.hpp"
#include "netcon/simulate.hpp"
#include "netcon/stability.hpp"

namespace netcon {

/// Which builtin outcome assertions apply to a scenario (none for user configs).
enum class OutcomeSet { None, Building, Satellites, Robots, Power6 };

struct Scenario {
    std::string name;
    // Agent scenarios:
    std::optional<ProtocolSpec> protocol;
    Vec x0, v0;
    RunConfig run;
    // Power scenarios:
    std::optional<PowerNetwork> network;
    std::optional<FreqController> controller;
    std::vector<LoadStep> steps;
    PowerRunConfig power_run;

    OutcomeSet outcomes = OutcomeSet::None;
    double variant_a = 0.0;  // robots integral gain

    bool is_power() const { return network.has_value(); }
};

using VariantMap = std::map<std::string, std::string>;

/// Base names of the four built-in application scenarios.
std::vector<std::string> builtin_scenario_names();

/// All concrete builtin variants (robots gains, power modes and b values).
std::vector<Scenario> builtin_scenarios();

/// Builds one builtin by name. Variants: robots accepts a=0|1|15|20 (default
/// 1); power6 accepts mode=dec|cen and b=0.04|0.8 (defaults dec, 0.04).
Scenario make_builtin(const std::string& name, const VariantMap& variant = {});

bool is_builtin_name(const std::string& name);

/// Scenario config files: JSON with a `version` field (see README).
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json_text(const std::string& text);

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

/// Runs the scenario and evaluates its expected-outcome assertions.
std::vector<CheckResult> check_scenario(const Scenario& s);

/// Simulates an agent scenario (run config from the scenario).
Trajectory run_scenario(const Scenario& s);

}  // namespace netcon
