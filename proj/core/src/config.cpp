#include "replan/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "replan/errors.hpp"

namespace replan {

namespace {

using nlohmann::json;

struct Binding {
    std::function<void(PlannerSettings&, const json&)> set;
    std::function<json(const PlannerSettings&)> get;
};

std::map<std::string, Binding> bindings() {
    auto num = [](auto member) {
        return Binding{[member](PlannerSettings& s, const json& v) {
                           if (!v.is_number()) throw ConfigError("expected a number");
                           member(s) = v.get<double>();
                       },
                       [member](const PlannerSettings& s) {
                           PlannerSettings copy = s;
                           return json(member(copy));
                       }};
    };
    auto integer = [](auto member) {
        return Binding{[member](PlannerSettings& s, const json& v) {
                           if (!v.is_number_integer())
                               throw ConfigError("expected an integer");
                           member(s) = v.get<long>();
                       },
                       [member](const PlannerSettings& s) {
                           PlannerSettings copy = s;
                           return json(member(copy));
                       }};
    };
    auto boolean = [](auto member) {
        return Binding{[member](PlannerSettings& s, const json& v) {
                           if (!v.is_boolean()) throw ConfigError("expected a boolean");
                           member(s) = v.get<bool>();
                       },
                       [member](const PlannerSettings& s) {
                           PlannerSettings copy = s;
                           return json(member(copy));
                       }};
    };

    // clang-format off
    return {
        {"wheelbase",        num([](PlannerSettings& s) -> double& { return s.vehicle.wheelbase; })},
        {"delta_max",        num([](PlannerSettings& s) -> double& { return s.vehicle.delta_max; })},
        {"s_max",            num([](PlannerSettings& s) -> double& { return s.vehicle.s_max; })},
        {"r_s",              num([](PlannerSettings& s) -> double& { return s.vehicle.r_s; })},
        {"r_a",              num([](PlannerSettings& s) -> double& { return s.vehicle.r_a; })},
        {"rho_min",          num([](PlannerSettings& s) -> double& { return s.vehicle.rho_min; })},
        {"v_max",            num([](PlannerSettings& s) -> double& { return s.vehicle.v_max; })},
        {"a_max",            num([](PlannerSettings& s) -> double& { return s.vehicle.a_max; })},
        {"footprint_length", num([](PlannerSettings& s) -> double& { return s.vehicle.footprint_length; })},
        {"footprint_width",  num([](PlannerSettings& s) -> double& { return s.vehicle.footprint_width; })},
        {"lambda_f",         num([](PlannerSettings& s) -> double& { return s.heuristic.lambda_f; })},
        {"lambda_b",         num([](PlannerSettings& s) -> double& { return s.heuristic.lambda_b; })},
        {"lambda_s",         num([](PlannerSettings& s) -> double& { return s.heuristic.lambda_s; })},
        {"lambda_sc",        num([](PlannerSettings& s) -> double& { return s.heuristic.lambda_sc; })},
        {"lambda_heu",       num([](PlannerSettings& s) -> double& { return s.heuristic.lambda_heu; })},
        {"eta",              num([](PlannerSettings& s) -> double& { return s.heuristic.eta; })},
        {"lambda_obs",       num([](PlannerSettings& s) -> double& { return s.smoothing.lambda_obs; })},
        {"lambda_cur",       num([](PlannerSettings& s) -> double& { return s.smoothing.lambda_cur; })},
        {"lambda_path",      num([](PlannerSettings& s) -> double& { return s.smoothing.lambda_path; })},
        {"k_max",            num([](PlannerSettings& s) -> double& { return s.smoothing.k_max; })},
        {"initial_step",     num([](PlannerSettings& s) -> double& { return s.smoothing.initial_step; })},
        {"min_step",         num([](PlannerSettings& s) -> double& { return s.smoothing.min_step; })},
        {"d_i",              num([](PlannerSettings& s) -> double& { return s.alignment.d_i; })},
        {"d_r",              num([](PlannerSettings& s) -> double& { return s.alignment.d_r; })},
        {"activation_radius",num([](PlannerSettings& s) -> double& { return s.alignment.activation_radius; })},
        {"lambda_v",         num([](PlannerSettings& s) -> double& { return s.field.lambda_v; })},
        {"d_obs_max",        num([](PlannerSettings& s) -> double& { return s.field.d_obs_max; })},
        {"goal_xy_tol",      num([](PlannerSettings& s) -> double& { return s.limits.goal_xy_tol; })},
        {"goal_theta_tol",   num([](PlannerSettings& s) -> double& { return s.limits.goal_theta_tol; })},
        {"skip_threshold",   num([](PlannerSettings& s) -> double& { return s.skip_threshold; })},
        {"dt",               num([](PlannerSettings& s) -> double& { return s.dt; })},
        {"resample_spacing", num([](PlannerSettings& s) -> double& { return s.resample_spacing; })},
        {"max_iters",        integer([](PlannerSettings& s) -> int& { return s.smoothing.max_iters; })},
        {"max_expansions",   integer([](PlannerSettings& s) -> long& { return s.limits.max_expansions; })},
        {"hinge_curvature",  boolean([](PlannerSettings& s) -> bool& { return s.smoothing.hinge_curvature; })},
    };
    // clang-format on
}

}  // namespace

PlannerSettings parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    PlannerSettings settings;
    const auto table = bindings();
    bool k_max_given = false;
    for (const auto& [key, value] : doc.items()) {
        auto it = table.find(key);
        if (it == table.end()) throw ConfigError("unknown config key: " + key);
        try {
            it->second.set(settings, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
        if (key == "k_max") k_max_given = true;
    }
    if (!k_max_given) settings.smoothing.k_max = 1.0 / settings.vehicle.rho_min;
    settings.validate();
    return settings;
}

PlannerSettings load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const PlannerSettings& settings) {
    json doc = json::object();
    for (const auto& [key, binding] : bindings()) doc[key] = binding.get(settings);
    return doc.dump(2) + "\n";
}

void save_config_file(const PlannerSettings& settings, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << config_to_json(settings);
}

}  // namespace replan
