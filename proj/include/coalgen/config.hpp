#pragma once

// Run configuration: a strict JSON schema over the generation plan, the
// asset engine parameters, the rule document and the output settings. Any
// key the schema does not know is rejected (with a spelling suggestion);
// absent keys fall back to the shipped defaults, so {} is a complete
// configuration.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coalgen/asset_engine.hpp"
#include "coalgen/defaults.hpp"
#include "coalgen/detail/text.hpp"
#include "coalgen/errors.hpp"
#include "coalgen/fact_engine.hpp"
#include "coalgen/policy.hpp"

namespace coalgen {

enum class OutputFormat { ce, csv, both };

inline const char* to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::ce: return "ce";
        case OutputFormat::csv: return "csv";
        case OutputFormat::both: return "both";
    }
    throw IntegrityError("unknown output format");
}

inline OutputFormat output_format_from_string(const std::string& s) {
    if (s == "ce") return OutputFormat::ce;
    if (s == "csv") return OutputFormat::csv;
    if (s == "both") return OutputFormat::both;
    throw ConfigError("format must be one of ce, csv, both (got '" + s + "')");
}

inline const char* to_string(EvaluationMode mode) {
    return mode == EvaluationMode::strict ? "strict" : "lenient";
}

inline EvaluationMode evaluation_mode_from_string(const std::string& s) {
    if (s == "strict") return EvaluationMode::strict;
    if (s == "lenient") return EvaluationMode::lenient;
    throw ConfigError("evaluation_mode must be strict or lenient (got '" + s + "')");
}

struct GeneratorConfig {
    GenerationPlan plan;
    std::vector<TrustRelationship> trust;
    AssetGenerationConfig assets;
    std::string rules_path;  // empty means no document: every request approves
    EvaluationMode evaluation_mode = EvaluationMode::strict;
    std::string output_directory = "out";
    OutputFormat format = OutputFormat::both;
    std::uint64_t seed = 42;

    // Partner roster in first-appearance order across the coalition list.
    std::vector<CoalitionPartner> derived_partners() const {
        std::vector<CoalitionPartner> partners;
        for (const auto& coalition : plan.coalitions)
            for (const auto& name : coalition.partners) {
                bool seen = false;
                for (const auto& p : partners) seen = seen || p.name == name;
                if (!seen) partners.push_back({name});
            }
        return partners;
    }

    void validate() const {
        plan.validate();
        assets.validate();

        auto partners = derived_partners();
        auto known = [&](const std::string& name) {
            for (const auto& p : partners)
                if (p.name == name) return true;
            return false;
        };

        std::set<std::pair<std::string, std::string>> pairs;
        for (const auto& t : trust) {
            t.validate();
            if (!known(t.truster))
                throw ConfigError("trust references unknown partner '" + t.truster + "'");
            if (!known(t.trustee))
                throw ConfigError("trust references unknown partner '" + t.trustee + "'");
            if (!pairs.insert({t.truster, t.trustee}).second)
                throw ConfigError("trust " + t.truster + " -> " + t.trustee +
                                  " is configured twice");
        }

        if (assets.requests > 0) {
            if (partners.size() < 2)
                throw ConfigError("generating requests needs at least two coalition partners");
            for (const auto& owner : partners)
                for (const auto& requester : partners) {
                    if (owner.name == requester.name) continue;
                    if (!pairs.count({owner.name, requester.name}))
                        throw ConfigError("no trust relationship from '" + owner.name +
                                          "' to '" + requester.name +
                                          "' (required to label requests)");
                }
        }

        if (!rules_path.empty() && !std::filesystem::exists(rules_path))
            throw ConfigError("rule document not found: " + rules_path);
    }
};

namespace detail {

using config_json = nlohmann::ordered_json;

inline std::string suggestion_for(const std::string& key,
                                  const std::vector<std::string>& known) {
    std::string best;
    std::size_t best_distance = std::numeric_limits<std::size_t>::max();
    for (const auto& candidate : known) {
        std::size_t d = levenshtein(key, candidate);
        if (d < best_distance) {
            best_distance = d;
            best = candidate;
        }
    }
    if (best_distance <= 3 && best_distance < best.size()) return best;
    return {};
}

inline void reject_unknown_keys(const config_json& node, const std::string& where,
                                const std::vector<std::string>& known) {
    for (const auto& item : node.items()) {
        if (std::find(known.begin(), known.end(), item.key()) != known.end()) continue;
        std::string message = "unknown key '" + item.key() + "' in " + where;
        std::string suggestion = suggestion_for(item.key(), known);
        if (!suggestion.empty()) message += " (did you mean '" + suggestion + "'?)";
        throw ConfigError(message);
    }
}

inline const config_json& require_kind(const config_json& node, const std::string& where,
                                       config_json::value_t kind, const char* kind_name) {
    bool numeric_ok = kind == config_json::value_t::number_float && node.is_number();
    if (node.type() != kind && !numeric_ok)
        throw ConfigError(where + " must be " + kind_name);
    return node;
}

inline std::string get_string(const config_json& node, const std::string& where) {
    require_kind(node, where, config_json::value_t::string, "a string");
    return node.get<std::string>();
}

inline double get_number(const config_json& node, const std::string& where) {
    require_kind(node, where, config_json::value_t::number_float, "a number");
    return node.get<double>();
}

inline int get_int(const config_json& node, const std::string& where) {
    if (!node.is_number_integer())
        throw ConfigError(where + " must be an integer");
    return node.get<int>();
}

inline std::uint64_t get_uint64(const config_json& node, const std::string& where) {
    if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<std::int64_t>() >= 0))
        throw ConfigError(where + " must be a non-negative integer");
    return node.get<std::uint64_t>();
}

inline std::vector<std::string> get_string_array(const config_json& node,
                                                 const std::string& where) {
    require_kind(node, where, config_json::value_t::array, "an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i)
        out.push_back(get_string(node[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::vector<EnvironmentalConditionSpec> parse_conditions(const config_json& node) {
    require_kind(node, "conditions", config_json::value_t::array, "an array");
    std::vector<EnvironmentalConditionSpec> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "conditions[" + std::to_string(i) + "]";
        require_kind(node[i], where, config_json::value_t::object, "an object");
        reject_unknown_keys(node[i], where, {"name", "lower", "upper", "units", "weight"});
        for (const char* required : {"name", "lower", "upper"})
            if (!node[i].contains(required))
                throw ConfigError(where + " is missing '" + required + "'");
        EnvironmentalConditionSpec spec;
        spec.name = get_string(node[i]["name"], where + ".name");
        spec.lower = get_number(node[i]["lower"], where + ".lower");
        spec.upper = get_number(node[i]["upper"], where + ".upper");
        if (node[i].contains("units")) spec.units = get_string(node[i]["units"], where + ".units");
        if (node[i].contains("weight"))
            spec.weight = get_number(node[i]["weight"], where + ".weight");
        out.push_back(std::move(spec));
    }
    return out;
}

inline std::vector<Mission> parse_missions(const config_json& node) {
    require_kind(node, "missions", config_json::value_t::array, "an array");
    std::vector<Mission> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "missions[" + std::to_string(i) + "]";
        require_kind(node[i], where, config_json::value_t::object, "an object");
        reject_unknown_keys(node[i], where,
                            {"name", "stages", "adversary_actions", "constraints"});
        if (!node[i].contains("name")) throw ConfigError(where + " is missing 'name'");
        Mission mission;
        mission.name = get_string(node[i]["name"], where + ".name");
        if (node[i].contains("stages"))
            mission.stages = get_string_array(node[i]["stages"], where + ".stages");
        if (node[i].contains("adversary_actions"))
            mission.adversary_actions =
                get_string_array(node[i]["adversary_actions"], where + ".adversary_actions");
        if (node[i].contains("constraints"))
            mission.constraints =
                get_string_array(node[i]["constraints"], where + ".constraints");
        out.push_back(std::move(mission));
    }
    return out;
}

inline std::vector<MissionEnvironment> parse_environments(const config_json& node) {
    require_kind(node, "environments", config_json::value_t::array, "an array");
    std::vector<MissionEnvironment> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "environments[" + std::to_string(i) + "]";
        require_kind(node[i], where, config_json::value_t::object, "an object");
        reject_unknown_keys(node[i], where, {"name", "attributes"});
        if (!node[i].contains("name")) throw ConfigError(where + " is missing 'name'");
        MissionEnvironment environment;
        environment.name = get_string(node[i]["name"], where + ".name");
        if (node[i].contains("attributes")) {
            const auto& attrs = node[i]["attributes"];
            require_kind(attrs, where + ".attributes", config_json::value_t::object,
                         "an object");
            for (const auto& item : attrs.items())
                environment.attributes.emplace_back(
                    item.key(),
                    get_string(item.value(), where + ".attributes." + item.key()));
        }
        out.push_back(std::move(environment));
    }
    return out;
}

inline std::vector<Coalition> parse_coalitions(const config_json& node) {
    require_kind(node, "coalitions", config_json::value_t::array, "an array");
    std::vector<Coalition> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "coalitions[" + std::to_string(i) + "]";
        require_kind(node[i], where, config_json::value_t::object, "an object");
        reject_unknown_keys(node[i], where, {"name", "partners"});
        for (const char* required : {"name", "partners"})
            if (!node[i].contains(required))
                throw ConfigError(where + " is missing '" + required + "'");
        Coalition coalition;
        coalition.name = get_string(node[i]["name"], where + ".name");
        coalition.partners = get_string_array(node[i]["partners"], where + ".partners");
        out.push_back(std::move(coalition));
    }
    return out;
}

inline std::vector<TrustRelationship> parse_trust(const config_json& node) {
    require_kind(node, "trust", config_json::value_t::array, "an array");
    std::vector<TrustRelationship> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "trust[" + std::to_string(i) + "]";
        require_kind(node[i], where, config_json::value_t::object, "an object");
        reject_unknown_keys(node[i], where, {"truster", "trustee", "value"});
        for (const char* required : {"truster", "trustee", "value"})
            if (!node[i].contains(required))
                throw ConfigError(where + " is missing '" + required + "'");
        out.push_back({get_string(node[i]["truster"], where + ".truster"),
                       get_string(node[i]["trustee"], where + ".trustee"),
                       get_number(node[i]["value"], where + ".value")});
    }
    return out;
}

inline GeoBounds parse_bounding_box(const config_json& node) {
    require_kind(node, "assets.bounding_box", config_json::value_t::object, "an object");
    reject_unknown_keys(node, "assets.bounding_box",
                        {"min_lat", "max_lat", "min_lon", "max_lon"});
    GeoBounds bounds;
    for (const char* required : {"min_lat", "max_lat", "min_lon", "max_lon"})
        if (!node.contains(required))
            throw ConfigError("assets.bounding_box is missing '" + std::string(required) + "'");
    bounds.min_lat = get_number(node["min_lat"], "assets.bounding_box.min_lat");
    bounds.max_lat = get_number(node["max_lat"], "assets.bounding_box.max_lat");
    bounds.min_lon = get_number(node["min_lon"], "assets.bounding_box.min_lon");
    bounds.max_lon = get_number(node["max_lon"], "assets.bounding_box.max_lon");
    return bounds;
}

inline AssetGenerationConfig parse_assets(const config_json& node,
                                          AssetGenerationConfig base) {
    require_kind(node, "assets", config_json::value_t::object, "an object");
    reject_unknown_keys(node, "assets",
                        {"physical", "autonomous", "virtual", "availability_probability",
                         "base_worth", "bounding_box", "per_inventory", "requests",
                         "request_window_minutes"});
    if (node.contains("physical"))
        base.counts.physical = get_int(node["physical"], "assets.physical");
    if (node.contains("autonomous"))
        base.counts.autonomous = get_int(node["autonomous"], "assets.autonomous");
    if (node.contains("virtual"))
        base.counts.virtual_ = get_int(node["virtual"], "assets.virtual");
    if (node.contains("availability_probability"))
        base.availability_probability =
            get_number(node["availability_probability"], "assets.availability_probability");
    if (node.contains("base_worth"))
        base.base_worth = get_number(node["base_worth"], "assets.base_worth");
    if (node.contains("bounding_box")) base.bounding_box = parse_bounding_box(node["bounding_box"]);
    if (node.contains("per_inventory"))
        base.assets_per_inventory = get_int(node["per_inventory"], "assets.per_inventory");
    if (node.contains("requests")) base.requests = get_int(node["requests"], "assets.requests");
    if (node.contains("request_window_minutes"))
        base.request_window_minutes =
            get_int(node["request_window_minutes"], "assets.request_window_minutes");
    return base;
}

inline AssetGenerationConfig default_assets() {
    AssetGenerationConfig assets;
    assets.counts = {40, 30, 30};
    assets.assets_per_inventory = 5;
    assets.requests = 1000;
    return assets;
}

inline GeneratorConfig config_from_json(const config_json& doc,
                                        const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw ConfigError("configuration root must be an object");
    reject_unknown_keys(doc, "the configuration",
                        {"conditions", "granularity", "start_times", "missions",
                         "environments", "coalitions", "trust", "assets", "rules",
                         "evaluation_mode", "output_directory", "format", "seed"});

    GeneratorConfig config;
    config.plan.condition_specs = doc.contains("conditions")
                                      ? parse_conditions(doc["conditions"])
                                      : defaults::conditions();
    config.plan.granularity = doc.contains("granularity")
                                  ? get_int(doc["granularity"], "granularity")
                                  : defaults::granularity;
    config.plan.start_times = doc.contains("start_times")
                                  ? get_string_array(doc["start_times"], "start_times")
                                  : defaults::start_times();
    config.plan.missions =
        doc.contains("missions") ? parse_missions(doc["missions"]) : defaults::missions();
    config.plan.environments = doc.contains("environments")
                                   ? parse_environments(doc["environments"])
                                   : defaults::environments();
    config.plan.coalitions = doc.contains("coalitions") ? parse_coalitions(doc["coalitions"])
                                                        : defaults::coalitions();

    // The shipped trust table matches the shipped coalition; a custom
    // coalition roster must bring its own trust pairs.
    if (doc.contains("trust"))
        config.trust = parse_trust(doc["trust"]);
    else if (!doc.contains("coalitions"))
        config.trust = defaults::trust();

    config.assets = doc.contains("assets") ? parse_assets(doc["assets"], default_assets())
                                           : default_assets();

    if (doc.contains("rules")) {
        std::filesystem::path rules = get_string(doc["rules"], "rules");
        if (rules.is_relative()) rules = base_dir / rules;
        config.rules_path = rules.lexically_normal().string();
    }
    if (doc.contains("evaluation_mode"))
        config.evaluation_mode =
            evaluation_mode_from_string(get_string(doc["evaluation_mode"], "evaluation_mode"));
    if (doc.contains("output_directory"))
        config.output_directory = get_string(doc["output_directory"], "output_directory");
    if (doc.contains("format"))
        config.format = output_format_from_string(get_string(doc["format"], "format"));
    if (doc.contains("seed")) config.seed = get_uint64(doc["seed"], "seed");
    config.assets.seed = config.seed;

    config.validate();
    return config;
}

}  // namespace detail

inline GeneratorConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();

    detail::config_json doc;
    try {
        doc = detail::config_json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("config is not valid JSON: " + std::string(e.what()),
                         path.string() + ", byte " + std::to_string(e.byte));
    }
    return detail::config_from_json(doc, path.parent_path());
}

// The rule document named by the config; no document means no conditions,
// which approves everything.
inline RuleSet load_rules(const GeneratorConfig& config) {
    if (config.rules_path.empty()) return {};
    std::ifstream in(config.rules_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read rule document: " + config.rules_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_rules(buffer.str());
}

// The fully applied configuration, embedded in the run manifest so the
// config digest can be recomputed from the manifest alone. The output
// directory is deliberately absent: it does not shape the dataset.
inline nlohmann::ordered_json effective_config_json(const GeneratorConfig& config,
                                                    const RuleSet& rules) {
    nlohmann::ordered_json doc;

    auto& conditions = doc["conditions"] = nlohmann::ordered_json::array();
    for (const auto& spec : config.plan.condition_specs)
        conditions.push_back({{"name", spec.name},
                              {"lower", spec.lower},
                              {"upper", spec.upper},
                              {"units", spec.units},
                              {"weight", spec.weight}});
    doc["granularity"] = config.plan.granularity;
    doc["start_times"] = config.plan.start_times;

    auto& missions = doc["missions"] = nlohmann::ordered_json::array();
    for (const auto& mission : config.plan.missions)
        missions.push_back({{"name", mission.name},
                            {"stages", mission.stages},
                            {"adversary_actions", mission.adversary_actions},
                            {"constraints", mission.constraints}});

    auto& environments = doc["environments"] = nlohmann::ordered_json::array();
    for (const auto& environment : config.plan.environments) {
        nlohmann::ordered_json attributes = nlohmann::ordered_json::object();
        for (const auto& [name, value] : environment.attributes) attributes[name] = value;
        environments.push_back({{"name", environment.name}, {"attributes", attributes}});
    }

    auto& coalitions = doc["coalitions"] = nlohmann::ordered_json::array();
    for (const auto& coalition : config.plan.coalitions)
        coalitions.push_back({{"name", coalition.name}, {"partners", coalition.partners}});

    auto& trust = doc["trust"] = nlohmann::ordered_json::array();
    for (const auto& t : config.trust)
        trust.push_back({{"truster", t.truster}, {"trustee", t.trustee}, {"value", t.value}});

    doc["assets"] = {{"physical", config.assets.counts.physical},
                     {"autonomous", config.assets.counts.autonomous},
                     {"virtual", config.assets.counts.virtual_},
                     {"availability_probability", config.assets.availability_probability},
                     {"base_worth", config.assets.base_worth},
                     {"bounding_box",
                      {{"min_lat", config.assets.bounding_box.min_lat},
                       {"max_lat", config.assets.bounding_box.max_lat},
                       {"min_lon", config.assets.bounding_box.min_lon},
                       {"max_lon", config.assets.bounding_box.max_lon}}},
                     {"per_inventory", config.assets.assets_per_inventory},
                     {"requests", config.assets.requests},
                     {"request_window_minutes", config.assets.request_window_minutes}};

    doc["rules"] = config.rules_path;
    doc["rules_document"] = nlohmann::ordered_json::parse(serialize_rules(rules));
    doc["evaluation_mode"] = to_string(config.evaluation_mode);
    doc["format"] = to_string(config.format);
    doc["seed"] = config.seed;
    return doc;
}

}  // namespace coalgen
