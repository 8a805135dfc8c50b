#pragma once

// Shipped seed data: the default condition axes, mission environments,
// missions, coalition, trust relationships and start times that a run uses
// when the configuration does not override them.

#include <string>
#include <vector>

#include "coalgen/domain.hpp"

namespace coalgen::defaults {

inline std::vector<EnvironmentalConditionSpec> conditions() {
    return {
        {"visibility level", 0.0, 100.0, "%", 1.0},
        {"temperature level", -10.0, 40.0, "C", 1.0},
        {"rainfall level", 0.0, 50.0, "mm/h", 1.0},
        {"snowfall level", 0.0, 50.0, "mm/h", 1.0},
        {"wind speed level", 0.0, 100.0, "mph", 1.0},
        {"humidity level", 0.0, 100.0, "%", 1.0},
    };
}

constexpr int granularity = 5;

inline std::vector<std::string> start_times() {
    return {"2019-02-21 13:20", "2019-02-21 17:45", "2019-02-22 06:30", "2019-02-22 09:15"};
}

inline std::vector<Mission> missions() {
    return {
        {"person of interest tracking",
         {"plan", "find"},
         {"4G/5G communication disruption", "POI uses social media alias extensively"},
         {"Limited data storage in theatre", "Data Audit trail required for legal reasons"}},
        {"logistical resupply",
         {"plan", "execute", "monitor", "recover"},
         {"Convoy route disruption", "Drone signal jamming in mountainous terrain"},
         {"Limited fuel availability", "Force protection element required for convoy"}},
    };
}

inline std::vector<MissionEnvironment> environments() {
    using Attrs = std::vector<std::pair<std::string, std::string>>;
    const std::vector<std::string> names = {
        "Number of non-combatants",
        "Amount of valuable infrastructure",
        "Presence of multi-dimensional battlespace",
        "Restricted rules of engagement",
        "Detection, observation, engagement ranges",
        "Avenues of approach",
        "Freedom of movement & manoeuvre",
        "Communications Functionality",
        "Logistical Requirements",
    };
    auto env = [&](std::string name, std::vector<std::string> vals) {
        Attrs attrs;
        for (std::size_t i = 0; i < names.size(); ++i) attrs.emplace_back(names[i], vals[i]);
        return MissionEnvironment{std::move(name), std::move(attrs)};
    };
    return {
        env("urban", {"High", "High", "Yes", "Yes", "Short", "Many", "Low", "Less", "High"}),
        env("desert", {"Low", "Low", "No", "No", "Long", "Many", "High", "Normal", "High"}),
        env("jungle", {"Low", "Low", "Some", "Some", "Short", "Few", "Low", "Normal", "Medium"}),
        env("mountain", {"Low", "Low", "Yes", "Yes", "Medium", "Few", "Medium", "Less", "Medium"}),
    };
}

inline std::vector<Coalition> coalitions() {
    return {{"US/UK/KISH", {"US", "UK", "Kish"}}};
}

inline std::vector<TrustRelationship> trust() {
    return {
        {"US", "UK", 0.8},  {"UK", "US", 0.75}, {"US", "Kish", 0.4},
        {"Kish", "US", 0.6}, {"UK", "Kish", 0.25}, {"Kish", "UK", 0.55},
    };
}

// Display-name stems cycled per kind when naming generated assets.
inline std::vector<std::string> display_names(AssetKind kind) {
    switch (kind) {
        case AssetKind::physical:
            return {"surveillance camera", "ground sensor", "radio relay"};
        case AssetKind::autonomous:
            return {"unmanned aerial vehicle", "autonomous ground vehicle", "resupply drone"};
        case AssetKind::virtual_:
            return {"high value targets database", "face recognizer", "weaponry detector"};
    }
    throw IntegrityError("unknown asset kind");
}

}  // namespace coalgen::defaults
