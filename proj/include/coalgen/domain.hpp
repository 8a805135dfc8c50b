#pragma once

// Domain records produced or consumed by the generator. Plain values with
// validation; no behaviour beyond that. Everything is immutable once built,
// so records are safe to share across threads.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coalgen/detail/wallclock.hpp"
#include "coalgen/errors.hpp"

namespace coalgen {

// One environmental condition axis: bounded, with display units and an
// importance weight used by the severity average.
struct EnvironmentalConditionSpec {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
    std::string units;
    double weight = 1.0;

    void validate() const {
        if (name.empty()) throw ConfigError("condition name must be non-empty");
        if (!(lower < upper))
            throw ConfigError("condition '" + name + "': lower bound must be below upper bound");
        if (!(weight >= 0.0)) throw ConfigError("condition '" + name + "': weight must be >= 0");
    }
};

// One full assignment of values to every configured condition, with the
// weighted-mean severity of that assignment.
struct EnvironmentalConditionInstance {
    std::string id;                                         // "eci_<k>", 1-based
    std::vector<std::pair<std::string, double>> values;     // condition name -> value, declaration order
    double severity = 0.0;

    bool operator==(const EnvironmentalConditionInstance&) const = default;

    void validate() const {
        if (id.empty()) throw IntegrityError("condition instance id must be non-empty");
        if (!(severity >= 0.0 && severity <= 1.0))
            throw IntegrityError(id + ": severity must lie in [0,1]");
    }
};

// Autonomy rating: either three graded capabilities summed into an overall
// level 0..9, or the independent level 10.
class AlfusScore {
public:
    struct Graded {
        int mission_complexity = 0;
        int environmental_complexity = 0;
        int human_interaction = 0;
        int overall = 0;  // always the sum of the three
        bool operator==(const Graded&) const = default;
    };

    static AlfusScore graded(int mc, int ec, int hi) {
        auto in_range = [](int v) { return v >= 0 && v <= 3; };
        if (!in_range(mc) || !in_range(ec) || !in_range(hi))
            throw ConfigError("graded capability scores must lie in 0..3");
        AlfusScore s;
        s.graded_ = Graded{mc, ec, hi, mc + ec + hi};
        return s;
    }

    static AlfusScore level_10() { return AlfusScore{}; }

    bool is_level_10() const { return !graded_.has_value(); }

    const Graded& graded_scores() const {
        if (!graded_) throw IntegrityError("level 10 carries no capability scores");
        return *graded_;
    }

    // Overall level; 10 for the independent top level.
    int numeric_level() const { return graded_ ? graded_->overall : 10; }

    std::string id() const {
        if (!graded_) return "alfus_level_10";
        return "alfus_" + std::to_string(graded_->mission_complexity) + "_" +
               std::to_string(graded_->environmental_complexity) + "_" +
               std::to_string(graded_->human_interaction);
    }

    bool operator==(const AlfusScore&) const = default;

private:
    AlfusScore() = default;
    std::optional<Graded> graded_;
};

struct Mission {
    std::string name;
    std::vector<std::string> stages;
    std::vector<std::string> adversary_actions;
    std::vector<std::string> constraints;

    bool operator==(const Mission&) const = default;

    void validate() const {
        if (name.empty()) throw ConfigError("mission name must be non-empty");
    }
};

struct MissionEnvironment {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;  // categorical, emitted but not interpreted

    bool operator==(const MissionEnvironment&) const = default;

    void validate() const {
        if (name.empty()) throw ConfigError("environment name must be non-empty");
    }
};

struct CoalitionPartner {
    std::string name;

    bool operator==(const CoalitionPartner&) const = default;

    void validate() const {
        if (name.empty()) throw ConfigError("partner name must be non-empty");
    }
};

struct Coalition {
    std::string name;
    std::vector<std::string> partners;

    bool operator==(const Coalition&) const = default;

    void validate() const {
        if (name.empty()) throw ConfigError("coalition name must be non-empty");
        if (partners.empty()) throw ConfigError("coalition '" + name + "' must list at least one partner");
    }
};

// Directed: how much `truster` trusts `trustee`.
struct TrustRelationship {
    std::string truster;
    std::string trustee;
    double value = 0.0;

    bool operator==(const TrustRelationship&) const = default;

    void validate() const {
        if (truster.empty() || trustee.empty())
            throw ConfigError("trust relationship requires both partner names");
        if (truster == trustee)
            throw ConfigError("trust relationship '" + truster + "' -> itself is not allowed");
        if (!(value >= 0.0 && value <= 1.0))
            throw ConfigError("trust " + truster + " -> " + trustee + " must lie in [0,1]");
    }
};

// One concrete execution context: mission x coalition x environment x
// condition instance, plus a start time off the configured list.
struct MissionInstance {
    std::string id;  // "mi_<k>", 1-based
    std::string mission;
    std::string coalition;
    std::string environment;
    std::string eci;
    std::string start_time;  // "YYYY-MM-DD HH:MM"

    bool operator==(const MissionInstance&) const = default;

    void validate() const {
        if (id.empty() || mission.empty() || coalition.empty() || environment.empty() || eci.empty())
            throw IntegrityError("mission instance fields must be non-empty");
        detail::parse_wallclock(start_time);
    }
};

enum class AssetKind { physical, autonomous, virtual_ };

inline std::string to_string(AssetKind k) {
    switch (k) {
        case AssetKind::physical: return "physical";
        case AssetKind::autonomous: return "autonomous";
        case AssetKind::virtual_: return "virtual";
    }
    throw IntegrityError("unknown asset kind");
}

inline AssetKind asset_kind_from_string(const std::string& s) {
    if (s == "physical") return AssetKind::physical;
    if (s == "autonomous") return AssetKind::autonomous;
    if (s == "virtual") return AssetKind::virtual_;
    throw ConfigError("unknown asset kind '" + s + "'");
}

struct GeoLocation {
    double lat = 0.0;
    double lon = 0.0;
    bool operator==(const GeoLocation&) const = default;
};

struct GeoBounds {
    double min_lat = 0.0;
    double max_lat = 0.0;
    double min_lon = 0.0;
    double max_lon = 0.0;

    bool operator==(const GeoBounds&) const = default;

    void validate() const {
        if (!(min_lat < max_lat)) throw ConfigError("bounding box: min_lat must be below max_lat");
        if (!(min_lon < max_lon)) throw ConfigError("bounding box: min_lon must be below max_lon");
    }

    bool contains(const GeoLocation& p) const {
        return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
    }
};

struct Asset {
    std::string id;  // "asset_<k>", 1-based
    std::string display_name;
    AssetKind kind = AssetKind::physical;
    std::string owner;
    double worth = 0.0;                 // configured currency units
    std::optional<AlfusScore> alfus;    // present iff kind == autonomous
    GeoLocation location;
    double risk_of_adversarial_compromise = 0.0;  // percent
    bool available_to_use = true;

    bool operator==(const Asset&) const = default;

    void validate() const {
        if (id.empty() || owner.empty()) throw IntegrityError("asset id and owner must be non-empty");
        if ((kind == AssetKind::autonomous) != alfus.has_value())
            throw IntegrityError(id + ": autonomy score present iff the asset is autonomous");
        if (!(worth >= 0.0)) throw IntegrityError(id + ": worth must be >= 0");
        if (!(risk_of_adversarial_compromise >= 0.0 && risk_of_adversarial_compromise <= 100.0))
            throw IntegrityError(id + ": risk must lie in [0,100]");
    }
};

struct LiveAssetInventory {
    std::string partner;
    std::string mission_instance;
    std::vector<std::string> asset_ids;  // distinct, draw order

    bool operator==(const LiveAssetInventory&) const = default;

    void validate() const {
        if (partner.empty() || mission_instance.empty())
            throw IntegrityError("inventory partner and mission instance must be non-empty");
        std::unordered_set<std::string> seen(asset_ids.begin(), asset_ids.end());
        if (seen.size() != asset_ids.size())
            throw IntegrityError("inventory for " + partner + " on " + mission_instance +
                                 " contains duplicate assets");
    }
};

enum class Decision { unannotated, approve, reject };

inline std::string to_string(Decision d) {
    switch (d) {
        case Decision::unannotated: return "unannotated";
        case Decision::approve: return "approve";
        case Decision::reject: return "reject";
    }
    throw IntegrityError("unknown decision");
}

struct AssetRequest {
    std::string id;  // "req_<k>", 1-based
    std::string requester;
    std::string owner;
    std::string asset_id;
    std::string mission_instance;
    std::string time;  // "YYYY-MM-DD HH:MM"
    Decision decision = Decision::unannotated;

    bool operator==(const AssetRequest&) const = default;

    void validate() const {
        if (id.empty() || requester.empty() || owner.empty() || asset_id.empty() ||
            mission_instance.empty())
            throw IntegrityError("request fields must be non-empty");
        if (requester == owner)
            throw IntegrityError(id + ": requester and owner must differ");
        detail::parse_wallclock(time);
    }
};

// Collection sizes, carried alongside the world and written to the run manifest.
struct CountsManifest {
    std::size_t conditions = 0;
    std::size_t condition_instances = 0;
    std::size_t alfus_scores = 0;
    std::size_t missions = 0;
    std::size_t environments = 0;
    std::size_t coalitions = 0;
    std::size_t partners = 0;
    std::size_t trust_relationships = 0;
    std::size_t mission_instances = 0;
    std::size_t assets = 0;
    std::size_t inventories = 0;
    std::size_t requests = 0;

    bool operator==(const CountsManifest&) const = default;

    std::vector<std::pair<std::string, std::size_t>> as_pairs() const {
        return {{"conditions", conditions},
                {"condition_instances", condition_instances},
                {"alfus_scores", alfus_scores},
                {"missions", missions},
                {"environments", environments},
                {"coalitions", coalitions},
                {"partners", partners},
                {"trust_relationships", trust_relationships},
                {"mission_instances", mission_instances},
                {"assets", assets},
                {"inventories", inventories},
                {"requests", requests}};
    }
};

// Everything a run configures and generates, with a count manifest.
struct World {
    // configured
    std::vector<EnvironmentalConditionSpec> conditions;
    int granularity = 0;
    std::vector<std::string> start_times;
    std::vector<Mission> missions;
    std::vector<MissionEnvironment> environments;
    std::vector<Coalition> coalitions;
    std::vector<CoalitionPartner> partners;  // first-appearance order across coalitions
    std::vector<TrustRelationship> trust;
    GeoBounds asset_bounds{0.0, 1.0, 0.0, 1.0};

    // generated
    std::vector<EnvironmentalConditionInstance> condition_instances;
    std::vector<AlfusScore> alfus_scores;
    std::vector<MissionInstance> mission_instances;
    std::vector<Asset> assets;
    std::vector<LiveAssetInventory> inventories;
    std::vector<AssetRequest> requests;

    CountsManifest manifest;

    CountsManifest actual_counts() const {
        CountsManifest c;
        c.conditions = conditions.size();
        c.condition_instances = condition_instances.size();
        c.alfus_scores = alfus_scores.size();
        c.missions = missions.size();
        c.environments = environments.size();
        c.coalitions = coalitions.size();
        c.partners = partners.size();
        c.trust_relationships = trust.size();
        c.mission_instances = mission_instances.size();
        c.assets = assets.size();
        c.inventories = inventories.size();
        c.requests = requests.size();
        return c;
    }
};

namespace detail {

template <typename T>
std::unordered_map<std::string, const T*> index_by(const std::vector<T>& items,
                                                   std::string T::*field, const char* what) {
    std::unordered_map<std::string, const T*> idx;
    idx.reserve(items.size());
    for (const auto& item : items) {
        if (!idx.emplace(item.*field, &item).second)
            throw IntegrityError(std::string(what) + " '" + item.*field + "' is duplicated");
    }
    return idx;
}

}  // namespace detail

// Total referential-integrity pass. Throws IntegrityError (or ConfigError from
// per-record validation) on the first violation found.
inline void verify_world(const World& w) {
    for (const auto& c : w.conditions) c.validate();
    for (const auto& m : w.missions) m.validate();
    for (const auto& e : w.environments) e.validate();
    for (const auto& c : w.coalitions) c.validate();
    for (const auto& p : w.partners) p.validate();
    for (const auto& t : w.trust) t.validate();
    for (const auto& s : w.start_times) detail::parse_wallclock(s);
    w.asset_bounds.validate();

    auto conditions_by_name =
        detail::index_by(w.conditions, &EnvironmentalConditionSpec::name, "condition");
    auto missions_by_name = detail::index_by(w.missions, &Mission::name, "mission");
    auto environments_by_name =
        detail::index_by(w.environments, &MissionEnvironment::name, "environment");
    auto coalitions_by_name = detail::index_by(w.coalitions, &Coalition::name, "coalition");
    auto partners_by_name = detail::index_by(w.partners, &CoalitionPartner::name, "partner");

    for (const auto& c : w.coalitions)
        for (const auto& p : c.partners)
            if (!partners_by_name.count(p))
                throw IntegrityError("coalition '" + c.name + "' references unknown partner '" + p + "'");

    std::unordered_set<std::string> trust_pairs;
    for (const auto& t : w.trust) {
        if (!partners_by_name.count(t.truster) || !partners_by_name.count(t.trustee))
            throw IntegrityError("trust " + t.truster + " -> " + t.trustee +
                                 " references an unknown partner");
        if (!trust_pairs.insert(t.truster + "\x1f" + t.trustee).second)
            throw IntegrityError("trust " + t.truster + " -> " + t.trustee + " is configured twice");
    }

    std::unordered_map<std::string, const EnvironmentalConditionInstance*> ecis_by_id;
    ecis_by_id.reserve(w.condition_instances.size());
    for (const auto& eci : w.condition_instances) {
        eci.validate();
        if (!ecis_by_id.emplace(eci.id, &eci).second)
            throw IntegrityError("condition instance '" + eci.id + "' is duplicated");
        if (eci.values.size() != w.conditions.size())
            throw IntegrityError(eci.id + ": expected one value per configured condition");
        for (const auto& [name, value] : eci.values) {
            auto it = conditions_by_name.find(name);
            if (it == conditions_by_name.end())
                throw IntegrityError(eci.id + ": value for unknown condition '" + name + "'");
            if (value < it->second->lower || value > it->second->upper)
                throw IntegrityError(eci.id + ": '" + name + "' value outside its bounds");
        }
    }

    std::unordered_map<std::string, const MissionInstance*> instances_by_id;
    instances_by_id.reserve(w.mission_instances.size());
    std::unordered_set<std::string> start_time_set(w.start_times.begin(), w.start_times.end());
    for (const auto& mi : w.mission_instances) {
        mi.validate();
        if (!instances_by_id.emplace(mi.id, &mi).second)
            throw IntegrityError("mission instance '" + mi.id + "' is duplicated");
        if (!missions_by_name.count(mi.mission))
            throw IntegrityError(mi.id + ": unknown mission '" + mi.mission + "'");
        if (!coalitions_by_name.count(mi.coalition))
            throw IntegrityError(mi.id + ": unknown coalition '" + mi.coalition + "'");
        if (!environments_by_name.count(mi.environment))
            throw IntegrityError(mi.id + ": unknown environment '" + mi.environment + "'");
        if (!ecis_by_id.count(mi.eci))
            throw IntegrityError(mi.id + ": unknown condition instance '" + mi.eci + "'");
        if (!start_time_set.empty() && !start_time_set.count(mi.start_time))
            throw IntegrityError(mi.id + ": start time not drawn from the configured list");
    }

    std::unordered_map<std::string, const Asset*> assets_by_id;
    assets_by_id.reserve(w.assets.size());
    for (const auto& a : w.assets) {
        a.validate();
        if (!assets_by_id.emplace(a.id, &a).second)
            throw IntegrityError("asset '" + a.id + "' is duplicated");
        if (!partners_by_name.count(a.owner))
            throw IntegrityError(a.id + ": unknown owner '" + a.owner + "'");
        if (!w.asset_bounds.contains(a.location))
            throw IntegrityError(a.id + ": location outside the configured bounding box");
    }

    std::unordered_map<std::string, const LiveAssetInventory*> inventories_by_key;
    inventories_by_key.reserve(w.inventories.size());
    for (const auto& inv : w.inventories) {
        inv.validate();
        if (!partners_by_name.count(inv.partner))
            throw IntegrityError("inventory references unknown partner '" + inv.partner + "'");
        if (!instances_by_id.count(inv.mission_instance))
            throw IntegrityError("inventory references unknown mission instance '" +
                                 inv.mission_instance + "'");
        if (!inventories_by_key.emplace(inv.partner + "\x1f" + inv.mission_instance, &inv).second)
            throw IntegrityError("duplicate inventory for " + inv.partner + " on " +
                                 inv.mission_instance);
        for (const auto& id : inv.asset_ids) {
            auto it = assets_by_id.find(id);
            if (it == assets_by_id.end())
                throw IntegrityError("inventory for " + inv.partner + " references unknown asset '" +
                                     id + "'");
            if (it->second->owner != inv.partner)
                throw IntegrityError("inventory for " + inv.partner + " contains asset '" + id +
                                     "' owned by '" + it->second->owner + "'");
        }
    }
    if (!w.inventories.empty() &&
        w.inventories.size() != w.partners.size() * w.mission_instances.size())
        throw IntegrityError("expected one inventory per (partner, mission instance) pair");

    std::unordered_set<std::string> request_ids;
    for (const auto& r : w.requests) {
        r.validate();
        if (!request_ids.insert(r.id).second)
            throw IntegrityError("request '" + r.id + "' is duplicated");
        if (!partners_by_name.count(r.requester) || !partners_by_name.count(r.owner))
            throw IntegrityError(r.id + ": requester or owner is unknown");
        if (!instances_by_id.count(r.mission_instance))
            throw IntegrityError(r.id + ": unknown mission instance '" + r.mission_instance + "'");
        auto inv = inventories_by_key.find(r.owner + "\x1f" + r.mission_instance);
        if (inv == inventories_by_key.end())
            throw IntegrityError(r.id + ": owner has no inventory on " + r.mission_instance);
        const auto& ids = inv->second->asset_ids;
        if (std::find(ids.begin(), ids.end(), r.asset_id) == ids.end())
            throw IntegrityError(r.id + ": asset '" + r.asset_id +
                                 "' is not in the owner's inventory for that mission instance");
    }

    if (!(w.manifest == w.actual_counts()))
        throw IntegrityError("manifest counts do not match collection sizes");
}

}  // namespace coalgen
