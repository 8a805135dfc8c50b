#pragma once

// Randomized stage of the pipeline: assets with seeded starting
// configurations, per-partner live inventories for every mission instance,
// and unannotated asset requests. Draw order is part of the determinism
// contract and is documented on each operation.

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coalgen/defaults.hpp"
#include "coalgen/detail/text.hpp"
#include "coalgen/detail/wallclock.hpp"
#include "coalgen/domain.hpp"
#include "coalgen/errors.hpp"
#include "coalgen/policy.hpp"
#include "coalgen/rng.hpp"

namespace coalgen {

struct AssetKindCounts {
    int physical = 0;
    int autonomous = 0;
    int virtual_ = 0;

    int total() const { return physical + autonomous + virtual_; }
};

struct AssetGenerationConfig {
    AssetKindCounts counts;
    GeoBounds bounding_box{0.0, 1.0, 0.0, 1.0};
    double availability_probability = 0.8;
    int assets_per_inventory = 0;
    int requests = 0;
    double base_worth = 10.0;
    int request_window_minutes = 720;
    std::uint64_t seed = 42;

    void validate() const {
        if (counts.physical < 0 || counts.autonomous < 0 || counts.virtual_ < 0)
            throw ConfigError("asset counts must be non-negative");
        bounding_box.validate();
        if (availability_probability < 0.0 || availability_probability > 1.0)
            throw ConfigError("availability_probability must lie in [0, 1]");
        if (assets_per_inventory < 0)
            throw ConfigError("assets_per_inventory must be non-negative");
        if (requests < 0) throw ConfigError("requests must be non-negative");
        if (!(base_worth > 0.0)) throw ConfigError("base_worth must be positive");
        if (request_window_minutes < 0)
            throw ConfigError("request_window_minutes must be non-negative");
    }
};

// Physical and virtual assets are worth the base amount. Autonomous worth
// grows linearly with the overall ALFUS level up to double the base, and the
// independent level 10 sits strictly above at 2.1 times the base.
inline double compute_asset_worth(const Asset& asset, const AssetGenerationConfig& config) {
    if (asset.kind != AssetKind::autonomous) return config.base_worth;
    if (!asset.alfus.has_value())
        throw IntegrityError("autonomous asset '" + asset.id + "' lacks an ALFUS score");
    if (asset.alfus->is_level_10()) return config.base_worth * 2.1;
    return config.base_worth * (1.0 + asset.alfus->graded_scores().overall / 9.0);
}

// Emits physical, then autonomous, then virtual assets with dense ids
// asset_1..asset_N across the three blocks. Owners rotate round-robin over
// the partner declaration order. Per asset the draws are: latitude,
// longitude, risk, availability, and for autonomous assets one ALFUS index.
inline std::vector<Asset> generate_assets(const AssetGenerationConfig& config,
                                          const std::vector<CoalitionPartner>& partners,
                                          const std::vector<AlfusScore>& alfus, Rng& rng) {
    config.validate();
    if (partners.empty()) throw ConfigError("no coalition partners configured");
    if (alfus.empty()) throw ConfigError("ALFUS enumeration is empty");

    std::vector<Asset> assets;
    assets.reserve(static_cast<std::size_t>(config.counts.total()));

    const AssetKind kinds[] = {AssetKind::physical, AssetKind::autonomous, AssetKind::virtual_};
    const int per_kind[] = {config.counts.physical, config.counts.autonomous,
                            config.counts.virtual_};

    std::size_t next_id = 1;
    for (int block = 0; block < 3; ++block) {
        const auto stems = defaults::display_names(kinds[block]);
        for (int i = 0; i < per_kind[block]; ++i, ++next_id) {
            Asset a;
            a.id = "asset_" + std::to_string(next_id);
            a.kind = kinds[block];
            a.display_name = stems[static_cast<std::size_t>(i) % stems.size()] + " " +
                             std::to_string(static_cast<std::size_t>(i) / stems.size() + 1);
            a.owner = partners[(next_id - 1) % partners.size()].name;
            a.location.lat =
                rng.uniform_real(config.bounding_box.min_lat, config.bounding_box.max_lat);
            a.location.lon =
                rng.uniform_real(config.bounding_box.min_lon, config.bounding_box.max_lon);
            a.risk_of_adversarial_compromise = rng.uniform_real(0.0, 100.0);
            a.available_to_use = rng.bernoulli(config.availability_probability);
            if (kinds[block] == AssetKind::autonomous)
                a.alfus = alfus[rng.uniform_index(alfus.size())];
            a.worth = compute_asset_worth(a, config);
            a.validate();
            assets.push_back(std::move(a));
        }
    }
    return assets;
}

// One inventory per (partner, mission instance), partners outer and
// instances inner, each holding assets_per_inventory distinct assets drawn
// without replacement from the partner's own assets.
inline std::vector<LiveAssetInventory> build_inventories(
    const std::vector<CoalitionPartner>& partners,
    const std::vector<MissionInstance>& mission_instances, const std::vector<Asset>& assets,
    const AssetGenerationConfig& config, Rng& rng) {
    config.validate();

    std::unordered_map<std::string, std::vector<std::string>> owned;
    for (const auto& a : assets) owned[a.owner].push_back(a.id);

    const auto k = static_cast<std::size_t>(config.assets_per_inventory);
    std::vector<LiveAssetInventory> inventories;
    inventories.reserve(partners.size() * mission_instances.size());

    for (const auto& partner : partners) {
        const auto& pool = owned[partner.name];
        if (pool.size() < k)
            throw ConfigError("partner '" + partner.name + "' owns " +
                              std::to_string(pool.size()) + " assets but " + std::to_string(k) +
                              " are required per inventory");
        for (const auto& mi : mission_instances) {
            LiveAssetInventory inv;
            inv.partner = partner.name;
            inv.mission_instance = mi.id;
            for (std::size_t idx : rng.sample_indices(pool.size(), k))
                inv.asset_ids.push_back(pool[idx]);
            inv.validate();
            inventories.push_back(std::move(inv));
        }
    }
    return inventories;
}

// Per request the draws are: mission instance, owner (resampled up to 100
// times until its inventory on that instance is non-empty), requester from
// the remaining partners, asset from the owner's inventory, and an integer
// minute offset in [0, request_window_minutes] added to the instance start.
inline std::vector<AssetRequest> generate_requests(
    const std::vector<CoalitionPartner>& partners,
    const std::vector<MissionInstance>& mission_instances,
    const std::vector<LiveAssetInventory>& inventories,
    const std::vector<TrustRelationship>& trust, const AssetGenerationConfig& config, Rng& rng) {
    config.validate();
    if (config.requests == 0) return {};
    if (partners.size() < 2)
        throw ConfigError("request generation needs at least two coalition partners");
    if (mission_instances.empty()) throw ConfigError("no mission instances to request against");

    bool any_assets = false;
    std::map<std::pair<std::string, std::string>, const LiveAssetInventory*> by_owner_instance;
    for (const auto& inv : inventories) {
        by_owner_instance[{inv.partner, inv.mission_instance}] = &inv;
        any_assets = any_assets || !inv.asset_ids.empty();
    }
    if (!any_assets) throw GenerationError("every live asset inventory is empty");

    std::unordered_set<std::string> trust_pairs;
    for (const auto& t : trust) trust_pairs.insert(t.truster + "\t" + t.trustee);

    std::vector<AssetRequest> requests;
    requests.reserve(static_cast<std::size_t>(config.requests));

    for (int i = 1; i <= config.requests; ++i) {
        const auto& mi = mission_instances[rng.uniform_index(mission_instances.size())];

        const LiveAssetInventory* inventory = nullptr;
        for (int attempt = 0; attempt < 100 && inventory == nullptr; ++attempt) {
            const auto& candidate = partners[rng.uniform_index(partners.size())];
            auto it = by_owner_instance.find({candidate.name, mi.id});
            if (it != by_owner_instance.end() && !it->second->asset_ids.empty())
                inventory = it->second;
        }
        if (inventory == nullptr)
            throw GenerationError("no partner with a non-empty inventory on '" + mi.id +
                                  "' after 100 attempts");

        std::vector<const CoalitionPartner*> others;
        for (const auto& p : partners)
            if (p.name != inventory->partner) others.push_back(&p);
        const auto& requester = *others[rng.uniform_index(others.size())];

        if (!trust_pairs.count(inventory->partner + "\t" + requester.name))
            throw ConfigError("no trust relationship from '" + inventory->partner + "' to '" +
                              requester.name + "'");

        AssetRequest req;
        req.id = "req_" + std::to_string(i);
        req.requester = requester.name;
        req.owner = inventory->partner;
        req.asset_id = inventory->asset_ids[rng.uniform_index(inventory->asset_ids.size())];
        req.mission_instance = mi.id;
        req.time = detail::add_minutes(
            mi.start_time,
            static_cast<int>(rng.uniform_index(
                static_cast<std::size_t>(config.request_window_minutes) + 1)));
        req.validate();
        requests.push_back(std::move(req));
    }
    return requests;
}

namespace detail {

// Lookup tables over a world, built once and shared across many
// assemble_context calls.
struct WorldIndex {
    std::unordered_map<std::string, const MissionInstance*> instances;
    std::unordered_map<std::string, const EnvironmentalConditionInstance*> ecis;
    std::unordered_map<std::string, const Asset*> assets;
    std::map<std::pair<std::string, std::string>, double> trust;

    explicit WorldIndex(const World& world) {
        for (const auto& m : world.mission_instances) instances[m.id] = &m;
        for (const auto& e : world.condition_instances) ecis[e.id] = &e;
        for (const auto& a : world.assets) assets[a.id] = &a;
        for (const auto& t : world.trust) trust[{t.truster, t.trustee}] = t.value;
    }
};

}  // namespace detail

// Nested attribute view of one request, shaped for the rule engine. The
// availability flag becomes the strings "yes"/"no", and condition names drop
// a trailing " level" ("wind speed level" is looked up as "wind speed").
inline EvaluationContext assemble_context(const AssetRequest& request,
                                          const detail::WorldIndex& index) {
    auto missing = [&](const char* what, const std::string& id) {
        throw IntegrityError(std::string("request '") + request.id + "' references unknown " +
                             what + " '" + id + "'");
    };

    auto mi_it = index.instances.find(request.mission_instance);
    if (mi_it == index.instances.end()) missing("mission instance", request.mission_instance);
    const MissionInstance& mi = *mi_it->second;

    auto eci_it = index.ecis.find(mi.eci);
    if (eci_it == index.ecis.end()) missing("environmental condition instance", mi.eci);
    const EnvironmentalConditionInstance& eci = *eci_it->second;

    auto asset_it = index.assets.find(request.asset_id);
    if (asset_it == index.assets.end()) missing("asset", request.asset_id);
    const Asset& asset = *asset_it->second;

    auto trust_it = index.trust.find({request.owner, request.requester});
    if (trust_it == index.trust.end())
        throw IntegrityError("request '" + request.id + "' has no trust relationship from '" +
                             request.owner + "' to '" + request.requester + "'");

    EvaluationContext context;
    context["trust"] = trust_it->second;
    context["severity"] = eci.severity;
    context["asset"] = {{"available to use", asset.available_to_use ? "yes" : "no"},
                        {"risk of adversarial compromise", asset.risk_of_adversarial_compromise},
                        {"kind", to_string(asset.kind)},
                        {"worth", asset.worth}};
    context["mission environment"] = mi.environment;

    EvaluationContext conditions = EvaluationContext::object();
    for (const auto& [name, value] : eci.values)
        conditions[detail::short_condition_name(name)] = value;
    context["environmental condition instance"] = std::move(conditions);
    return context;
}

inline EvaluationContext assemble_context(const AssetRequest& request, const World& world) {
    return assemble_context(request, detail::WorldIndex(world));
}

}  // namespace coalgen
