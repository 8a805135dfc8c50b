#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coalgen/asset_engine.hpp"
#include "coalgen/detail/wallclock.hpp"
#include "coalgen/fact_engine.hpp"

using namespace coalgen;

namespace {

std::vector<CoalitionPartner> three_partners() { return {{"US"}, {"UK"}, {"Kish"}}; }

std::vector<MissionInstance> some_instances(std::size_t n) {
    std::vector<MissionInstance> out;
    for (std::size_t i = 1; i <= n; ++i)
        out.push_back({"mi_" + std::to_string(i), "patrol", "alpha", "urban", "eci_1",
                       "2019-02-21 13:20"});
    return out;
}

AssetGenerationConfig base_config() {
    AssetGenerationConfig config;
    config.counts = {4, 2, 2};
    config.bounding_box = {50.0, 51.0, -4.0, -3.0};
    config.availability_probability = 0.8;
    config.assets_per_inventory = 1;
    config.requests = 0;
    config.base_worth = 10.0;
    config.request_window_minutes = 60;
    return config;
}

Asset autonomous_asset(const AlfusScore& score) {
    Asset a;
    a.id = "asset_1";
    a.display_name = "unmanned aerial vehicle 1";
    a.kind = AssetKind::autonomous;
    a.owner = "US";
    a.alfus = score;
    return a;
}

}  // namespace

TEST_CASE("asset worth follows the autonomy ladder") {
    AssetGenerationConfig config = base_config();

    SECTION("physical and virtual assets are worth the base amount") {
        Asset a;
        a.id = "asset_1";
        a.kind = AssetKind::physical;
        a.owner = "US";
        CHECK(compute_asset_worth(a, config) == 10.0);
        a.kind = AssetKind::virtual_;
        CHECK(compute_asset_worth(a, config) == 10.0);
    }

    SECTION("graded endpoints") {
        CHECK(compute_asset_worth(autonomous_asset(AlfusScore::graded(0, 0, 0)), config) == 10.0);
        CHECK(compute_asset_worth(autonomous_asset(AlfusScore::graded(3, 3, 3)), config) == 20.0);
    }

    SECTION("level 10 is worth 2.1x the base and beats every graded score") {
        double level_10 = compute_asset_worth(autonomous_asset(AlfusScore::level_10()), config);
        CHECK(level_10 == 21.0);
        for (const auto& score : enumerate_alfus_scores()) {
            if (score.is_level_10()) continue;
            CHECK(compute_asset_worth(autonomous_asset(score), config) < level_10);
        }
    }

    SECTION("autonomous asset without a score is rejected") {
        Asset a;
        a.id = "asset_1";
        a.kind = AssetKind::autonomous;
        a.owner = "US";
        CHECK_THROWS_AS(compute_asset_worth(a, config), IntegrityError);
    }
}

TEST_CASE("generate_assets emits the configured counts with valid fields") {
    auto config = base_config();
    auto alfus = enumerate_alfus_scores();
    Rng rng(7);
    auto assets = generate_assets(config, three_partners(), alfus, rng);

    REQUIRE(assets.size() == 8);

    SECTION("ids are dense and kinds come in declaration blocks") {
        for (std::size_t i = 0; i < assets.size(); ++i)
            CHECK(assets[i].id == "asset_" + std::to_string(i + 1));
        for (std::size_t i = 0; i < 4; ++i) CHECK(assets[i].kind == AssetKind::physical);
        for (std::size_t i = 4; i < 6; ++i) CHECK(assets[i].kind == AssetKind::autonomous);
        for (std::size_t i = 6; i < 8; ++i) CHECK(assets[i].kind == AssetKind::virtual_);
    }

    SECTION("exactly the autonomous assets carry a score") {
        for (const auto& a : assets)
            CHECK(a.alfus.has_value() == (a.kind == AssetKind::autonomous));
    }

    SECTION("owners rotate round-robin over the declaration order") {
        const std::vector<std::string> expected = {"US", "UK", "Kish", "US",
                                                   "UK", "Kish", "US", "UK"};
        for (std::size_t i = 0; i < assets.size(); ++i) CHECK(assets[i].owner == expected[i]);
    }

    SECTION("locations stay inside the bounding box and risk inside [0,100]") {
        for (const auto& a : assets) {
            CHECK(config.bounding_box.contains(a.location));
            CHECK(a.risk_of_adversarial_compromise >= 0.0);
            CHECK(a.risk_of_adversarial_compromise <= 100.0);
        }
    }

    SECTION("display names are kind-specific and unique") {
        std::set<std::string> names;
        for (const auto& a : assets) names.insert(a.display_name);
        CHECK(names.size() == assets.size());
        CHECK(assets[0].display_name == "surveillance camera 1");
        CHECK(assets[4].display_name == "unmanned aerial vehicle 1");
    }
}

TEST_CASE("generate_assets rejects bad setups") {
    auto config = base_config();
    auto alfus = enumerate_alfus_scores();
    Rng rng(7);

    CHECK_THROWS_AS(generate_assets(config, {}, alfus, rng), ConfigError);
    CHECK_THROWS_AS(generate_assets(config, three_partners(), {}, rng), ConfigError);

    auto bad = config;
    bad.availability_probability = 1.5;
    CHECK_THROWS_AS(generate_assets(bad, three_partners(), alfus, rng), ConfigError);

    bad = config;
    bad.base_worth = 0.0;
    CHECK_THROWS_AS(generate_assets(bad, three_partners(), alfus, rng), ConfigError);
}

TEST_CASE("generate_assets is deterministic under a fixed seed") {
    auto config = base_config();
    config.counts = {30, 30, 30};
    auto alfus = enumerate_alfus_scores();

    Rng first(99);
    Rng second(99);
    Rng third(100);
    auto a = generate_assets(config, three_partners(), alfus, first);
    auto b = generate_assets(config, three_partners(), alfus, second);
    auto c = generate_assets(config, three_partners(), alfus, third);

    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("availability frequency concentrates around the configured probability") {
    auto config = base_config();
    config.counts = {10000, 0, 0};
    auto alfus = enumerate_alfus_scores();
    Rng rng(2024);
    auto assets = generate_assets(config, three_partners(), alfus, rng);

    auto available = std::count_if(assets.begin(), assets.end(),
                                   [](const Asset& a) { return a.available_to_use; });
    double fraction = static_cast<double>(available) / 10000.0;

    // three-sigma band for Binomial(10000, 0.8)
    CHECK(fraction >= 0.788);
    CHECK(fraction <= 0.812);
}

TEST_CASE("build_inventories produces one inventory per partner and instance") {
    auto config = base_config();
    config.counts = {9, 0, 0};
    config.assets_per_inventory = 2;
    auto partners = three_partners();
    auto instances = some_instances(4);
    auto alfus = enumerate_alfus_scores();

    Rng asset_rng(5);
    auto assets = generate_assets(config, partners, alfus, asset_rng);

    Rng rng(6);
    auto inventories = build_inventories(partners, instances, assets, config, rng);

    REQUIRE(inventories.size() == 12);

    SECTION("ordering is partner-major, instance-minor") {
        CHECK(inventories[0].partner == "US");
        CHECK(inventories[0].mission_instance == "mi_1");
        CHECK(inventories[3].mission_instance == "mi_4");
        CHECK(inventories[4].partner == "UK");
        CHECK(inventories[11].partner == "Kish");
    }

    SECTION("every inventory holds the configured number of the partner's own assets") {
        std::map<std::string, std::string> owner_of;
        for (const auto& a : assets) owner_of[a.id] = a.owner;
        for (const auto& inv : inventories) {
            CHECK(inv.asset_ids.size() == 2);
            std::set<std::string> distinct(inv.asset_ids.begin(), inv.asset_ids.end());
            CHECK(distinct.size() == inv.asset_ids.size());
            for (const auto& id : inv.asset_ids) CHECK(owner_of.at(id) == inv.partner);
        }
    }

    SECTION("zero assets per inventory yields empty inventories") {
        auto empty_config = config;
        empty_config.assets_per_inventory = 0;
        Rng rng2(6);
        auto empty = build_inventories(partners, instances, assets, empty_config, rng2);
        REQUIRE(empty.size() == 12);
        for (const auto& inv : empty) CHECK(inv.asset_ids.empty());
    }

    SECTION("fixed seed reproduces inventory membership") {
        Rng rng2(6);
        auto again = build_inventories(partners, instances, assets, config, rng2);
        CHECK(again == inventories);
    }
}

TEST_CASE("build_inventories names a partner that owns too few assets") {
    auto config = base_config();
    config.counts = {3, 0, 0};  // one asset per partner
    config.assets_per_inventory = 2;
    auto partners = three_partners();
    auto alfus = enumerate_alfus_scores();

    Rng asset_rng(5);
    auto assets = generate_assets(config, partners, alfus, asset_rng);

    Rng rng(6);
    try {
        build_inventories(partners, some_instances(2), assets, config, rng);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'US'") != std::string::npos);
    }
}

namespace {

struct RequestFixture {
    std::vector<CoalitionPartner> partners{{"US"}, {"UK"}};
    std::vector<MissionInstance> instances = some_instances(3);
    std::vector<TrustRelationship> trust{{"US", "UK", 0.8}, {"UK", "US", 0.75}};
    AssetGenerationConfig config;
    std::vector<Asset> assets;
    std::vector<LiveAssetInventory> inventories;

    explicit RequestFixture(int assets_per_inventory = 2) {
        config = base_config();
        config.counts = {8, 0, 0};
        config.assets_per_inventory = assets_per_inventory;
        config.requests = 100;
        auto alfus = enumerate_alfus_scores();
        Rng asset_rng(11);
        assets = generate_assets(config, partners, alfus, asset_rng);
        Rng inv_rng(12);
        inventories = build_inventories(partners, instances, assets, config, inv_rng);
    }
};

}  // namespace

TEST_CASE("generate_requests samples well-formed requests") {
    RequestFixture fx;
    Rng rng(13);
    auto requests =
        generate_requests(fx.partners, fx.instances, fx.inventories, fx.trust, fx.config, rng);

    REQUIRE(requests.size() == 100);

    std::map<std::string, std::string> owner_of;
    for (const auto& a : fx.assets) owner_of[a.id] = a.owner;
    std::map<std::string, std::string> start_of;
    for (const auto& mi : fx.instances) start_of[mi.id] = mi.start_time;

    for (const auto& req : requests) {
        CHECK(req.requester != req.owner);
        CHECK(owner_of.at(req.asset_id) == req.owner);
        REQUIRE(start_of.count(req.mission_instance) == 1);
        long start = detail::wallclock_minutes(start_of.at(req.mission_instance));
        long at = detail::wallclock_minutes(req.time);
        CHECK(at >= start);
        CHECK(at <= start + 60);
        CHECK(req.decision == Decision::unannotated);
    }

    SECTION("ids are dense") {
        CHECK(requests.front().id == "req_1");
        CHECK(requests.back().id == "req_100");
    }

    SECTION("asset membership matches the owner's inventory on that instance") {
        std::map<std::pair<std::string, std::string>, std::set<std::string>> members;
        for (const auto& inv : fx.inventories)
            members[{inv.partner, inv.mission_instance}] =
                std::set<std::string>(inv.asset_ids.begin(), inv.asset_ids.end());
        for (const auto& req : requests)
            CHECK(members.at({req.owner, req.mission_instance}).count(req.asset_id) == 1);
    }
}

TEST_CASE("generate_requests honors the window boundary exactly") {
    RequestFixture fx;
    fx.config.request_window_minutes = 0;
    Rng rng(14);
    auto requests =
        generate_requests(fx.partners, fx.instances, fx.inventories, fx.trust, fx.config, rng);
    std::map<std::string, std::string> start_of;
    for (const auto& mi : fx.instances) start_of[mi.id] = mi.start_time;
    for (const auto& req : requests) CHECK(req.time == start_of.at(req.mission_instance));
}

TEST_CASE("generate_requests determinism and edge cases") {
    RequestFixture fx;

    SECTION("zero requests yields an empty list") {
        auto config = fx.config;
        config.requests = 0;
        Rng rng(15);
        auto requests =
            generate_requests(fx.partners, fx.instances, fx.inventories, fx.trust, config, rng);
        CHECK(requests.empty());
    }

    SECTION("fixed seed reproduces the request list") {
        Rng first(16);
        Rng second(16);
        auto a = generate_requests(fx.partners, fx.instances, fx.inventories, fx.trust, fx.config,
                                   first);
        auto b = generate_requests(fx.partners, fx.instances, fx.inventories, fx.trust, fx.config,
                                   second);
        CHECK(a == b);
    }

    SECTION("a single partner cannot request from itself") {
        std::vector<CoalitionPartner> lone{{"US"}};
        Rng rng(17);
        CHECK_THROWS_AS(
            generate_requests(lone, fx.instances, fx.inventories, fx.trust, fx.config, rng),
            ConfigError);
    }

    SECTION("a missing trust pair is a configuration error") {
        std::vector<TrustRelationship> one_way{{"US", "UK", 0.8}};
        Rng rng(18);
        CHECK_THROWS_AS(
            generate_requests(fx.partners, fx.instances, fx.inventories, one_way, fx.config, rng),
            ConfigError);
    }

    SECTION("all-empty inventories cannot satisfy any request") {
        RequestFixture empty(0);
        Rng rng(19);
        CHECK_THROWS_AS(generate_requests(empty.partners, empty.instances, empty.inventories,
                                          empty.trust, empty.config, rng),
                        GenerationError);
    }
}

namespace {

World context_world() {
    World w;
    w.trust = {{"US", "UK", 0.5}, {"UK", "US", 0.75}};
    w.condition_instances.push_back(
        {"eci_1", {{"wind speed level", 30.0}, {"humidity level", 25.0}}, 0.4});
    w.mission_instances.push_back(
        {"mi_1", "patrol", "alpha", "urban", "eci_1", "2019-02-21 13:20"});
    Asset a;
    a.id = "asset_1";
    a.display_name = "surveillance camera 1";
    a.kind = AssetKind::physical;
    a.owner = "US";
    a.worth = 10.0;
    a.risk_of_adversarial_compromise = 20.5;
    a.available_to_use = true;
    w.assets.push_back(a);
    return w;
}

AssetRequest context_request() {
    return {"req_1", "UK", "US", "asset_1", "mi_1", "2019-02-21 13:25", Decision::unannotated};
}

}  // namespace

TEST_CASE("assemble_context exposes the rule-engine attribute view") {
    World w = context_world();
    auto ctx = assemble_context(context_request(), w);

    CHECK(ctx["trust"] == 0.5);  // owner US toward requester UK
    CHECK(ctx["severity"] == 0.4);
    CHECK(ctx["asset"]["available to use"] == "yes");
    CHECK(ctx["asset"]["risk of adversarial compromise"] == 20.5);
    CHECK(ctx["asset"]["kind"] == "physical");
    CHECK(ctx["asset"]["worth"] == 10.0);
    CHECK(ctx["mission environment"] == "urban");
    CHECK(ctx["environmental condition instance"]["wind speed"] == 30.0);
    CHECK(ctx["environmental condition instance"]["humidity"] == 25.0);

    SECTION("unavailable assets map to the string no") {
        w.assets[0].available_to_use = false;
        auto ctx2 = assemble_context(context_request(), w);
        CHECK(ctx2["asset"]["available to use"] == "no");
    }
}

TEST_CASE("assemble_context rejects dangling references") {
    World w = context_world();

    SECTION("unknown mission instance") {
        auto req = context_request();
        req.mission_instance = "mi_9";
        CHECK_THROWS_AS(assemble_context(req, w), IntegrityError);
    }

    SECTION("unknown asset") {
        auto req = context_request();
        req.asset_id = "asset_9";
        CHECK_THROWS_AS(assemble_context(req, w), IntegrityError);
    }

    SECTION("missing trust pair") {
        w.trust.clear();
        CHECK_THROWS_AS(assemble_context(context_request(), w), IntegrityError);
    }

    SECTION("dangling condition instance behind the mission instance") {
        w.condition_instances.clear();
        CHECK_THROWS_AS(assemble_context(context_request(), w), IntegrityError);
    }
}
