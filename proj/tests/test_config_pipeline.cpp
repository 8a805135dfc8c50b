#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coalgen/annotation.hpp"
#include "coalgen/config.hpp"
#include "coalgen/pipeline.hpp"

using namespace coalgen;

namespace {

std::filesystem::path scratch() {
    auto dir = std::filesystem::temp_directory_path() / "coalgen-pipeline-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write_config(const char* leaf, const std::string& text) {
    auto path = scratch() / leaf;
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

std::filesystem::path fresh_dir(const char* leaf) {
    auto dir = scratch() / leaf;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// One condition at granularity 2, one 1x1x1 mission axis, two partners.
std::string tiny_config_text(int requests = 10, const std::string& extra = "") {
    std::ostringstream out;
    out << R"({
  "conditions": [{"name": "humidity level", "lower": 0, "upper": 100, "units": "%"}],
  "granularity": 2,
  "start_times": ["2019-02-21 13:20"],
  "missions": [{"name": "patrol", "stages": ["plan"]}],
  "environments": [{"name": "urban", "attributes": {"population density": "high"}}],
  "coalitions": [{"name": "AB", "partners": ["A", "B"]}],
  "trust": [
    {"truster": "A", "trustee": "B", "value": 0.9},
    {"truster": "B", "trustee": "A", "value": 0.2}
  ],
  "assets": {"physical": 4, "autonomous": 2, "virtual": 2, "per_inventory": 2, "requests": )"
        << requests << "},\n  \"seed\": 7" << extra << "\n}\n";
    return out.str();
}

std::map<std::string, std::string> digests_by_name(const RunManifest& manifest) {
    std::map<std::string, std::string> out;
    for (const auto& file : manifest.files) out[file.name] = file.sha256;
    return out;
}

}  // namespace

TEST_CASE("an empty config object yields the full shipped defaults") {
    auto config = load_config(write_config("empty.json", "{}\n"));

    REQUIRE(config.plan.condition_specs.size() == 6);
    CHECK(config.plan.condition_specs[0].name == "visibility level");
    CHECK(config.plan.condition_specs[5].name == "humidity level");
    CHECK(config.plan.granularity == 5);
    CHECK(config.plan.start_times.size() == 4);
    CHECK(config.plan.missions.size() == 2);
    CHECK(config.plan.environments.size() == 4);
    REQUIRE(config.plan.coalitions.size() == 1);
    CHECK(config.plan.coalitions[0].name == "US/UK/KISH");
    CHECK(config.trust.size() == 6);

    auto partners = config.derived_partners();
    REQUIRE(partners.size() == 3);
    CHECK(partners[0].name == "US");
    CHECK(partners[1].name == "UK");
    CHECK(partners[2].name == "Kish");

    CHECK(config.assets.counts.physical == 40);
    CHECK(config.assets.counts.autonomous == 30);
    CHECK(config.assets.counts.virtual_ == 30);
    CHECK(config.assets.assets_per_inventory == 5);
    CHECK(config.assets.requests == 1000);
    CHECK(config.assets.request_window_minutes == 720);
    CHECK(config.assets.availability_probability == 0.8);
    CHECK(config.seed == 42);
    CHECK(config.assets.seed == 42);
    CHECK(config.rules_path.empty());
    CHECK(config.evaluation_mode == EvaluationMode::strict);
    CHECK(config.format == OutputFormat::both);
    CHECK(config.output_directory == "out");
}

TEST_CASE("unknown keys are rejected with a spelling suggestion") {
    auto check_message = [](const std::string& text, const std::string& needle) {
        try {
            load_config(write_config("bad.json", text));
            FAIL("expected a ConfigError");
        } catch (const ConfigError& e) {
            INFO(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    check_message(R"({"granluarity": 5})", "did you mean 'granularity'?");
    check_message(R"({"assets": {"requets": 10}})", "did you mean 'requests'?");
    check_message(R"({"conditions": [{"name": "x", "lower": 0, "upper": 1, "wight": 2}]})",
                  "did you mean 'weight'?");
    check_message(R"({"bananas": 1})", "unknown key 'bananas'");
}

TEST_CASE("schema violations name the offending field") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            load_config(write_config("schema.json", text));
            FAIL("expected a ConfigError");
        } catch (const ConfigError& e) {
            INFO(e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    expect_error(R"({"granularity": 1})", "granularity");
    expect_error(R"({"granularity": "five"})", "granularity must be an integer");
    expect_error(R"({"conditions": [{"name": "x", "upper": 1}]})",
                 "conditions[0] is missing 'lower'");
    expect_error(R"({"conditions": []})", "at least one condition");
    expect_error(R"({"assets": {"physical": -1}})", "non-negative");
    expect_error(R"({"start_times": ["today"]})", "invalid timestamp 'today'");
    expect_error(R"({"evaluation_mode": "fuzzy"})", "evaluation_mode");
    expect_error(R"({"format": "xml"})", "format");
    expect_error(R"({"rules": "no-such-rules.json"})", "rule document not found");
    expect_error(R"({"coalitions": [{"name": "AB", "partners": ["A", "B"]}]})",
                 "no trust relationship");
    expect_error(
        R"({"coalitions": [{"name": "AB", "partners": ["A", "B"]}],
            "trust": [{"truster": "A", "trustee": "C", "value": 1}]})",
        "unknown partner 'C'");

    CHECK_THROWS_AS(load_config(write_config("root.json", "[]")), ConfigError);
    CHECK_THROWS_AS(load_config(scratch() / "does-not-exist.json"), ConfigError);

    try {
        load_config(write_config("syntax.json", "{ not json"));
        FAIL("expected a ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location.find("byte") != std::string::npos);
    }
}

TEST_CASE("a custom coalition without trust is fine while no requests are asked for") {
    auto config = load_config(write_config(
        "no-trust.json",
        R"({"coalitions": [{"name": "AB", "partners": ["A", "B"]}],
            "assets": {"requests": 0, "per_inventory": 0}})"));
    CHECK(config.trust.empty());
}

TEST_CASE("the tiny pipeline example lands the expected counts quickly") {
    auto config = load_config(write_config("tiny.json", tiny_config_text()));
    config.output_directory = fresh_dir("tiny-out").string();

    auto started = std::chrono::steady_clock::now();
    auto manifest = run_generate(config);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    CHECK(elapsed < 1.0);

    CHECK(manifest.counts.condition_instances == 2);
    CHECK(manifest.counts.alfus_scores == 65);
    CHECK(manifest.counts.mission_instances == 2);
    CHECK(manifest.counts.requests == 10);
    CHECK(manifest.counts.assets == 8);
    CHECK(manifest.counts.inventories == 4);
    CHECK(manifest.seed == 7);
    CHECK(manifest.tool_version == tool_version);

    REQUIRE(manifest.files.size() == 11);
    CHECK(manifest.files.front().name == "model.ce");
    CHECK(manifest.files.back().name == "requests.csv");
    for (const auto& file : manifest.files)
        CHECK(std::filesystem::exists(config.output_directory / std::filesystem::path(file.name)));
    CHECK(std::filesystem::exists(config.output_directory / std::filesystem::path("manifest.json")));
}

TEST_CASE("format selects which exports are written") {
    auto config = load_config(write_config("fmt.json", tiny_config_text()));

    config.format = OutputFormat::ce;
    config.output_directory = fresh_dir("fmt-ce").string();
    auto ce_only = run_generate(config);
    CHECK(ce_only.files.size() == 10);
    CHECK(digests_by_name(ce_only).count("requests.csv") == 0);

    config.format = OutputFormat::csv;
    config.output_directory = fresh_dir("fmt-csv").string();
    auto csv_only = run_generate(config);
    REQUIRE(csv_only.files.size() == 1);
    CHECK(csv_only.files[0].name == "requests.csv");
    CHECK(csv_only.files[0].sentences == 10);
}

TEST_CASE("the same config and seed reproduce every digest; a new seed moves only the sampled files") {
    auto config = load_config(write_config("det.json", tiny_config_text()));

    config.output_directory = fresh_dir("det-a").string();
    auto first = run_generate(config);
    config.output_directory = fresh_dir("det-b").string();
    auto second = run_generate(config);

    CHECK(first.config_digest == second.config_digest);
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i) {
        CHECK(first.files[i].name == second.files[i].name);
        CHECK(first.files[i].sha256 == second.files[i].sha256);
    }

    config.seed = 8;
    config.assets.seed = 8;
    config.output_directory = fresh_dir("det-c").string();
    auto reseeded = run_generate(config);
    CHECK(reseeded.config_digest != first.config_digest);

    auto before = digests_by_name(first);
    auto after = digests_by_name(reseeded);
    for (const char* enumerated : {"model.ce", "missions.ce", "environments.ce",
                                   "coalitions.ce", "condition_instances.ce", "alfus.ce",
                                   "mission_instances.ce"})
        CHECK(before.at(enumerated) == after.at(enumerated));
    for (const char* sampled : {"assets.ce", "requests.ce", "requests.csv"})
        CHECK(before.at(sampled) != after.at(sampled));
}

TEST_CASE("the config digest is recomputable from the embedded effective config") {
    auto config = load_config(write_config("digest.json", tiny_config_text()));
    config.output_directory = fresh_dir("digest-out").string();
    auto manifest = run_generate(config);

    auto doc = nlohmann::ordered_json::parse(
        read_file(config.output_directory / std::filesystem::path("manifest.json")));
    CHECK(doc["config_digest"] == manifest.config_digest);
    CHECK(detail::Sha256::hex_of(doc["effective_config"].dump(2) + "\n") ==
          manifest.config_digest);
}

TEST_CASE("csv and ce exports agree on every decision") {
    auto config = load_config(write_config("join.json", tiny_config_text(40)));
    config.rules_path =
        (std::filesystem::path(COALGEN_SOURCE_DIR) / "configs" / "approval_rules.json").string();
    config.evaluation_mode = EvaluationMode::lenient;
    config.output_directory = fresh_dir("join-out").string();
    run_generate(config);

    std::map<std::string, std::string> ce_decisions;
    auto requests_ce = read_file(config.output_directory / std::filesystem::path("requests.ce"));
    for (const auto& sentence : detail::split_sentences(requests_ce)) {
        const std::string name_open = "named '";
        std::size_t open = sentence.find(name_open);
        REQUIRE(open != std::string::npos);
        std::size_t begin = open + name_open.size();
        std::size_t close = sentence.find('\'', begin);
        auto decision = detail::final_value_clause(sentence, "decision");
        REQUIRE(decision.has_value());
        ce_decisions[sentence.substr(begin, close - begin)] = *decision;
    }

    std::map<std::string, std::string> csv_decisions;
    std::istringstream csv(
        read_file(config.output_directory / std::filesystem::path("requests.csv")));
    std::string line;
    bool header = true;
    while (std::getline(csv, line)) {
        if (header) {
            header = false;
            continue;
        }
        auto fields = detail::parse_csv_record(line);
        REQUIRE(fields.size() >= 2);
        csv_decisions[fields.front()] = fields.back();
    }

    CHECK(ce_decisions.size() == 40);
    CHECK(ce_decisions == csv_decisions);

    // Both must also agree with a fresh evaluation of the same rules.
    World world = build_world(config);
    auto annotated = annotate_requests(world.requests, load_rules(config), world,
                                       config.evaluation_mode);
    for (const auto& request : annotated.requests)
        CHECK(ce_decisions.at(request.id) == to_string(request.decision));
}

TEST_CASE("run_stats audits the manifest and reports the summary") {
    auto config = load_config(write_config("stats.json", tiny_config_text(25)));
    config.output_directory = fresh_dir("stats-out").string();
    auto manifest = run_generate(config);

    auto summary = run_stats(config.output_directory);
    CHECK(summary.counts == manifest.counts);
    REQUIRE(summary.approve_ratio.has_value());
    CHECK(*summary.approve_ratio == 1.0);  // no rule document: vacuous approval
    CHECK(summary.approved == 25);
    CHECK(summary.rejected == 0);
    CHECK(summary.severity_samples == 2);

    std::size_t histogram_total = 0;
    for (auto count : summary.severity_histogram) histogram_total += count;
    CHECK(histogram_total == 2);

    REQUIRE(summary.assets_per_partner.size() == 2);
    CHECK(summary.assets_per_partner[0].first == "A");
    CHECK(summary.assets_per_partner[0].second == 4);
    CHECK(summary.assets_per_partner[1].first == "B");
    CHECK(summary.assets_per_partner[1].second == 4);

    auto text = render_stats(summary);
    CHECK(text.find("approve ratio: 1 (25 approve / 0 reject / 0 unannotated)") !=
          std::string::npos);
    CHECK(text.find("requests: 25") != std::string::npos);
}

TEST_CASE("run_stats reports NA when there are no requests") {
    auto config = load_config(write_config(
        "no-requests.json",
        R"({"coalitions": [{"name": "AB", "partners": ["A", "B"]}],
            "assets": {"physical": 2, "autonomous": 0, "virtual": 0,
                        "per_inventory": 1, "requests": 0},
            "conditions": [{"name": "humidity level", "lower": 0, "upper": 100}],
            "granularity": 2,
            "start_times": ["2019-02-21 13:20"],
            "missions": [{"name": "patrol"}],
            "environments": [{"name": "urban"}]})"));
    config.output_directory = fresh_dir("na-out").string();
    run_generate(config);

    auto summary = run_stats(config.output_directory);
    CHECK_FALSE(summary.approve_ratio.has_value());
    CHECK(render_stats(summary).find("approve ratio: NA (no requests)") != std::string::npos);
}

TEST_CASE("run_stats rejects tampered or missing outputs") {
    auto config = load_config(write_config("tamper.json", tiny_config_text()));
    config.output_directory = fresh_dir("tamper-out").string();
    run_generate(config);
    auto out_dir = std::filesystem::path(config.output_directory);

    CHECK_THROWS_AS(run_stats(fresh_dir("never-generated")), ConfigError);

    {
        std::ofstream out(out_dir / "requests.ce", std::ios::binary | std::ios::app);
        out << "\n";
    }
    CHECK_THROWS_AS(run_stats(out_dir), IntegrityError);

    std::filesystem::remove(out_dir / "requests.ce");
    CHECK_THROWS_AS(run_stats(out_dir), ConfigError);

    {
        std::ofstream out(out_dir / "manifest.json", std::ios::binary);
        out << "{ not json";
    }
    CHECK_THROWS_AS(run_stats(out_dir), ConfigError);
}

TEST_CASE("strict annotation failures surface as EvalError from run_generate") {
    // The shipped rules ask for wind speed, which this config does not have.
    auto config = load_config(write_config("strict.json", tiny_config_text()));
    config.rules_path =
        (std::filesystem::path(COALGEN_SOURCE_DIR) / "configs" / "approval_rules.json").string();
    config.output_directory = fresh_dir("strict-out").string();
    CHECK_THROWS_AS(run_generate(config), EvalError);

    config.evaluation_mode = EvaluationMode::lenient;
    auto manifest = run_generate(config);
    CHECK(manifest.counts.requests == 10);
}
