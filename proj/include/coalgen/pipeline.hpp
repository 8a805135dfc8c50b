#pragma once

// The end-to-end run: enumerate, generate, annotate, verify, emit, manifest.
// Also the stats pass that audits a finished output directory against its
// manifest.

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coalgen/annotation.hpp"
#include "coalgen/asset_engine.hpp"
#include "coalgen/ce_model.hpp"
#include "coalgen/config.hpp"
#include "coalgen/detail/sha256.hpp"
#include "coalgen/detail/text.hpp"
#include "coalgen/domain.hpp"
#include "coalgen/errors.hpp"
#include "coalgen/fact_engine.hpp"
#include "coalgen/rng.hpp"
#include "coalgen/version.hpp"

namespace coalgen {

struct RunManifest {
    std::string config_digest;
    std::uint64_t seed = 0;
    CountsManifest counts;
    std::vector<FileDigest> files;
    std::string tool_version;
    double duration_seconds = 0.0;
    nlohmann::ordered_json effective_config;
};

using ProgressFn = std::function<void(const std::string&)>;

namespace detail {

inline void report(const ProgressFn& progress, const std::string& line) {
    if (progress) progress(line);
}

inline std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

// One row per request, flattened against the mission instance, condition
// instance, asset and trust tables.
inline FileDigest write_requests_csv(const World& world,
                                     const std::filesystem::path& directory) {
    std::ofstream out(directory / "requests.csv", std::ios::binary);
    if (!out)
        throw ConfigError("cannot write output file: " + (directory / "requests.csv").string());
    Sha256 hash;
    auto emit = [&](const std::string& line) {
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
        hash.update(line);
    };

    std::vector<std::string> header = {
        "request_id", "requester",    "owner",      "asset_id",   "asset_kind",
        "mission_instance", "mission", "environment", "start_time", "request_time",
        "trust",      "available_to_use", "risk",   "severity"};
    for (const auto& condition : world.conditions)
        header.push_back(short_condition_name(condition.name));
    header.push_back("decision");
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) line += ',';
        line += csv_field(header[i]);
    }
    emit(line + "\n");

    WorldIndex index(world);
    std::size_t records = 0;
    for (const auto& request : world.requests) {
        auto instance_it = index.instances.find(request.mission_instance);
        if (instance_it == index.instances.end())
            throw IntegrityError("request '" + request.id +
                                 "' references unknown mission instance '" +
                                 request.mission_instance + "'");
        const MissionInstance& instance = *instance_it->second;
        auto eci_it = index.ecis.find(instance.eci);
        if (eci_it == index.ecis.end())
            throw IntegrityError("mission instance '" + instance.id +
                                 "' references unknown condition instance '" + instance.eci +
                                 "'");
        const EnvironmentalConditionInstance& eci = *eci_it->second;
        auto asset_it = index.assets.find(request.asset_id);
        if (asset_it == index.assets.end())
            throw IntegrityError("request '" + request.id + "' references unknown asset '" +
                                 request.asset_id + "'");
        const Asset& asset = *asset_it->second;
        auto trust_it = index.trust.find({request.owner, request.requester});
        if (trust_it == index.trust.end())
            throw IntegrityError("no trust relationship from '" + request.owner + "' to '" +
                                 request.requester + "'");

        std::vector<std::string> row = {request.id,
                                        request.requester,
                                        request.owner,
                                        request.asset_id,
                                        to_string(asset.kind),
                                        instance.id,
                                        instance.mission,
                                        instance.environment,
                                        instance.start_time,
                                        request.time,
                                        format_number(trust_it->second),
                                        asset.available_to_use ? "yes" : "no",
                                        format_number(asset.risk_of_adversarial_compromise),
                                        format_number(eci.severity)};
        if (eci.values.size() != world.conditions.size())
            throw IntegrityError(eci.id + ": expected one value per configured condition");
        for (const auto& [name, value] : eci.values) {
            (void)name;
            row.push_back(format_number(value));
        }
        row.push_back(to_string(request.decision));

        line.clear();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) line += ',';
            line += csv_field(row[i]);
        }
        emit(line + "\n");
        ++records;
    }

    out.flush();
    if (!out) throw ConfigError("failed writing output file: requests.csv");
    return {"requests.csv", hash.hex_digest(), records};
}

}  // namespace detail

inline World build_world(const GeneratorConfig& config, const ProgressFn& progress = {}) {
    World world;
    world.conditions = config.plan.condition_specs;
    world.granularity = config.plan.granularity;
    world.start_times = config.plan.start_times;
    world.missions = config.plan.missions;
    world.environments = config.plan.environments;
    world.coalitions = config.plan.coalitions;
    world.partners = config.derived_partners();
    world.trust = config.trust;
    world.asset_bounds = config.assets.bounding_box;

    FactFragment fragment = run_fact_generation(config.plan);
    world.condition_instances = std::move(fragment.condition_instances);
    world.alfus_scores = std::move(fragment.alfus_scores);
    world.mission_instances = std::move(fragment.mission_instances);
    detail::report(progress, "enumerated " + std::to_string(world.condition_instances.size()) +
                                 " condition instances, " +
                                 std::to_string(world.alfus_scores.size()) + " alfus scores, " +
                                 std::to_string(world.mission_instances.size()) +
                                 " mission instances");

    Rng asset_rng(stage_seed(config.seed, 1));
    world.assets = generate_assets(config.assets, world.partners, world.alfus_scores, asset_rng);
    Rng inventory_rng(stage_seed(config.seed, 2));
    world.inventories = build_inventories(world.partners, world.mission_instances, world.assets,
                                          config.assets, inventory_rng);
    Rng request_rng(stage_seed(config.seed, 3));
    world.requests = generate_requests(world.partners, world.mission_instances,
                                       world.inventories, world.trust, config.assets,
                                       request_rng);
    detail::report(progress, "generated " + std::to_string(world.assets.size()) + " assets, " +
                                 std::to_string(world.inventories.size()) + " inventories, " +
                                 std::to_string(world.requests.size()) + " requests");
    return world;
}

inline void write_manifest_file(const RunManifest& manifest,
                                const std::filesystem::path& path) {
    nlohmann::ordered_json doc;
    doc["tool"] = tool_name;
    doc["tool_version"] = manifest.tool_version;
    doc["hash_algorithm"] = "SHA-256";
    doc["seed"] = manifest.seed;
    doc["duration_seconds"] = manifest.duration_seconds;
    doc["config_digest"] = manifest.config_digest;
    auto& counts = doc["counts"] = nlohmann::ordered_json::object();
    for (const auto& [name, count] : manifest.counts.as_pairs()) counts[name] = count;
    auto& files = doc["files"] = nlohmann::ordered_json::array();
    for (const auto& file : manifest.files)
        files.push_back(
            {{"name", file.name}, {"sha256", file.sha256}, {"records", file.sentences}});
    doc["effective_config"] = manifest.effective_config;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write manifest: " + path.string());
    out << doc.dump(2) << "\n";
    if (!out) throw ConfigError("failed writing manifest: " + path.string());
}

inline RunManifest read_manifest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read manifest: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();

    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("manifest is corrupt: " + std::string(e.what()));
    }

    try {
        RunManifest manifest;
        manifest.tool_version = doc.at("tool_version").get<std::string>();
        if (doc.at("hash_algorithm").get<std::string>() != "SHA-256")
            throw ConfigError("manifest uses an unsupported hash algorithm");
        manifest.seed = doc.at("seed").get<std::uint64_t>();
        manifest.duration_seconds = doc.at("duration_seconds").get<double>();
        manifest.config_digest = doc.at("config_digest").get<std::string>();
        const auto& counts = doc.at("counts");
        manifest.counts.conditions = counts.at("conditions").get<std::size_t>();
        manifest.counts.condition_instances = counts.at("condition_instances").get<std::size_t>();
        manifest.counts.alfus_scores = counts.at("alfus_scores").get<std::size_t>();
        manifest.counts.missions = counts.at("missions").get<std::size_t>();
        manifest.counts.environments = counts.at("environments").get<std::size_t>();
        manifest.counts.coalitions = counts.at("coalitions").get<std::size_t>();
        manifest.counts.partners = counts.at("partners").get<std::size_t>();
        manifest.counts.trust_relationships =
            counts.at("trust_relationships").get<std::size_t>();
        manifest.counts.mission_instances = counts.at("mission_instances").get<std::size_t>();
        manifest.counts.assets = counts.at("assets").get<std::size_t>();
        manifest.counts.inventories = counts.at("inventories").get<std::size_t>();
        manifest.counts.requests = counts.at("requests").get<std::size_t>();
        for (const auto& file : doc.at("files"))
            manifest.files.push_back({file.at("name").get<std::string>(),
                                      file.at("sha256").get<std::string>(),
                                      file.at("records").get<std::size_t>()});
        manifest.effective_config = doc.at("effective_config");
        return manifest;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest is corrupt: " + std::string(e.what()));
    }
}

inline RunManifest run_generate(const GeneratorConfig& config,
                                const ProgressFn& progress = {}) {
    auto started = std::chrono::steady_clock::now();
    config.validate();
    RuleSet rules = load_rules(config);

    World world = build_world(config, progress);

    auto annotated = annotate_requests(world.requests, rules, world, config.evaluation_mode);
    world.requests = std::move(annotated.requests);
    world.manifest = world.actual_counts();
    verify_world(world);
    detail::report(progress, "annotated " + std::to_string(world.requests.size()) +
                                 " requests and verified the dataset");

    std::filesystem::path out_dir = config.output_directory;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + out_dir.string());

    RunManifest manifest;
    if (config.format != OutputFormat::csv) {
        manifest.files = emit_dataset(world, out_dir);
        detail::report(progress, "wrote " + std::to_string(manifest.files.size()) + " ce files");
    }
    if (config.format != OutputFormat::ce) {
        manifest.files.push_back(detail::write_requests_csv(world, out_dir));
        detail::report(progress, "wrote requests.csv");
    }

    manifest.seed = config.seed;
    manifest.counts = world.manifest;
    manifest.tool_version = tool_version;
    manifest.effective_config = effective_config_json(config, rules);
    manifest.config_digest =
        detail::Sha256::hex_of(manifest.effective_config.dump(2) + "\n");
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest_file(manifest, out_dir / "manifest.json");
    detail::report(progress, "wrote manifest.json");
    return manifest;
}

// --- stats --------------------------------------------------------------

struct StatsSummary {
    CountsManifest counts;
    std::size_t approved = 0;
    std::size_t rejected = 0;
    std::size_t unannotated = 0;
    std::optional<double> approve_ratio;  // empty when there are no requests
    std::array<std::size_t, 10> severity_histogram{};
    std::size_t severity_samples = 0;
    std::vector<std::pair<std::string, std::size_t>> assets_per_partner;
};

namespace detail {

inline std::size_t count_sentences(const std::string& content) {
    if (content.empty()) return 0;
    std::size_t count = 1;
    for (std::size_t pos = 0; (pos = content.find("\n\n", pos)) != std::string::npos; pos += 2)
        ++count;
    return count;
}

inline std::size_t count_csv_records(const std::string& content) {
    std::size_t lines = 0;
    for (char c : content)
        if (c == '\n') ++lines;
    return lines == 0 ? 0 : lines - 1;
}

// Minimal RFC 4180 record reader, enough to read back our own export.
inline std::vector<std::string> parse_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

// The value of a trailing `has the value '<v>' as <property>.` clause, if
// the sentence ends with one naming that property.
inline std::optional<std::string> final_value_clause(const std::string& sentence,
                                                     const std::string& property) {
    const std::string suffix = "' as " + property + ".";
    if (sentence.size() < suffix.size() ||
        sentence.compare(sentence.size() - suffix.size(), suffix.size(), suffix) != 0)
        return std::nullopt;
    std::size_t line_start = sentence.rfind('\n');
    line_start = line_start == std::string::npos ? 0 : line_start + 1;
    const std::string prefix = "has the value '";
    std::size_t open = sentence.find(prefix, line_start);
    if (open == std::string::npos) return std::nullopt;
    std::size_t begin = open + prefix.size();
    return sentence.substr(begin, sentence.size() - suffix.size() - begin);
}

inline std::vector<std::string> split_sentences(const std::string& content) {
    std::vector<std::string> out;
    if (content.empty()) return out;
    std::string body = content;
    if (body.back() == '\n') body.pop_back();
    std::size_t begin = 0;
    for (;;) {
        std::size_t gap = body.find("\n\n", begin);
        if (gap == std::string::npos) {
            out.push_back(body.substr(begin));
            return out;
        }
        out.push_back(body.substr(begin, gap - begin));
        begin = gap + 2;
    }
}

}  // namespace detail

inline StatsSummary run_stats(const std::filesystem::path& out_dir) {
    RunManifest manifest = read_manifest_file(out_dir / "manifest.json");

    StatsSummary summary;
    summary.counts = manifest.counts;

    std::map<std::string, std::string> contents;
    for (const auto& file : manifest.files) {
        std::ifstream in(out_dir / file.name, std::ios::binary);
        if (!in) throw ConfigError("output file missing: " + file.name);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        std::string content = buffer.str();
        if (detail::Sha256::hex_of(content) != file.sha256)
            throw IntegrityError("file '" + file.name + "' does not match its manifest digest");
        std::size_t records = file.name.ends_with(".csv")
                                  ? detail::count_csv_records(content)
                                  : detail::count_sentences(content);
        if (records != file.sentences)
            throw IntegrityError("file '" + file.name + "' holds " + std::to_string(records) +
                                 " records but the manifest says " +
                                 std::to_string(file.sentences));
        contents[file.name] = std::move(content);
    }

    auto expect = [&](const std::string& name, std::size_t want) {
        if (!contents.count(name)) return;
        std::size_t have = detail::count_sentences(contents[name]);
        if (have != want)
            throw IntegrityError("file '" + name + "' holds " + std::to_string(have) +
                                 " records but the manifest counts imply " +
                                 std::to_string(want));
    };
    const CountsManifest& counts = manifest.counts;
    expect("missions.ce", counts.missions);
    expect("environments.ce", counts.environments);
    expect("coalitions.ce", counts.partners + counts.coalitions + counts.trust_relationships);
    expect("condition_instances.ce", counts.conditions + counts.condition_instances);
    expect("alfus.ce", counts.alfus_scores);
    expect("mission_instances.ce", counts.mission_instances);
    expect("assets.ce", counts.assets);
    expect("inventories.ce", counts.inventories);
    expect("requests.ce", counts.requests);
    if (contents.count("requests.csv") &&
        detail::count_csv_records(contents["requests.csv"]) != counts.requests)
        throw IntegrityError("requests.csv does not match the manifest request count");

    if (contents.count("requests.ce")) {
        for (const auto& sentence : detail::split_sentences(contents["requests.ce"])) {
            auto decision = detail::final_value_clause(sentence, "decision");
            if (!decision) continue;
            if (*decision == "approve") ++summary.approved;
            else if (*decision == "reject") ++summary.rejected;
            else ++summary.unannotated;
        }
    } else if (contents.count("requests.csv")) {
        std::istringstream in(contents["requests.csv"]);
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (header) {
                header = false;
                continue;
            }
            auto fields = detail::parse_csv_record(line);
            if (fields.empty()) continue;
            const std::string& decision = fields.back();
            if (decision == "approve") ++summary.approved;
            else if (decision == "reject") ++summary.rejected;
            else ++summary.unannotated;
        }
    }
    std::size_t decided = summary.approved + summary.rejected + summary.unannotated;
    if (decided > 0)
        summary.approve_ratio = static_cast<double>(summary.approved) /
                                static_cast<double>(decided);

    auto bin_of = [](double severity) {
        auto bin = static_cast<std::size_t>(severity * 10.0);
        return bin > 9 ? std::size_t{9} : bin;
    };
    if (contents.count("condition_instances.ce")) {
        for (const auto& sentence : detail::split_sentences(contents["condition_instances.ce"])) {
            auto value = detail::final_value_clause(sentence, "severity");
            if (!value) continue;
            ++summary.severity_histogram[bin_of(std::stod(*value))];
            ++summary.severity_samples;
        }
    } else if (contents.count("requests.csv")) {
        std::istringstream in(contents["requests.csv"]);
        std::string line;
        std::size_t severity_column = 0;
        bool header = true;
        while (std::getline(in, line)) {
            auto fields = detail::parse_csv_record(line);
            if (header) {
                header = false;
                for (std::size_t i = 0; i < fields.size(); ++i)
                    if (fields[i] == "severity") severity_column = i;
                continue;
            }
            if (severity_column < fields.size()) {
                ++summary.severity_histogram[bin_of(std::stod(fields[severity_column]))];
                ++summary.severity_samples;
            }
        }
    }

    if (contents.count("assets.ce")) {
        std::map<std::string, std::size_t> tallies;
        const std::string prefix = "  is owned by the coalition partner '";
        std::istringstream in(contents["assets.ce"]);
        std::string line;
        while (std::getline(in, line)) {
            if (line.compare(0, prefix.size(), prefix) != 0) continue;
            std::size_t close = line.find('\'', prefix.size());
            if (close == std::string::npos) continue;
            ++tallies[line.substr(prefix.size(), close - prefix.size())];
        }
        summary.assets_per_partner.assign(tallies.begin(), tallies.end());
    }

    return summary;
}

inline std::string render_stats(const StatsSummary& summary) {
    std::ostringstream out;
    out << "counts:\n";
    for (const auto& [name, count] : summary.counts.as_pairs())
        out << "  " << name << ": " << count << "\n";

    if (summary.approve_ratio)
        out << "approve ratio: " << detail::format_number(*summary.approve_ratio) << " ("
            << summary.approved << " approve / " << summary.rejected << " reject / "
            << summary.unannotated << " unannotated)\n";
    else
        out << "approve ratio: NA (no requests)\n";

    out << "severity histogram (" << summary.severity_samples << " condition instances):\n";
    for (std::size_t i = 0; i < summary.severity_histogram.size(); ++i) {
        out << "  [" << detail::format_number(i / 10.0) << ", "
            << detail::format_number((i + 1) / 10.0) << (i == 9 ? "]" : ")") << " "
            << summary.severity_histogram[i] << "\n";
    }

    out << "assets per partner:\n";
    if (summary.assets_per_partner.empty()) out << "  (no asset file present)\n";
    for (const auto& [partner, count] : summary.assets_per_partner)
        out << "  " << partner << ": " << count << "\n";
    return out.str();
}

}  // namespace coalgen
