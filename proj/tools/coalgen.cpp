// coalgen: deterministic coalition mission-context dataset generator.
//
//   coalgen generate --config cfg.json [--seed N] [--out DIR] [--rules DOC]
//                    [--format ce|csv|both] [--lenient]
//   coalgen validate --config cfg.json
//   coalgen stats --out DIR
//
// Progress goes to stderr; data goes to files; errors are single-line JSON
// objects on stderr and a nonzero exit status.

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "coalgen/config.hpp"
#include "coalgen/pipeline.hpp"
#include "coalgen/version.hpp"

namespace {

const char* error_kind(const coalgen::Error& e) {
    if (dynamic_cast<const coalgen::ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const coalgen::ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const coalgen::IntegrityError*>(&e)) return "IntegrityError";
    if (dynamic_cast<const coalgen::GenerationError*>(&e)) return "GenerationError";
    if (dynamic_cast<const coalgen::EvalError*>(&e)) return "EvalError";
    if (dynamic_cast<const coalgen::SerializationError*>(&e)) return "SerializationError";
    return "Error";
}

void print_error(const coalgen::Error& e) {
    nlohmann::ordered_json line;
    line["error"]["type"] = error_kind(e);
    line["error"]["message"] = e.what();
    if (const auto* parse = dynamic_cast<const coalgen::ParseError*>(&e))
        line["error"]["location"] = parse->location;
    std::cerr << line.dump() << "\n";
}

void progress_line(const std::string& line) { std::cerr << "[coalgen] " << line << "\n"; }

std::size_t power(std::size_t base, std::size_t exponent) {
    std::size_t value = 1;
    for (std::size_t i = 0; i < exponent; ++i) value *= base;
    return value;
}

int run_validate(const std::string& config_path) {
    auto config = coalgen::load_config(config_path);
    auto rules = coalgen::load_rules(config);

    std::size_t ecis = power(static_cast<std::size_t>(config.plan.granularity),
                             config.plan.condition_specs.size());
    std::size_t instances = config.plan.coalitions.size() * config.plan.environments.size() *
                            config.plan.missions.size() * ecis;
    std::cout << "configuration valid\n";
    std::cout << "  conditions: " << config.plan.condition_specs.size() << " at granularity "
              << config.plan.granularity << " -> " << ecis << " condition instances\n";
    std::cout << "  mission instances: " << instances << "\n";
    std::cout << "  assets: " << config.assets.counts.total() << ", requests: "
              << config.assets.requests << "\n";
    std::cout << "  rule document: "
              << (config.rules_path.empty() ? std::string("none (every request approves)")
                                            : config.rules_path)
              << " (" << rules.predicates.size() << " predicates)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coalition mission-context dataset generator"};
    app.set_version_flag("--version", std::string(coalgen::tool_version));
    app.require_subcommand(1);

    std::string generate_config;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string rules_path;
    std::string format;
    bool lenient = false;

    auto* generate = app.add_subcommand("generate", "run the pipeline and write the dataset");
    generate->add_option("--config", generate_config, "configuration file")->required();
    auto* seed_option = generate->add_option("--seed", seed, "override the configured seed");
    auto* out_option = generate->add_option("--out", out_dir, "output directory");
    auto* rules_option = generate->add_option("--rules", rules_path, "rule document");
    auto* format_option = generate->add_option("--format", format, "ce, csv or both")
                              ->check(CLI::IsMember({"ce", "csv", "both"}));
    generate->add_flag("--lenient", lenient,
                       "treat missing attributes as failed predicates, not errors");

    std::string validate_config;
    auto* validate = app.add_subcommand("validate", "check a configuration without generating");
    validate->add_option("--config", validate_config, "configuration file")->required();

    std::string stats_dir;
    auto* stats = app.add_subcommand("stats", "summarize a generated dataset");
    stats->add_option("--out", stats_dir, "dataset directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            auto config = coalgen::load_config(generate_config);
            if (seed_option->count() > 0) {
                config.seed = seed;
                config.assets.seed = seed;
            }
            if (out_option->count() > 0) config.output_directory = out_dir;
            if (rules_option->count() > 0) config.rules_path = rules_path;
            if (format_option->count() > 0)
                config.format = coalgen::output_format_from_string(format);
            if (lenient) config.evaluation_mode = coalgen::EvaluationMode::lenient;

            auto manifest = coalgen::run_generate(config, progress_line);
            std::ostringstream took;
            took.precision(3);
            took << std::fixed << manifest.duration_seconds;
            progress_line("done in " + took.str() + "s; dataset in " + config.output_directory);
            return 0;
        }
        if (validate->parsed()) return run_validate(validate_config);
        std::cout << coalgen::render_stats(coalgen::run_stats(stats_dir));
        return 0;
    } catch (const coalgen::Error& e) {
        print_error(e);
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json line;
        line["error"]["type"] = "InternalError";
        line["error"]["message"] = e.what();
        std::cerr << line.dump() << "\n";
        return 2;
    }
}
