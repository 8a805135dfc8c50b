#pragma once

// The shipped concept model and the record-to-sentence builders behind
// emit_dataset. One .ce file per fact family plus model.ce for the concept
// definitions; facts appear in generation order.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "coalgen/ce.hpp"
#include "coalgen/detail/sha256.hpp"
#include "coalgen/detail/text.hpp"
#include "coalgen/domain.hpp"
#include "coalgen/errors.hpp"

namespace coalgen {

namespace detail {

inline std::vector<std::string> environment_attribute_names(const World& world) {
    std::vector<std::string> names;
    for (const auto& env : world.environments)
        for (const auto& [name, value] : env.attributes) {
            (void)value;
            if (std::find(names.begin(), names.end(), name) == names.end())
                names.push_back(name);
        }
    return names;
}

}  // namespace detail

inline std::vector<ConceptDefinition> concept_model(const World& world) {
    std::vector<ConceptDefinition> model;

    model.push_back({"mission",
                     "M",
                     {ConceptValue{"S", "high level stage"},
                      ConceptValue{"A", "potential adversary action"},
                      ConceptValue{"C", "constraint"}}});

    model.push_back({"mission instance",
                     "MI",
                     {ConceptRelation{"is an instance of", "mission", "M"},
                      ConceptRelation{"is executed by", "coalition", "C"},
                      ConceptRelation{"is executed in", "mission environment", "E"},
                      ConceptRelation{"is executed in", "environmental condition instance",
                                      "ECI"},
                      ConceptValue{"T", "start time"}}});

    model.push_back({"coalition partner", "CP", {}});

    model.push_back(
        {"coalition", "C", {ConceptRelation{"includes", "coalition partner", "CP"}}});

    model.push_back({"trust relationship",
                     "TR",
                     {ConceptRelation{"is held by", "coalition partner", "P1"},
                      ConceptRelation{"is directed towards", "coalition partner", "P2"},
                      ConceptValue{"V", "trust value"}}});

    ConceptDefinition environment{"mission environment", "E", {}};
    std::size_t n = 0;
    for (const auto& attribute : detail::environment_attribute_names(world))
        environment.clauses.push_back(ConceptValue{"V" + std::to_string(++n), attribute});
    model.push_back(std::move(environment));

    model.push_back({"environmental condition",
                     "EC",
                     {ConceptValue{"L", "lower bound"}, ConceptValue{"U", "upper bound"},
                      ConceptValue{"N", "units"}, ConceptValue{"W", "weight"}}});

    ConceptDefinition eci{"environmental condition instance", "ECI", {}};
    n = 0;
    for (const auto& condition : world.conditions)
        eci.clauses.push_back(ConceptValue{"V" + std::to_string(++n), condition.name});
    eci.clauses.push_back(ConceptValue{"S", "severity"});
    model.push_back(std::move(eci));

    model.push_back({"alfus level",
                     "AL",
                     {ConceptValue{"MC", "mission complexity"},
                      ConceptValue{"EC", "environmental complexity"},
                      ConceptValue{"HI", "human interaction"},
                      ConceptValue{"O", "overall level"}}});

    model.push_back({"asset",
                     "A",
                     {ConceptValue{"D", "display name"}, ConceptValue{"K", "kind"},
                      ConceptRelation{"is owned by", "coalition partner", "CP"},
                      ConceptValue{"W", "worth"}, ConceptValue{"LA", "latitude"},
                      ConceptValue{"LO", "longitude"},
                      ConceptValue{"R", "risk of adversarial compromise"},
                      ConceptValue{"AV", "available to use"},
                      ConceptRelation{"has autonomy level", "alfus level", "AL"}}});

    model.push_back({"live asset inventory",
                     "LAI",
                     {ConceptRelation{"is held by", "coalition partner", "CP"},
                      ConceptRelation{"is active on", "mission instance", "MI"},
                      ConceptRelation{"contains", "asset", "A"}}});

    model.push_back({"asset request",
                     "AR",
                     {ConceptRelation{"is requested by", "coalition partner", "RQ"},
                      ConceptRelation{"is requested from", "coalition partner", "OW"},
                      ConceptRelation{"requests", "asset", "A"},
                      ConceptRelation{"is made on", "mission instance", "MI"},
                      ConceptValue{"T", "request time"}, ConceptValue{"D", "decision"}}});

    return model;
}

inline FactSentence fact_for(const Mission& mission) {
    FactSentence fact{"mission", mission.name, {}};
    for (const auto& stage : mission.stages)
        fact.clauses.push_back(ValueClause{stage, "high level stage"});
    for (const auto& action : mission.adversary_actions)
        fact.clauses.push_back(ValueClause{action, "potential adversary action"});
    for (const auto& constraint : mission.constraints)
        fact.clauses.push_back(ValueClause{constraint, "constraint"});
    return fact;
}

inline FactSentence fact_for(const MissionEnvironment& environment) {
    FactSentence fact{"mission environment", environment.name, {}};
    for (const auto& [name, value] : environment.attributes)
        fact.clauses.push_back(ValueClause{value, name});
    return fact;
}

inline FactSentence fact_for(const CoalitionPartner& partner) {
    return {"coalition partner", partner.name, {}};
}

inline FactSentence fact_for(const Coalition& coalition) {
    FactSentence fact{"coalition", coalition.name, {}};
    for (const auto& partner : coalition.partners)
        fact.clauses.push_back(RelationClause{"includes", "coalition partner", partner});
    return fact;
}

inline FactSentence fact_for(const TrustRelationship& trust, std::size_t ordinal) {
    return {"trust relationship",
            "trust_" + std::to_string(ordinal),
            {RelationClause{"is held by", "coalition partner", trust.truster},
             RelationClause{"is directed towards", "coalition partner", trust.trustee},
             ValueClause{detail::format_number(trust.value), "trust value"}}};
}

inline FactSentence fact_for(const EnvironmentalConditionSpec& condition) {
    return {"environmental condition",
            condition.name,
            {ValueClause{detail::format_number(condition.lower), "lower bound"},
             ValueClause{detail::format_number(condition.upper), "upper bound"},
             ValueClause{condition.units, "units"},
             ValueClause{detail::format_number(condition.weight), "weight"}}};
}

inline FactSentence fact_for(const EnvironmentalConditionInstance& instance) {
    FactSentence fact{"environmental condition instance", instance.id, {}};
    for (const auto& [name, value] : instance.values)
        fact.clauses.push_back(ValueClause{detail::format_number(value), name});
    fact.clauses.push_back(ValueClause{detail::format_number(instance.severity), "severity"});
    return fact;
}

inline FactSentence fact_for(const AlfusScore& score) {
    FactSentence fact{"alfus level", score.id(), {}};
    if (!score.is_level_10()) {
        const auto& graded = score.graded_scores();
        fact.clauses.push_back(
            ValueClause{std::to_string(graded.mission_complexity), "mission complexity"});
        fact.clauses.push_back(ValueClause{std::to_string(graded.environmental_complexity),
                                           "environmental complexity"});
        fact.clauses.push_back(
            ValueClause{std::to_string(graded.human_interaction), "human interaction"});
    }
    fact.clauses.push_back(
        ValueClause{std::to_string(score.numeric_level()), "overall level"});
    return fact;
}

inline FactSentence fact_for(const MissionInstance& instance) {
    return {"mission instance",
            instance.id,
            {RelationClause{"is an instance of", "mission", instance.mission},
             RelationClause{"is executed by", "coalition", instance.coalition},
             RelationClause{"is executed in", "mission environment", instance.environment},
             RelationClause{"is executed in", "environmental condition instance", instance.eci},
             ValueClause{instance.start_time, "start time"}}};
}

inline FactSentence fact_for(const Asset& asset) {
    FactSentence fact{"asset", asset.id, {}};
    fact.clauses.push_back(ValueClause{asset.display_name, "display name"});
    fact.clauses.push_back(ValueClause{to_string(asset.kind), "kind"});
    fact.clauses.push_back(RelationClause{"is owned by", "coalition partner", asset.owner});
    fact.clauses.push_back(ValueClause{detail::format_number(asset.worth), "worth"});
    fact.clauses.push_back(ValueClause{detail::format_number(asset.location.lat), "latitude"});
    fact.clauses.push_back(ValueClause{detail::format_number(asset.location.lon), "longitude"});
    fact.clauses.push_back(ValueClause{
        detail::format_number(asset.risk_of_adversarial_compromise),
        "risk of adversarial compromise"});
    fact.clauses.push_back(
        ValueClause{asset.available_to_use ? "yes" : "no", "available to use"});
    if (asset.alfus.has_value())
        fact.clauses.push_back(
            RelationClause{"has autonomy level", "alfus level", asset.alfus->id()});
    return fact;
}

inline FactSentence fact_for(const LiveAssetInventory& inventory, std::size_t ordinal) {
    FactSentence fact{"live asset inventory", "inv_" + std::to_string(ordinal), {}};
    fact.clauses.push_back(
        RelationClause{"is held by", "coalition partner", inventory.partner});
    fact.clauses.push_back(
        RelationClause{"is active on", "mission instance", inventory.mission_instance});
    for (const auto& asset_id : inventory.asset_ids)
        fact.clauses.push_back(RelationClause{"contains", "asset", asset_id});
    return fact;
}

inline FactSentence fact_for(const AssetRequest& request) {
    return {"asset request",
            request.id,
            {RelationClause{"is requested by", "coalition partner", request.requester},
             RelationClause{"is requested from", "coalition partner", request.owner},
             RelationClause{"requests", "asset", request.asset_id},
             RelationClause{"is made on", "mission instance", request.mission_instance},
             ValueClause{request.time, "request time"},
             ValueClause{to_string(request.decision), "decision"}}};
}

struct FileDigest {
    std::string name;
    std::string sha256;
    std::size_t sentences = 0;

    bool operator==(const FileDigest&) const = default;
};

namespace detail {

// Streams sentences into one .ce file: blank line between sentences,
// trailing newline, incremental digest, and a validation pass over every
// sentence on its way out.
class SentenceFileWriter {
public:
    SentenceFileWriter(const std::filesystem::path& directory, std::string name)
        : name_(std::move(name)), out_(directory / name_, std::ios::binary) {
        if (!out_) throw ConfigError("cannot write output file: " + (directory / name_).string());
    }

    void write(const std::string& sentence) {
        auto verdict = validate_sentence(sentence);
        if (!verdict.ok)
            throw SerializationError("emitted sentence rejected by the validator at byte " +
                                     std::to_string(verdict.position) + " (" + verdict.reason +
                                     "): " + sentence);
        if (count_ > 0) append("\n\n");
        append(sentence);
        ++count_;
    }

    FileDigest finish() {
        if (count_ > 0) append("\n");
        out_.flush();
        if (!out_) throw ConfigError("failed writing output file: " + name_);
        return {name_, hash_.hex_digest(), count_};
    }

private:
    void append(std::string_view bytes) {
        out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        hash_.update(bytes.data(), bytes.size());
    }

    std::string name_;
    std::ofstream out_;
    Sha256 hash_;
    std::size_t count_ = 0;
};

}  // namespace detail

// Writes model.ce plus one facts file per family into `directory`, creating
// it if needed. The world is assumed integrity-checked by the caller.
inline std::vector<FileDigest> emit_dataset(const World& world,
                                            const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw ConfigError("cannot create output directory: " + directory.string());

    std::vector<FileDigest> manifest;

    {
        detail::SentenceFileWriter out(directory, "model.ce");
        for (const auto& definition : concept_model(world)) out.write(emit_concept(definition));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "missions.ce");
        for (const auto& mission : world.missions) out.write(emit_fact(fact_for(mission)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "environments.ce");
        for (const auto& environment : world.environments)
            out.write(emit_fact(fact_for(environment)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "coalitions.ce");
        for (const auto& partner : world.partners) out.write(emit_fact(fact_for(partner)));
        for (const auto& coalition : world.coalitions)
            out.write(emit_fact(fact_for(coalition)));
        for (std::size_t i = 0; i < world.trust.size(); ++i)
            out.write(emit_fact(fact_for(world.trust[i], i + 1)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "condition_instances.ce");
        for (const auto& condition : world.conditions)
            out.write(emit_fact(fact_for(condition)));
        for (const auto& instance : world.condition_instances)
            out.write(emit_fact(fact_for(instance)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "alfus.ce");
        for (const auto& score : world.alfus_scores) out.write(emit_fact(fact_for(score)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "mission_instances.ce");
        for (const auto& instance : world.mission_instances)
            out.write(emit_fact(fact_for(instance)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "assets.ce");
        for (const auto& asset : world.assets) out.write(emit_fact(fact_for(asset)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "inventories.ce");
        for (std::size_t i = 0; i < world.inventories.size(); ++i)
            out.write(emit_fact(fact_for(world.inventories[i], i + 1)));
        manifest.push_back(out.finish());
    }
    {
        detail::SentenceFileWriter out(directory, "requests.ce");
        for (const auto& request : world.requests) out.write(emit_fact(fact_for(request)));
        manifest.push_back(out.finish());
    }

    return manifest;
}

}  // namespace coalgen
