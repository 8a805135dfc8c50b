#pragma once

// Condition-logic documents: a single JSON object whose nested keys name
// request attributes and whose leaves compare them against constants.
//
//   { "trust": { "comparison": "gt", "value": 0.3 },      <- long form
//     "asset": { "risk of adversarial compromise": { "lt": 40 } },   <- short form
//     "mission environment": { "eq": "urban|mountain" } } <- '|' alternation on eq
//
// All predicates combine by conjunction; '|' inside an eq string operand is
// the only disjunctive construct. The comparator set {gt, gte, lt, lte, eq}
// is closed: anything else is a parse error.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "coalgen/detail/text.hpp"
#include "coalgen/domain.hpp"
#include "coalgen/errors.hpp"

namespace coalgen {

enum class Comparator { gt, gte, lt, lte, eq };

inline std::string to_string(Comparator c) {
    switch (c) {
        case Comparator::gt: return "gt";
        case Comparator::gte: return "gte";
        case Comparator::lt: return "lt";
        case Comparator::lte: return "lte";
        case Comparator::eq: return "eq";
    }
    throw IntegrityError("unknown comparator");
}

inline std::optional<Comparator> comparator_from_token(const std::string& token) {
    if (token == "gt") return Comparator::gt;
    if (token == "gte") return Comparator::gte;
    if (token == "lt") return Comparator::lt;
    if (token == "lte") return Comparator::lte;
    if (token == "eq") return Comparator::eq;
    return std::nullopt;
}

using Operand = std::variant<double, std::string>;

struct Predicate {
    std::vector<std::string> path;
    Comparator comparator = Comparator::eq;
    Operand operand;
    std::vector<std::string> alternatives;  // non-empty iff eq over a '|' string

    bool operator==(const Predicate&) const = default;

    std::string path_string() const { return detail::join(path, "."); }
};

// Flattened conjunction; empty evaluates to approve.
struct RuleSet {
    std::vector<Predicate> predicates;

    bool operator==(const RuleSet&) const = default;
};

enum class EvaluationMode { strict, lenient };

struct PredicateResult {
    std::vector<std::string> path;
    Comparator comparator = Comparator::eq;
    Operand operand;
    std::optional<Operand> observed;  // empty when the attribute was missing
    bool passed = false;
    std::string reason;  // empty when passed

    bool operator==(const PredicateResult&) const = default;
};

struct DecisionTrace {
    Decision decision = Decision::unannotated;
    std::vector<PredicateResult> results;

    bool operator==(const DecisionTrace&) const = default;
};

// Nested attribute view of one request; numbers, strings, or sub-objects.
using EvaluationContext = nlohmann::json;

namespace detail {

using rule_json = nlohmann::ordered_json;

inline std::string pointer_of(const std::vector<std::string>& path) {
    std::string p;
    for (const auto& seg : path) p += "/" + seg;
    return p.empty() ? "/" : p;
}

inline Operand operand_from_json(const rule_json& v, const std::vector<std::string>& path) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw ParseError("operand must be a number or a string", pointer_of(path));
}

inline Predicate make_predicate(std::vector<std::string> path, const std::string& token,
                                const rule_json& operand_json) {
    auto comparator = comparator_from_token(token);
    if (!comparator)
        throw ParseError("unknown comparator '" + token + "'", pointer_of(path));
    if (path.empty()) throw ParseError("comparison leaf has an empty attribute path", "/");

    Predicate p;
    p.comparator = *comparator;
    p.operand = operand_from_json(operand_json, path);
    p.path = std::move(path);

    if (p.comparator != Comparator::eq && !std::holds_alternative<double>(p.operand))
        throw ParseError("comparator '" + token + "' requires a numeric operand",
                         pointer_of(p.path));

    if (p.comparator == Comparator::eq && std::holds_alternative<std::string>(p.operand)) {
        const auto& s = std::get<std::string>(p.operand);
        if (s.find('|') != std::string::npos) {
            std::size_t begin = 0;
            while (begin <= s.size()) {
                std::size_t bar = s.find('|', begin);
                std::string alt = s.substr(begin, bar == std::string::npos ? bar : bar - begin);
                if (alt.empty())
                    throw ParseError("empty alternative in eq operand '" + s + "'",
                                     pointer_of(p.path));
                p.alternatives.push_back(std::move(alt));
                if (bar == std::string::npos) break;
                begin = bar + 1;
            }
        }
    }
    return p;
}

inline void parse_rule_object(const rule_json& node, std::vector<std::string>& path,
                              RuleSet& out) {
    // Long form: exactly {"comparison": <op>, "value": <v>}.
    if (node.contains("comparison") || node.contains("value")) {
        if (node.size() != 2 || !node.contains("comparison") || !node.contains("value"))
            throw ParseError("long-form leaf requires exactly 'comparison' and 'value'",
                             pointer_of(path));
        const auto& comparison = node.at("comparison");
        if (!comparison.is_string())
            throw ParseError("'comparison' must name a comparator", pointer_of(path));
        out.predicates.push_back(
            make_predicate(path, comparison.get<std::string>(), node.at("value")));
        return;
    }

    // Short form: exactly {"<op>": <v>} with a known comparator key.
    bool has_comparator_key = false;
    for (const auto& [key, value] : node.items()) {
        (void)value;
        if (comparator_from_token(key)) has_comparator_key = true;
    }
    if (has_comparator_key) {
        if (node.size() != 1)
            throw ParseError("a comparison leaf must contain exactly one comparator",
                             pointer_of(path));
        auto items = node.items();
        auto item = items.begin();
        out.predicates.push_back(make_predicate(path, item.key(), item.value()));
        return;
    }

    // Otherwise: nested attribute names.
    for (const auto& [key, value] : node.items()) {
        if (key.empty()) throw ParseError("empty attribute name", pointer_of(path));
        path.push_back(key);
        if (value.is_object()) {
            parse_rule_object(value, path, out);
        } else {
            throw ParseError(
                "unknown comparator '" + key + "' (attributes must map to nested objects or comparison leaves)",
                pointer_of(path));
        }
        path.pop_back();
    }
}

}  // namespace detail

inline RuleSet parse_rules(const std::string& document_text) {
    detail::rule_json doc;
    try {
        doc = detail::rule_json::parse(document_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed rule document: ") + e.what(),
                         "byte " + std::to_string(e.byte));
    }
    if (!doc.is_object())
        throw ParseError("rule document must be a single JSON object", "/");

    RuleSet rules;
    std::vector<std::string> path;
    detail::parse_rule_object(doc, path, rules);
    return rules;
}

// Canonical short-form rendering; parse(serialize(rules)) == rules. A rule
// set whose paths nest through or repeat one another has no document form
// (each leaf holds exactly one comparator) and is rejected.
inline std::string serialize_rules(const RuleSet& rules) {
    auto is_leaf = [](const detail::rule_json& node) {
        for (const auto& [key, value] : node.items()) {
            (void)value;
            if (comparator_from_token(key)) return true;
        }
        return false;
    };

    detail::rule_json doc = detail::rule_json::object();
    for (const auto& p : rules.predicates) {
        if (p.path.empty()) throw SerializationError("predicate with empty path");
        detail::rule_json* node = &doc;
        for (std::size_t i = 0; i + 1 < p.path.size(); ++i) {
            detail::rule_json& child = (*node)[p.path[i]];
            if (child.is_null()) child = detail::rule_json::object();
            if (!child.is_object() || is_leaf(child))
                throw SerializationError("conflicting predicate paths at '" + p.path[i] + "'");
            node = &child;
        }
        if (node->contains(p.path.back()))
            throw SerializationError("conflicting predicate paths at '" + p.path.back() + "'");
        detail::rule_json leaf = detail::rule_json::object();
        if (std::holds_alternative<double>(p.operand))
            leaf[to_string(p.comparator)] = std::get<double>(p.operand);
        else
            leaf[to_string(p.comparator)] = std::get<std::string>(p.operand);
        (*node)[p.path.back()] = std::move(leaf);
    }
    return doc.dump(2) + "\n";
}

namespace detail {

inline const EvaluationContext* lookup_path(const EvaluationContext& context,
                                            const std::vector<std::string>& path) {
    const EvaluationContext* node = &context;
    for (const auto& seg : path) {
        if (!node->is_object()) return nullptr;
        auto it = node->find(seg);
        if (it == node->end()) return nullptr;
        node = &*it;
    }
    return node;
}

}  // namespace detail

// Conjunction over all predicates; every predicate is evaluated so the trace
// is complete. Strict mode turns missing or non-scalar attributes into
// EvalError; lenient mode records them as failed predicates instead. An eq
// between a number and a string is not an error in either mode: the values
// are simply unequal.
inline DecisionTrace evaluate(const RuleSet& rules, const EvaluationContext& context,
                              EvaluationMode mode = EvaluationMode::strict) {
    DecisionTrace trace;
    bool all_passed = true;

    for (const auto& p : rules.predicates) {
        PredicateResult result;
        result.path = p.path;
        result.comparator = p.comparator;
        result.operand = p.operand;

        auto fail = [&](std::string reason) {
            if (mode == EvaluationMode::strict)
                throw EvalError("attribute '" + p.path_string() + "': " + reason);
            result.passed = false;
            result.reason = std::move(reason);
        };

        const EvaluationContext* node = detail::lookup_path(context, p.path);
        if (node == nullptr) {
            fail("missing attribute");
        } else if (node->is_number()) {
            double observed = node->get<double>();
            result.observed = observed;
            if (std::holds_alternative<double>(p.operand)) {
                double operand = std::get<double>(p.operand);
                switch (p.comparator) {
                    case Comparator::gt: result.passed = observed > operand; break;
                    case Comparator::gte: result.passed = observed >= operand; break;
                    case Comparator::lt: result.passed = observed < operand; break;
                    case Comparator::lte: result.passed = observed <= operand; break;
                    case Comparator::eq: result.passed = observed == operand; break;
                }
                if (!result.passed) result.reason = "comparison failed";
            } else {
                // eq against a string operand: a number never matches
                result.passed = false;
                result.reason = "type mismatch";
            }
        } else if (node->is_string()) {
            std::string observed = node->get<std::string>();
            result.observed = observed;
            if (p.comparator != Comparator::eq) {
                fail("numeric comparison against a non-numeric attribute");
            } else if (std::holds_alternative<double>(p.operand)) {
                result.passed = false;
                result.reason = "type mismatch";
            } else if (!p.alternatives.empty()) {
                result.passed = false;
                for (const auto& alt : p.alternatives)
                    if (observed == alt) result.passed = true;
                if (!result.passed) result.reason = "no alternative matched";
            } else {
                result.passed = observed == std::get<std::string>(p.operand);
                if (!result.passed) result.reason = "comparison failed";
            }
        } else {
            fail("attribute is not a number or string");
        }

        all_passed = all_passed && result.passed;
        trace.results.push_back(std::move(result));
    }

    trace.decision = all_passed ? Decision::approve : Decision::reject;
    return trace;
}

}  // namespace coalgen
