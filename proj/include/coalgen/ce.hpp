#pragma once

// Controlled English serialization. Two sentence families are emitted:
//
//   conceptualise a ~ mission ~ M that
//     has the value 'S' as ~ high level stage ~ and
//     ~ is executed by ~ the coalition C.
//
//   there is a mission named 'person of interest tracking' that
//     has the value 'plan' as high level stage and
//     is executed by the coalition 'US/UK/KISH'.
//
// Continuation lines are indented two spaces and joined by ` and`; a
// zero-clause sentence collapses to a single line ending in '.'. The
// article is 'an' before a vowel. Names may not contain single quotes:
// there is no escape syntax, such values are rejected.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "coalgen/detail/text.hpp"
#include "coalgen/errors.hpp"

namespace coalgen {

struct ValueClause {
    std::string value;
    std::string property;

    bool operator==(const ValueClause&) const = default;
};

struct RelationClause {
    std::string relation;
    std::string concept_name;
    std::string target;

    bool operator==(const RelationClause&) const = default;
};

using Clause = std::variant<ValueClause, RelationClause>;

struct FactSentence {
    std::string concept_name;
    std::string name;
    std::vector<Clause> clauses;

    bool operator==(const FactSentence&) const = default;
};

// Concept-side mirror of the two clause shapes: properties carry a
// placeholder variable, relations point at another concept's variable.
struct ConceptValue {
    std::string var;
    std::string property;
};

struct ConceptRelation {
    std::string relation;
    std::string concept_name;
    std::string var;
};

using ConceptClause = std::variant<ConceptValue, ConceptRelation>;

struct ConceptDefinition {
    std::string name;
    std::string var;
    std::vector<ConceptClause> clauses;
};

namespace detail {

inline std::string article(std::string_view noun) {
    return starts_with_vowel(noun) ? "an" : "a";
}

// Structural fields (concept names, properties, relations, variables) carry
// the grammar's framing, so the framing characters are banned outright.
inline void check_structural(const char* what, const std::string& s) {
    if (s.empty()) throw SerializationError(std::string(what) + " must be non-empty");
    if (s.find_first_of("'~\n") != std::string::npos)
        throw SerializationError(std::string(what) + " may not contain quotes, tildes or "
                                                     "newlines: " +
                                 s);
}

// Quoted fields (instance names, values, relation targets) only need to keep
// the quoting and line structure intact.
inline void check_quoted(const char* what, const std::string& s) {
    if (s.find('\'') != std::string::npos)
        throw SerializationError(std::string(what) + " contains a single quote: " + s);
    if (s.find('\n') != std::string::npos)
        throw SerializationError(std::string(what) + " contains a newline: " + s);
}

}  // namespace detail

inline std::string emit_concept(const ConceptDefinition& definition) {
    detail::check_structural("concept name", definition.name);
    detail::check_structural("concept variable", definition.var);

    std::string text = "conceptualise " + detail::article(definition.name) + " ~ " + definition.name +
                       " ~ " + definition.var;
    if (definition.clauses.empty()) return text + ".";

    text += " that\n";
    for (std::size_t i = 0; i < definition.clauses.size(); ++i) {
        if (const auto* value = std::get_if<ConceptValue>(&definition.clauses[i])) {
            detail::check_structural("placeholder variable", value->var);
            detail::check_structural("property name", value->property);
            text += "  has the value '" + value->var + "' as ~ " + value->property + " ~";
        } else {
            const auto& relation = std::get<ConceptRelation>(definition.clauses[i]);
            detail::check_structural("relation name", relation.relation);
            detail::check_structural("related concept", relation.concept_name);
            detail::check_structural("relation variable", relation.var);
            text += "  ~ " + relation.relation + " ~ the " + relation.concept_name + " " +
                    relation.var;
        }
        text += i + 1 < definition.clauses.size() ? " and\n" : ".";
    }
    return text;
}

inline std::string emit_fact(const FactSentence& fact) {
    detail::check_structural("fact concept", fact.concept_name);
    if (fact.name.empty()) throw SerializationError("fact name must be non-empty");
    detail::check_quoted("fact name", fact.name);

    std::string text = "there is " + detail::article(fact.concept_name) + " " + fact.concept_name +
                       " named '" + fact.name + "'";
    if (fact.clauses.empty()) return text + ".";

    text += " that\n";
    for (std::size_t i = 0; i < fact.clauses.size(); ++i) {
        if (const auto* value = std::get_if<ValueClause>(&fact.clauses[i])) {
            detail::check_quoted("clause value", value->value);
            detail::check_structural("property name", value->property);
            text += "  has the value '" + value->value + "' as " + value->property;
        } else {
            const auto& relation = std::get<RelationClause>(fact.clauses[i]);
            detail::check_structural("relation name", relation.relation);
            detail::check_structural("related concept", relation.concept_name);
            detail::check_quoted("relation target", relation.target);
            text += "  " + relation.relation + " the " + relation.concept_name + " '" +
                    relation.target + "'";
        }
        text += i + 1 < fact.clauses.size() ? " and\n" : ".";
    }
    return text;
}

// --- validation --------------------------------------------------------

struct SentenceValidation {
    bool ok = true;
    std::size_t position = 0;  // byte offset of the first problem
    std::string reason;
};

namespace detail {

inline SentenceValidation invalid(std::size_t position, std::string reason) {
    return {false, position, std::move(reason)};
}

// Line splitter preserving each line's byte offset.
struct Line {
    std::string_view text;
    std::size_t offset;
};

inline std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t begin = 0;
    for (;;) {
        std::size_t nl = text.find('\n', begin);
        if (nl == std::string_view::npos) {
            lines.push_back({text.substr(begin), begin});
            return lines;
        }
        lines.push_back({text.substr(begin, nl - begin), begin});
        begin = nl + 1;
    }
}

inline bool valid_token(std::string_view s) {
    return !s.empty() && s.find(' ') == std::string_view::npos;
}

// header without its trailing " that" / "."; returns the concept noun
inline SentenceValidation scan_header(const Line& line, bool concept_form,
                                      std::string_view* noun_out) {
    std::string_view s = line.text;
    std::size_t base = line.offset;

    if (concept_form) {
        std::string_view rest = s.substr(14);  // past "conceptualise "
        std::size_t first = rest.find(" ~ ");
        if (first == std::string_view::npos)
            return invalid(base + 14, "expected \" ~ \" opening the concept name");
        std::string_view art = rest.substr(0, first);
        std::size_t second = rest.find(" ~ ", first + 3);
        if (second == std::string_view::npos)
            return invalid(base + 14 + first + 3, "expected \" ~ \" closing the concept name");
        std::string_view noun = rest.substr(first + 3, second - first - 3);
        if (noun.empty()) return invalid(base + 14 + first + 3, "empty concept name");
        if (art != article(noun))
            return invalid(base + 14, "article does not match the concept name");
        std::string_view var = rest.substr(second + 3);
        if (!valid_token(var)) return invalid(base + 14 + second + 3, "bad concept variable");
        *noun_out = noun;
        return {};
    }

    std::string_view rest = s.substr(9);  // past "there is "
    std::size_t space = rest.find(' ');
    if (space == std::string_view::npos) return invalid(base + 9, "expected an article");
    std::string_view art = rest.substr(0, space);
    std::size_t named = rest.find(" named '", space);
    if (named == std::string_view::npos)
        return invalid(base + 9 + space, "expected \" named '\" after the concept name");
    std::string_view noun = rest.substr(space + 1, named - space - 1);
    if (noun.empty()) return invalid(base + 9 + space + 1, "empty concept name");
    if (art != article(noun)) return invalid(base + 9, "article does not match the concept name");
    std::string_view name = rest.substr(named + 8);
    if (name.size() < 2 || name.back() != '\'')
        return invalid(base + 9 + named + 8, "expected a quoted instance name");
    name.remove_suffix(1);
    if (name.empty() || name.find('\'') != std::string_view::npos)
        return invalid(base + 9 + named + 8, "bad instance name");
    *noun_out = noun;
    return {};
}

inline SentenceValidation scan_concept_clause(const Line& line, std::string_view body) {
    std::size_t base = line.offset + 2;

    if (body.substr(0, 15) == "has the value '") {
        std::string_view rest = body.substr(15);
        std::size_t quote = rest.find('\'');
        if (quote == std::string_view::npos || quote == 0)
            return invalid(base + 15, "bad placeholder variable");
        rest = rest.substr(quote + 1);
        if (rest.substr(0, 6) != " as ~ ")
            return invalid(base + 15 + quote + 1, "expected \" as ~ \" before the property");
        std::string_view property = rest.substr(6);
        if (property.size() < 3 || property.substr(property.size() - 2) != " ~")
            return invalid(base + 15 + quote + 7, "property must end with \" ~\"");
        return {};
    }

    if (body.substr(0, 2) != "~ ") return invalid(base, "clause must open a value or relation");
    std::size_t the = body.find(" ~ the ", 2);
    if (the == std::string_view::npos || the == 2)
        return invalid(base + 2, "expected \" ~ the \" after the relation name");
    std::string_view rest = body.substr(the + 7);
    std::size_t last_space = rest.rfind(' ');
    if (last_space == std::string_view::npos || last_space == 0)
        return invalid(base + the + 7, "expected a concept name and a variable");
    if (!valid_token(rest.substr(last_space + 1)))
        return invalid(base + the + 7 + last_space + 1, "bad relation variable");
    return {};
}

inline SentenceValidation scan_fact_clause(const Line& line, std::string_view body) {
    std::size_t base = line.offset + 2;

    if (body.substr(0, 15) == "has the value '") {
        std::string_view rest = body.substr(15);
        std::size_t quote = rest.find('\'');
        if (quote == std::string_view::npos)
            return invalid(base + 15, "unterminated value");
        rest = rest.substr(quote + 1);
        if (rest.substr(0, 4) != " as ")
            return invalid(base + 15 + quote + 1, "expected \" as \" before the property");
        if (rest.size() < 5) return invalid(base + 15 + quote + 5, "empty property name");
        return {};
    }

    std::size_t the = body.find(" the ");
    if (the == std::string_view::npos || the == 0)
        return invalid(base, "expected \"<relation> the <concept> '<name>'\"");
    std::string_view rest = body.substr(the + 5);
    std::size_t quote = rest.find(" '");
    if (quote == std::string_view::npos || quote == 0)
        return invalid(base + the + 5, "expected a quoted relation target");
    std::string_view target = rest.substr(quote + 2);
    if (target.size() < 2 || target.back() != '\'')
        return invalid(base + the + 5 + quote + 2, "unterminated relation target");
    target.remove_suffix(1);
    if (target.find('\'') != std::string_view::npos)
        return invalid(base + the + 5 + quote + 2, "quote inside a relation target");
    return {};
}

inline SentenceValidation scan_sentence(std::string_view text) {
    bool concept_form = text.substr(0, 14) == "conceptualise ";
    if (!concept_form && text.substr(0, 9) != "there is ")
        return invalid(0, "sentence must start with \"conceptualise\" or \"there is\"");

    auto lines = split_lines(text);
    std::string_view noun;

    // single-line form: header directly terminated by '.'
    if (lines.size() == 1) {
        std::string_view only = lines[0].text;
        if (only.empty() || only.back() != '.')
            return invalid(text.size(), "expected '.' at end of sentence");
        only.remove_suffix(1);
        return scan_header({only, 0}, concept_form, &noun);
    }

    std::string_view head = lines[0].text;
    if (head.size() < 5 || head.substr(head.size() - 5) != " that")
        return invalid(lines[0].offset + head.size(), "expected \" that\" after the header");
    head.remove_suffix(5);
    if (auto r = scan_header({head, 0}, concept_form, &noun); !r.ok) return r;

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const Line& line = lines[i];
        bool last = i + 1 == lines.size();
        std::string_view body = line.text;

        if (body.substr(0, 2) != "  ")
            return invalid(line.offset, "clause lines are indented two spaces");
        body = body.substr(2);

        if (last) {
            if (body.empty() || body.back() != '.')
                return invalid(line.offset + line.text.size(), "expected '.' at end of sentence");
            body.remove_suffix(1);
        } else {
            if (body.size() < 4 || body.substr(body.size() - 4) != " and")
                return invalid(line.offset + line.text.size(),
                               "expected \" and\" joining clauses");
            body.remove_suffix(4);
        }

        auto r = concept_form ? scan_concept_clause(line, body) : scan_fact_clause(line, body);
        if (!r.ok) return r;
    }
    return {};
}

}  // namespace detail

// Accepts exactly the grammar produced by emit_concept and emit_fact.
// Returns rather than throws: the caller decides what a violation means.
inline SentenceValidation validate_sentence(std::string_view text) {
    if (text.empty()) return detail::invalid(0, "empty sentence");
    return detail::scan_sentence(text);
}

}  // namespace coalgen
