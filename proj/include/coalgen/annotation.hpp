#pragma once

// Applies a rule set to generated requests: each request's context is
// assembled from the world, evaluated, and the resulting decision written
// back. Traces are kept alongside for export and auditing.

#include <string>
#include <utility>
#include <vector>

#include "coalgen/asset_engine.hpp"
#include "coalgen/domain.hpp"
#include "coalgen/errors.hpp"
#include "coalgen/policy.hpp"

namespace coalgen {

struct AnnotationResult {
    std::vector<AssetRequest> requests;  // input order, decisions set
    std::vector<DecisionTrace> traces;   // parallel to requests
};

inline AnnotationResult annotate_requests(const std::vector<AssetRequest>& requests,
                                          const RuleSet& rules, const World& world,
                                          EvaluationMode mode = EvaluationMode::strict) {
    AnnotationResult result;
    result.requests.reserve(requests.size());
    result.traces.reserve(requests.size());

    detail::WorldIndex index(world);
    for (const auto& request : requests) {
        DecisionTrace trace;
        try {
            trace = evaluate(rules, assemble_context(request, index), mode);
        } catch (const EvalError& e) {
            throw EvalError("request '" + request.id + "': " + e.what());
        }
        AssetRequest annotated = request;
        annotated.decision = trace.decision;
        result.requests.push_back(std::move(annotated));
        result.traces.push_back(std::move(trace));
    }
    return result;
}

}  // namespace coalgen
