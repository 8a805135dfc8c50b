#pragma once

// Randomness-free enumeration core: evenly spaced condition values, the
// Cartesian combination of those values into condition instances (with a
// weighted-mean severity), the full autonomy-score enumeration, and the
// mission-instance expansion over every configured axis.
//
// Identical inputs produce identical outputs, byte for byte. Enumeration
// order is declaration-lexicographic everywhere: the first axis varies
// slowest, and ids are dense 1..N in that order.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "coalgen/domain.hpp"
#include "coalgen/errors.hpp"

namespace coalgen {

// Inputs to the enumeration pass. List order is the canonical enumeration
// order (declaration order).
struct GenerationPlan {
    std::vector<EnvironmentalConditionSpec> condition_specs;
    int granularity = 5;  // evenly spaced values per condition axis
    std::vector<std::string> start_times;
    std::vector<Coalition> coalitions;
    std::vector<MissionEnvironment> environments;
    std::vector<Mission> missions;

    void validate() const {
        if (granularity < 2)
            throw ConfigError("granularity must be >= 2 (value spacing is undefined below that)");
        if (condition_specs.empty()) throw ConfigError("at least one condition must be configured");
        std::unordered_set<std::string> names;
        for (const auto& spec : condition_specs) {
            spec.validate();
            if (!names.insert(spec.name).second)
                throw ConfigError("condition '" + spec.name + "' is configured twice");
        }
        if (start_times.empty()) throw ConfigError("at least one start time must be configured");
        for (const auto& t : start_times) detail::parse_wallclock(t);
        if (coalitions.empty()) throw ConfigError("at least one coalition must be configured");
        if (environments.empty()) throw ConfigError("at least one environment must be configured");
        if (missions.empty()) throw ConfigError("at least one mission must be configured");
        for (const auto& c : coalitions) c.validate();
        for (const auto& e : environments) e.validate();
        for (const auto& m : missions) m.validate();
    }
};

// `granularity` evenly spaced values across [lower, upper]; both endpoints
// exact.
inline std::vector<double> generate_condition_values(const EnvironmentalConditionSpec& spec,
                                                     int granularity) {
    if (granularity < 2)
        throw ConfigError("granularity must be >= 2 (value spacing is undefined below that)");
    spec.validate();
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(granularity));
    const double step = (spec.upper - spec.lower) / static_cast<double>(granularity - 1);
    for (int i = 0; i < granularity; ++i) {
        values.push_back(i == granularity - 1 ? spec.upper
                                              : spec.lower + static_cast<double>(i) * step);
    }
    return values;
}

// Odometer over axis sizes. Decodes flat index k into one index per axis,
// first axis slowest-varying; visiting k = 0..total()-1 yields the full
// product in lexicographic order.
class CartesianIndexer {
public:
    explicit CartesianIndexer(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
        total_ = 1;
        for (std::size_t s : sizes_) {
            if (s == 0) throw ConfigError("combination axis with no values");
            if (total_ > std::numeric_limits<std::size_t>::max() / s)
                throw ConfigError("combination space too large to enumerate");
            total_ *= s;
        }
    }

    std::size_t total() const { return total_; }
    std::size_t axes() const { return sizes_.size(); }

    std::vector<std::size_t> at(std::size_t flat) const {
        std::vector<std::size_t> idx(sizes_.size());
        for (std::size_t axis = sizes_.size(); axis-- > 0;) {
            idx[axis] = flat % sizes_[axis];
            flat /= sizes_[axis];
        }
        return idx;
    }

    // f(flat, indices) for every combination, in order.
    template <typename F>
    void for_each(F&& f) const {
        std::vector<std::size_t> idx(sizes_.size(), 0);
        for (std::size_t flat = 0; flat < total_; ++flat) {
            f(flat, static_cast<const std::vector<std::size_t>&>(idx));
            for (std::size_t axis = sizes_.size(); axis-- > 0;) {
                if (++idx[axis] < sizes_[axis]) break;
                idx[axis] = 0;
            }
        }
    }

private:
    std::vector<std::size_t> sizes_;
    std::size_t total_ = 0;
};

// Materialized Cartesian product of the given value lists, lexicographic
// over list positions.
template <typename T>
std::vector<std::vector<T>> cartesian_combinations(const std::vector<std::vector<T>>& value_lists) {
    std::vector<std::size_t> sizes;
    sizes.reserve(value_lists.size());
    for (const auto& list : value_lists) sizes.push_back(list.size());
    CartesianIndexer indexer(std::move(sizes));

    std::vector<std::vector<T>> out;
    out.reserve(indexer.total());
    indexer.for_each([&](std::size_t, const std::vector<std::size_t>& idx) {
        std::vector<T> tuple;
        tuple.reserve(idx.size());
        for (std::size_t axis = 0; axis < idx.size(); ++axis)
            tuple.push_back(value_lists[axis][idx[axis]]);
        out.push_back(std::move(tuple));
    });
    return out;
}

// Weighted mean of the min-max-normalized condition values, in [0,1].
// Weights are normalized by their sum, so severity is scale-invariant in
// the weights.
inline double compute_severity(const std::vector<std::pair<std::string, double>>& values,
                               const std::vector<EnvironmentalConditionSpec>& specs) {
    double weight_sum = 0.0;
    double acc = 0.0;
    std::size_t matched = 0;
    for (const auto& spec : specs) {
        const std::pair<std::string, double>* entry = nullptr;
        for (const auto& v : values) {
            if (v.first == spec.name) {
                entry = &v;
                break;
            }
        }
        if (!entry) throw IntegrityError("no value supplied for condition '" + spec.name + "'");
        ++matched;
        if (entry->second < spec.lower || entry->second > spec.upper)
            throw IntegrityError("condition '" + spec.name + "' value outside its bounds");
        weight_sum += spec.weight;
        // Normalize before weighting: bound values then contribute exactly 0
        // or exactly the weight, so the extremes land on 0 and 1 without
        // rounding residue.
        acc += spec.weight * ((entry->second - spec.lower) / (spec.upper - spec.lower));
    }
    if (matched != values.size())
        throw IntegrityError("value supplied for a condition that is not configured");
    if (weight_sum <= 0.0)
        throw ConfigError("severity is undefined when every condition weight is zero");
    return acc / weight_sum;
}

// One condition instance per combination of per-condition values;
// granularity^k instances, ids "eci_1".."eci_N" in enumeration order.
inline std::vector<EnvironmentalConditionInstance> build_condition_instances(
    const GenerationPlan& plan) {
    plan.validate();
    std::vector<std::vector<double>> value_lists;
    value_lists.reserve(plan.condition_specs.size());
    std::vector<std::size_t> sizes;
    for (const auto& spec : plan.condition_specs) {
        value_lists.push_back(generate_condition_values(spec, plan.granularity));
        sizes.push_back(value_lists.back().size());
    }
    CartesianIndexer indexer(std::move(sizes));

    std::vector<EnvironmentalConditionInstance> instances;
    instances.reserve(indexer.total());
    indexer.for_each([&](std::size_t flat, const std::vector<std::size_t>& idx) {
        EnvironmentalConditionInstance eci;
        eci.id = "eci_" + std::to_string(flat + 1);
        eci.values.reserve(idx.size());
        for (std::size_t axis = 0; axis < idx.size(); ++axis)
            eci.values.emplace_back(plan.condition_specs[axis].name, value_lists[axis][idx[axis]]);
        eci.severity = compute_severity(eci.values, plan.condition_specs);
        instances.push_back(std::move(eci));
    });
    return instances;
}

// All 64 graded (mc, ec, hi) combinations in lexicographic order, then the
// independent level 10. 65 entries total.
inline std::vector<AlfusScore> enumerate_alfus_scores() {
    std::vector<AlfusScore> scores;
    scores.reserve(65);
    for (int mc = 0; mc <= 3; ++mc)
        for (int ec = 0; ec <= 3; ++ec)
            for (int hi = 0; hi <= 3; ++hi) scores.push_back(AlfusScore::graded(mc, ec, hi));
    scores.push_back(AlfusScore::level_10());
    return scores;
}

// One instance per (coalition x environment x mission x condition instance).
// Start times do not add an axis: instance k (1-based) takes
// start_times[(k-1) mod |start_times|].
inline std::vector<MissionInstance> enumerate_mission_instances(
    const GenerationPlan& plan, const std::vector<EnvironmentalConditionInstance>& ecis) {
    plan.validate();
    if (ecis.empty()) throw ConfigError("no condition instances to combine");
    CartesianIndexer indexer(
        {plan.coalitions.size(), plan.environments.size(), plan.missions.size(), ecis.size()});

    std::vector<MissionInstance> instances;
    instances.reserve(indexer.total());
    indexer.for_each([&](std::size_t flat, const std::vector<std::size_t>& idx) {
        MissionInstance mi;
        mi.id = "mi_" + std::to_string(flat + 1);
        mi.coalition = plan.coalitions[idx[0]].name;
        mi.environment = plan.environments[idx[1]].name;
        mi.mission = plan.missions[idx[2]].name;
        mi.eci = ecis[idx[3]].id;
        mi.start_time = plan.start_times[flat % plan.start_times.size()];
        instances.push_back(std::move(mi));
    });
    return instances;
}

// The randomness-free portion of a world.
struct FactFragment {
    std::vector<EnvironmentalConditionInstance> condition_instances;
    std::vector<AlfusScore> alfus_scores;
    std::vector<MissionInstance> mission_instances;

    bool operator==(const FactFragment&) const = default;
};

inline FactFragment run_fact_generation(const GenerationPlan& plan) {
    FactFragment fragment;
    fragment.condition_instances = build_condition_instances(plan);
    fragment.alfus_scores = enumerate_alfus_scores();
    fragment.mission_instances = enumerate_mission_instances(plan, fragment.condition_instances);
    return fragment;
}

}  // namespace coalgen
