#pragma once

#include <causalfair/effects.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalfair {

enum class EffectKind { Tv, Te, Se, De, Ie };

std::string to_string(EffectKind k);

/// Utility transform T over the states of Y; total and finite.
struct UtilitySpec {
    std::map<std::string, double> values;

    /// T(label) = numeric value of the label (requires numeric-parsable states).
    static UtilitySpec identity_numeric(const std::vector<std::string>& states);
    void validate(const std::vector<std::string>& states) const;
};

/// effect value at one target state y
double effect_at(const SfmEstimator& e, const std::string& x0, const std::string& x1,
                 EffectKind kind, const std::string& y);

/// map y -> effect(y); values sum to 0
std::map<std::string, double> per_state_effects(const SfmEstimator& e,
                                                const std::string& x0,
                                                const std::string& x1, EffectKind kind);

/// sum_y T(y) * effect(y): the expectation-aggregated signed effect
double expected_effect(const SfmEstimator& e, const std::string& x0,
                       const std::string& x1, EffectKind kind, const UtilitySpec& u);

enum class GroupWeighting { Arithmetic, MarginalWeighted };

struct GroupPairDetail {
    std::string x0, x1;
    double effect = 0;
    double n_x0 = 0, n_x1 = 0;
};

struct GroupAverage {
    double value = 0;
    GroupWeighting weighting = GroupWeighting::Arithmetic;
    std::vector<GroupPairDetail> pairs;   // for cancellation inspection
};

GroupAverage group_average_effect(const SfmEstimator& e,
                                  const std::vector<std::string>& x0s,
                                  const std::vector<std::string>& x1s, EffectKind kind,
                                  const std::string& y, GroupWeighting weighting);

struct StepwiseStep {
    std::string from, to;
    double tv = 0, te = 0, se = 0;
    double de = 0, ie = 0;     // emitted but non-additive in general
    double n_rows = 0;         // rows with X in {from, to}
};

struct StepwiseDecomposition {
    std::vector<std::string> ordered_states;
    std::vector<StepwiseStep> steps;
    double residual_tv = 0, residual_te = 0, residual_se = 0;  // telescoping checks
    bool de_ie_additive = false;   // flag: per-step DE/IE only telescope for linear models
};

StepwiseDecomposition stepwise_decompose(const SfmEstimator& e,
                                         const std::vector<std::string>& ordered_states,
                                         const std::string& y);

struct ThresholdCurve {
    std::vector<double> grid;          // strictly ascending thresholds
    std::vector<double> tv, te, de, ie, se;   // ie in reverse-baseline form
    std::optional<double> selected_threshold;
    std::map<EffectKind, double> argmax;      // threshold maximizing each effect
};

/// Binarize numeric Y as [Y >= t] for each grid threshold and trace the
/// descriptors. Empty grid means the sorted unique observed values of Y.
ThresholdCurve threshold_sweep(const Dataset& d, const SfmRoles& r,
                               std::vector<double> grid, double alpha = 1.0,
                               std::uint64_t cap = kDefaultJointCap);

} // namespace causalfair
