#pragma once

#include <causalfair/dataset.hpp>
#include <causalfair/effects.hpp>
#include <causalfair/estimator.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalfair {

struct ExoVar {
    std::string name;
    std::vector<std::string> states;
    std::vector<double> probs;   // normalized over states
};

struct EndoVar {
    std::string name;
    std::vector<std::string> states;
    /// Parents in declared order; may mix endogenous and exogenous names.
    std::vector<std::string> parents;
    /// Structural table: state index of this variable per parent-state tuple,
    /// parents enumerated lexicographically (first parent most significant).
    std::vector<int32_t> table;
};

struct ScmRoles {
    std::string x, y;
    std::vector<std::string> z, w;   // topological order
    std::string x0, x1;              // contrast states of X
    std::optional<std::string> y_target;
};

/// Fully specified discrete structural causal model.
struct ScmSpec {
    std::vector<ExoVar> exogenous;
    std::vector<EndoVar> endogenous;
    ScmRoles roles;

    void validate() const;   // acyclicity, table totality, SFM compatibility
    std::string to_json() const;
    static ScmSpec from_json(const std::string& text);
};

/// One intervention entry of a nested counterfactual: the variable is pinned
/// either to a constant state or to the value it attains naturally under the
/// inner intervention (one level of nesting, e.g. W_{x0}).
struct NestedValue {
    std::string var;
    std::optional<std::string> constant;
    std::optional<std::map<std::string, std::string>> natural_under;
};

struct NestedQuery {
    std::string outcome_var;
    std::string outcome_state;
    std::vector<NestedValue> interventions;
};

/// Compiled SCM: exact observational distribution, nested counterfactuals by
/// exogenous enumeration, seeded sampling.
class Scm {
public:
    explicit Scm(ScmSpec spec);

    const ScmSpec& spec() const { return spec_; }

    /// P(V) by enumerating the exogenous joint and propagating the structural
    /// equations in topological order. Cells emitted in lexicographic order.
    ExactJoint exact_observational(std::uint64_t cap = kDefaultJointCap) const;

    double counterfactual_prob(const NestedQuery& q,
                               std::uint64_t cap = kDefaultJointCap) const;

    /// P(outcome under intervention AND factual assignment holds naturally):
    /// the consistency-axiom test hook.
    double counterfactual_and_factual_prob(const NestedQuery& q, const Given& factual,
                                           std::uint64_t cap = kDefaultJointCap) const;

    /// TV from P(V); TE/DE/IE from semantic counterfactual evaluation.
    EffectLedger ground_truth_ledger(const Contrast& c,
                                     std::uint64_t cap = kDefaultJointCap) const;
    EffectLedger ground_truth_ledger(std::uint64_t cap = kDefaultJointCap) const;

    /// n i.i.d. endogenous rows, deterministic per seed (counter-based row rng).
    Dataset sample(std::size_t n, std::uint64_t seed) const;

    SfmRoles dataset_roles() const;   // roles usable with sampled datasets

private:
    friend struct ScmEnumerator;
    ScmSpec spec_;

    // compiled layout
    std::vector<int> topo_;                         // endo indices in topo order
    struct ParentRef { bool exo; int idx; int card; };
    std::vector<std::vector<ParentRef>> parents_;   // per endo var, declared order
    std::vector<int> endo_card_, exo_card_;
    std::uint64_t exo_joint_size_ = 1;

    void propagate(const std::vector<int>& u, const std::map<int, int>& interventions,
                   std::vector<int>& v) const;
    int endo_index(const std::string& name) const;
    int exo_index(const std::string& name) const;
};

struct RandomScmConfig {
    int n_confounders = -1;   // -1: seeded draw in 0..3
    int n_mediators = -1;     // -1: seeded draw in 0..3
    int max_card = 4;         // per-variable states, >= 2
    int y_card = 0;           // 0: seeded draw in 2..3
    enum class Confounding { Markovian, SharedXZ, Random };
    Confounding confounding = Confounding::Random;
};

/// Seeded random SFM-compatible Markovian spec (optionally with one shared
/// X-Z exogenous). Structural tables guarantee full joint support.
ScmSpec random_sfm_scm(std::uint64_t seed, const RandomScmConfig& cfg = {});

/// Two-mediator construction with W1, W2 conditionally independent given X, Z.
/// interaction=false: outcome table additive in the mediator contributions;
/// interaction=true: multiplicative outcome table (the additivity premise fails).
ScmSpec independent_mediators_construction(std::uint64_t seed, bool interaction);

} // namespace causalfair
