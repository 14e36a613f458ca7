#pragma once

#include <causalfair/dataset.hpp>

#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace causalfair {

inline constexpr std::uint64_t kDefaultJointCap = 1'000'000;

/// One discrete variable of the estimator universe.
struct VarMeta {
    std::string name;
    std::vector<std::string> states;
    int card() const { return static_cast<int>(states.size()); }
};

/// label-addressed assignment: (column, state) pairs
using Given = std::vector<std::pair<std::string, std::string>>;

/// Cartesian product over the declared states of a variable list, enumerated
/// in deterministic lexicographic order (first variable most significant).
struct JointDomain {
    std::vector<VarMeta> vars;
    std::uint64_t size = 1;

    std::vector<int> first() const { return std::vector<int>(vars.size(), 0); }
    bool next(std::vector<int>& codes) const;
    std::vector<std::string> labels(const std::vector<int>& codes) const;
};

JointDomain make_joint_domain(std::vector<VarMeta> vars, std::uint64_t cap);

/// Smoothed conditional P(targets | given), filled lazily one conditioning
/// cell at a time. All rows derive from the owning estimator's joint.
struct ConditionalTable {
    std::vector<std::string> target_vars;
    std::vector<std::string> given_vars;
    std::vector<int> target_cards;
    std::vector<int> given_cards;
    double alpha = 0.0;
    std::unordered_map<std::uint64_t, std::shared_ptr<const std::vector<double>>> rows;
};

/// Exact joint distribution over named discrete variables (oracle output and
/// the estimator's infinite-data bridge).
struct ExactJoint {
    std::vector<VarMeta> cols;
    // (codes in cols order, probability); cells with zero mass may be omitted
    std::vector<std::pair<std::vector<int32_t>, double>> cells;
};

/// Laplace-smoothed discrete estimator over the SFM variable universe
/// (z1..zk, x, w1..wm, y). Internally a chain-factorized joint: each factor is
/// a smoothed conditional of one column given all preceding columns, and every
/// query is answered by exact inference on that joint, so the identification
/// formulae see one consistent distribution. Queries are cached; tables, once
/// built, are immutable.
class SfmEstimator {
public:
    static SfmEstimator fit(const Dataset& d, const SfmRoles& r, double alpha = 1.0,
                            std::uint64_t cap = kDefaultJointCap);
    /// Infinite-data view backed by exact probabilities; alpha forced to 0.
    static SfmEstimator fit_exact(const ExactJoint& joint, const SfmRoles& r,
                                  std::uint64_t cap = kDefaultJointCap);

    const std::vector<VarMeta>& universe() const { return vars_; }
    const VarMeta& var(const std::string& name) const;
    const SfmRoles& roles() const { return roles_; }
    double alpha() const { return alpha_; }
    std::uint64_t cap() const { return cap_; }
    std::size_t n_rows() const { return n_raw_rows_; }
    std::string roles_digest() const;

    /// P(targets | given) as a probability vector over the joint target states
    /// (targets[0] most significant). Sums to 1 within 1e-12.
    std::vector<double> conditional(const std::vector<std::string>& targets,
                                    const Given& given) const;
    /// Cached variant; the row is shared and immutable.
    std::shared_ptr<const std::vector<double>> conditional_row(
        const std::vector<std::string>& targets, const Given& given) const;

    /// P(target assignment | given assignment)
    double cprob(const Given& target, const Given& given) const;
    /// joint marginal probability of an assignment
    double probability(const Given& event) const;

    JointDomain domain(const std::vector<std::string>& names) const;

    /// Debug dump of one conditional table as JSON: targets, given, and one
    /// row {given_state, probs} per conditioning cell (cap-checked).
    std::string dump_table_json(const std::vector<std::string>& targets,
                                const std::vector<std::string>& given_vars) const;

    /// Unsmoothed weighted row count matching the assignment (all rows if empty).
    double raw_count(const Given& assignment) const;

    /// Conditioning cells answered from pseudo-counts alone (diagnostic).
    std::size_t uniform_fallback_cells() const;

private:
    SfmEstimator() = default;
    void init_strides();
    int pos_of(const std::string& name) const;

    struct FactorRow {
        std::vector<double> probs;   // smoothed, sums to 1
        double weight = 0;           // raw conditioning-cell weight
    };
    struct Factor {
        std::unordered_map<std::uint64_t, FactorRow> rows;
    };
    struct Cache {
        std::vector<std::unique_ptr<Factor>> factors;
        std::unordered_map<std::string, std::shared_ptr<ConditionalTable>> tables;
        std::unordered_map<std::string, double> counts;
        std::shared_mutex mutex;
        std::atomic<std::size_t> fallback_cells{0};
    };
    const Factor& factor(int pos) const;

    std::vector<double> evaluate(const std::vector<int>& target_pos,
                                 const std::vector<int>& given_pos,
                                 const std::vector<int>& given_states) const;

    SfmRoles roles_;
    double alpha_ = 1.0;
    std::uint64_t cap_ = kDefaultJointCap;
    std::size_t n_raw_rows_ = 0;

    std::vector<VarMeta> vars_;                    // universe, chain order
    std::vector<std::vector<int32_t>> codes_;      // column-major observations
    std::vector<double> weights_;                  // empty => unit weights
    std::vector<std::uint64_t> strides_;           // prefix-key strides

    std::unique_ptr<Cache> cache_;
};

} // namespace causalfair
