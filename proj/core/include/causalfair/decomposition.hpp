#pragma once

#include <causalfair/effects.hpp>

#include <map>
#include <string>
#include <vector>

namespace causalfair {

/// Telescoping attribution of the indirect effect to individual mediators.
struct MediatorDecomposition {
    std::vector<std::string> order;
    std::vector<double> components;   // IE^{W^i}, aligned with order
    double total_ie = 0;
    double residual = 0;              // |sum(components) - total_ie|
};

struct ConfounderDecomposition {
    std::vector<std::string> order;
    std::vector<double> components;   // SE^{Z^i}
    double total_se = 0;
    double residual = 0;
};

MediatorDecomposition ie_by_mediator(const SfmEstimator& e, const Contrast& c,
                                     const std::vector<std::string>& order);

ConfounderDecomposition se_by_confounder(const SfmEstimator& e, const Contrast& c,
                                         const std::vector<std::string>& order);

enum class DecompositionKind { Mediator, Confounder };

struct OrderingSensitivity {
    DecompositionKind kind = DecompositionKind::Mediator;
    std::size_t orderings_evaluated = 0;
    bool sampled = false;                                     // permutations beyond cap
    std::map<std::string, std::pair<double, double>> min_max; // per component
    double max_spread = 0;
    bool order_dependent = false;                             // spread > 1e-6
};

OrderingSensitivity ordering_sensitivity(const SfmEstimator& e, const Contrast& c,
                                         DecompositionKind kind,
                                         std::size_t enumerate_cap = 5040,
                                         std::size_t sample_count = 100,
                                         std::uint64_t seed = 0);

struct ZSpecificEffect {
    std::vector<std::string> z_state;   // one label per confounder
    double te = 0, de = 0, ie = 0, ie_reversed = 0;
    double n_rows = 0;                  // raw rows in this z cell
    double p_z = 0;
};

/// Per-joint-z slices of TE/DE/IE (outer sum removed, P(z) dropped);
/// weighted recombination reproduces the aggregate effects.
std::vector<ZSpecificEffect> z_specific_effects(const SfmEstimator& e, const Contrast& c);

struct PairwiseEffect {
    std::string x0, x1;
    EffectLedger ledger;
    double n_x0 = 0, n_x1 = 0;          // marginal counts for weighting
};

std::vector<PairwiseEffect> x_pairwise_effects(const SfmEstimator& e, const std::string& y,
                                               const std::vector<std::string>& x0s,
                                               const std::vector<std::string>& x1s);

} // namespace causalfair
