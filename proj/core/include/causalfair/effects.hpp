#pragma once

#include <causalfair/estimator.hpp>

#include <cstddef>
#include <string>

namespace causalfair {

inline constexpr double kIdentityTol = 1e-9;

/// Group change x0 -> x1 evaluated at target state y.
struct Contrast {
    std::string x0;
    std::string x1;
    std::string y;
};

struct EffectLedger {
    double tv = 0, te = 0, se = 0, de = 0, ie = 0, ie_reversed = 0;
    double residual_tv_te_se = 0;   // tv - te - se (definitional, exactly 0)
    double residual_te_de_ie = 0;   // te - (de - ie_reversed)
    Contrast contrast;
    std::size_t n_rows = 0;
    double alpha = 0;
    std::string roles_digest;
};

/// P(y|x1) - P(y|x0)
double total_variation(const SfmEstimator& e, const Contrast& c);

/// sum_z [P(y|x1,z) - P(y|x0,z)] P(z); equals TV when no confounders are declared
double total_effect(const SfmEstimator& e, const Contrast& c);

/// TV - TE from the same tables
double spurious_effect(const SfmEstimator& e, const Contrast& c);

/// sum_{z,w} [P(y|x1,z,w) - P(y|x0,z,w)] P(w|x0,z) P(z)
double direct_effect(const SfmEstimator& e, const Contrast& c);

/// sum_{z,w} P(y|x0,z,w) [P(w|x1,z) - P(w|x0,z)] P(z);
/// with `reversed` the contrast roles swap (IE_{x1,x0})
double indirect_effect(const SfmEstimator& e, const Contrast& c, bool reversed = false);

/// All five descriptors plus identity residuals. Fails closed (throws
/// IdentityViolation) if the TE = DE - IE_rev residual exceeds 1e-9.
EffectLedger effect_ledger(const SfmEstimator& e, const Contrast& c);

// Per-z-state inner terms shared with the decomposition module; z is a joint
// assignment over all declared confounders.
double te_at_z(const SfmEstimator& e, const Contrast& c, const Given& z);
double de_at_z(const SfmEstimator& e, const Contrast& c, const Given& z);
double ie_at_z(const SfmEstimator& e, const Contrast& c, const Given& z);

} // namespace causalfair
