#include <causalfair/effects.hpp>

#include <cmath>

namespace causalfair {

namespace {

Given with_x(const SfmRoles& r, const std::string& xstate, const Given& rest) {
    Given g;
    g.reserve(rest.size() + 1);
    g.emplace_back(r.x, xstate);
    for (const auto& kv : rest) g.push_back(kv);
    return g;
}

Given zip_assignment(const std::vector<std::string>& names,
                     const JointDomain& dom, const std::vector<int>& codes) {
    Given g;
    g.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i)
        g.emplace_back(names[i], dom.vars[i].states[static_cast<std::size_t>(codes[i])]);
    return g;
}

} // namespace

double total_variation(const SfmEstimator& e, const Contrast& c) {
    const SfmRoles& r = e.roles();
    double p1 = e.cprob({{r.y, c.y}}, {{r.x, c.x1}});
    double p0 = e.cprob({{r.y, c.y}}, {{r.x, c.x0}});
    return p1 - p0;
}

double te_at_z(const SfmEstimator& e, const Contrast& c, const Given& z) {
    const SfmRoles& r = e.roles();
    double p1 = e.cprob({{r.y, c.y}}, with_x(r, c.x1, z));
    double p0 = e.cprob({{r.y, c.y}}, with_x(r, c.x0, z));
    return p1 - p0;
}

double total_effect(const SfmEstimator& e, const Contrast& c) {
    const SfmRoles& r = e.roles();
    if (r.z.empty()) return te_at_z(e, c, {});
    JointDomain dom = e.domain(r.z);
    auto pz = e.conditional_row(r.z, {});
    double acc = 0;
    std::size_t idx = 0;
    for (auto codes = dom.first();; ++idx) {
        acc += (*pz)[idx] * te_at_z(e, c, zip_assignment(r.z, dom, codes));
        if (!dom.next(codes)) break;
    }
    return acc;
}

double spurious_effect(const SfmEstimator& e, const Contrast& c) {
    return total_variation(e, c) - total_effect(e, c);
}

double de_at_z(const SfmEstimator& e, const Contrast& c, const Given& z) {
    const SfmRoles& r = e.roles();
    if (r.w.empty()) return te_at_z(e, c, z);
    JointDomain domw = e.domain(r.w);
    auto pw0 = e.conditional_row(r.w, with_x(r, c.x0, z));
    double acc = 0;
    std::size_t wi = 0;
    for (auto codes = domw.first();; ++wi) {
        Given zw = z;
        for (std::size_t i = 0; i < r.w.size(); ++i)
            zw.emplace_back(r.w[i], domw.vars[i].states[static_cast<std::size_t>(codes[i])]);
        double p1 = e.cprob({{r.y, c.y}}, with_x(r, c.x1, zw));
        double p0 = e.cprob({{r.y, c.y}}, with_x(r, c.x0, zw));
        acc += (*pw0)[wi] * (p1 - p0);
        if (!domw.next(codes)) break;
    }
    return acc;
}

double ie_at_z(const SfmEstimator& e, const Contrast& c, const Given& z) {
    const SfmRoles& r = e.roles();
    if (r.w.empty()) return 0.0;
    JointDomain domw = e.domain(r.w);
    auto pw1 = e.conditional_row(r.w, with_x(r, c.x1, z));
    auto pw0 = e.conditional_row(r.w, with_x(r, c.x0, z));
    double acc = 0;
    std::size_t wi = 0;
    for (auto codes = domw.first();; ++wi) {
        Given zw = z;
        for (std::size_t i = 0; i < r.w.size(); ++i)
            zw.emplace_back(r.w[i], domw.vars[i].states[static_cast<std::size_t>(codes[i])]);
        double py0 = e.cprob({{r.y, c.y}}, with_x(r, c.x0, zw));
        acc += py0 * ((*pw1)[wi] - (*pw0)[wi]);
        if (!domw.next(codes)) break;
    }
    return acc;
}

namespace {

double sum_over_z(const SfmEstimator& e, const Contrast& c,
                  double (*term)(const SfmEstimator&, const Contrast&, const Given&)) {
    const SfmRoles& r = e.roles();
    if (r.z.empty()) return term(e, c, {});
    JointDomain dom = e.domain(r.z);
    auto pz = e.conditional_row(r.z, {});
    double acc = 0;
    std::size_t idx = 0;
    for (auto codes = dom.first();; ++idx) {
        acc += (*pz)[idx] * term(e, c, zip_assignment(r.z, dom, codes));
        if (!dom.next(codes)) break;
    }
    return acc;
}

} // namespace

double direct_effect(const SfmEstimator& e, const Contrast& c) {
    return sum_over_z(e, c, de_at_z);
}

double indirect_effect(const SfmEstimator& e, const Contrast& c, bool reversed) {
    Contrast cc = c;
    if (reversed) std::swap(cc.x0, cc.x1);
    return sum_over_z(e, cc, ie_at_z);
}

EffectLedger effect_ledger(const SfmEstimator& e, const Contrast& c) {
    EffectLedger led;
    led.contrast = c;
    led.tv = total_variation(e, c);
    led.te = total_effect(e, c);
    led.se = led.tv - led.te;
    led.de = direct_effect(e, c);
    led.ie = indirect_effect(e, c, false);
    led.ie_reversed = indirect_effect(e, c, true);
    led.residual_tv_te_se = led.tv - led.te - led.se;
    led.residual_te_de_ie = led.te - (led.de - led.ie_reversed);
    led.n_rows = e.n_rows();
    led.alpha = e.alpha();
    led.roles_digest = e.roles_digest();
    if (std::abs(led.residual_te_de_ie) > kIdentityTol)
        throw IdentityViolation("TE = DE - IE_rev residual " +
                                std::to_string(led.residual_te_de_ie) +
                                " exceeds 1e-9; this indicates an implementation bug");
    for (double v : {led.tv, led.te, led.se, led.de, led.ie, led.ie_reversed}) {
        if (!(v >= -1.0 - 1e-12 && v <= 1.0 + 1e-12))
            throw IdentityViolation("effect value out of [-1, 1]");
    }
    return led;
}

} // namespace causalfair
