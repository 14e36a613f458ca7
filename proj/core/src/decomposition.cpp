#include <causalfair/decomposition.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace causalfair {

namespace {

void require_permutation(const std::vector<std::string>& order,
                         const std::vector<std::string>& base, const char* what) {
    if (order.size() != base.size())
        throw ConfigError(std::string(what) + ": order is not a permutation");
    std::set<std::string> a(order.begin(), order.end()), b(base.begin(), base.end());
    if (a != b || a.size() != order.size())
        throw ConfigError(std::string(what) + ": order is not a permutation");
}

/// Identification of P(y_{x0,(W^{<=i})_{x1},(W^{>i})_{x0}}) for the mediator
/// order given: for each z,
///   sum_w P(y|x0,w,z) prod_{j<=i} P(w^j|x1,w^{<j},z) prod_{j>i} P(w^j|x0,w^{<j},z),
/// marginalized with P(z). The chain conditionals follow the permuted order.
double nested_term(const SfmEstimator& e, const Contrast& c,
                   const std::vector<std::string>& order, std::size_t i) {
    const SfmRoles& r = e.roles();
    const std::size_t k = order.size();
    JointDomain domw = e.domain(order);

    auto term_at_z = [&](const Given& z) {
        double acc = 0;
        for (auto codes = domw.first();;) {
            Given zw = z;
            for (std::size_t j = 0; j < k; ++j)
                zw.emplace_back(order[j], domw.vars[j].states[static_cast<std::size_t>(codes[j])]);
            double py = e.cprob({{r.y, c.y}},
                                [&] {
                                    Given g;
                                    g.emplace_back(r.x, c.x0);
                                    for (const auto& kv : zw) g.push_back(kv);
                                    return g;
                                }());
            double chain = 1;
            for (std::size_t j = 0; j < k && chain != 0.0; ++j) {
                Given g;
                g.emplace_back(r.x, j < i ? c.x1 : c.x0);
                for (const auto& kv : z) g.push_back(kv);
                for (std::size_t l = 0; l < j; ++l)
                    g.emplace_back(order[l],
                                   domw.vars[l].states[static_cast<std::size_t>(codes[l])]);
                chain *= e.cprob(
                    {{order[j], domw.vars[j].states[static_cast<std::size_t>(codes[j])]}}, g);
            }
            acc += py * chain;
            if (!domw.next(codes)) break;
        }
        return acc;
    };

    if (r.z.empty()) return term_at_z({});
    JointDomain domz = e.domain(r.z);
    auto pz = e.conditional_row(r.z, {});
    double acc = 0;
    std::size_t zi = 0;
    for (auto codes = domz.first();; ++zi) {
        Given z;
        for (std::size_t j = 0; j < r.z.size(); ++j)
            z.emplace_back(r.z[j], domz.vars[j].states[static_cast<std::size_t>(codes[j])]);
        acc += (*pz)[zi] * term_at_z(z);
        if (!domz.next(codes)) break;
    }
    return acc;
}

} // namespace

MediatorDecomposition ie_by_mediator(const SfmEstimator& e, const Contrast& c,
                                     const std::vector<std::string>& order) {
    require_permutation(order, e.roles().w, "ie_by_mediator");
    MediatorDecomposition out;
    out.order = order;
    out.total_ie = indirect_effect(e, c, false);
    if (order.empty()) {
        out.residual = std::abs(out.total_ie);
        return out;
    }
    double prev = nested_term(e, c, order, 0);
    double sum = 0;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        double cur = nested_term(e, c, order, i);
        out.components.push_back(cur - prev);
        sum += cur - prev;
        prev = cur;
    }
    out.residual = std::abs(sum - out.total_ie);
    if (out.residual > kIdentityTol)
        throw IdentityViolation("mediator decomposition residual " +
                                std::to_string(out.residual) + " exceeds 1e-9");
    return out;
}

ConfounderDecomposition se_by_confounder(const SfmEstimator& e, const Contrast& c,
                                         const std::vector<std::string>& order) {
    require_permutation(order, e.roles().z, "se_by_confounder");
    const SfmRoles& r = e.roles();
    ConfounderDecomposition out;
    out.order = order;
    out.total_se = spurious_effect(e, c);
    if (order.empty()) {
        out.residual = std::abs(out.total_se);
        return out;
    }

    // A_i(x) = sum over the first i confounders of P(y|x, z^{<=i}) P(z^{<=i})
    auto partial_adjusted = [&](const std::string& xstate, std::size_t i) {
        if (i == 0) return e.cprob({{r.y, c.y}}, {{r.x, xstate}});
        std::vector<std::string> zs(order.begin(), order.begin() + static_cast<long>(i));
        JointDomain dom = e.domain(zs);
        auto pz = e.conditional_row(zs, {});
        double acc = 0;
        std::size_t idx = 0;
        for (auto codes = dom.first();; ++idx) {
            Given g;
            g.emplace_back(r.x, xstate);
            for (std::size_t j = 0; j < zs.size(); ++j)
                g.emplace_back(zs[j], dom.vars[j].states[static_cast<std::size_t>(codes[j])]);
            acc += (*pz)[idx] * e.cprob({{r.y, c.y}}, g);
            if (!dom.next(codes)) break;
        }
        return acc;
    };

    std::vector<double> a1(order.size() + 1), a0(order.size() + 1);
    for (std::size_t i = 0; i <= order.size(); ++i) {
        a1[i] = partial_adjusted(c.x1, i);
        a0[i] = partial_adjusted(c.x0, i);
    }
    double sum = 0;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        double comp = (a1[i - 1] - a1[i]) - (a0[i - 1] - a0[i]);
        out.components.push_back(comp);
        sum += comp;
    }
    out.residual = std::abs(sum - out.total_se);
    if (out.residual > kIdentityTol)
        throw IdentityViolation("confounder decomposition residual " +
                                std::to_string(out.residual) + " exceeds 1e-9");
    return out;
}

OrderingSensitivity ordering_sensitivity(const SfmEstimator& e, const Contrast& c,
                                         DecompositionKind kind,
                                         std::size_t enumerate_cap,
                                         std::size_t sample_count, std::uint64_t seed) {
    const auto& base =
        kind == DecompositionKind::Mediator ? e.roles().w : e.roles().z;
    OrderingSensitivity out;
    out.kind = kind;
    if (base.empty()) return out;

    auto evaluate = [&](const std::vector<std::string>& order) {
        std::vector<double> comps;
        if (kind == DecompositionKind::Mediator)
            comps = ie_by_mediator(e, c, order).components;
        else
            comps = se_by_confounder(e, c, order).components;
        for (std::size_t i = 0; i < order.size(); ++i) {
            auto [it, inserted] =
                out.min_max.emplace(order[i], std::make_pair(comps[i], comps[i]));
            if (!inserted) {
                it->second.first = std::min(it->second.first, comps[i]);
                it->second.second = std::max(it->second.second, comps[i]);
            }
        }
        ++out.orderings_evaluated;
    };

    std::uint64_t perms = 1;
    for (std::size_t i = 2; i <= base.size() && perms <= enumerate_cap; ++i) perms *= i;
    if (perms <= enumerate_cap) {
        std::vector<std::string> order(base.begin(), base.end());
        std::sort(order.begin(), order.end());
        do {
            evaluate(order);
        } while (std::next_permutation(order.begin(), order.end()));
    } else {
        out.sampled = true;
        std::mt19937_64 rng(seed ^ 0xabcdef12345ULL);
        std::vector<std::string> order(base.begin(), base.end());
        evaluate(order);                       // declared order always included
        for (std::size_t i = 1; i < sample_count; ++i) {
            std::shuffle(order.begin(), order.end(), rng);
            evaluate(order);
        }
    }
    for (const auto& [name, mm] : out.min_max)
        out.max_spread = std::max(out.max_spread, mm.second - mm.first);
    out.order_dependent = out.max_spread > 1e-6;
    return out;
}

std::vector<ZSpecificEffect> z_specific_effects(const SfmEstimator& e, const Contrast& c) {
    const SfmRoles& r = e.roles();
    std::vector<ZSpecificEffect> out;
    if (r.z.empty()) return out;
    JointDomain dom = e.domain(r.z);
    auto pz = e.conditional_row(r.z, {});
    Contrast rev = c;
    std::swap(rev.x0, rev.x1);
    std::size_t idx = 0;
    for (auto codes = dom.first();; ++idx) {
        Given z;
        Given count_filter;
        for (std::size_t j = 0; j < r.z.size(); ++j) {
            std::string state = dom.vars[j].states[static_cast<std::size_t>(codes[j])];
            z.emplace_back(r.z[j], state);
            count_filter.emplace_back(r.z[j], state);
        }
        ZSpecificEffect s;
        s.z_state = dom.labels(codes);
        s.te = te_at_z(e, c, z);
        s.de = de_at_z(e, c, z);
        s.ie = ie_at_z(e, c, z);
        s.ie_reversed = ie_at_z(e, rev, z);
        s.n_rows = e.raw_count(count_filter);
        s.p_z = (*pz)[idx];
        out.push_back(std::move(s));
        if (!dom.next(codes)) break;
    }
    return out;
}

std::vector<PairwiseEffect> x_pairwise_effects(const SfmEstimator& e, const std::string& y,
                                               const std::vector<std::string>& x0s,
                                               const std::vector<std::string>& x1s) {
    if (x0s.empty() || x1s.empty())
        throw ConfigError("pairwise effects need nonempty group state sets");
    for (const auto& a : x0s)
        for (const auto& b : x1s)
            if (a == b) throw ConfigError("pairwise groups must be disjoint");
    const SfmRoles& r = e.roles();
    std::vector<PairwiseEffect> out;
    for (const auto& a : x0s) {
        for (const auto& b : x1s) {
            PairwiseEffect p;
            p.x0 = a;
            p.x1 = b;
            p.ledger = effect_ledger(e, Contrast{a, b, y});
            p.n_x0 = e.raw_count({{r.x, a}});
            p.n_x1 = e.raw_count({{r.x, b}});
            out.push_back(std::move(p));
        }
    }
    return out;
}

} // namespace causalfair
