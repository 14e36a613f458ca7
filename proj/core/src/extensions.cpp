#include <causalfair/extensions.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace causalfair {

std::string to_string(EffectKind k) {
    switch (k) {
        case EffectKind::Tv: return "tv";
        case EffectKind::Te: return "te";
        case EffectKind::Se: return "se";
        case EffectKind::De: return "de";
        case EffectKind::Ie: return "ie";
    }
    return "tv";
}

UtilitySpec UtilitySpec::identity_numeric(const std::vector<std::string>& states) {
    UtilitySpec u;
    for (const auto& s : states) {
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ConfigError("identity utility needs numeric target states; got '" +
                              s + "'");
        u.values[s] = v;
    }
    return u;
}

void UtilitySpec::validate(const std::vector<std::string>& states) const {
    for (const auto& s : states) {
        auto it = values.find(s);
        if (it == values.end())
            throw ConfigError("utility is not total: missing state '" + s + "'");
        if (!std::isfinite(it->second))
            throw ConfigError("utility value for '" + s + "' is not finite");
    }
}

double effect_at(const SfmEstimator& e, const std::string& x0, const std::string& x1,
                 EffectKind kind, const std::string& y) {
    Contrast c{x0, x1, y};
    switch (kind) {
        case EffectKind::Tv: return total_variation(e, c);
        case EffectKind::Te: return total_effect(e, c);
        case EffectKind::Se: return spurious_effect(e, c);
        case EffectKind::De: return direct_effect(e, c);
        case EffectKind::Ie: return indirect_effect(e, c, false);
    }
    return 0;
}

std::map<std::string, double> per_state_effects(const SfmEstimator& e,
                                                const std::string& x0,
                                                const std::string& x1, EffectKind kind) {
    std::map<std::string, double> out;
    for (const auto& y : e.var(e.roles().y).states)
        out[y] = effect_at(e, x0, x1, kind, y);
    return out;
}

double expected_effect(const SfmEstimator& e, const std::string& x0,
                       const std::string& x1, EffectKind kind, const UtilitySpec& u) {
    const auto& ystates = e.var(e.roles().y).states;
    u.validate(ystates);
    double acc = 0;
    for (const auto& y : ystates)
        acc += u.values.at(y) * effect_at(e, x0, x1, kind, y);
    return acc;
}

GroupAverage group_average_effect(const SfmEstimator& e,
                                  const std::vector<std::string>& x0s,
                                  const std::vector<std::string>& x1s, EffectKind kind,
                                  const std::string& y, GroupWeighting weighting) {
    if (x0s.empty() || x1s.empty()) throw ConfigError("group averages need nonempty groups");
    for (const auto& a : x0s)
        for (const auto& b : x1s)
            if (a == b) throw ConfigError("groups must be disjoint");
    const SfmRoles& r = e.roles();
    GroupAverage out;
    out.weighting = weighting;
    double n0 = 0, n1 = 0;
    for (const auto& a : x0s) n0 += e.raw_count({{r.x, a}});
    for (const auto& b : x1s) n1 += e.raw_count({{r.x, b}});
    if (weighting == GroupWeighting::MarginalWeighted && (n0 <= 0 || n1 <= 0))
        throw DataError("empty group: zero marginal count");
    for (const auto& a : x0s) {
        for (const auto& b : x1s) {
            GroupPairDetail p;
            p.x0 = a;
            p.x1 = b;
            p.effect = effect_at(e, a, b, kind, y);
            p.n_x0 = e.raw_count({{r.x, a}});
            p.n_x1 = e.raw_count({{r.x, b}});
            if (weighting == GroupWeighting::Arithmetic)
                out.value += p.effect / (static_cast<double>(x0s.size()) *
                                         static_cast<double>(x1s.size()));
            else
                out.value += (p.n_x0 / n0) * (p.n_x1 / n1) * p.effect;
            out.pairs.push_back(std::move(p));
        }
    }
    return out;
}

StepwiseDecomposition stepwise_decompose(const SfmEstimator& e,
                                         const std::vector<std::string>& ordered_states,
                                         const std::string& y) {
    if (ordered_states.size() < 2)
        throw ConfigError("stepwise decomposition needs at least 2 ordered states");
    const SfmRoles& r = e.roles();
    const VarMeta& xv = e.var(r.x);
    for (const auto& s : ordered_states)
        if (std::find(xv.states.begin(), xv.states.end(), s) == xv.states.end())
            throw DataError("stepwise state '" + s + "' is not a state of " + r.x);

    StepwiseDecomposition out;
    out.ordered_states = ordered_states;
    double sum_tv = 0, sum_te = 0, sum_se = 0;
    for (std::size_t i = 0; i + 1 < ordered_states.size(); ++i) {
        Contrast c{ordered_states[i], ordered_states[i + 1], y};
        StepwiseStep st;
        st.from = c.x0;
        st.to = c.x1;
        st.tv = total_variation(e, c);
        st.te = total_effect(e, c);
        st.se = st.tv - st.te;
        st.de = direct_effect(e, c);
        st.ie = indirect_effect(e, c, false);
        st.n_rows = e.raw_count({{r.x, c.x0}}) + e.raw_count({{r.x, c.x1}});
        sum_tv += st.tv;
        sum_te += st.te;
        sum_se += st.se;
        out.steps.push_back(std::move(st));
    }
    Contrast ends{ordered_states.front(), ordered_states.back(), y};
    out.residual_tv = std::abs(sum_tv - total_variation(e, ends));
    out.residual_te = std::abs(sum_te - total_effect(e, ends));
    out.residual_se = std::abs(sum_se - spurious_effect(e, ends));
    if (out.residual_tv > kIdentityTol || out.residual_te > kIdentityTol ||
        out.residual_se > kIdentityTol)
        throw IdentityViolation("stepwise telescoping residual exceeds 1e-9");
    return out;
}

ThresholdCurve threshold_sweep(const Dataset& d, const SfmRoles& r,
                               std::vector<double> grid, double alpha,
                               std::uint64_t cap) {
    r.validate();
    if (r.x0_states.size() != 1 || r.x1_states.size() != 1)
        throw ConfigError("threshold sweep needs singleton x0/x1 state sets");
    const Column& ycol = d.col(r.y);
    if (ycol.numeric.empty())
        throw DataError("threshold sweep requires a numeric target column");
    if (grid.empty()) {
        std::set<double> uniq(ycol.numeric.begin(), ycol.numeric.end());
        grid.assign(uniq.begin(), uniq.end());
    } else {
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i - 1] < grid[i]))
                throw ConfigError("threshold grid must be strictly ascending");
    }

    ThresholdCurve curve;
    curve.grid = grid;
    int yindex = d.col_index(r.y);
    for (double t : grid) {
        Dataset view = d;
        Column& yc = view.columns[static_cast<std::size_t>(yindex)];
        Column bin;
        bin.spec.name = yc.spec.name;
        bin.spec.kind = ColumnKind::Categorical;
        bin.spec.declared_states = {"0", "1"};
        bin.states = {"0", "1"};
        bin.codes.reserve(yc.numeric.size());
        for (double v : yc.numeric) bin.codes.push_back(v >= t ? 1 : 0);
        view.columns[static_cast<std::size_t>(yindex)] = std::move(bin);

        SfmEstimator est = SfmEstimator::fit(view, r, alpha, cap);
        Contrast c{r.x0_states[0], r.x1_states[0], "1"};
        EffectLedger led = effect_ledger(est, c);
        curve.tv.push_back(led.tv);
        curve.te.push_back(led.te);
        curve.de.push_back(led.de);
        curve.ie.push_back(led.ie_reversed);
        curve.se.push_back(led.se);
    }
    auto arg = [&](const std::vector<double>& vals) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] > vals[best]) best = i;
        return curve.grid[best];
    };
    curve.argmax[EffectKind::Tv] = arg(curve.tv);
    curve.argmax[EffectKind::Te] = arg(curve.te);
    curve.argmax[EffectKind::De] = arg(curve.de);
    curve.argmax[EffectKind::Ie] = arg(curve.ie);
    curve.argmax[EffectKind::Se] = arg(curve.se);
    return curve;
}

} // namespace causalfair
