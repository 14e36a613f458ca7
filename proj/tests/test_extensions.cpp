#include <causalfair/extensions.hpp>
#include <causalfair/scm.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

using namespace causalfair;

namespace {

/// mediated model with a 4-state integer target
Dataset multistate_dataset(std::mt19937& rng, std::size_t n) {
    std::ostringstream csv;
    csv << "z,x,w,y\n";
    std::uniform_int_distribution<int> u2(0, 1), u4(0, 3);
    for (std::size_t i = 0; i < n; ++i) {
        int z = u2(rng);
        int x = (u2(rng) + z) % 2;
        int w = (u2(rng) + x) % 2;
        int y = (u4(rng) + x + w + z) % 4;
        csv << z << "," << x << "," << w << "," << y << "\n";
    }
    std::istringstream in(csv.str());
    return load_csv_stream(in, {{"z", ColumnKind::Categorical, {}, {}},
                                {"x", ColumnKind::Categorical, {}, {}},
                                {"w", ColumnKind::Categorical, {}, {}},
                                {"y", ColumnKind::Integer, {}, {}}});
}

SfmRoles multistate_roles() {
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.w = {"w"};
    r.x0_states = {"0"};
    r.x1_states = {"1"};
    return r;
}

Dataset ordinal_x_dataset(std::mt19937& rng, std::size_t n) {
    std::ostringstream csv;
    csv << "x,z,y\n";
    std::uniform_int_distribution<int> u2(0, 1), u4(0, 3);
    for (std::size_t i = 0; i < n; ++i) {
        int x = u4(rng);
        int z = (u2(rng) + (x > 1)) % 2;
        int y = (u2(rng) + (x + z > 2)) % 2;
        csv << "lvl" << x << "," << z << "," << y << "\n";
    }
    std::istringstream in(csv.str());
    return load_csv_stream(in, {{"x", ColumnKind::Categorical, {}, {}},
                                {"z", ColumnKind::Categorical, {}, {}},
                                {"y", ColumnKind::Categorical, {}, {}}});
}

} // namespace

TEST_SUITE_BEGIN("extensions");

TEST_CASE("per-state effects sum to zero") {
    std::mt19937 rng(103);
    Dataset d = multistate_dataset(rng, 400);
    SfmEstimator e = SfmEstimator::fit(d, multistate_roles(), 1.0);
    for (EffectKind kind : {EffectKind::Tv, EffectKind::Te, EffectKind::De, EffectKind::Ie}) {
        auto per = per_state_effects(e, "0", "1", kind);
        REQUIRE(per.size() == 4);
        double total = 0;
        for (const auto& [y, v] : per) total += v;
        CHECK(std::abs(total) <= 1e-12);
    }
}

TEST_CASE("binary target: indicator utility recovers the per-state effect") {
    std::istringstream in("x,y\na,0\na,1\nb,1\nb,1\n");
    Dataset d = load_csv_stream(in, {{"x", ColumnKind::Categorical, {}, {}},
                                     {"y", ColumnKind::Categorical, {}, {}}});
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.x0_states = {"a"};
    r.x1_states = {"b"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    UtilitySpec indicator;
    indicator.values = {{"0", 0.0}, {"1", 1.0}};
    CHECK(expected_effect(e, "a", "b", EffectKind::Tv, indicator) ==
          doctest::Approx(effect_at(e, "a", "b", EffectKind::Tv, "1")).epsilon(1e-15));
    auto per = per_state_effects(e, "a", "b", EffectKind::Tv);
    CHECK(per.at("0") == doctest::Approx(-per.at("1")).epsilon(1e-12));
}

TEST_CASE("constant utility yields zero for every effect kind") {
    std::mt19937 rng(107);
    Dataset d = multistate_dataset(rng, 300);
    SfmEstimator e = SfmEstimator::fit(d, multistate_roles(), 1.0);
    UtilitySpec constant;
    for (const auto& s : e.var("y").states) constant.values[s] = 3.25;
    for (EffectKind kind : {EffectKind::Tv, EffectKind::Te, EffectKind::Se,
                            EffectKind::De, EffectKind::Ie})
        CHECK(std::abs(expected_effect(e, "0", "1", kind, constant)) <= 1e-12);
}

TEST_CASE("expected effect is linear in the utility") {
    std::mt19937 rng(109);
    Dataset d = multistate_dataset(rng, 350);
    SfmEstimator e = SfmEstimator::fit(d, multistate_roles(), 1.0);
    UtilitySpec u = UtilitySpec::identity_numeric(e.var("y").states);
    UtilitySpec scaled;
    for (const auto& [k, v] : u.values) scaled.values[k] = 2.5 * v + 7.0;
    double base = expected_effect(e, "0", "1", EffectKind::Te, u);
    double transformed = expected_effect(e, "0", "1", EffectKind::Te, scaled);
    CHECK(transformed == doctest::Approx(2.5 * base).epsilon(1e-9));
}

TEST_CASE("utility must be total and finite") {
    std::mt19937 rng(113);
    Dataset d = multistate_dataset(rng, 100);
    SfmEstimator e = SfmEstimator::fit(d, multistate_roles(), 1.0);
    UtilitySpec missing;
    missing.values = {{"0", 0.0}};
    CHECK_THROWS_AS(expected_effect(e, "0", "1", EffectKind::Tv, missing), ConfigError);
    UtilitySpec inf = UtilitySpec::identity_numeric(e.var("y").states);
    inf.values["2"] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(expected_effect(e, "0", "1", EffectKind::Tv, inf), ConfigError);
}

TEST_CASE("group averages: singleton groups equal the pairwise effect") {
    std::mt19937 rng(127);
    Dataset d = ordinal_x_dataset(rng, 400);
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.x0_states = {"lvl0"};
    r.x1_states = {"lvl3"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    double pair = effect_at(e, "lvl0", "lvl3", EffectKind::Te, "1");
    for (auto weighting : {GroupWeighting::Arithmetic, GroupWeighting::MarginalWeighted}) {
        GroupAverage avg =
            group_average_effect(e, {"lvl0"}, {"lvl3"}, EffectKind::Te, "1", weighting);
        CHECK(avg.value == doctest::Approx(pair).epsilon(1e-15));
        REQUIRE(avg.pairs.size() == 1);
    }
}

TEST_CASE("equal marginal counts make both weightings coincide") {
    // two states on each side, forced equal counts
    std::ostringstream csv;
    csv << "x,z,y\n";
    const char* xs[4] = {"a", "b", "c", "d"};
    for (int rep = 0; rep < 100; ++rep)
        for (int xi = 0; xi < 4; ++xi)
            csv << xs[xi] << "," << ((rep + xi) % 2) << "," << ((rep / 2 + xi) % 2)
                << "\n";
    std::istringstream in(csv.str());
    Dataset d = load_csv_stream(in, {{"x", ColumnKind::Categorical, {}, {}},
                                     {"z", ColumnKind::Categorical, {}, {}},
                                     {"y", ColumnKind::Categorical, {}, {}}});
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.x0_states = {"a", "b"};
    r.x1_states = {"c", "d"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    GroupAverage arith = group_average_effect(e, {"a", "b"}, {"c", "d"}, EffectKind::Te,
                                              "1", GroupWeighting::Arithmetic);
    GroupAverage weighted = group_average_effect(e, {"a", "b"}, {"c", "d"}, EffectKind::Te,
                                                 "1", GroupWeighting::MarginalWeighted);
    CHECK(std::abs(arith.value - weighted.value) <= 1e-12);
    REQUIRE(arith.pairs.size() == 4);
}

TEST_CASE("group averages preserve the decompositions") {
    std::mt19937 rng(131);
    Dataset d = ordinal_x_dataset(rng, 600);
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.x0_states = {"lvl0", "lvl1"};
    r.x1_states = {"lvl2", "lvl3"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    for (auto weighting : {GroupWeighting::Arithmetic, GroupWeighting::MarginalWeighted}) {
        auto avg = [&](EffectKind kind) {
            return group_average_effect(e, r.x0_states, r.x1_states, kind, "1", weighting)
                .value;
        };
        double tv = avg(EffectKind::Tv), te = avg(EffectKind::Te), se = avg(EffectKind::Se);
        double de = avg(EffectKind::De);
        CHECK(std::abs(tv - te - se) <= 1e-9);
        // averaged te = averaged de - averaged reversed-ie, with the reversed
        // average taken pairwise under the same weights
        double ie_rev_avg = 0;
        auto pairs = group_average_effect(e, r.x0_states, r.x1_states, EffectKind::Te, "1",
                                          weighting);
        double tot0 = 0, tot1 = 0;
        for (const auto& s : r.x0_states) tot0 += e.raw_count({{r.x, s}});
        for (const auto& s : r.x1_states) tot1 += e.raw_count({{r.x, s}});
        double total_weight = 0;
        for (const auto& p : pairs.pairs) {
            double wgt = weighting == GroupWeighting::Arithmetic
                             ? 1.0 / static_cast<double>(pairs.pairs.size())
                             : (p.n_x0 / tot0) * (p.n_x1 / tot1);
            ie_rev_avg += wgt * indirect_effect(e, Contrast{p.x0, p.x1, "1"}, true);
            total_weight += wgt;
        }
        CHECK(total_weight == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(te - (de - ie_rev_avg)) <= 1e-9);
    }
}

TEST_CASE("stepwise: two states reduce to the aggregate effect") {
    std::mt19937 rng(137);
    Dataset d = ordinal_x_dataset(rng, 300);
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.x0_states = {"lvl0"};
    r.x1_states = {"lvl3"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    StepwiseDecomposition sd = stepwise_decompose(e, {"lvl0", "lvl3"}, "1");
    REQUIRE(sd.steps.size() == 1);
    CHECK(sd.steps[0].te == doctest::Approx(effect_at(e, "lvl0", "lvl3", EffectKind::Te, "1"))
                                .epsilon(1e-15));
    CHECK(!sd.de_ie_additive);
    CHECK_THROWS_AS(stepwise_decompose(e, {"lvl0"}, "1"), ConfigError);
}

TEST_CASE("stepwise telescoping holds along the full ladder") {
    std::mt19937 rng(139);
    Dataset d = ordinal_x_dataset(rng, 800);
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.x0_states = {"lvl0"};
    r.x1_states = {"lvl3"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    StepwiseDecomposition sd =
        stepwise_decompose(e, {"lvl0", "lvl1", "lvl2", "lvl3"}, "1");
    REQUIRE(sd.steps.size() == 3);
    CHECK(sd.residual_tv <= 1e-9);
    CHECK(sd.residual_te <= 1e-9);
    CHECK(sd.residual_se <= 1e-9);
    double sum_te = 0;
    for (const auto& st : sd.steps) sum_te += st.te;
    CHECK(sum_te == doctest::Approx(effect_at(e, "lvl0", "lvl3", EffectKind::Te, "1"))
                        .epsilon(1e-9));
}

namespace {

Dataset numeric_target_dataset(std::mt19937& rng, std::size_t n) {
    std::ostringstream csv;
    csv << "x,w,hours\n";
    std::uniform_int_distribution<int> u2(0, 1), noise(-8, 8);
    for (std::size_t i = 0; i < n; ++i) {
        int x = u2(rng);
        int w = (u2(rng) + x) % 2;
        int hours = 40 + noise(rng) + 6 * x + 4 * w;
        csv << x << "," << w << "," << hours << "\n";
    }
    std::istringstream in(csv.str());
    return load_csv_stream(in, {{"x", ColumnKind::Categorical, {}, {}},
                                {"w", ColumnKind::Categorical, {}, {}},
                                {"hours", ColumnKind::Integer, {}, {}}});
}

SfmRoles sweep_roles() {
    SfmRoles r;
    r.x = "x";
    r.y = "hours";
    r.w = {"w"};
    r.x0_states = {"0"};
    r.x1_states = {"1"};
    return r;
}

} // namespace

TEST_CASE("threshold below the data minimum produces all-zero effects") {
    std::mt19937 rng(149);
    Dataset d = numeric_target_dataset(rng, 300);
    // [Y >= t] is constant: effects are exactly zero at alpha = 0 and only
    // pseudo-count noise away from zero under smoothing
    ThresholdCurve exact = threshold_sweep(d, sweep_roles(), {-100.0}, 0.0);
    REQUIRE(exact.grid.size() == 1);
    CHECK(exact.tv[0] == 0.0);
    CHECK(exact.te[0] == 0.0);
    CHECK(exact.de[0] == 0.0);
    CHECK(exact.se[0] == 0.0);
    ThresholdCurve smoothed = threshold_sweep(d, sweep_roles(), {-100.0}, 1.0);
    for (double v : {smoothed.tv[0], smoothed.te[0], smoothed.de[0], smoothed.se[0]})
        CHECK(std::abs(v) < 0.01);
}

TEST_CASE("default grid is the sorted unique observed values") {
    std::mt19937 rng(151);
    Dataset d = numeric_target_dataset(rng, 200);
    ThresholdCurve curve = threshold_sweep(d, sweep_roles(), {});
    std::set<double> uniq(d.col("hours").numeric.begin(), d.col("hours").numeric.end());
    CHECK(curve.grid.size() == uniq.size());
    CHECK(std::is_sorted(curve.grid.begin(), curve.grid.end()));
    CHECK(curve.tv.size() == curve.grid.size());
    // the sweep's argmax sits where the x-shift bites
    CHECK(curve.argmax.at(EffectKind::Te) > 38);
}

TEST_CASE("each sweep point satisfies the ledger identities") {
    std::mt19937 rng(157);
    Dataset d = numeric_target_dataset(rng, 250);
    ThresholdCurve curve = threshold_sweep(d, sweep_roles(), {35, 42, 49});
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        CHECK(std::abs(curve.tv[i] - curve.te[i] - curve.se[i]) <= 1e-12);
        CHECK(std::abs(curve.te[i] - (curve.de[i] - curve.ie[i])) <= 1e-9);
    }
}

TEST_CASE("sweep rejects non-numeric targets and unsorted grids") {
    std::mt19937 rng(163);
    Dataset d = ordinal_x_dataset(rng, 100);
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.x0_states = {"lvl0"};
    r.x1_states = {"lvl3"};
    CHECK_THROWS_AS(threshold_sweep(d, r, {}), DataError);
    Dataset num = numeric_target_dataset(rng, 100);
    CHECK_THROWS_AS(threshold_sweep(num, sweep_roles(), {40, 30}), ConfigError);
}

TEST_SUITE_END();
