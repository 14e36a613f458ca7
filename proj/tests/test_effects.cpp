#include <causalfair/effects.hpp>
#include <causalfair/scm.hpp>

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace causalfair;

namespace {

Dataset toy4() {
    std::istringstream in("x,y\na,0\na,1\nb,1\nb,1\n");
    return load_csv_stream(in, {{"x", ColumnKind::Categorical, {}, {}},
                                {"y", ColumnKind::Categorical, {}, {}}});
}

SfmRoles toy_roles() {
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.x0_states = {"a"};
    r.x1_states = {"b"};
    r.y_target = "1";
    return r;
}

Dataset random_zxwy(std::mt19937& rng, std::size_t n) {
    std::ostringstream csv;
    csv << "z,x,w,y\n";
    std::uniform_int_distribution<int> u3(0, 2), u2(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        int z = u3(rng);
        int x = (u2(rng) + z) % 2;        // confounded
        int w = (u3(rng) + x) % 3;        // mediated
        int y = (u2(rng) ^ (w == 2 ? 1 : 0) ^ x) & 1;
        csv << "z" << z << "," << x << ",w" << w << "," << y << "\n";
    }
    std::istringstream in(csv.str());
    return load_csv_stream(in, {{"z", ColumnKind::Categorical, {}, {}},
                                {"x", ColumnKind::Categorical, {}, {}},
                                {"w", ColumnKind::Categorical, {}, {}},
                                {"y", ColumnKind::Categorical, {}, {}}});
}

SfmRoles zxwy_roles() {
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.w = {"w"};
    r.x0_states = {"0"};
    r.x1_states = {"1"};
    r.y_target = "1";
    return r;
}

} // namespace

TEST_SUITE_BEGIN("effects");

TEST_CASE("toy dataset total variation is the hand count") {
    SfmEstimator e = SfmEstimator::fit(toy4(), toy_roles(), 1.0);
    Contrast c{"a", "b", "1"};
    CHECK(total_variation(e, c) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("identical groups have zero effects") {
    SfmEstimator e = SfmEstimator::fit(toy4(), toy_roles(), 1.0);
    Contrast c{"a", "a", "1"};
    CHECK(total_variation(e, c) == 0.0);
    CHECK(total_effect(e, c) == 0.0);
    CHECK(direct_effect(e, c) == 0.0);
}

TEST_CASE("empty confounder list collapses TE to TV and SE to zero") {
    std::mt19937 rng(31);
    std::ostringstream csv;
    csv << "x,w,y\n";
    std::uniform_int_distribution<int> u2(0, 1);
    for (int i = 0; i < 300; ++i) {
        int x = u2(rng), w = (u2(rng) + x) % 2, y = u2(rng) ^ (w & x);
        csv << x << "," << w << "," << y << "\n";
    }
    std::istringstream in(csv.str());
    Dataset d = load_csv_stream(in, {{"x", ColumnKind::Categorical, {}, {}},
                                     {"w", ColumnKind::Categorical, {}, {}},
                                     {"y", ColumnKind::Categorical, {}, {}}});
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.w = {"w"};
    r.x0_states = {"0"};
    r.x1_states = {"1"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    Contrast c{"0", "1", "1"};
    CHECK(total_effect(e, c) == total_variation(e, c));
    CHECK(spurious_effect(e, c) == 0.0);
}

TEST_CASE("empty mediator list collapses DE to TE and IE to zero") {
    std::mt19937 rng(37);
    std::ostringstream csv;
    csv << "z,x,y\n";
    std::uniform_int_distribution<int> u2(0, 1);
    for (int i = 0; i < 300; ++i) {
        int z = u2(rng), x = (u2(rng) + z) % 2, y = u2(rng) ^ (x & z);
        csv << z << "," << x << "," << y << "\n";
    }
    std::istringstream in(csv.str());
    Dataset d = load_csv_stream(in, {{"z", ColumnKind::Categorical, {}, {}},
                                     {"x", ColumnKind::Categorical, {}, {}},
                                     {"y", ColumnKind::Categorical, {}, {}}});
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.x0_states = {"0"};
    r.x1_states = {"1"};
    SfmEstimator e = SfmEstimator::fit(d, r, 1.0);
    Contrast c{"0", "1", "1"};
    CHECK(direct_effect(e, c) == total_effect(e, c));
    CHECK(indirect_effect(e, c) == 0.0);
}

TEST_CASE("ledger identities hold on random datasets") {
    std::mt19937 rng(41);
    for (int rep = 0; rep < 10; ++rep) {
        Dataset d = random_zxwy(rng, 150 + rep * 37);
        SfmEstimator e = SfmEstimator::fit(d, zxwy_roles(), 1.0);
        EffectLedger led = effect_ledger(e, Contrast{"0", "1", "1"});
        CHECK(led.residual_tv_te_se == 0.0);
        CHECK(std::abs(led.residual_te_de_ie) <= 1e-9);
        CHECK(led.se == led.tv - led.te);
        for (double v : {led.tv, led.te, led.se, led.de, led.ie, led.ie_reversed}) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("binary-target conjugacy: effect(y0) = -effect(y1) within 1e-12") {
    std::mt19937 rng(43);
    for (int rep = 0; rep < 8; ++rep) {
        Dataset d = random_zxwy(rng, 120 + 31 * rep);
        SfmEstimator e = SfmEstimator::fit(d, zxwy_roles(), 1.0);
        Contrast c1{"0", "1", "1"}, c0{"0", "1", "0"};
        CHECK(std::abs(total_variation(e, c1) + total_variation(e, c0)) <= 1e-12);
        CHECK(std::abs(total_effect(e, c1) + total_effect(e, c0)) <= 1e-12);
        CHECK(std::abs(direct_effect(e, c1) + direct_effect(e, c0)) <= 1e-12);
        CHECK(std::abs(indirect_effect(e, c1) + indirect_effect(e, c0)) <= 1e-12);
        CHECK(std::abs(spurious_effect(e, c1) + spurious_effect(e, c0)) <= 1e-12);
    }
}

TEST_CASE("tv/te/se are antisymmetric under group swap within 1e-12") {
    std::mt19937 rng(47);
    for (int rep = 0; rep < 8; ++rep) {
        Dataset d = random_zxwy(rng, 140 + 29 * rep);
        SfmEstimator e = SfmEstimator::fit(d, zxwy_roles(), 1.0);
        Contrast fwd{"0", "1", "1"}, rev{"1", "0", "1"};
        CHECK(std::abs(total_variation(e, fwd) + total_variation(e, rev)) <= 1e-12);
        CHECK(std::abs(total_effect(e, fwd) + total_effect(e, rev)) <= 1e-12);
        CHECK(std::abs(spurious_effect(e, fwd) + spurious_effect(e, rev)) <= 1e-12);
    }
}

TEST_CASE("identified effects match oracle ground truth on the exact distribution") {
    for (std::uint64_t seed : {3ULL, 14ULL, 15ULL, 92ULL}) {
        Scm scm(random_sfm_scm(seed));
        SfmEstimator e = SfmEstimator::fit_exact(scm.exact_observational(),
                                                 scm.dataset_roles());
        Contrast c{"0", "1", "1"};
        EffectLedger measured = effect_ledger(e, c);
        EffectLedger truth = scm.ground_truth_ledger(c);
        CHECK(std::abs(measured.tv - truth.tv) <= 1e-9);
        CHECK(std::abs(measured.te - truth.te) <= 1e-9);
        CHECK(std::abs(measured.de - truth.de) <= 1e-9);
        CHECK(std::abs(measured.ie - truth.ie) <= 1e-9);
        CHECK(std::abs(measured.se - truth.se) <= 1e-9);
    }
}

TEST_CASE("independent protected feature produces near-null effects") {
    // X drawn independently of (Z, W, Y)
    std::mt19937 rng(53);
    std::ostringstream csv;
    csv << "z,x,w,y\n";
    std::uniform_int_distribution<int> u3(0, 2), u2(0, 1);
    for (int i = 0; i < 50000; ++i) {
        int z = u3(rng), x = u2(rng), w = u3(rng), y = (z + w) % 2;
        csv << "z" << z << "," << x << ",w" << w << "," << y << "\n";
    }
    std::istringstream in(csv.str());
    Dataset d = load_csv_stream(in, {{"z", ColumnKind::Categorical, {}, {}},
                                     {"x", ColumnKind::Categorical, {}, {}},
                                     {"w", ColumnKind::Categorical, {}, {}},
                                     {"y", ColumnKind::Categorical, {}, {}}});
    SfmEstimator e = SfmEstimator::fit(d, zxwy_roles(), 1.0);
    EffectLedger led = effect_ledger(e, Contrast{"0", "1", "1"});
    for (double v : {led.tv, led.te, led.se, led.de, led.ie})
        CHECK(std::abs(v) < 0.03);
}

TEST_CASE("direct-path-only SCM: tv = te = de, ie = se = 0 through the pipeline") {
    ScmSpec s;
    s.exogenous.push_back({"Ux", {"0", "1"}, {0.4, 0.6}});
    s.endogenous.push_back({"X", {"0", "1"}, {"Ux"}, {0, 1}});
    s.endogenous.push_back({"Y", {"0", "1"}, {"X"}, {0, 1}});
    s.roles = {"X", "Y", {}, {}, "0", "1", std::string("1")};
    Scm scm(s);
    SfmEstimator e = SfmEstimator::fit_exact(scm.exact_observational(), scm.dataset_roles());
    EffectLedger led = effect_ledger(e, Contrast{"0", "1", "1"});
    CHECK(led.tv == doctest::Approx(1.0));
    CHECK(led.te == doctest::Approx(led.tv));
    CHECK(led.de == doctest::Approx(led.tv));
    CHECK(std::abs(led.ie) <= 1e-12);
    CHECK(std::abs(led.se) <= 1e-12);
}

TEST_CASE("unknown contrast states are rejected") {
    SfmEstimator e = SfmEstimator::fit(toy4(), toy_roles(), 1.0);
    CHECK_THROWS_AS(total_variation(e, Contrast{"a", "ghost", "1"}), DataError);
    CHECK_THROWS_AS(total_variation(e, Contrast{"a", "b", "9"}), DataError);
}

TEST_SUITE_END();
