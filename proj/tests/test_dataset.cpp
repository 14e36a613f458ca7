#include <causalfair/dataset.hpp>

#include <doctest.h>

#include <random>
#include <sstream>

using namespace causalfair;

namespace {

Dataset from_string(const std::string& text, const std::vector<ColumnSpec>& specs) {
    std::istringstream in(text);
    return load_csv_stream(in, specs);
}

std::vector<ColumnSpec> cat_specs(std::initializer_list<std::string> names) {
    std::vector<ColumnSpec> out;
    for (const auto& n : names) out.push_back({n, ColumnKind::Categorical, {}, {}});
    return out;
}

} // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("four line csv reads back") {
    Dataset d = from_string("x,y\na,0\na,1\nb,1\nb,1\n", cat_specs({"x", "y"}));
    CHECK(d.n_rows == 4);
    CHECK(d.dropped_rows == 0);
    CHECK(d.col("x").states == std::vector<std::string>{"a", "b"});
    CHECK(d.col("y").states == std::vector<std::string>{"0", "1"});
    CHECK(d.col("x").codes == std::vector<int32_t>{0, 0, 1, 1});
    CHECK(d.col("y").codes == std::vector<int32_t>{0, 1, 1, 1});
}

TEST_CASE("all rows missing errors as empty after cleaning") {
    CHECK_THROWS_WITH_AS(from_string("x,y\na,\n", cat_specs({"x", "y"})),
                         doctest::Contains("empty after cleaning"), DataError);
}

TEST_CASE("missing cells in role columns are dropped and counted") {
    Dataset d = from_string("x,y\na,0\n,1\nb,\nb,1\n", cat_specs({"x", "y"}));
    CHECK(d.n_rows == 2);
    CHECK(d.dropped_rows == 2);
    CHECK(d.n_rows + d.dropped_rows == 4);
}

TEST_CASE("header mismatch is an error") {
    CHECK_THROWS_AS(from_string("a,b\n1,2\n", cat_specs({"x", "y"})), DataError);
}

TEST_CASE("unparseable integer cell is an error") {
    std::vector<ColumnSpec> specs{{"h", ColumnKind::Integer, {}, {}}};
    CHECK_THROWS_AS(from_string("h\nfoo\n", specs), DataError);
}

TEST_CASE("extra columns are ignored and quoting honored") {
    Dataset d = from_string("x,junk,y\n\"a,a\",zzz,0\nb,zzz,1\n", cat_specs({"x", "y"}));
    CHECK(d.n_rows == 2);
    CHECK(d.col("x").states == std::vector<std::string>{"a,a", "b"});
}

TEST_CASE("csv round trip reproduces the state-index matrix") {
    Dataset d = from_string("x,y\nb b,0\na,1\nb b,1\n\"q,q\",0\n", cat_specs({"x", "y"}));
    std::ostringstream out;
    d.write_csv(out);
    Dataset d2 = from_string(out.str(), cat_specs({"x", "y"}));
    CHECK(d2.col("x").codes == d.col("x").codes);
    CHECK(d2.col("y").codes == d.col("y").codes);
    CHECK(d2.col("x").states == d.col("x").states);
    CHECK(d.digest() == d2.digest());
}

TEST_CASE("explicit 20-unit bins carry the expected labels") {
    std::vector<ColumnSpec> specs{{"hours", ColumnKind::Integer, {}, {}}};
    std::string csv = "hours\n5\n25\n45\n65\n85\n40\n";
    Dataset d = from_string(csv, specs);
    BinningSpec bins{{"hours", BinRule::explicit_edges({20, 40, 60, 80})}};
    Dataset b = discretize(d, bins);
    const Column& c = b.col("hours");
    CHECK(c.states == std::vector<std::string>{"0–20", "20–40", "40–60",
                                               "60–80", "80+"});
    CHECK(c.codes == std::vector<int32_t>{0, 1, 2, 3, 4, 2});
    CHECK(c.spec.bin_edges == std::vector<double>{20, 40, 60, 80});
}

TEST_CASE("equal width bins of 1..100 split 25/25/25/25") {
    std::ostringstream csv;
    csv << "v\n";
    for (int i = 1; i <= 100; ++i) csv << i << "\n";
    std::vector<ColumnSpec> specs{{"v", ColumnKind::Integer, {}, {}}};
    Dataset d = from_string(csv.str(), specs);
    Dataset b = discretize(d, {{"v", BinRule::equal_width(4)}});
    const Column& c = b.col("v");
    REQUIRE(c.card() == 4);
    std::vector<int> counts(4, 0);
    for (int32_t code : c.codes) ++counts[static_cast<std::size_t>(code)];
    CHECK(counts == std::vector<int>{25, 25, 25, 25});
    // width 24.75 edges
    REQUIRE(c.spec.bin_edges.size() == 3);
    CHECK(c.spec.bin_edges[0] == doctest::Approx(25.75));
}

TEST_CASE("constant column with equal_width(2) leaves one empty bin") {
    std::vector<ColumnSpec> specs{{"v", ColumnKind::Continuous, {}, {}}};
    Dataset d = from_string("v\n7\n7\n7\n", specs);
    Dataset b = discretize(d, {{"v", BinRule::equal_width(2)}});
    const Column& c = b.col("v");
    REQUIRE(c.card() == 2);
    std::vector<int> counts(2, 0);
    for (int32_t code : c.codes) ++counts[static_cast<std::size_t>(code)];
    CHECK(counts[0] + counts[1] == 3);
    CHECK((counts[0] == 0 || counts[1] == 0));
}

TEST_CASE("binning a non-numeric column is an error") {
    Dataset d = from_string("x\na\nb\n", cat_specs({"x"}));
    CHECK_THROWS_AS(discretize(d, {{"x", BinRule::equal_width(2)}}), DataError);
}

TEST_CASE("discretization preserves numeric order") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-50, 150);
    std::ostringstream csv;
    csv << "v\n";
    std::vector<double> vals;
    for (int i = 0; i < 500; ++i) {
        double v = u(rng);
        vals.push_back(v);
        csv << v << "\n";
    }
    std::vector<ColumnSpec> specs{{"v", ColumnKind::Continuous, {}, {}}};
    Dataset d = from_string(csv.str(), specs);
    for (auto rule : {BinRule::equal_width(7), BinRule::explicit_edges({0, 30, 90})}) {
        Dataset b = discretize(d, {{"v", rule}});
        const auto& codes = b.col("v").codes;
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = 0; j < vals.size(); ++j)
                if (vals[i] < vals[j]) REQUIRE(codes[i] <= codes[j]);
    }
}

TEST_CASE("validate_roles flags missing columns") {
    Dataset d = from_string("x,y\na,0\n", cat_specs({"x", "y"}));
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"wage"};
    r.x0_states = {"a"};
    r.x1_states = {"b"};
    ValidationReport rep = validate_roles(d, r);
    REQUIRE(rep.missing_columns.size() == 1);
    CHECK(rep.missing_columns[0] == "wage");
    CHECK(!rep.ok());
}

TEST_CASE("validate_roles cardinality and marginal counts") {
    // X binary, Z with 6 states, W with 5 states, Y binary -> 6*5*2 = 60
    std::ostringstream csv;
    csv << "x,z,w,y\n";
    for (int i = 0; i < 30; ++i)
        csv << (i % 2 ? "m" : "f") << ",z" << i % 6 << ",w" << i % 5 << "," << i % 2
            << "\n";
    Dataset d = from_string(csv.str(), cat_specs({"x", "z", "w", "y"}));
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.z = {"z"};
    r.w = {"w"};
    r.x0_states = {"f"};
    r.x1_states = {"m"};
    ValidationReport rep = validate_roles(d, r);
    CHECK(rep.joint_cardinality == 60);
    CHECK(!rep.cardinality_warning);
    CHECK(rep.x_marginal_counts.at("f") == 15);
    CHECK(rep.x_marginal_counts.at("m") == 15);
    CHECK(rep.ok());

    ValidationReport tight = validate_roles(d, r, 59);
    CHECK(tight.cardinality_warning);
}

TEST_CASE("validate_roles reports unseen contrast states") {
    Dataset d = from_string("x,y\na,0\n", cat_specs({"x", "y"}));
    SfmRoles r;
    r.x = "x";
    r.y = "y";
    r.x0_states = {"a"};
    r.x1_states = {"ghost"};
    ValidationReport rep = validate_roles(d, r);
    REQUIRE(rep.unseen_states.size() == 1);
    CHECK(rep.unseen_states[0] == "x=ghost");
}

TEST_SUITE_END();
