#pragma once

#include <causalfair/errors.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalfair {

enum class ColumnKind { Categorical, Ordinal, Integer, Continuous };

std::string to_string(ColumnKind k);
ColumnKind column_kind_from_string(const std::string& s);

/// Declares how one CSV column is read and which states it may take.
struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    /// Required for Ordinal (>= 2 unique labels, in order). Optional otherwise;
    /// when present it fixes the state order instead of discovery.
    std::vector<std::string> declared_states;
    /// Populated by discretize(): the numeric cut points that produced the bins.
    std::vector<double> bin_edges;

    void validate() const;
};

/// Per-column binning rule for numeric columns.
struct BinRule {
    enum class Kind { EqualWidth, ExplicitEdges, Passthrough };
    Kind kind = Kind::Passthrough;
    int n_bins = 0;                // EqualWidth
    std::vector<double> edges;     // ExplicitEdges, strictly ascending

    static BinRule equal_width(int n);
    static BinRule explicit_edges(std::vector<double> e);
    static BinRule passthrough();
    void validate() const;
};

/// column name -> rule
using BinningSpec = std::map<std::string, BinRule>;

/// Standard-fairness-model role assignment over dataset columns.
struct SfmRoles {
    std::string x;                       // protected feature
    std::string y;                       // target
    std::vector<std::string> z;          // confounders, topological order
    std::vector<std::string> w;          // mediators, topological order
    std::vector<std::string> x0_states;  // protected set
    std::vector<std::string> x1_states;  // non-protected set
    std::optional<std::string> y_target;

    void validate() const;               // structural checks only (no dataset)
    std::string canonical_json() const;  // stable serialization used for digests
};

struct Column {
    ColumnSpec spec;
    std::vector<std::string> states;   // resolved labels; empty for Continuous
    std::vector<int32_t> codes;        // per-row state index; empty for Continuous
    std::vector<double> numeric;       // raw values for Integer/Continuous kinds

    int card() const { return static_cast<int>(states.size()); }
    bool discrete() const { return !states.empty(); }
    int state_index(const std::string& label) const;         // -1 if unknown
    int require_state(const std::string& label) const;       // throws DataError
};

/// Immutable after construction; safe for concurrent reads.
struct Dataset {
    std::vector<Column> columns;
    std::size_t n_rows = 0;
    std::size_t dropped_rows = 0;

    bool has_column(const std::string& name) const;
    const Column& col(const std::string& name) const;        // throws DataError
    int col_index(const std::string& name) const;            // -1 if absent

    void write_csv(std::ostream& os) const;
    void write_csv_file(const std::string& path) const;

    std::string digest() const;   // sha256 over schema + state-index matrix
};

Dataset load_csv(const std::string& path, const std::vector<ColumnSpec>& specs);
Dataset load_csv_stream(std::istream& in, const std::vector<ColumnSpec>& specs);

Dataset discretize(const Dataset& d, const BinningSpec& bins);

struct ValidationReport {
    std::vector<std::string> missing_columns;
    std::vector<std::string> unseen_states;        // "col=state" entries
    std::uint64_t joint_cardinality = 0;           // |Z| * |W| * |Y|
    bool cardinality_warning = false;
    std::map<std::string, std::size_t> x_marginal_counts;  // n(x) per state of X
    std::vector<std::string> notes;

    bool ok() const { return missing_columns.empty() && unseen_states.empty(); }
};

ValidationReport validate_roles(const Dataset& d, const SfmRoles& r,
                                std::uint64_t cardinality_cap = 1'000'000);

namespace csv {
/// RFC-4180 row split (quotes, escaped quotes, CR stripping).
std::vector<std::string> split_row(const std::string& line);
std::string quote_field(const std::string& field);
} // namespace csv

} // namespace causalfair
