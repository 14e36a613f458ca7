#include <causalfair/dataset.hpp>
#include <causalfair/digest.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace causalfair {

std::string to_string(ColumnKind k) {
    switch (k) {
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Ordinal: return "ordinal";
        case ColumnKind::Integer: return "integer";
        case ColumnKind::Continuous: return "continuous";
    }
    return "categorical";
}

ColumnKind column_kind_from_string(const std::string& s) {
    if (s == "categorical") return ColumnKind::Categorical;
    if (s == "ordinal") return ColumnKind::Ordinal;
    if (s == "integer") return ColumnKind::Integer;
    if (s == "continuous") return ColumnKind::Continuous;
    throw ConfigError("unknown column kind '" + s + "'");
}

void ColumnSpec::validate() const {
    if (name.empty()) throw ConfigError("column spec with empty name");
    std::set<std::string> seen(declared_states.begin(), declared_states.end());
    if (seen.size() != declared_states.size())
        throw ConfigError("column '" + name + "': duplicate declared states");
    if (kind == ColumnKind::Ordinal && declared_states.size() < 2)
        throw ConfigError("column '" + name +
                          "': ordinal kind requires >= 2 declared states");
}

BinRule BinRule::equal_width(int n) {
    BinRule r;
    r.kind = Kind::EqualWidth;
    r.n_bins = n;
    r.validate();
    return r;
}

BinRule BinRule::explicit_edges(std::vector<double> e) {
    BinRule r;
    r.kind = Kind::ExplicitEdges;
    r.edges = std::move(e);
    r.validate();
    return r;
}

BinRule BinRule::passthrough() { return BinRule{}; }

void BinRule::validate() const {
    if (kind == Kind::EqualWidth && n_bins < 2)
        throw ConfigError("equal_width binning requires n_bins >= 2");
    if (kind == Kind::ExplicitEdges) {
        if (edges.empty()) throw ConfigError("explicit_edges requires cut points");
        for (std::size_t i = 1; i < edges.size(); ++i)
            if (!(edges[i - 1] < edges[i]))
                throw ConfigError("explicit_edges must be strictly ascending");
    }
}

void SfmRoles::validate() const {
    if (x.empty()) throw ConfigError("roles: missing required field 'x'");
    if (y.empty()) throw ConfigError("roles: missing required field 'y'");
    std::set<std::string> names{x, y};
    for (const auto& c : z)
        if (!names.insert(c).second)
            throw ConfigError("roles: column '" + c + "' assigned twice");
    for (const auto& c : w)
        if (!names.insert(c).second)
            throw ConfigError("roles: column '" + c + "' assigned twice");
    if (x0_states.empty()) throw ConfigError("roles: x0_states must be nonempty");
    if (x1_states.empty()) throw ConfigError("roles: x1_states must be nonempty");
    for (const auto& s : x0_states)
        if (std::find(x1_states.begin(), x1_states.end(), s) != x1_states.end())
            throw ConfigError("roles: state '" + s + "' in both x0_states and x1_states");
}

std::string SfmRoles::canonical_json() const {
    auto list = [](const std::vector<std::string>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += "\"" + v[i] + "\"";
        }
        return s + "]";
    };
    std::string s = "{\"x\":\"" + x + "\",\"y\":\"" + y + "\",\"z\":" + list(z) +
                    ",\"w\":" + list(w) + ",\"x0_states\":" + list(x0_states) +
                    ",\"x1_states\":" + list(x1_states);
    if (y_target) s += ",\"y_target\":\"" + *y_target + "\"";
    return s + "}";
}

int Column::state_index(const std::string& label) const {
    auto it = std::find(states.begin(), states.end(), label);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int Column::require_state(const std::string& label) const {
    int i = state_index(label);
    if (i < 0)
        throw DataError("unknown state '" + label + "' of column '" + spec.name + "'");
    return i;
}

bool Dataset::has_column(const std::string& name) const {
    return col_index(name) >= 0;
}

int Dataset::col_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].spec.name == name) return static_cast<int>(i);
    return -1;
}

const Column& Dataset::col(const std::string& name) const {
    int i = col_index(name);
    if (i < 0) throw DataError("column '" + name + "' not present in dataset");
    return columns[static_cast<std::size_t>(i)];
}

namespace csv {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // trailing CR from CRLF files
        } else {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::string quote_field(const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

} // namespace csv

namespace {

std::string trim_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& cell, const std::string& colname) {
    std::string t = trim_ws(cell);
    double v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw DataError("column '" + colname + "': cell '" + cell +
                        "' is not numeric");
    return v;
}

long long parse_int(const std::string& cell, const std::string& colname) {
    std::string t = trim_ws(cell);
    long long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw DataError("column '" + colname + "': cell '" + cell +
                        "' is not an integer");
    return v;
}

std::string fmt_num(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace

Dataset load_csv(const std::string& path, const std::vector<ColumnSpec>& specs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    return load_csv_stream(in, specs);
}

Dataset load_csv_stream(std::istream& in, const std::vector<ColumnSpec>& specs) {
    if (specs.empty()) throw ConfigError("no column specs given");
    for (const auto& s : specs) s.validate();
    {
        std::set<std::string> names;
        for (const auto& s : specs)
            if (!names.insert(s.name).second)
                throw ConfigError("duplicate column spec '" + s.name + "'");
    }

    std::string header;
    if (!std::getline(in, header)) throw DataError("empty file: no header row");
    auto header_fields = csv::split_row(header);

    std::vector<int> src_index(specs.size(), -1);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (std::size_t j = 0; j < header_fields.size(); ++j) {
            if (header_fields[j] == specs[i].name) {
                src_index[i] = static_cast<int>(j);
                break;
            }
        }
        if (src_index[i] < 0)
            throw DataError("header mismatch: column '" + specs[i].name +
                            "' not found in CSV header");
    }

    // cells[i] holds the retained raw cells of spec column i
    std::vector<std::vector<std::string>> cells(specs.size());
    std::size_t raw_rows = 0, dropped = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto fields = csv::split_row(line);
        ++raw_rows;
        bool missing = false;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            std::size_t j = static_cast<std::size_t>(src_index[i]);
            if (j >= fields.size() || trim_ws(fields[j]).empty()) {
                missing = true;
                break;
            }
        }
        if (missing) {
            ++dropped;
            continue;
        }
        for (std::size_t i = 0; i < specs.size(); ++i)
            cells[i].push_back(trim_ws(fields[static_cast<std::size_t>(src_index[i])]));
    }
    std::size_t n = raw_rows - dropped;
    if (n == 0) throw DataError("empty after cleaning: no usable rows");

    Dataset d;
    d.n_rows = n;
    d.dropped_rows = dropped;
    d.columns.resize(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        Column& c = d.columns[i];
        c.spec = specs[i];
        const auto& raw = cells[i];
        switch (c.spec.kind) {
            case ColumnKind::Categorical: {
                if (!c.spec.declared_states.empty()) {
                    c.states = c.spec.declared_states;
                } else {
                    std::set<std::string> uniq(raw.begin(), raw.end());
                    c.states.assign(uniq.begin(), uniq.end());
                }
                c.codes.reserve(n);
                for (const auto& cell : raw) {
                    int s = c.state_index(cell);
                    if (s < 0)
                        throw DataError("column '" + c.spec.name + "': state '" +
                                        cell + "' not among declared states");
                    c.codes.push_back(s);
                }
                break;
            }
            case ColumnKind::Ordinal: {
                c.states = c.spec.declared_states;
                c.codes.reserve(n);
                for (const auto& cell : raw) {
                    int s = c.state_index(cell);
                    if (s < 0)
                        throw DataError("column '" + c.spec.name + "': state '" +
                                        cell + "' not among declared ordinal states");
                    c.codes.push_back(s);
                }
                break;
            }
            case ColumnKind::Integer: {
                std::vector<long long> vals;
                vals.reserve(n);
                for (const auto& cell : raw) vals.push_back(parse_int(cell, c.spec.name));
                std::set<long long> uniq(vals.begin(), vals.end());
                std::vector<long long> sorted(uniq.begin(), uniq.end());
                c.states.reserve(sorted.size());
                for (long long v : sorted) c.states.push_back(std::to_string(v));
                c.codes.reserve(n);
                c.numeric.reserve(n);
                for (long long v : vals) {
                    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
                    c.codes.push_back(static_cast<int32_t>(it - sorted.begin()));
                    c.numeric.push_back(static_cast<double>(v));
                }
                break;
            }
            case ColumnKind::Continuous: {
                c.numeric.reserve(n);
                for (const auto& cell : raw)
                    c.numeric.push_back(parse_double(cell, c.spec.name));
                break;
            }
        }
    }
    return d;
}

void Dataset::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << csv::quote_field(columns[i].spec.name);
    }
    os << '\n';
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) os << ',';
            const Column& c = columns[i];
            if (c.discrete())
                os << csv::quote_field(c.states[static_cast<std::size_t>(c.codes[r])]);
            else
                os << fmt_num(c.numeric[r]);
        }
        os << '\n';
    }
}

void Dataset::write_csv_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_csv(out);
}

std::string Dataset::digest() const {
    Sha256 h;
    for (const auto& c : columns) {
        h.update(c.spec.name);
        h.update("\x1f");
        for (const auto& s : c.states) {
            h.update(s);
            h.update("\x1e");
        }
        if (c.discrete()) {
            h.update(c.codes.data(), c.codes.size() * sizeof(int32_t));
        } else {
            h.update(c.numeric.data(), c.numeric.size() * sizeof(double));
        }
    }
    return h.hex_digest();
}

namespace {

struct BinLayout {
    std::vector<double> edges;        // interior cut points, ascending
    std::vector<std::string> labels;  // edges.size() + 1 labels
};

BinLayout make_equal_width(const std::vector<double>& vals, int n_bins) {
    double lo = vals[0], hi = vals[0];
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    BinLayout out;
    double width = (hi - lo) / n_bins;
    for (int i = 1; i < n_bins; ++i) out.edges.push_back(lo + width * i);
    for (int i = 0; i < n_bins; ++i) {
        double a = lo + width * i;
        double b = (i + 1 == n_bins) ? hi : lo + width * (i + 1);
        std::string label = fmt_num(a) + "–" + fmt_num(b);
        // degenerate spread can repeat labels; keep them unique
        while (std::find(out.labels.begin(), out.labels.end(), label) != out.labels.end())
            label += "'";
        out.labels.push_back(label);
    }
    return out;
}

BinLayout make_explicit(const std::vector<double>& vals, const std::vector<double>& edges) {
    double lo = vals[0];
    for (double v : vals) lo = std::min(lo, v);
    BinLayout out;
    out.edges = edges;
    std::string first = lo >= 0 ? ("0–" + fmt_num(edges.front()))
                                : ("<" + fmt_num(edges.front()));
    out.labels.push_back(first);
    for (std::size_t i = 1; i < edges.size(); ++i)
        out.labels.push_back(fmt_num(edges[i - 1]) + "–" + fmt_num(edges[i]));
    out.labels.push_back(fmt_num(edges.back()) + "+");
    return out;
}

int bin_of(double v, const std::vector<double>& edges) {
    // edges ascending; bin i covers [edges[i-1], edges[i])
    int b = 0;
    for (double e : edges) {
        if (v < e) break;
        ++b;
    }
    return b;
}

} // namespace

Dataset discretize(const Dataset& d, const BinningSpec& bins) {
    Dataset out = d;
    for (const auto& [name, rule] : bins) {
        rule.validate();
        if (rule.kind == BinRule::Kind::Passthrough) continue;
        int ci = out.col_index(name);
        if (ci < 0) throw DataError("binning target '" + name + "' not in dataset");
        Column& c = out.columns[static_cast<std::size_t>(ci)];
        if (c.numeric.empty())
            throw DataError("binning target '" + name + "' is not a numeric column");

        BinLayout layout = rule.kind == BinRule::Kind::EqualWidth
                               ? make_equal_width(c.numeric, rule.n_bins)
                               : make_explicit(c.numeric, rule.edges);
        Column replaced;
        replaced.spec.name = c.spec.name;
        replaced.spec.kind = ColumnKind::Ordinal;
        replaced.spec.declared_states = layout.labels;
        replaced.spec.bin_edges = layout.edges;
        replaced.states = layout.labels;
        replaced.codes.reserve(c.numeric.size());
        for (double v : c.numeric)
            replaced.codes.push_back(bin_of(v, layout.edges));
        out.columns[static_cast<std::size_t>(ci)] = std::move(replaced);
    }
    return out;
}

ValidationReport validate_roles(const Dataset& d, const SfmRoles& r,
                                std::uint64_t cardinality_cap) {
    r.validate();
    ValidationReport rep;
    auto check = [&](const std::string& name) -> const Column* {
        if (!d.has_column(name)) {
            rep.missing_columns.push_back(name);
            return nullptr;
        }
        const Column& c = d.col(name);
        if (!c.discrete())
            rep.notes.push_back("column '" + name +
                                "' is continuous and must be discretized before estimation");
        return &c;
    };

    const Column* xc = check(r.x);
    const Column* yc = check(r.y);
    std::uint64_t card = 1;
    bool card_valid = true;
    auto mul_card = [&](const Column* c) {
        if (c && c->discrete())
            card *= static_cast<std::uint64_t>(c->card());
        else
            card_valid = false;
    };
    for (const auto& name : r.z) mul_card(check(name));
    for (const auto& name : r.w) mul_card(check(name));
    mul_card(yc);
    rep.joint_cardinality = card_valid ? card : 0;
    rep.cardinality_warning = card_valid && card > cardinality_cap;
    if (rep.cardinality_warning)
        rep.notes.push_back("joint state space |Z||W||Y| = " + std::to_string(card) +
                            " exceeds cap " + std::to_string(cardinality_cap));

    if (xc && xc->discrete()) {
        for (int s = 0; s < xc->card(); ++s) rep.x_marginal_counts[xc->states[s]] = 0;
        for (int32_t code : xc->codes)
            ++rep.x_marginal_counts[xc->states[static_cast<std::size_t>(code)]];
        for (const auto& s : r.x0_states)
            if (xc->state_index(s) < 0) rep.unseen_states.push_back(r.x + "=" + s);
        for (const auto& s : r.x1_states)
            if (xc->state_index(s) < 0) rep.unseen_states.push_back(r.x + "=" + s);
    }
    if (yc && yc->discrete() && r.y_target && yc->state_index(*r.y_target) < 0)
        rep.unseen_states.push_back(r.y + "=" + *r.y_target);
    return rep;
}

} // namespace causalfair
