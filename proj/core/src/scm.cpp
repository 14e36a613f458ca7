#include <causalfair/scm.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

using nlohmann::json;

namespace causalfair {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// portable draws: std::uniform_*_distribution is implementation-defined,
// and sampled fixtures must reproduce bit-for-bit across platforms
double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int draw_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

} // namespace

void ScmSpec::validate() const {
    std::set<std::string> names;
    for (const auto& u : exogenous) {
        if (u.states.size() < 1) throw ConfigError("exogenous '" + u.name + "': no states");
        if (u.probs.size() != u.states.size())
            throw ConfigError("exogenous '" + u.name + "': probs/states size mismatch");
        double s = std::accumulate(u.probs.begin(), u.probs.end(), 0.0);
        if (std::abs(s - 1.0) > 1e-9)
            throw ConfigError("exogenous '" + u.name + "': probabilities sum to " +
                              std::to_string(s));
        for (double p : u.probs)
            if (p < 0) throw ConfigError("exogenous '" + u.name + "': negative probability");
        if (!names.insert(u.name).second)
            throw ConfigError("duplicate variable name '" + u.name + "'");
    }
    std::map<std::string, const EndoVar*> endo_by_name;
    for (const auto& v : endogenous) {
        if (v.states.size() < 1) throw ConfigError("endogenous '" + v.name + "': no states");
        if (!names.insert(v.name).second)
            throw ConfigError("duplicate variable name '" + v.name + "'");
        endo_by_name[v.name] = &v;
    }
    // parent existence + table totality
    for (const auto& v : endogenous) {
        std::uint64_t cells = 1;
        for (const auto& p : v.parents) {
            auto it = endo_by_name.find(p);
            std::size_t card;
            if (it != endo_by_name.end()) {
                card = it->second->states.size();
            } else {
                const ExoVar* u = nullptr;
                for (const auto& e : exogenous)
                    if (e.name == p) u = &e;
                if (!u)
                    throw ConfigError("endogenous '" + v.name + "': unknown parent '" + p + "'");
                card = u->states.size();
            }
            cells *= card;
        }
        if (v.table.size() != cells)
            throw ConfigError("endogenous '" + v.name + "': structural table has " +
                              std::to_string(v.table.size()) + " entries, expected " +
                              std::to_string(cells));
        for (int32_t s : v.table)
            if (s < 0 || s >= static_cast<int32_t>(v.states.size()))
                throw ConfigError("endogenous '" + v.name + "': table entry out of range");
    }
    // acyclicity over endogenous parents (Kahn)
    {
        std::map<std::string, int> indeg;
        std::map<std::string, std::vector<std::string>> children;
        for (const auto& v : endogenous) indeg[v.name] = 0;
        for (const auto& v : endogenous)
            for (const auto& p : v.parents)
                if (endo_by_name.count(p)) {
                    ++indeg[v.name];
                    children[p].push_back(v.name);
                }
        std::vector<std::string> queue;
        for (auto& [n, d] : indeg)
            if (d == 0) queue.push_back(n);
        std::size_t seen = 0;
        while (!queue.empty()) {
            std::string n = queue.back();
            queue.pop_back();
            ++seen;
            for (const auto& ch : children[n])
                if (--indeg[ch] == 0) queue.push_back(ch);
        }
        if (seen != endogenous.size())
            throw ConfigError("cyclic structural equations");
    }
    // roles + SFM compatibility
    if (!endo_by_name.count(roles.x)) throw ConfigError("roles.x names unknown variable");
    if (!endo_by_name.count(roles.y)) throw ConfigError("roles.y names unknown variable");
    std::set<std::string> zset, wset;
    for (const auto& n : roles.z) {
        if (!endo_by_name.count(n)) throw ConfigError("roles.z entry '" + n + "' unknown");
        zset.insert(n);
    }
    for (const auto& n : roles.w) {
        if (!endo_by_name.count(n)) throw ConfigError("roles.w entry '" + n + "' unknown");
        wset.insert(n);
    }
    for (const auto& n : roles.z)
        for (const auto& p : endo_by_name.at(n)->parents)
            if (wset.count(p))
                throw ConfigError("SFM violation: mediator '" + p +
                                  "' is a parent of confounder '" + n + "'");
    // X precedes Y: Y must not be an ancestor of X
    {
        std::set<std::string> frontier{roles.x};
        std::vector<std::string> stack{roles.x};
        while (!stack.empty()) {
            std::string n = stack.back();
            stack.pop_back();
            for (const auto& p : endo_by_name.at(n)->parents) {
                if (!endo_by_name.count(p)) continue;
                if (p == roles.y)
                    throw ConfigError("SFM violation: Y is an ancestor of X");
                if (frontier.insert(p).second) stack.push_back(p);
            }
        }
    }
    const EndoVar* xv = endo_by_name.at(roles.x);
    auto has_state = [](const EndoVar* v, const std::string& s) {
        return std::find(v->states.begin(), v->states.end(), s) != v->states.end();
    };
    if (!has_state(xv, roles.x0) || !has_state(xv, roles.x1))
        throw ConfigError("roles.x0/x1 are not states of X");
    if (roles.y_target && !has_state(endo_by_name.at(roles.y), *roles.y_target))
        throw ConfigError("roles.y_target is not a state of Y");
}

Scm::Scm(ScmSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const auto& endo = spec_.endogenous;
    // topological order (Kahn, deterministic by declaration index)
    std::vector<int> indeg(endo.size(), 0);
    std::vector<std::vector<int>> children(endo.size());
    for (std::size_t i = 0; i < endo.size(); ++i) {
        for (const auto& p : endo[i].parents) {
            int pi = endo_index(p);
            if (pi >= 0) {
                ++indeg[i];
                children[static_cast<std::size_t>(pi)].push_back(static_cast<int>(i));
            }
        }
    }
    std::vector<int> ready;
    for (std::size_t i = 0; i < endo.size(); ++i)
        if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
    while (!ready.empty()) {
        std::sort(ready.begin(), ready.end(), std::greater<>());
        int n = ready.back();
        ready.pop_back();
        topo_.push_back(n);
        for (int ch : children[static_cast<std::size_t>(n)])
            if (--indeg[static_cast<std::size_t>(ch)] == 0) ready.push_back(ch);
    }

    for (const auto& v : endo) endo_card_.push_back(static_cast<int>(v.states.size()));
    for (const auto& u : spec_.exogenous) {
        exo_card_.push_back(static_cast<int>(u.states.size()));
        exo_joint_size_ *= u.states.size();
    }
    parents_.resize(endo.size());
    for (std::size_t i = 0; i < endo.size(); ++i) {
        for (const auto& p : endo[i].parents) {
            int pi = endo_index(p);
            if (pi >= 0) {
                parents_[i].push_back({false, pi, endo_card_[static_cast<std::size_t>(pi)]});
            } else {
                int ui = exo_index(p);
                parents_[i].push_back({true, ui, exo_card_[static_cast<std::size_t>(ui)]});
            }
        }
    }
}

int Scm::endo_index(const std::string& name) const {
    for (std::size_t i = 0; i < spec_.endogenous.size(); ++i)
        if (spec_.endogenous[i].name == name) return static_cast<int>(i);
    return -1;
}

int Scm::exo_index(const std::string& name) const {
    for (std::size_t i = 0; i < spec_.exogenous.size(); ++i)
        if (spec_.exogenous[i].name == name) return static_cast<int>(i);
    return -1;
}

void Scm::propagate(const std::vector<int>& u, const std::map<int, int>& interventions,
                    std::vector<int>& v) const {
    for (int vi : topo_) {
        auto it = interventions.find(vi);
        if (it != interventions.end()) {
            v[static_cast<std::size_t>(vi)] = it->second;
            continue;
        }
        std::uint64_t idx = 0;
        for (const auto& p : parents_[static_cast<std::size_t>(vi)]) {
            int val = p.exo ? u[static_cast<std::size_t>(p.idx)]
                            : v[static_cast<std::size_t>(p.idx)];
            idx = idx * static_cast<std::uint64_t>(p.card) + static_cast<std::uint64_t>(val);
        }
        v[static_cast<std::size_t>(vi)] =
            spec_.endogenous[static_cast<std::size_t>(vi)].table[idx];
    }
}

namespace {

/// Odometer over exogenous joint states with running probability.
struct ExoEnumerator {
    const std::vector<ExoVar>& exo;
    std::vector<int> u;
    bool done = false;

    explicit ExoEnumerator(const std::vector<ExoVar>& e) : exo(e), u(e.size(), 0) {}
    double prob() const {
        double p = 1;
        for (std::size_t i = 0; i < exo.size(); ++i)
            p *= exo[i].probs[static_cast<std::size_t>(u[i])];
        return p;
    }
    bool next() {
        for (int i = static_cast<int>(u.size()) - 1; i >= 0; --i) {
            if (++u[static_cast<std::size_t>(i)] <
                static_cast<int>(exo[static_cast<std::size_t>(i)].states.size()))
                return true;
            u[static_cast<std::size_t>(i)] = 0;
        }
        done = true;
        return false;
    }
};

} // namespace

ExactJoint Scm::exact_observational(std::uint64_t cap) const {
    if (exo_joint_size_ > cap)
        throw CapExceeded("exogenous joint of size " + std::to_string(exo_joint_size_) +
                          " exceeds cap " + std::to_string(cap));
    std::vector<std::uint64_t> strides(spec_.endogenous.size(), 1);
    std::uint64_t endo_size = 1;
    for (int i = static_cast<int>(spec_.endogenous.size()) - 1; i >= 0; --i) {
        strides[static_cast<std::size_t>(i)] = endo_size;
        endo_size *= spec_.endogenous[static_cast<std::size_t>(i)].states.size();
    }
    std::map<std::uint64_t, double> mass;
    std::vector<int> v(spec_.endogenous.size(), 0);
    ExoEnumerator en(spec_.exogenous);
    do {
        propagate(en.u, {}, v);
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            key += strides[i] * static_cast<std::uint64_t>(v[i]);
        mass[key] += en.prob();
    } while (en.next());

    ExactJoint out;
    for (const auto& e : spec_.endogenous) out.cols.push_back({e.name, e.states});
    for (const auto& [key, p] : mass) {
        std::vector<int32_t> cell(spec_.endogenous.size());
        for (std::size_t i = 0; i < cell.size(); ++i)
            cell[i] = static_cast<int32_t>((key / strides[i]) %
                                           spec_.endogenous[i].states.size());
        out.cells.emplace_back(std::move(cell), p);
    }
    return out;
}

namespace {

int require_state_of(const std::vector<std::string>& states, const std::string& s,
                     const std::string& var) {
    auto it = std::find(states.begin(), states.end(), s);
    if (it == states.end())
        throw ConfigError("'" + s + "' is not a state of '" + var + "'");
    return static_cast<int>(it - states.begin());
}

} // namespace

double Scm::counterfactual_prob(const NestedQuery& q, std::uint64_t cap) const {
    return counterfactual_and_factual_prob(q, {}, cap);
}

double Scm::counterfactual_and_factual_prob(const NestedQuery& q, const Given& factual,
                                            std::uint64_t cap) const {
    if (exo_joint_size_ > cap)
        throw CapExceeded("exogenous joint exceeds cap");
    int yi = endo_index(q.outcome_var);
    if (yi < 0) throw ConfigError("unknown outcome variable '" + q.outcome_var + "'");
    int ys = require_state_of(spec_.endogenous[static_cast<std::size_t>(yi)].states,
                              q.outcome_state, q.outcome_var);

    struct Inner {
        int var;                    // variable pinned by this entry
        int constant;               // >= 0 when a constant state
        std::map<int, int> world;   // inner intervention for natural values
    };
    std::vector<Inner> plan;
    for (const auto& nv : q.interventions) {
        int vi = endo_index(nv.var);
        if (vi < 0) throw ConfigError("unknown intervention variable '" + nv.var + "'");
        Inner in;
        in.var = vi;
        in.constant = -1;
        if (nv.constant) {
            in.constant = require_state_of(
                spec_.endogenous[static_cast<std::size_t>(vi)].states, *nv.constant, nv.var);
        } else if (nv.natural_under) {
            for (const auto& [var, state] : *nv.natural_under) {
                int ii = endo_index(var);
                if (ii < 0) throw ConfigError("unknown inner variable '" + var + "'");
                in.world[ii] = require_state_of(
                    spec_.endogenous[static_cast<std::size_t>(ii)].states, state, var);
            }
        } else {
            throw ConfigError("intervention on '" + nv.var +
                              "' needs a constant or a natural_under world");
        }
        plan.push_back(std::move(in));
    }
    std::vector<std::pair<int, int>> factual_idx;
    for (const auto& [var, state] : factual) {
        int vi = endo_index(var);
        if (vi < 0) throw ConfigError("unknown factual variable '" + var + "'");
        factual_idx.emplace_back(
            vi, require_state_of(spec_.endogenous[static_cast<std::size_t>(vi)].states,
                                 state, var));
    }

    double acc = 0;
    std::vector<int> v(spec_.endogenous.size(), 0);
    std::vector<int> v_inner(spec_.endogenous.size(), 0);
    ExoEnumerator en(spec_.exogenous);
    do {
        double pu = en.prob();
        if (pu == 0) {
            if (!en.next()) break;
            continue;
        }
        if (!factual_idx.empty()) {
            propagate(en.u, {}, v);
            bool holds = true;
            for (const auto& [vi, s] : factual_idx)
                if (v[static_cast<std::size_t>(vi)] != s) {
                    holds = false;
                    break;
                }
            if (!holds) {
                if (!en.next()) break;
                continue;
            }
        }
        std::map<int, int> outer;
        for (const auto& in : plan) {
            if (in.constant >= 0) {
                outer[in.var] = in.constant;
            } else {
                propagate(en.u, in.world, v_inner);
                outer[in.var] = v_inner[static_cast<std::size_t>(in.var)];
            }
        }
        propagate(en.u, outer, v);
        if (v[static_cast<std::size_t>(yi)] == ys) acc += pu;
    } while (en.next());
    return acc;
}

EffectLedger Scm::ground_truth_ledger(std::uint64_t cap) const {
    Contrast c;
    c.x0 = spec_.roles.x0;
    c.x1 = spec_.roles.x1;
    if (spec_.roles.y_target) {
        c.y = *spec_.roles.y_target;
    } else {
        const EndoVar& yv = spec_.endogenous[static_cast<std::size_t>(endo_index(spec_.roles.y))];
        c.y = yv.states.back();
    }
    return ground_truth_ledger(c, cap);
}

EffectLedger Scm::ground_truth_ledger(const Contrast& c, std::uint64_t cap) const {
    if (exo_joint_size_ > cap)
        throw CapExceeded("exogenous joint exceeds cap");
    int xi = endo_index(spec_.roles.x), yi = endo_index(spec_.roles.y);
    const EndoVar& xv = spec_.endogenous[static_cast<std::size_t>(xi)];
    const EndoVar& yv = spec_.endogenous[static_cast<std::size_t>(yi)];
    int x0 = require_state_of(xv.states, c.x0, spec_.roles.x);
    int x1 = require_state_of(xv.states, c.x1, spec_.roles.x);
    int ys = require_state_of(yv.states, c.y, spec_.roles.y);
    std::vector<int> wids;
    for (const auto& n : spec_.roles.w) wids.push_back(endo_index(n));

    // one exogenous sweep covering every world the five descriptors need
    double p_x0 = 0, p_x1 = 0, p_y_x0 = 0, p_y_x1 = 0;     // observational
    double te0 = 0, te1 = 0;                                // Y_{x0}, Y_{x1}
    double de_a = 0, de_b = 0;                              // Y_{x1,W_{x0}}, Y_{x0,W_{x0}}
    double ie_a = 0;                                        // Y_{x0,W_{x1}}
    double ier_a = 0, ier_b = 0;                            // Y_{x1,W_{x0}}, Y_{x1,W_{x1}}
    std::vector<int> v(spec_.endogenous.size(), 0), v0 = v, v1 = v;
    ExoEnumerator en(spec_.exogenous);
    do {
        double pu = en.prob();
        if (pu == 0) {
            if (!en.next()) break;
            continue;
        }
        propagate(en.u, {}, v);
        if (v[static_cast<std::size_t>(xi)] == x0) {
            p_x0 += pu;
            if (v[static_cast<std::size_t>(yi)] == ys) p_y_x0 += pu;
        } else if (v[static_cast<std::size_t>(xi)] == x1) {
            p_x1 += pu;
            if (v[static_cast<std::size_t>(yi)] == ys) p_y_x1 += pu;
        }
        propagate(en.u, {{xi, x0}}, v0);
        propagate(en.u, {{xi, x1}}, v1);
        if (v0[static_cast<std::size_t>(yi)] == ys) te0 += pu;
        if (v1[static_cast<std::size_t>(yi)] == ys) te1 += pu;

        std::map<int, int> w_at_x0{{xi, x1}}, w_at_x1{{xi, x0}};
        std::map<int, int> wx0_hold{{xi, x0}}, wx1_hold{{xi, x1}};
        for (int wi : wids) {
            w_at_x0[wi] = v0[static_cast<std::size_t>(wi)];    // do(x1), W at x0 values
            w_at_x1[wi] = v1[static_cast<std::size_t>(wi)];    // do(x0), W at x1 values
            wx0_hold[wi] = v0[static_cast<std::size_t>(wi)];   // do(x0), W at x0 values
            wx1_hold[wi] = v1[static_cast<std::size_t>(wi)];   // do(x1), W at x1 values
        }
        std::vector<int> tmp(v.size());
        propagate(en.u, w_at_x0, tmp);                         // Y_{x1, W_{x0}}
        if (tmp[static_cast<std::size_t>(yi)] == ys) { de_a += pu; ier_a += pu; }
        propagate(en.u, wx0_hold, tmp);                        // Y_{x0, W_{x0}}
        if (tmp[static_cast<std::size_t>(yi)] == ys) de_b += pu;
        propagate(en.u, w_at_x1, tmp);                         // Y_{x0, W_{x1}}
        if (tmp[static_cast<std::size_t>(yi)] == ys) ie_a += pu;
        propagate(en.u, wx1_hold, tmp);                        // Y_{x1, W_{x1}}
        if (tmp[static_cast<std::size_t>(yi)] == ys) ier_b += pu;
    } while (en.next());

    if (p_x0 <= 0 || p_x1 <= 0)
        throw DataError("contrast group has zero observational probability");

    EffectLedger led;
    led.contrast = c;
    led.tv = p_y_x1 / p_x1 - p_y_x0 / p_x0;
    led.te = te1 - te0;
    led.se = led.tv - led.te;
    led.de = de_a - de_b;
    led.ie = ie_a - de_b;          // Y_{x0,W_{x1}} - Y_{x0,W_{x0}}
    led.ie_reversed = ier_a - ier_b;
    led.residual_tv_te_se = led.tv - led.te - led.se;
    led.residual_te_de_ie = led.te - (led.de - led.ie_reversed);
    led.alpha = 0;
    led.n_rows = 0;
    return led;
}

Dataset Scm::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw ConfigError("sample size must be >= 1");
    Dataset d;
    d.n_rows = n;
    d.columns.resize(spec_.endogenous.size());
    for (std::size_t i = 0; i < spec_.endogenous.size(); ++i) {
        Column& c = d.columns[i];
        c.spec.name = spec_.endogenous[i].name;
        c.spec.kind = ColumnKind::Categorical;
        c.spec.declared_states = spec_.endogenous[i].states;
        c.states = spec_.endogenous[i].states;
        c.codes.resize(n);
    }
    std::vector<int> u(spec_.exogenous.size(), 0), v(spec_.endogenous.size(), 0);
    for (std::size_t row = 0; row < n; ++row) {
        // counter-based per-row draws: reproducible under any parallel split
        std::uint64_t row_key = splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (row + 1)));
        for (std::size_t i = 0; i < spec_.exogenous.size(); ++i) {
            double r = static_cast<double>(splitmix64(row_key + i) >> 11) * 0x1.0p-53;
            double acc = 0;
            int s = 0;
            const auto& probs = spec_.exogenous[i].probs;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                acc += probs[k];
                if (r < acc || k + 1 == probs.size()) {
                    s = static_cast<int>(k);
                    break;
                }
            }
            u[i] = s;
        }
        propagate(u, {}, v);
        for (std::size_t i = 0; i < v.size(); ++i)
            d.columns[i].codes[row] = static_cast<int32_t>(v[i]);
    }
    return d;
}

SfmRoles Scm::dataset_roles() const {
    SfmRoles r;
    r.x = spec_.roles.x;
    r.y = spec_.roles.y;
    r.z = spec_.roles.z;
    r.w = spec_.roles.w;
    r.x0_states = {spec_.roles.x0};
    r.x1_states = {spec_.roles.x1};
    r.y_target = spec_.roles.y_target;
    return r;
}

// ---------------------------------------------------------------------------
// JSON serialization

std::string ScmSpec::to_json() const {
    json j;
    j["exogenous"] = json::array();
    for (const auto& u : exogenous)
        j["exogenous"].push_back({{"name", u.name}, {"states", u.states}, {"probs", u.probs}});
    j["endogenous"] = json::array();
    for (const auto& v : endogenous)
        j["endogenous"].push_back({{"name", v.name},
                                   {"states", v.states},
                                   {"parents", v.parents},
                                   {"table", v.table}});
    j["roles"] = {{"x", roles.x}, {"y", roles.y}, {"z", roles.z}, {"w", roles.w},
                  {"x0", roles.x0}, {"x1", roles.x1}};
    if (roles.y_target) j["roles"]["y_target"] = *roles.y_target;
    return j.dump(2) + "\n";
}

ScmSpec ScmSpec::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("SCM spec is not valid JSON: ") + ex.what());
    }
    ScmSpec s;
    try {
        for (const auto& u : j.at("exogenous")) {
            ExoVar e;
            e.name = u.at("name").get<std::string>();
            e.states = u.at("states").get<std::vector<std::string>>();
            e.probs = u.at("probs").get<std::vector<double>>();
            s.exogenous.push_back(std::move(e));
        }
        for (const auto& v : j.at("endogenous")) {
            EndoVar e;
            e.name = v.at("name").get<std::string>();
            e.states = v.at("states").get<std::vector<std::string>>();
            e.parents = v.at("parents").get<std::vector<std::string>>();
            e.table = v.at("table").get<std::vector<int32_t>>();
            s.endogenous.push_back(std::move(e));
        }
        const auto& r = j.at("roles");
        s.roles.x = r.at("x").get<std::string>();
        s.roles.y = r.at("y").get<std::string>();
        s.roles.z = r.value("z", std::vector<std::string>{});
        s.roles.w = r.value("w", std::vector<std::string>{});
        s.roles.x0 = r.at("x0").get<std::string>();
        s.roles.x1 = r.at("x1").get<std::string>();
        if (r.contains("y_target")) s.roles.y_target = r.at("y_target").get<std::string>();
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("SCM spec: ") + ex.what());
    }
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

std::vector<std::string> index_states(int card) {
    std::vector<std::string> out;
    for (int i = 0; i < card; ++i) out.push_back(std::to_string(i));
    return out;
}

std::vector<double> dense_probs(std::mt19937_64& rng, int card) {
    std::vector<double> p(static_cast<std::size_t>(card));
    double total = 0;
    for (auto& v : p) {
        v = 0.15 + unit_real(rng);
        total += v;
    }
    for (auto& v : p) v /= total;
    // keep the vector exactly normalized after rounding noise
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    p.back() += 1.0 - s;
    return p;
}

} // namespace

ScmSpec random_sfm_scm(std::uint64_t seed, const RandomScmConfig& cfg) {
    std::mt19937_64 rng(splitmix64(seed ^ 0x5ca1ab1eULL));
    auto randint = [&](int lo, int hi) { return draw_int(rng, lo, hi); };
    const int nz = cfg.n_confounders >= 0 ? cfg.n_confounders : randint(0, 3);
    const int nw = cfg.n_mediators >= 0 ? cfg.n_mediators : randint(0, 3);
    const int ycard = cfg.y_card > 0 ? cfg.y_card : randint(2, 3);
    const int max_card = std::max(2, cfg.max_card);
    bool shared = cfg.confounding == RandomScmConfig::Confounding::SharedXZ ||
                  (cfg.confounding == RandomScmConfig::Confounding::Random &&
                   nz > 0 && randint(0, 1) == 1);
    if (nz == 0) shared = false;

    ScmSpec s;
    auto add_exo = [&](const std::string& name, int card) {
        ExoVar u;
        u.name = name;
        u.states = index_states(card);
        u.probs = dense_probs(rng, card);
        s.exogenous.push_back(std::move(u));
        return name;
    };
    std::string u_shared;
    int shared_card = 0;
    if (shared) {
        shared_card = randint(2, 3);
        u_shared = add_exo("Uc", shared_card);
    }

    // endo var with parents (endo names) + own exogenous (+ shared for X/Z);
    // f = (T(parents, shared) + u_own) mod card keeps full conditional support
    auto add_endo = [&](const std::string& name, int card,
                        const std::vector<std::string>& endo_parents, bool with_shared) {
        EndoVar v;
        v.name = name;
        v.states = index_states(card);
        v.parents = endo_parents;
        if (with_shared) v.parents.push_back(u_shared);
        int ucard = card + randint(0, 1);
        std::string uname = add_exo("U" + name, ucard);
        v.parents.push_back(uname);
        std::uint64_t outer = 1;
        for (const auto& p : endo_parents)
            for (const auto& ev : s.endogenous)
                if (ev.name == p) outer *= ev.states.size();
        if (with_shared) outer *= static_cast<std::uint64_t>(shared_card);
        v.table.reserve(outer * static_cast<std::uint64_t>(ucard));
        for (std::uint64_t cell = 0; cell < outer; ++cell) {
            int shift = randint(0, card - 1);
            for (int uu = 0; uu < ucard; ++uu)
                v.table.push_back(static_cast<int32_t>((shift + uu) % card));
        }
        s.endogenous.push_back(std::move(v));
    };

    std::vector<std::string> znames, wnames;
    for (int i = 0; i < nz; ++i) {
        std::string name = "Z" + std::to_string(i + 1);
        add_endo(name, randint(2, max_card), znames, shared);
        znames.push_back(name);
        s.roles.z.push_back(name);
    }
    add_endo("X", 2, znames, shared);
    std::vector<std::string> wparents = znames;
    wparents.push_back("X");
    for (int i = 0; i < nw; ++i) {
        std::string name = "W" + std::to_string(i + 1);
        add_endo(name, randint(2, max_card), wparents, false);
        wparents.push_back(name);
        wnames.push_back(name);
        s.roles.w.push_back(name);
    }
    add_endo("Y", ycard, wparents, false);
    s.roles.x = "X";
    s.roles.y = "Y";
    s.roles.x0 = "0";
    s.roles.x1 = "1";
    s.roles.y_target = "1";
    s.validate();
    return s;
}

ScmSpec independent_mediators_construction(std::uint64_t seed, bool interaction) {
    std::mt19937_64 rng(splitmix64(seed ^ 0x7ea1f00dULL));
    auto randint = [&](int lo, int hi) { return draw_int(rng, lo, hi); };
    constexpr int kZ = 3, kW1 = 3, kW2 = 2, kNoise = 64;

    ScmSpec s;
    auto add_exo = [&](const std::string& name, int card, bool uniform) {
        ExoVar u;
        u.name = name;
        u.states = index_states(card);
        if (uniform) {
            u.probs.assign(static_cast<std::size_t>(card), 1.0 / card);
            double total = std::accumulate(u.probs.begin(), u.probs.end(), 0.0);
            u.probs.back() += 1.0 - total;
        } else {
            u.probs = dense_probs(rng, card);
        }
        s.exogenous.push_back(std::move(u));
    };
    add_exo("Uz", kZ, false);
    add_exo("Ux", 3, false);
    add_exo("Uw1", 4, false);
    add_exo("Uw2", 3, false);
    add_exo("Uy", kNoise, true);

    {
        EndoVar z;
        z.name = "Z";
        z.states = index_states(kZ);
        z.parents = {"Uz"};
        for (int u = 0; u < kZ; ++u) z.table.push_back(u);
        s.endogenous.push_back(std::move(z));
    }
    {
        EndoVar x;
        x.name = "X";
        x.states = index_states(2);
        x.parents = {"Z", "Ux"};
        for (int z = 0; z < kZ; ++z) {
            int shift = randint(0, 1);
            for (int u = 0; u < 3; ++u) x.table.push_back((shift + u) % 2);
        }
        s.endogenous.push_back(std::move(x));
    }
    // mediators respond to X and Z through independent noise only:
    // W1 _||_ W2 | X, Z by construction
    auto add_mediator = [&](const std::string& name, int card, const std::string& noise,
                            int noise_card) {
        EndoVar w;
        w.name = name;
        w.states = index_states(card);
        w.parents = {"X", "Z", noise};
        std::vector<int> base(kZ);
        for (int z = 0; z < kZ; ++z) base[static_cast<std::size_t>(z)] = randint(0, card - 1);
        for (int x = 0; x < 2; ++x)
            for (int z = 0; z < kZ; ++z) {
                // the x1 row is shifted off the x0 row so the mediator
                // genuinely responds to the protected feature
                int b = (base[static_cast<std::size_t>(z)] + x) % card;
                for (int u = 0; u < noise_card; ++u)
                    w.table.push_back((b + u) % card);
            }
        s.endogenous.push_back(std::move(w));
    };
    add_mediator("W1", kW1, "Uw1", 4);
    add_mediator("W2", kW2, "Uw2", 3);

    // P(Y=1 | x,z,w1,w2) realized by thresholding the uniform 64-state noise:
    // additive: K = B(x,z) + P1(w1,z) + P2(w2,z); interaction: multiplicative mix
    int B[2][kZ], P1[kW1][kZ], P2[kW2][kZ];
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < kZ; ++z) B[x][z] = 16 + randint(0, 12);
    for (int z = 0; z < kZ; ++z) {
        for (int w = 0; w < kW1; ++w) P1[w][z] = 4 * w + randint(0, 2);
        for (int w = 0; w < kW2; ++w) P2[w][z] = 8 * w + randint(0, 3);
    }
    EndoVar y;
    y.name = "Y";
    y.states = index_states(2);
    y.parents = {"X", "Z", "W1", "W2", "Uy"};
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < kZ; ++z)
            for (int w1 = 0; w1 < kW1; ++w1)
                for (int w2 = 0; w2 < kW2; ++w2) {
                    int k = interaction ? B[x][z] + (P1[w1][z] * P2[w2][z]) % 25
                                        : B[x][z] + P1[w1][z] + P2[w2][z];
                    for (int u = 0; u < kNoise; ++u)
                        y.table.push_back(u < k ? 1 : 0);
                }
    s.endogenous.push_back(std::move(y));

    s.roles.x = "X";
    s.roles.y = "Y";
    s.roles.z = {"Z"};
    s.roles.w = {"W1", "W2"};
    s.roles.x0 = "0";
    s.roles.x1 = "1";
    s.roles.y_target = "1";
    s.validate();
    return s;
}

} // namespace causalfair
