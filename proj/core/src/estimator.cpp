#include <causalfair/estimator.hpp>
#include <causalfair/digest.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <set>

namespace causalfair {

bool JointDomain::next(std::vector<int>& codes) const {
    for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
        if (++codes[static_cast<std::size_t>(i)] < vars[static_cast<std::size_t>(i)].card())
            return true;
        codes[static_cast<std::size_t>(i)] = 0;
    }
    return false;
}

std::vector<std::string> JointDomain::labels(const std::vector<int>& codes) const {
    std::vector<std::string> out;
    out.reserve(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i)
        out.push_back(vars[i].states[static_cast<std::size_t>(codes[i])]);
    return out;
}

JointDomain make_joint_domain(std::vector<VarMeta> vars, std::uint64_t cap) {
    JointDomain dom;
    dom.size = 1;
    for (const auto& v : vars) {
        if (v.card() <= 0)
            throw DataError("variable '" + v.name + "' has no declared states");
        dom.size *= static_cast<std::uint64_t>(v.card());
        if (dom.size > cap)
            throw CapExceeded("joint state space of " + std::to_string(vars.size()) +
                              " variables exceeds cap " + std::to_string(cap));
    }
    dom.vars = std::move(vars);
    return dom;
}

namespace {

std::vector<VarMeta> universe_order(const SfmRoles& r) {
    std::vector<VarMeta> out;
    for (const auto& n : r.z) out.push_back({n, {}});
    out.push_back({r.x, {}});
    for (const auto& n : r.w) out.push_back({n, {}});
    out.push_back({r.y, {}});
    return out;
}

} // namespace

SfmEstimator SfmEstimator::fit(const Dataset& d, const SfmRoles& r, double alpha,
                               std::uint64_t cap) {
    r.validate();
    if (alpha < 0) throw ConfigError("alpha must be nonnegative");
    SfmEstimator e;
    e.roles_ = r;
    e.alpha_ = alpha;
    e.cap_ = cap;
    e.n_raw_rows_ = d.n_rows;
    e.vars_ = universe_order(r);
    for (auto& v : e.vars_) {
        const Column& c = d.col(v.name);
        if (!c.discrete())
            throw DataError("role column '" + v.name +
                            "' is continuous; discretize it before estimation");
        v.states = c.states;
        e.codes_.push_back(c.codes);
    }
    e.init_strides();
    return e;
}

SfmEstimator SfmEstimator::fit_exact(const ExactJoint& joint, const SfmRoles& r,
                                     std::uint64_t cap) {
    r.validate();
    SfmEstimator e;
    e.roles_ = r;
    e.alpha_ = 0.0;
    e.cap_ = cap;
    e.n_raw_rows_ = 0;
    e.vars_ = universe_order(r);

    std::vector<int> src(e.vars_.size(), -1);
    for (std::size_t i = 0; i < e.vars_.size(); ++i) {
        for (std::size_t j = 0; j < joint.cols.size(); ++j)
            if (joint.cols[j].name == e.vars_[i].name) src[i] = static_cast<int>(j);
        if (src[i] < 0)
            throw DataError("exact joint lacks role column '" + e.vars_[i].name + "'");
        e.vars_[i].states = joint.cols[static_cast<std::size_t>(src[i])].states;
    }
    // cells become weighted rows; columns outside the universe marginalize away
    e.codes_.assign(e.vars_.size(), {});
    for (auto& col : e.codes_) col.reserve(joint.cells.size());
    e.weights_.reserve(joint.cells.size());
    for (const auto& [cell, p] : joint.cells) {
        if (p <= 0) continue;
        for (std::size_t i = 0; i < e.vars_.size(); ++i)
            e.codes_[i].push_back(cell[static_cast<std::size_t>(src[i])]);
        e.weights_.push_back(p);
    }
    e.init_strides();
    return e;
}

void SfmEstimator::init_strides() {
    strides_.assign(vars_.size(), 1);
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        strides_[i] = s;
        s *= static_cast<std::uint64_t>(vars_[i].card());
    }
    cache_ = std::make_unique<Cache>();
    for (std::size_t i = 0; i < vars_.size(); ++i) cache_->factors.push_back(nullptr);
}

const VarMeta& SfmEstimator::var(const std::string& name) const {
    int p = pos_of(name);
    if (p < 0) throw DataError("column '" + name + "' is not a role column");
    return vars_[static_cast<std::size_t>(p)];
}

int SfmEstimator::pos_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    return -1;
}

std::string SfmEstimator::roles_digest() const {
    return Sha256::of(roles_.canonical_json());
}

std::size_t SfmEstimator::uniform_fallback_cells() const {
    return cache_->fallback_cells.load();
}

const SfmEstimator::Factor& SfmEstimator::factor(int pos) const {
    {
        std::shared_lock lock(cache_->mutex);
        if (cache_->factors[static_cast<std::size_t>(pos)])
            return *cache_->factors[static_cast<std::size_t>(pos)];
    }
    std::unique_lock lock(cache_->mutex);
    auto& slot = cache_->factors[static_cast<std::size_t>(pos)];
    if (slot) return *slot;

    auto f = std::make_unique<Factor>();
    const int card = vars_[static_cast<std::size_t>(pos)].card();
    const std::size_t n = codes_[0].size();
    for (std::size_t r = 0; r < n; ++r) {
        std::uint64_t key = 0;
        for (int j = 0; j < pos; ++j)
            key += strides_[static_cast<std::size_t>(j)] *
                   static_cast<std::uint64_t>(codes_[static_cast<std::size_t>(j)][r]);
        double wgt = weights_.empty() ? 1.0 : weights_[r];
        FactorRow& row = f->rows[key];
        if (row.probs.empty()) row.probs.assign(static_cast<std::size_t>(card), 0.0);
        row.probs[static_cast<std::size_t>(codes_[static_cast<std::size_t>(pos)][r])] += wgt;
        row.weight += wgt;
    }
    // raw weights -> smoothed probabilities
    for (auto& [key, row] : f->rows) {
        double denom = row.weight + alpha_ * card;
        for (auto& p : row.probs) p = (p + alpha_) / denom;
    }
    slot = std::move(f);
    return *slot;
}

std::vector<double> SfmEstimator::evaluate(const std::vector<int>& target_pos,
                                           const std::vector<int>& given_pos,
                                           const std::vector<int>& given_states) const {
    const int nvars = static_cast<int>(vars_.size());
    std::vector<int> pinned(static_cast<std::size_t>(nvars), -1);
    std::vector<int> tslot(static_cast<std::size_t>(nvars), -1);
    int maxpos = 0;
    for (std::size_t i = 0; i < given_pos.size(); ++i) {
        pinned[static_cast<std::size_t>(given_pos[i])] = given_states[i];
        maxpos = std::max(maxpos, given_pos[i]);
    }
    for (std::size_t i = 0; i < target_pos.size(); ++i) {
        tslot[static_cast<std::size_t>(target_pos[i])] = static_cast<int>(i);
        maxpos = std::max(maxpos, target_pos[i]);
    }

    // enumeration guard over free positions
    std::uint64_t work = 1;
    for (int p = 0; p <= maxpos; ++p) {
        if (pinned[static_cast<std::size_t>(p)] >= 0) continue;
        work *= static_cast<std::uint64_t>(vars_[static_cast<std::size_t>(p)].card());
        if (work > cap_)
            throw CapExceeded("query enumeration exceeds joint-state cap " +
                              std::to_string(cap_));
    }

    std::vector<std::uint64_t> tstrides(target_pos.size(), 1);
    std::uint64_t out_size = 1;
    for (int i = static_cast<int>(target_pos.size()) - 1; i >= 0; --i) {
        tstrides[static_cast<std::size_t>(i)] = out_size;
        out_size *= static_cast<std::uint64_t>(
            vars_[static_cast<std::size_t>(target_pos[static_cast<std::size_t>(i)])].card());
    }
    std::vector<double> out(out_size, 0.0);

    const bool smoothing = alpha_ > 0;
    std::function<void(int, std::uint64_t, double, std::uint64_t)> walk =
        [&](int pos, std::uint64_t prefix_key, double weight, std::uint64_t tindex) {
            if (weight == 0.0) return;
            if (pos > maxpos) {
                out[tindex] += weight;
                return;
            }
            const Factor& f = factor(pos);
            const int card = vars_[static_cast<std::size_t>(pos)].card();
            auto it = f.rows.find(prefix_key);
            const FactorRow* row = it == f.rows.end() ? nullptr : &it->second;
            if (!row) {
                if (!smoothing) return;  // zero upstream mass must have pruned already
                cache_->fallback_cells.fetch_add(1, std::memory_order_relaxed);
            }
            auto prob_of = [&](int s) {
                return row ? row->probs[static_cast<std::size_t>(s)] : 1.0 / card;
            };
            const int pin = pinned[static_cast<std::size_t>(pos)];
            const int slot = tslot[static_cast<std::size_t>(pos)];
            if (pin >= 0) {
                walk(pos + 1, prefix_key + strides_[static_cast<std::size_t>(pos)] *
                                  static_cast<std::uint64_t>(pin),
                     weight * prob_of(pin), tindex);
            } else if (slot >= 0) {
                for (int s = 0; s < card; ++s)
                    walk(pos + 1, prefix_key + strides_[static_cast<std::size_t>(pos)] *
                                      static_cast<std::uint64_t>(s),
                         weight * prob_of(s),
                         tindex + tstrides[static_cast<std::size_t>(slot)] *
                                      static_cast<std::uint64_t>(s));
            } else {
                for (int s = 0; s < card; ++s)
                    walk(pos + 1, prefix_key + strides_[static_cast<std::size_t>(pos)] *
                                      static_cast<std::uint64_t>(s),
                         weight * prob_of(s), tindex);
            }
        };
    walk(0, 0, 1.0, 0);

    double total = std::accumulate(out.begin(), out.end(), 0.0);
    if (total <= 0.0) {
        if (!smoothing)
            throw UnidentifiableCell(
                "alpha = 0 and the conditioning cell has zero count");
        throw DataError("conditional query produced zero mass");
    }
    for (auto& v : out) v /= total;
    return out;
}

std::shared_ptr<const std::vector<double>> SfmEstimator::conditional_row(
    const std::vector<std::string>& targets, const Given& given) const {
    if (targets.empty()) throw ConfigError("conditional: empty target list");
    std::vector<int> tpos, gpos, gstates;
    std::set<int> used;
    for (const auto& t : targets) {
        int p = pos_of(t);
        if (p < 0) throw DataError("unknown column '" + t + "'");
        if (!used.insert(p).second)
            throw ConfigError("conditional: column '" + t + "' repeated");
        tpos.push_back(p);
    }
    for (const auto& [col, state] : given) {
        int p = pos_of(col);
        if (p < 0) throw DataError("unknown column '" + col + "'");
        if (!used.insert(p).second)
            throw ConfigError("conditional: targets must be disjoint from given ('" +
                              col + "')");
        const auto& st = vars_[static_cast<std::size_t>(p)].states;
        auto it = std::find(st.begin(), st.end(), state);
        if (it == st.end())
            throw DataError("unknown state '" + state + "' of column '" + col + "'");
        gpos.push_back(p);
        gstates.push_back(static_cast<int>(it - st.begin()));
    }

    std::string table_key;
    for (const auto& t : targets) table_key += t + "\x1f";
    table_key += "|";
    for (int p : gpos) table_key += vars_[static_cast<std::size_t>(p)].name + "\x1f";
    std::uint64_t row_key = 0;
    for (std::size_t i = 0; i < gpos.size(); ++i)
        row_key = row_key * static_cast<std::uint64_t>(
                                vars_[static_cast<std::size_t>(gpos[i])].card()) +
                  static_cast<std::uint64_t>(gstates[i]);
    {
        std::shared_lock lock(cache_->mutex);
        auto it = cache_->tables.find(table_key);
        if (it != cache_->tables.end()) {
            auto rit = it->second->rows.find(row_key);
            if (rit != it->second->rows.end()) return rit->second;
        }
    }
    auto vec = std::make_shared<const std::vector<double>>(
        evaluate(tpos, gpos, gstates));
    std::unique_lock lock(cache_->mutex);
    auto& table = cache_->tables[table_key];
    if (!table) {
        table = std::make_shared<ConditionalTable>();
        table->target_vars = targets;
        for (int p : gpos) table->given_vars.push_back(vars_[static_cast<std::size_t>(p)].name);
        for (int p : tpos)
            table->target_cards.push_back(vars_[static_cast<std::size_t>(p)].card());
        for (int p : gpos)
            table->given_cards.push_back(vars_[static_cast<std::size_t>(p)].card());
        table->alpha = alpha_;
    }
    auto [rit, inserted] = table->rows.emplace(row_key, vec);
    return rit->second;
}

std::vector<double> SfmEstimator::conditional(const std::vector<std::string>& targets,
                                              const Given& given) const {
    return *conditional_row(targets, given);
}

double SfmEstimator::cprob(const Given& target, const Given& given) const {
    std::vector<std::string> tvars;
    tvars.reserve(target.size());
    for (const auto& [col, state] : target) tvars.push_back(col);
    auto row = conditional_row(tvars, given);
    std::uint64_t idx = 0;
    for (const auto& [col, state] : target) {
        const VarMeta& v = var(col);
        auto it = std::find(v.states.begin(), v.states.end(), state);
        if (it == v.states.end())
            throw DataError("unknown state '" + state + "' of column '" + col + "'");
        idx = idx * static_cast<std::uint64_t>(v.card()) +
              static_cast<std::uint64_t>(it - v.states.begin());
    }
    return (*row)[idx];
}

double SfmEstimator::probability(const Given& event) const {
    if (event.empty()) return 1.0;
    return cprob(event, {});
}

JointDomain SfmEstimator::domain(const std::vector<std::string>& names) const {
    std::vector<VarMeta> vs;
    vs.reserve(names.size());
    for (const auto& n : names) vs.push_back(var(n));
    return make_joint_domain(std::move(vs), cap_);
}

std::string SfmEstimator::dump_table_json(
    const std::vector<std::string>& targets,
    const std::vector<std::string>& given_vars) const {
    std::string out = "{\"targets\":[";
    for (std::size_t i = 0; i < targets.size(); ++i)
        out += (i ? ",\"" : "\"") + targets[i] + "\"";
    out += "],\"given\":[";
    for (std::size_t i = 0; i < given_vars.size(); ++i)
        out += (i ? ",\"" : "\"") + given_vars[i] + "\"";
    out += "],\"rows\":[";
    char buf[32];
    JointDomain dom = domain(given_vars);
    bool first_row = true;
    for (auto codes = dom.first();;) {
        Given given;
        auto labels = dom.labels(codes);
        for (std::size_t i = 0; i < given_vars.size(); ++i)
            given.emplace_back(given_vars[i], labels[i]);
        auto row = conditional_row(targets, given);
        out += first_row ? "{\"given_state\":[" : ",{\"given_state\":[";
        first_row = false;
        for (std::size_t i = 0; i < labels.size(); ++i)
            out += (i ? ",\"" : "\"") + labels[i] + "\"";
        out += "],\"probs\":[";
        for (std::size_t i = 0; i < row->size(); ++i) {
            auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), (*row)[i]);
            (void)ec;
            out += (i ? "," : "") + std::string(buf, p);
        }
        out += "]}";
        if (!dom.next(codes)) break;
    }
    return out + "]}";
}

double SfmEstimator::raw_count(const Given& assignment) const {
    std::string key;
    std::vector<int> pos, st;
    for (const auto& [col, state] : assignment) {
        int p = pos_of(col);
        if (p < 0) throw DataError("unknown column '" + col + "'");
        const auto& states = vars_[static_cast<std::size_t>(p)].states;
        auto it = std::find(states.begin(), states.end(), state);
        if (it == states.end())
            throw DataError("unknown state '" + state + "' of column '" + col + "'");
        pos.push_back(p);
        st.push_back(static_cast<int>(it - states.begin()));
        key += std::to_string(p) + "=" + std::to_string(st.back()) + ";";
    }
    {
        std::shared_lock lock(cache_->mutex);
        auto it = cache_->counts.find(key);
        if (it != cache_->counts.end()) return it->second;
    }
    double count = 0;
    const std::size_t n = codes_.empty() ? 0 : codes_[0].size();
    for (std::size_t r = 0; r < n; ++r) {
        bool match = true;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (codes_[static_cast<std::size_t>(pos[i])][r] != st[i]) {
                match = false;
                break;
            }
        }
        if (match) count += weights_.empty() ? 1.0 : weights_[r];
    }
    std::unique_lock lock(cache_->mutex);
    cache_->counts.emplace(key, count);
    return count;
}

} // namespace causalfair
