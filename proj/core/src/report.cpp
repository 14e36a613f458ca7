#include <causalfair/report.hpp>
#include <causalfair/digest.hpp>

#include <nlohmann/json.hpp>

#include <cmath>

using ordered_json = nlohmann::ordered_json;

namespace causalfair {

std::string to_string(OutcomeType t) {
    switch (t) {
        case OutcomeType::Binary: return "binary";
        case OutcomeType::Categorical: return "categorical";
        case OutcomeType::Continuous: return "continuous";
    }
    return "binary";
}

namespace {

OutcomeType outcome_type_from_string(const std::string& s) {
    if (s == "binary") return OutcomeType::Binary;
    if (s == "categorical") return OutcomeType::Categorical;
    if (s == "continuous") return OutcomeType::Continuous;
    throw ConfigError("/outcome_type: unknown value '" + s + "'");
}

/// rounding to 4 decimals happens here and only here (serialization)
double round4(double v) {
    if (!std::isfinite(v) || std::abs(v) >= 1e12) return v;   // llround range guard
    double r = std::llround(v * 1e4) / 1e4;
    return r == 0.0 ? 0.0 : r;   // normalize -0
}

ordered_json round4_array(const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(round4(x));
    return a;
}

std::string join_labels(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

ReportBundle build_bundle(const EffectLedger& ledger,
                          const std::optional<MediatorDecomposition>& mediators_reversed,
                          const std::optional<ConfounderDecomposition>& confounders,
                          const std::optional<std::vector<PairwiseEffect>>& pairwise,
                          const std::optional<std::vector<ZSpecificEffect>>& z_specific,
                          const std::optional<StepwiseDecomposition>& stepwise,
                          const std::optional<ThresholdCurve>& curve,
                          OutcomeType outcome_type, const BundleMeta& meta) {
    if (std::abs(ledger.residual_tv_te_se) > kIdentityTol ||
        std::abs(ledger.residual_te_de_ie) > kIdentityTol)
        throw IdentityViolation("ledger residuals breached before serialization");
    if (mediators_reversed && mediators_reversed->residual > kIdentityTol)
        throw IdentityViolation("mediator decomposition residual breached");
    if (confounders && confounders->residual > kIdentityTol)
        throw IdentityViolation("confounder decomposition residual breached");

    ReportBundle b;
    b.x0 = ledger.contrast.x0;
    b.x1 = ledger.contrast.x1;
    b.y_target = ledger.contrast.y.empty() ? std::nullopt
                                           : std::optional<std::string>(ledger.contrast.y);
    b.outcome_type = outcome_type;
    b.tv = ledger.tv;
    b.te = ledger.te;
    b.de = ledger.de;
    b.ie = ledger.ie_reversed;
    b.se = ledger.se;
    if (mediators_reversed) {
        std::vector<std::pair<std::string, double>> m;
        for (std::size_t i = 0; i < mediators_reversed->order.size(); ++i)
            m.emplace_back(mediators_reversed->order[i], mediators_reversed->components[i]);
        b.ie_by_mediator = std::move(m);
    }
    if (confounders) {
        std::vector<std::pair<std::string, double>> m;
        for (std::size_t i = 0; i < confounders->order.size(); ++i)
            m.emplace_back(confounders->order[i], confounders->components[i]);
        b.se_by_confounder = std::move(m);
    }
    if (pairwise) {
        std::vector<XSpecificEntry> xs;
        for (const auto& p : *pairwise) {
            XSpecificEntry e;
            e.x_value_pair = p.x0 + "->" + p.x1;
            e.te = p.ledger.te;
            e.de = p.ledger.de;
            e.ie = p.ledger.ie_reversed;
            xs.push_back(std::move(e));
        }
        b.x_specific = std::move(xs);
    }
    if (z_specific) {
        std::vector<ZSpecificEntry> zs;
        for (const auto& z : *z_specific) {
            ZSpecificEntry e;
            e.z_state = join_labels(z.z_state, "|");
            e.te = z.te;
            e.de = z.de;
            e.ie = z.ie_reversed;
            e.n_rows = z.n_rows;
            zs.push_back(std::move(e));
        }
        b.z_specific = std::move(zs);
    }
    if (stepwise) {
        b.stepwise_enabled = true;
        for (const auto& st : stepwise->steps)
            b.effects_by_step.push_back({st.from, st.to, st.te, st.tv, st.se, st.n_rows});
    }
    if (curve) {
        CurveEntry ce;
        ce.grid = curve->grid;
        ce.tv = curve->tv;
        ce.te = curve->te;
        ce.de = curve->de;
        ce.ie = curve->ie;
        ce.se = curve->se;
        ce.selected_threshold = curve->selected_threshold;
        b.threshold_curve = std::move(ce);
    }
    b.metadata = meta;
    return b;
}

std::string bundle_to_json(const ReportBundle& b) {
    ordered_json j;
    j["schema_version"] = b.schema_version;
    j["x0"] = b.x0;
    j["x1"] = b.x1;
    if (b.y_target) j["y_target"] = *b.y_target; else j["y_target"] = nullptr;
    j["outcome_type"] = to_string(b.outcome_type);
    j["effects"] = {{"tv", round4(b.tv)}, {"te", round4(b.te)}, {"de", round4(b.de)},
                    {"ie", round4(b.ie)}, {"se", round4(b.se)}};
    if (b.ie_by_mediator) {
        ordered_json m = ordered_json::object();
        for (const auto& [name, v] : *b.ie_by_mediator) m[name] = round4(v);
        j["ie_by_mediator"] = m;
    } else {
        j["ie_by_mediator"] = nullptr;
    }
    if (b.se_by_confounder) {
        ordered_json m = ordered_json::object();
        for (const auto& [name, v] : *b.se_by_confounder) m[name] = round4(v);
        j["se_by_confounder"] = m;
    } else {
        j["se_by_confounder"] = nullptr;
    }
    if (b.x_specific) {
        ordered_json a = ordered_json::array();
        for (const auto& e : *b.x_specific)
            a.push_back({{"X_value_pair", e.x_value_pair}, {"te", round4(e.te)},
                         {"de", round4(e.de)}, {"ie", round4(e.ie)}});
        j["x_specific"] = a;
    } else {
        j["x_specific"] = nullptr;
    }
    if (b.z_specific) {
        ordered_json a = ordered_json::array();
        for (const auto& e : *b.z_specific)
            a.push_back({{"z_state", e.z_state}, {"te", round4(e.te)}, {"de", round4(e.de)},
                         {"ie", round4(e.ie)}, {"n_rows", e.n_rows}});
        j["z_specific"] = a;
    } else {
        j["z_specific"] = nullptr;
    }
    j["stepwise"] = ordered_json::object();
    j["stepwise"]["enabled"] = b.stepwise_enabled;
    if (b.stepwise_enabled) {
        ordered_json a = ordered_json::array();
        for (const auto& st : b.effects_by_step)
            a.push_back({{"from", st.from}, {"to", st.to}, {"te", round4(st.te)},
                         {"tv", round4(st.tv)}, {"se", round4(st.se)},
                         {"n_rows", st.n_rows}});
        j["stepwise"]["effects_by_step"] = a;
    }
    if (b.threshold_curve) {
        const CurveEntry& c = *b.threshold_curve;
        ordered_json cj;
        cj["grid"] = round4_array(c.grid);
        cj["tv"] = round4_array(c.tv);
        cj["te"] = round4_array(c.te);
        cj["de"] = round4_array(c.de);
        cj["ie"] = round4_array(c.ie);
        cj["se"] = round4_array(c.se);
        if (c.selected_threshold) cj["selected_threshold"] = round4(*c.selected_threshold);
        else cj["selected_threshold"] = nullptr;
        j["threshold_curve"] = cj;
    } else {
        j["threshold_curve"] = nullptr;
    }
    ordered_json meta;
    meta["n_rows"] = b.metadata.n_rows;
    meta["alpha"] = b.metadata.alpha;
    meta["roles"] = b.metadata.roles_json.empty()
                        ? ordered_json(nullptr)
                        : ordered_json::parse(b.metadata.roles_json);
    meta["dataset_digest"] = b.metadata.dataset_digest;
    j["metadata"] = meta;
    return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void bundle_fail(const std::string& pointer, const std::string& why) {
    throw ConfigError(pointer + ": " + why);
}

double need_number(const ordered_json& j, const std::string& pointer) {
    if (!j.is_number()) bundle_fail(pointer, "expected number");
    return j.get<double>();
}

std::string need_string(const ordered_json& j, const std::string& pointer) {
    if (!j.is_string()) bundle_fail(pointer, "expected string");
    return j.get<std::string>();
}

} // namespace

ReportBundle bundle_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("/: not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) bundle_fail("/", "expected object");
    ReportBundle b;
    if (!j.contains("schema_version")) bundle_fail("/schema_version", "missing");
    b.schema_version = need_string(j["schema_version"], "/schema_version");
    if (!j.contains("x0")) bundle_fail("/x0", "missing");
    b.x0 = need_string(j["x0"], "/x0");
    if (!j.contains("x1")) bundle_fail("/x1", "missing");
    b.x1 = need_string(j["x1"], "/x1");
    if (j.contains("y_target") && !j["y_target"].is_null())
        b.y_target = need_string(j["y_target"], "/y_target");
    if (!j.contains("outcome_type")) bundle_fail("/outcome_type", "missing");
    b.outcome_type = outcome_type_from_string(need_string(j["outcome_type"], "/outcome_type"));
    if (!j.contains("effects") || !j["effects"].is_object())
        bundle_fail("/effects", "missing object");
    const auto& eff = j["effects"];
    for (const char* k : {"tv", "te", "de", "ie", "se"})
        if (!eff.contains(k)) bundle_fail(std::string("/effects/") + k, "missing");
    b.tv = need_number(eff["tv"], "/effects/tv");
    b.te = need_number(eff["te"], "/effects/te");
    b.de = need_number(eff["de"], "/effects/de");
    b.ie = need_number(eff["ie"], "/effects/ie");
    b.se = need_number(eff["se"], "/effects/se");
    if (j.contains("ie_by_mediator") && !j["ie_by_mediator"].is_null()) {
        std::vector<std::pair<std::string, double>> m;
        for (const auto& [k, v] : j["ie_by_mediator"].items())
            m.emplace_back(k, need_number(v, "/ie_by_mediator/" + k));
        b.ie_by_mediator = std::move(m);
    }
    if (j.contains("se_by_confounder") && !j["se_by_confounder"].is_null()) {
        std::vector<std::pair<std::string, double>> m;
        for (const auto& [k, v] : j["se_by_confounder"].items())
            m.emplace_back(k, need_number(v, "/se_by_confounder/" + k));
        b.se_by_confounder = std::move(m);
    }
    if (j.contains("x_specific") && !j["x_specific"].is_null()) {
        if (!j["x_specific"].is_array()) bundle_fail("/x_specific", "expected array or null");
        std::vector<XSpecificEntry> xs;
        std::size_t i = 0;
        for (const auto& e : j["x_specific"]) {
            std::string p = "/x_specific/" + std::to_string(i++);
            XSpecificEntry x;
            x.x_value_pair = need_string(e.at("X_value_pair"), p + "/X_value_pair");
            x.te = need_number(e.at("te"), p + "/te");
            x.de = need_number(e.at("de"), p + "/de");
            x.ie = need_number(e.at("ie"), p + "/ie");
            xs.push_back(std::move(x));
        }
        b.x_specific = std::move(xs);
    }
    if (j.contains("z_specific") && !j["z_specific"].is_null()) {
        if (!j["z_specific"].is_array()) bundle_fail("/z_specific", "expected array or null");
        std::vector<ZSpecificEntry> zs;
        std::size_t i = 0;
        for (const auto& e : j["z_specific"]) {
            std::string p = "/z_specific/" + std::to_string(i++);
            ZSpecificEntry z;
            z.z_state = need_string(e.at("z_state"), p + "/z_state");
            z.te = need_number(e.at("te"), p + "/te");
            z.de = need_number(e.at("de"), p + "/de");
            z.ie = need_number(e.at("ie"), p + "/ie");
            z.n_rows = need_number(e.at("n_rows"), p + "/n_rows");
            zs.push_back(std::move(z));
        }
        b.z_specific = std::move(zs);
    }
    if (!j.contains("stepwise") || !j["stepwise"].is_object())
        bundle_fail("/stepwise", "missing object");
    if (!j["stepwise"].contains("enabled"))
        bundle_fail("/stepwise/enabled", "missing");
    if (!j["stepwise"]["enabled"].is_boolean())
        bundle_fail("/stepwise/enabled", "expected boolean");
    b.stepwise_enabled = j["stepwise"]["enabled"].get<bool>();
    if (b.stepwise_enabled) {
        if (!j["stepwise"].contains("effects_by_step"))
            bundle_fail("/stepwise/effects_by_step", "missing while enabled");
        std::size_t i = 0;
        for (const auto& e : j["stepwise"]["effects_by_step"]) {
            std::string p = "/stepwise/effects_by_step/" + std::to_string(i++);
            StepEntry st;
            st.from = need_string(e.at("from"), p + "/from");
            st.to = need_string(e.at("to"), p + "/to");
            st.te = need_number(e.at("te"), p + "/te");
            st.tv = need_number(e.at("tv"), p + "/tv");
            st.se = need_number(e.at("se"), p + "/se");
            st.n_rows = need_number(e.at("n_rows"), p + "/n_rows");
            b.effects_by_step.push_back(std::move(st));
        }
    } else if (j["stepwise"].contains("effects_by_step")) {
        bundle_fail("/stepwise/effects_by_step", "present while stepwise.enabled is false");
    }
    if (j.contains("threshold_curve") && !j["threshold_curve"].is_null()) {
        const auto& c = j["threshold_curve"];
        CurveEntry ce;
        ce.grid = c.at("grid").get<std::vector<double>>();
        ce.tv = c.at("tv").get<std::vector<double>>();
        ce.te = c.at("te").get<std::vector<double>>();
        ce.de = c.at("de").get<std::vector<double>>();
        ce.ie = c.at("ie").get<std::vector<double>>();
        ce.se = c.at("se").get<std::vector<double>>();
        if (c.contains("selected_threshold") && !c["selected_threshold"].is_null())
            ce.selected_threshold = need_number(c["selected_threshold"],
                                                "/threshold_curve/selected_threshold");
        b.threshold_curve = std::move(ce);
    }
    if (j.contains("metadata") && j["metadata"].is_object()) {
        const auto& m = j["metadata"];
        if (m.contains("n_rows")) b.metadata.n_rows = m["n_rows"].get<std::size_t>();
        if (m.contains("alpha")) b.metadata.alpha = m["alpha"].get<double>();
        if (m.contains("roles") && !m["roles"].is_null())
            b.metadata.roles_json = m["roles"].dump();
        if (m.contains("dataset_digest") && m["dataset_digest"].is_string())
            b.metadata.dataset_digest = m["dataset_digest"].get<std::string>();
    }
    return b;
}

std::string sankey_export(const ReportBundle& b) {
    ordered_json j;
    ordered_json nodes = ordered_json::array();
    ordered_json links = ordered_json::array();
    auto add_node = [&](const std::string& id, const std::string& label) {
        nodes.push_back({{"id", id}, {"label", label}});
    };
    std::vector<double> flow_values;
    auto add_link = [&](const std::string& src, const std::string& dst, double value) {
        int sign = value > 0 ? 1 : (value < 0 ? -1 : 0);
        links.push_back({{"source", src}, {"target", dst},
                         {"value", round4(std::abs(value))}, {"sign", sign}});
        flow_values.push_back(value);
    };
    add_node("tv", "total variation");
    add_node("te", "total effect");
    add_node("se", "spurious effect");
    add_node("de", "direct effect");
    add_node("ie", "indirect effect");
    add_link("tv", "te", b.te);
    add_link("tv", "se", b.se);
    add_link("te", "de", b.de);
    add_link("te", "ie", -b.ie);   // TE = DE + (-IE_rev)
    if (b.ie_by_mediator)
        for (const auto& [name, v] : *b.ie_by_mediator) {
            add_node("w:" + name, name);
            add_link("ie", "w:" + name, -v);
        }
    if (b.se_by_confounder)
        for (const auto& [name, v] : *b.se_by_confounder) {
            add_node("z:" + name, name);
            add_link("se", "z:" + name, v);
        }
    bool has_pos = false, has_neg = false;
    for (double v : flow_values) {
        if (v > 0) has_pos = true;
        if (v < 0) has_neg = true;
    }
    j["nodes"] = nodes;
    j["links"] = links;
    j["renderable_as_flow"] = !(has_pos && has_neg);
    return j.dump(2) + "\n";
}

std::string report_system_prompt_digest() {
    return Sha256::of(report_system_prompt());
}

PromptPair assemble_prompts(const ReportBundle& b) {
    return PromptPair{report_system_prompt(), bundle_to_json(b)};
}

} // namespace causalfair
