#include <causalfair/config.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace causalfair {

namespace {

std::string need_string_field(const json& j, const char* field) {
    if (!j.contains(field))
        throw ConfigError(std::string("config: missing required field '") + field + "'");
    if (!j[field].is_string())
        throw ConfigError(std::string("config: field '") + field + "' must be a string");
    return j[field].get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* field) {
    if (!j.contains(field)) return {};
    if (!j[field].is_array())
        throw ConfigError(std::string("config: field '") + field +
                          "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j[field]) {
        if (!e.is_string())
            throw ConfigError(std::string("config: field '") + field +
                              "' must contain only strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

BinRule parse_bin_rule(const json& j, const std::string& col) {
    if (j.is_string()) {
        if (j.get<std::string>() == "passthrough") return BinRule::passthrough();
        throw ConfigError("config: bins." + col + ": unknown rule '" +
                          j.get<std::string>() + "'");
    }
    if (!j.is_object())
        throw ConfigError("config: bins." + col + ": expected object or \"passthrough\"");
    if (j.contains("equal_width")) {
        if (!j["equal_width"].is_number_integer())
            throw ConfigError("config: bins." + col + ".equal_width must be an integer");
        return BinRule::equal_width(j["equal_width"].get<int>());
    }
    if (j.contains("edges")) {
        if (!j["edges"].is_array())
            throw ConfigError("config: bins." + col + ".edges must be an array");
        return BinRule::explicit_edges(j["edges"].get<std::vector<double>>());
    }
    throw ConfigError("config: bins." + col + ": needs 'equal_width' or 'edges'");
}

} // namespace

AnalysisConfig parse_analysis_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config: not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    AnalysisConfig cfg;
    cfg.roles.x = need_string_field(j, "x");
    cfg.roles.y = need_string_field(j, "y");
    cfg.roles.z = string_list(j, "z");
    cfg.roles.w = string_list(j, "w");
    cfg.roles.x0_states = string_list(j, "x0_states");
    cfg.roles.x1_states = string_list(j, "x1_states");
    if (cfg.roles.x0_states.empty())
        throw ConfigError("config: missing required field 'x0_states'");
    if (cfg.roles.x1_states.empty())
        throw ConfigError("config: missing required field 'x1_states'");
    if (j.contains("y_target") && !j["y_target"].is_null())
        cfg.roles.y_target = need_string_field(j, "y_target");
    cfg.roles.validate();

    if (j.contains("columns")) {
        if (!j["columns"].is_array())
            throw ConfigError("config: field 'columns' must be an array");
        for (const auto& cj : j["columns"]) {
            ColumnSpec c;
            c.name = need_string_field(cj, "name");
            if (cj.contains("kind"))
                c.kind = column_kind_from_string(need_string_field(cj, "kind"));
            if (cj.contains("states")) {
                for (const auto& s : cj["states"]) c.declared_states.push_back(s);
            }
            c.validate();
            cfg.columns.push_back(std::move(c));
        }
    }
    auto ensure_column = [&](const std::string& name) {
        for (const auto& c : cfg.columns)
            if (c.name == name) return;
        ColumnSpec c;
        c.name = name;
        cfg.columns.push_back(std::move(c));
    };
    ensure_column(cfg.roles.x);
    ensure_column(cfg.roles.y);
    for (const auto& n : cfg.roles.z) ensure_column(n);
    for (const auto& n : cfg.roles.w) ensure_column(n);

    if (j.contains("bins")) {
        if (!j["bins"].is_object())
            throw ConfigError("config: field 'bins' must be an object");
        for (const auto& [col, rule] : j["bins"].items())
            cfg.bins[col] = parse_bin_rule(rule, col);
    }
    if (j.contains("cap")) {
        if (!j["cap"].is_number_unsigned() && !j["cap"].is_number_integer())
            throw ConfigError("config: field 'cap' must be an integer");
        cfg.cap = j["cap"].get<std::uint64_t>();
    }
    if (j.contains("selected_threshold") && !j["selected_threshold"].is_null())
        cfg.selected_threshold = j["selected_threshold"].get<double>();
    if (j.contains("llm")) {
        const auto& l = j["llm"];
        if (l.contains("enabled")) cfg.llm.enabled = l["enabled"].get<bool>();
        if (l.contains("endpoint")) cfg.llm.endpoint = l["endpoint"].get<std::string>();
        if (l.contains("model")) cfg.llm.model = l["model"].get<std::string>();
        if (l.contains("api_key_env")) cfg.llm.api_key_env = l["api_key_env"].get<std::string>();
        if (l.contains("reasoning_effort"))
            cfg.llm.reasoning_effort = l["reasoning_effort"].get<std::string>();
        if (l.contains("timeout_s")) cfg.llm.timeout_s = l["timeout_s"].get<int>();
    }
    return cfg;
}

AnalysisConfig load_analysis_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_analysis_config(ss.str());
}

} // namespace causalfair
