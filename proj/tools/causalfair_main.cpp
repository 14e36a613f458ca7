#include <causalfair/config.hpp>
#include <causalfair/decomposition.hpp>
#include <causalfair/effects.hpp>
#include <causalfair/extensions.hpp>
#include <causalfair/report.hpp>
#include <causalfair/scm.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace causalfair;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitCap = 4;
constexpr int kExitNetwork = 5;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixed4(double v) {
    double r = std::abs(v) < 1e12 ? std::llround(v * 1e4) / 1e4 : v;
    if (r == 0.0) r = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", r);
    return buf;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.empty() || text == "auto") return grid;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        double v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size())
            throw ConfigError("bad grid value '" + tok + "'");
        grid.push_back(v);
    }
    return grid;
}

std::vector<std::string> parse_state_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::string group_label(const std::vector<std::string>& states) {
    if (states.size() == 1) return states[0];
    std::string out = "{";
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i) out += ",";
        out += states[i];
    }
    return out + "}";
}

/// Human table mirroring the nested decomposition layout.
std::string render_ledger_text(const ReportBundle& b) {
    std::ostringstream os;
    os << "Effect decomposition (x0=" << b.x0 << ", x1=" << b.x1;
    if (b.y_target) os << ", y=" << *b.y_target;
    os << ")\n\n";
    auto pct = [&](double v) {
        if (b.tv == 0) return std::string("   -");
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%4.0f", 100.0 * v / std::abs(b.tv));
        return std::string(buf);
    };
    auto line = [&](int indent, const std::string& name, double v,
                    const std::string& extra = "") {
        os << std::string(static_cast<std::size_t>(indent), ' ') << name;
        int pad = 34 - indent - static_cast<int>(name.size());
        os << std::string(pad > 1 ? static_cast<std::size_t>(pad) : 1, ' ')
           << (v < 0 ? "" : " ") << fixed4(v);
        if (!extra.empty()) os << "   " << extra;
        os << "\n";
    };
    line(2, "TV_{x0,x1}(y)", b.tv, pct(b.tv) + "% of |TV|");
    line(2, "TE_{x0,x1}(y)", b.te, pct(b.te) + "% of |TV|");
    line(6, "DE_{x0,x1}(y)", b.de);
    line(6, "IE_{x1,x0}(y)", b.ie);
    if (b.ie_by_mediator)
        for (const auto& [name, v] : *b.ie_by_mediator)
            line(8, "-> IE^{" + name + "}", v);
    line(2, "SE_{x0,x1}(y)", b.se, pct(b.se) + "% of |TV|");
    if (b.se_by_confounder)
        for (const auto& [name, v] : *b.se_by_confounder)
            line(6, "-> SE^{" + name + "}", v);
    if (b.x_specific) {
        os << "\nPairwise effects (x0 -> x1): te / de / ie\n";
        for (const auto& e : *b.x_specific)
            os << "  " << e.x_value_pair << ": " << fixed4(e.te) << " / "
               << fixed4(e.de) << " / " << fixed4(e.ie) << "\n";
    }
    if (b.stepwise_enabled) {
        os << "\nStepwise TE along ordered X states\n";
        double cum = 0;
        for (const auto& st : b.effects_by_step) {
            cum += st.te;
            os << "  " << st.from << " -> " << st.to << ": te " << fixed4(st.te)
               << " (cumulative " << fixed4(cum) << ", n_rows "
               << static_cast<long long>(st.n_rows) << ")\n";
        }
    }
    os << "\nn_rows=" << b.metadata.n_rows << "  alpha=" << b.metadata.alpha << "\n";
    return os.str();
}

struct LoadedAnalysis {
    AnalysisConfig cfg;
    Dataset data;
    SfmEstimator est;
};

LoadedAnalysis load_analysis(const std::string& data_path, const std::string& config_path,
                             double alpha, std::uint64_t cap_flag) {
    AnalysisConfig cfg = load_analysis_config(config_path);
    if (cap_flag) cfg.cap = cap_flag;
    Dataset raw = load_csv(data_path, cfg.columns);
    Dataset data = discretize(raw, cfg.bins);
    ValidationReport rep = validate_roles(data, cfg.roles, cfg.cap);
    for (const auto& n : rep.notes) std::cerr << "note: " << n << "\n";
    if (!rep.missing_columns.empty())
        throw DataError("missing role columns: " + rep.missing_columns.front());
    for (const auto& s : rep.unseen_states)
        std::cerr << "warning: role state unseen in data: " << s << "\n";
    SfmEstimator est = SfmEstimator::fit(data, cfg.roles, alpha, cfg.cap);
    return LoadedAnalysis{std::move(cfg), std::move(data), std::move(est)};
}

std::string resolve_y_target(const AnalysisConfig& cfg, const SfmEstimator& est) {
    if (cfg.roles.y_target) return *cfg.roles.y_target;
    const auto& ystates = est.var(cfg.roles.y).states;
    if (ystates.size() == 2) return ystates[1];
    return "";   // expected-value mode
}

int cmd_analyze(const std::string& data_path, const std::string& config_path,
                const std::string& out_dir, double alpha, std::uint64_t cap_flag,
                const std::string& stepwise_states, bool pairs) {
    LoadedAnalysis a = load_analysis(data_path, config_path, alpha, cap_flag);
    const AnalysisConfig& cfg = a.cfg;
    const SfmEstimator& est = a.est;
    fs::create_directories(out_dir);

    const bool singleton =
        cfg.roles.x0_states.size() == 1 && cfg.roles.x1_states.size() == 1;
    std::string y_target = resolve_y_target(cfg, est);
    const auto& ystates = est.var(cfg.roles.y).states;
    OutcomeType outcome =
        ystates.size() == 2 ? OutcomeType::Binary : OutcomeType::Categorical;

    EffectLedger ledger;
    std::optional<MediatorDecomposition> med;
    std::optional<ConfounderDecomposition> conf;
    std::optional<std::vector<PairwiseEffect>> pairwise;
    std::optional<std::vector<ZSpecificEffect>> zspec;
    std::optional<StepwiseDecomposition> stepwise;

    if (singleton && !y_target.empty()) {
        Contrast c{cfg.roles.x0_states[0], cfg.roles.x1_states[0], y_target};
        ledger = effect_ledger(est, c);
        if (!cfg.roles.w.empty()) {
            Contrast rev = c;
            std::swap(rev.x0, rev.x1);
            med = ie_by_mediator(est, rev, cfg.roles.w);
        }
        if (!cfg.roles.z.empty()) {
            conf = se_by_confounder(est, c, cfg.roles.z);
            zspec = z_specific_effects(est, c);
        }
        if (pairs)
            pairwise = x_pairwise_effects(est, y_target, cfg.roles.x0_states,
                                          cfg.roles.x1_states);
    } else if (!y_target.empty()) {
        // group mode: headline effects are arithmetic pairwise averages
        pairwise = x_pairwise_effects(est, y_target, cfg.roles.x0_states,
                                      cfg.roles.x1_states);
        ledger.contrast = {group_label(cfg.roles.x0_states),
                           group_label(cfg.roles.x1_states), y_target};
        double n = static_cast<double>(pairwise->size());
        for (const auto& p : *pairwise) {
            ledger.tv += p.ledger.tv / n;
            ledger.te += p.ledger.te / n;
            ledger.se += p.ledger.se / n;
            ledger.de += p.ledger.de / n;
            ledger.ie += p.ledger.ie / n;
            ledger.ie_reversed += p.ledger.ie_reversed / n;
        }
        ledger.residual_tv_te_se = ledger.tv - ledger.te - ledger.se;
        ledger.residual_te_de_ie = ledger.te - (ledger.de - ledger.ie_reversed);
        ledger.n_rows = est.n_rows();
        ledger.alpha = est.alpha();
        ledger.roles_digest = est.roles_digest();
    } else {
        // expected-value mode over a non-binary target (identity utility)
        UtilitySpec u = UtilitySpec::identity_numeric(ystates);
        if (!singleton)
            throw ConfigError("expected-value mode needs singleton x0/x1 state sets");
        const std::string& x0 = cfg.roles.x0_states[0];
        const std::string& x1 = cfg.roles.x1_states[0];
        ledger.contrast = {x0, x1, ""};
        ledger.tv = expected_effect(est, x0, x1, EffectKind::Tv, u);
        ledger.te = expected_effect(est, x0, x1, EffectKind::Te, u);
        ledger.se = expected_effect(est, x0, x1, EffectKind::Se, u);
        ledger.de = expected_effect(est, x0, x1, EffectKind::De, u);
        ledger.ie = expected_effect(est, x0, x1, EffectKind::Ie, u);
        ledger.ie_reversed = expected_effect(est, x1, x0, EffectKind::Ie, u);
        ledger.residual_tv_te_se = ledger.tv - ledger.te - ledger.se;
        ledger.residual_te_de_ie = ledger.te - (ledger.de - ledger.ie_reversed);
        ledger.n_rows = est.n_rows();
        ledger.alpha = est.alpha();
        ledger.roles_digest = est.roles_digest();
    }

    if (!stepwise_states.empty()) {
        std::string ytgt = y_target.empty() ? ystates.back() : y_target;
        stepwise = stepwise_decompose(est, parse_state_list(stepwise_states), ytgt);
    }

    BundleMeta meta;
    meta.n_rows = est.n_rows();
    meta.alpha = est.alpha();
    meta.roles_json = cfg.roles.canonical_json();
    meta.dataset_digest = "sha256:" + a.data.digest();
    ReportBundle bundle = build_bundle(ledger, med, conf, pairwise, zspec, stepwise,
                                       std::nullopt, outcome, meta);

    write_file(fs::path(out_dir) / "report.json", bundle_to_json(bundle));
    write_file(fs::path(out_dir) / "ledger.txt", render_ledger_text(bundle));
    write_file(fs::path(out_dir) / "sankey.json", sankey_export(bundle));
    std::cout << "identity residuals: tv-te-se=" << ledger.residual_tv_te_se
              << " te-(de-ie_rev)=" << ledger.residual_te_de_ie << "\n";
    std::cout << "wrote " << (fs::path(out_dir) / "report.json").string() << ", ledger.txt, sankey.json\n";
    return 0;
}

int cmd_sweep(const std::string& data_path, const std::string& config_path,
              const std::string& out_dir, double alpha, std::uint64_t cap_flag,
              const std::string& grid_text) {
    AnalysisConfig cfg = load_analysis_config(config_path);
    if (cap_flag) cfg.cap = cap_flag;
    Dataset raw = load_csv(data_path, cfg.columns);
    Dataset data = discretize(raw, cfg.bins);
    fs::create_directories(out_dir);

    ThresholdCurve curve =
        threshold_sweep(data, cfg.roles, parse_grid(grid_text), alpha, cfg.cap);
    curve.selected_threshold = cfg.selected_threshold;

    nlohmann::ordered_json cj;
    cj["grid"] = curve.grid;
    cj["tv"] = curve.tv;
    cj["te"] = curve.te;
    cj["de"] = curve.de;
    cj["ie"] = curve.ie;
    cj["se"] = curve.se;
    if (curve.selected_threshold) cj["selected_threshold"] = *curve.selected_threshold;
    else cj["selected_threshold"] = nullptr;
    nlohmann::ordered_json am;
    for (const auto& [kind, t] : curve.argmax) am[to_string(kind)] = t;
    cj["argmax"] = am;
    write_file(fs::path(out_dir) / "curve.json", cj.dump(2) + "\n");

    std::ostringstream tsv;
    tsv << "threshold\ttv\tte\tde\tie\tse\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
        tsv << curve.grid[i] << '\t' << fixed4(curve.tv[i]) << '\t'
            << fixed4(curve.te[i]) << '\t' << fixed4(curve.de[i]) << '\t'
            << fixed4(curve.ie[i]) << '\t' << fixed4(curve.se[i]) << '\n';
    }
    write_file(fs::path(out_dir) / "curve.tsv", tsv.str());
    for (const auto& [kind, t] : curve.argmax)
        std::cout << "argmax " << to_string(kind) << " at threshold " << t << "\n";

    // a selected threshold yields a continuous-outcome bundle for the reporting layer
    if (cfg.selected_threshold) {
        double t = *cfg.selected_threshold;
        Dataset view = data;
        int yindex = view.col_index(cfg.roles.y);
        Column bin;
        bin.spec.name = cfg.roles.y;
        bin.spec.kind = ColumnKind::Categorical;
        bin.spec.declared_states = {"0", "1"};
        bin.states = {"0", "1"};
        for (double v : view.columns[static_cast<std::size_t>(yindex)].numeric)
            bin.codes.push_back(v >= t ? 1 : 0);
        view.columns[static_cast<std::size_t>(yindex)] = std::move(bin);
        SfmEstimator est = SfmEstimator::fit(view, cfg.roles, alpha, cfg.cap);
        EffectLedger led =
            effect_ledger(est, Contrast{cfg.roles.x0_states[0], cfg.roles.x1_states[0], "1"});
        led.contrast.y.clear();   // the bundle reports the threshold, not a state label
        BundleMeta meta;
        meta.n_rows = est.n_rows();
        meta.alpha = est.alpha();
        meta.roles_json = cfg.roles.canonical_json();
        meta.dataset_digest = "sha256:" + data.digest();
        ReportBundle bundle =
            build_bundle(led, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                         std::nullopt, curve, OutcomeType::Continuous, meta);
        write_file(fs::path(out_dir) / "report.json", bundle_to_json(bundle));
        std::cout << "wrote report.json for selected threshold " << t << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& spec_path, std::size_t n, std::uint64_t seed,
                 const std::string& out_dir) {
    ScmSpec spec = ScmSpec::from_json(read_file(spec_path));
    Scm scm(std::move(spec));
    fs::create_directories(out_dir);
    Dataset sampled = scm.sample(n, seed);
    sampled.write_csv_file((fs::path(out_dir) / "sim.csv").string());
    write_file(fs::path(out_dir) / "spec.json", scm.spec().to_json());

    EffectLedger gt = scm.ground_truth_ledger();
    nlohmann::ordered_json j;
    j["x0"] = gt.contrast.x0;
    j["x1"] = gt.contrast.x1;
    j["y"] = gt.contrast.y;
    j["tv"] = gt.tv;
    j["te"] = gt.te;
    j["se"] = gt.se;
    j["de"] = gt.de;
    j["ie"] = gt.ie;
    j["ie_reversed"] = gt.ie_reversed;
    write_file(fs::path(out_dir) / "ground_truth.json", j.dump(2) + "\n");
    std::cout << "wrote sim.csv (" << n << " rows) and ground_truth.json\n";
    return 0;
}

int cmd_report(const std::string& bundle_path, const std::string& config_path,
               const std::string& out_dir, bool llm, const std::string& replay_path) {
    ReportBundle bundle = bundle_from_json(read_file(bundle_path));
    LlmConfig llm_cfg;
    if (!config_path.empty()) llm_cfg = load_analysis_config(config_path).llm;
    fs::create_directories(out_dir);
    PromptPair prompts = assemble_prompts(bundle);

    if (!llm && replay_path.empty()) {
        nlohmann::ordered_json j;
        j["system"] = prompts.system;
        j["user"] = prompts.user;
        write_file(fs::path(out_dir) / "prompts.json", j.dump(2) + "\n");
        std::cout << "offline mode: wrote prompts.json\n";
        return 0;
    }
    LlmReply reply;
    if (!replay_path.empty()) {
        reply = parse_reply_sections(extract_reply_content(read_file(replay_path)));
    } else {
        reply = request_report(llm_cfg, prompts);
    }
    write_file(fs::path(out_dir) / "report_raw.txt", reply.raw);
    if (!reply.structure_ok) {
        std::cerr << "structure violation: reply lacks the TEXT:/LATEX: sections; "
                     "raw reply kept in report_raw.txt\n";
        return 1;
    }
    write_file(fs::path(out_dir) / "report.txt", reply.text_section + "\n");
    write_file(fs::path(out_dir) / "report.tex", reply.latex_section + "\n");
    std::cout << "wrote report.txt and report.tex\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal fairness decomposition toolkit"};
    app.require_subcommand(1);

    std::string data_path, config_path, out_dir = "out";
    double alpha = 1.0;
    std::uint64_t cap = 0;
    std::string stepwise_states, grid_text = "auto";
    bool pairs = false;

    auto* analyze = app.add_subcommand("analyze", "compute the effect decomposition");
    analyze->add_option("--data", data_path, "CSV dataset")->required();
    analyze->add_option("--config", config_path, "analysis config JSON")->required();
    analyze->add_option("--out", out_dir, "output directory");
    analyze->add_option("--alpha", alpha, "Laplace pseudo-count (default 1.0)");
    analyze->add_option("--cap", cap, "joint-state enumeration limit");
    analyze->add_option("--stepwise", stepwise_states,
                        "comma-separated ordered X states for stepwise decomposition");
    analyze->add_flag("--pairs", pairs, "emit pairwise ledgers for the group sets");

    auto* sweep = app.add_subcommand("sweep", "threshold sweep over a numeric target");
    sweep->add_option("--data", data_path, "CSV dataset")->required();
    sweep->add_option("--config", config_path, "analysis config JSON")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--alpha", alpha, "Laplace pseudo-count");
    sweep->add_option("--cap", cap, "joint-state enumeration limit");
    sweep->add_option("--sweep-grid", grid_text, "comma list of thresholds, or 'auto'");

    std::string spec_path;
    std::size_t sim_n = 0;
    std::uint64_t seed = 1;
    auto* simulate = app.add_subcommand("simulate", "sample a dataset from an SCM spec");
    simulate->add_option("--spec", spec_path, "SCM spec JSON")->required();
    simulate->add_option("--n", sim_n, "rows to sample")->required();
    simulate->add_option("--seed", seed, "sampling seed");
    simulate->add_option("--out", out_dir, "output directory");

    std::string bundle_path, replay_path;
    bool llm = false;
    auto* report = app.add_subcommand("report", "assemble prompts / fetch the LLM report");
    report->add_option("--bundle", bundle_path, "ReportBundle JSON")->required();
    report->add_option("--config", config_path, "analysis config JSON (llm settings)");
    report->add_option("--out", out_dir, "output directory");
    report->add_flag("--llm", llm, "perform the live chat-completion call");
    report->add_option("--llm-replay", replay_path,
                       "parse a recorded chat-completion response instead of calling out");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed())
            return cmd_analyze(data_path, config_path, out_dir, alpha, cap,
                               stepwise_states, pairs);
        if (sweep->parsed())
            return cmd_sweep(data_path, config_path, out_dir, alpha, cap, grid_text);
        if (simulate->parsed()) return cmd_simulate(spec_path, sim_n, seed, out_dir);
        if (report->parsed())
            return cmd_report(bundle_path, config_path, out_dir, llm, replay_path);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const CapExceeded& ex) {
        std::cerr << "cap exceeded: " << ex.what() << "\n";
        return kExitCap;
    } catch (const NetworkError& ex) {
        std::cerr << "network error: " << ex.what() << "\n";
        return kExitNetwork;
    } catch (const DataError& ex) {
        std::cerr << "data error: " << ex.what() << "\n";
        return kExitData;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
