#pragma once

#include <causalfair/decomposition.hpp>
#include <causalfair/effects.hpp>
#include <causalfair/extensions.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace causalfair {

enum class OutcomeType { Binary, Categorical, Continuous };

std::string to_string(OutcomeType t);

struct BundleMeta {
    std::size_t n_rows = 0;
    double alpha = 1.0;
    std::string roles_json;       // canonical SfmRoles serialization
    std::string dataset_digest;
};

struct XSpecificEntry {
    std::string x_value_pair;     // "x0->x1"
    double te = 0, de = 0, ie = 0;
};

struct ZSpecificEntry {
    std::string z_state;          // joint label, components joined with '|'
    double te = 0, de = 0, ie = 0;
    double n_rows = 0;
};

struct StepEntry {
    std::string from, to;
    double te = 0, tv = 0, se = 0;
    double n_rows = 0;
};

struct CurveEntry {
    std::vector<double> grid, tv, te, de, ie, se;
    std::optional<double> selected_threshold;
};

/// The canonical JSON object consumed by the dual-prompt reporting layer.
/// All `ie` fields use the reverse-baseline form IE_{x1,x0}. Numeric fields
/// round to <= 4 decimal digits on serialization only.
struct ReportBundle {
    std::string schema_version = "1";
    std::string x0, x1;
    std::optional<std::string> y_target;
    OutcomeType outcome_type = OutcomeType::Binary;
    double tv = 0, te = 0, de = 0, ie = 0, se = 0;
    std::optional<std::vector<std::pair<std::string, double>>> ie_by_mediator;
    std::optional<std::vector<std::pair<std::string, double>>> se_by_confounder;
    std::optional<std::vector<XSpecificEntry>> x_specific;
    std::optional<std::vector<ZSpecificEntry>> z_specific;
    bool stepwise_enabled = false;
    std::vector<StepEntry> effects_by_step;   // serialized only when enabled
    std::optional<CurveEntry> threshold_curve;
    BundleMeta metadata;
};

/// Assemble the bundle from computed pieces; identity residuals are re-checked
/// before anything is serialized. Absent analyses serialize as explicit nulls.
ReportBundle build_bundle(const EffectLedger& ledger,
                          const std::optional<MediatorDecomposition>& mediators_reversed,
                          const std::optional<ConfounderDecomposition>& confounders,
                          const std::optional<std::vector<PairwiseEffect>>& pairwise,
                          const std::optional<std::vector<ZSpecificEffect>>& z_specific,
                          const std::optional<StepwiseDecomposition>& stepwise,
                          const std::optional<ThresholdCurve>& curve,
                          OutcomeType outcome_type, const BundleMeta& meta);

std::string bundle_to_json(const ReportBundle& b);
ReportBundle bundle_from_json(const std::string& text);   // ConfigError with field path

/// Sankey decomposition flows: TV -> {TE, SE}, TE -> {DE, -IE_rev}, plus
/// per-mediator / per-confounder leaf links. Mixed-sign decompositions set
/// renderable_as_flow = false.
std::string sankey_export(const ReportBundle& b);

struct PromptPair {
    std::string system;   // byte-identical to the stored fixture
    std::string user;     // serialized ReportBundle JSON, nothing else
};

const std::string& report_system_prompt();
std::string report_system_prompt_digest();

PromptPair assemble_prompts(const ReportBundle& b);

struct LlmConfig {
    bool enabled = false;
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-5-mini";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string reasoning_effort = "high";
    int timeout_s = 120;
};

struct LlmReply {
    std::string text_section;
    std::string latex_section;
    std::string raw;
    bool structure_ok = false;   // exactly the two labeled sections, in order
};

/// Split a model reply into the mandated `TEXT:` / `LATEX:` sections.
/// Violations keep the raw text and clear structure_ok.
LlmReply parse_reply_sections(const std::string& content);

/// Chat-completions request body for the prompt pair (no data rows, ever).
std::string build_request_body(const LlmConfig& cfg, const PromptPair& p);

/// Extract the assistant message content from a chat-completions response body.
std::string extract_reply_content(const std::string& response_body);

/// Synchronous chat-completion call. Throws MissingCredential, ConnectFailure,
/// RequestTimeout, or HttpStatusError.
LlmReply request_report(const LlmConfig& cfg, const PromptPair& p);

} // namespace causalfair
