#pragma once

// Model comparison over projects with known actual sizes, grouped by stage
// when requested. Rows come either from a corpus (estimates computed here)
// or from an observations file carrying precomputed estimates.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ucp/corpus.hpp"
#include "ucp/errors.hpp"
#include "ucp/fuzzy.hpp"
#include "ucp/json_io.hpp"
#include "ucp/karner.hpp"
#include "ucp/metrics.hpp"
#include "ucp/mlp.hpp"

namespace ucp {

/// What the estimators need besides the project itself.
struct EstimationOptions {
    TransactionPolicy policy = TransactionPolicy::full();
    const AdjustedWeightTable* fuzzy_table = nullptr;  // default table when null
    const mlp::Network* network = nullptr;            // required for ModelTag::mlp
    std::optional<EffortRate> fixed_rate;             // Schneider's rule when empty
    RiskOverride risk = RiskOverride::refuse;
};

inline SizeEstimate estimate_project(const ProjectSpec& p, ModelTag model, const EstimationOptions& opt,
                                     const WarningSink& warn = {}) {
    switch (model) {
        case ModelTag::karner: return estimate_karner(p, opt.policy, opt.fixed_rate, opt.risk, warn);
        case ModelTag::fuzzy:
            return estimate_fuzzy(p, opt.policy, opt.fuzzy_table ? *opt.fuzzy_table : default_weight_table(),
                                  opt.fixed_rate, opt.risk, warn);
        case ModelTag::mlp:
            if (!opt.network) throw ValidationError("estimate", "mlp", "no trained network supplied");
            return mlp::estimate_mlp(*opt.network, p, opt.policy, opt.fixed_rate, opt.risk, warn);
    }
    throw ValidationError("estimate", "model", "unknown model");
}

struct EvaluationRow {
    std::string project_id;
    std::optional<StageLabel> stage;
    double actual = 0.0;
    std::vector<std::pair<ModelTag, double>> estimates;

    double estimate(ModelTag m) const {
        for (const auto& [tag, v] : estimates)
            if (tag == m) return v;
        throw ValidationError("project '" + project_id + "'", "estimates", "no estimate for " + std::string(to_string(m)));
    }
};

struct ModelSummary {
    ModelTag model;
    AccuracySummary summary;
};

struct ModelImprovement {
    ModelTag baseline;
    ModelTag candidate;
    Improvement value;
};

struct EvaluationGroup {
    std::string label;  // stage name, or "all"
    std::vector<EvaluationRow> rows;
    std::vector<ModelSummary> summaries;
    std::vector<ModelImprovement> improvements;  // candidate vs the first model

    const AccuracySummary& summary(ModelTag m) const {
        for (const auto& s : summaries)
            if (s.model == m) return s.summary;
        throw ValidationError("evaluation", label, "model not evaluated");
    }
};

struct EvaluationReport {
    std::vector<ModelTag> models;
    std::vector<EvaluationGroup> groups;
};

inline std::vector<ObservationPair> pairs_for(const std::vector<EvaluationRow>& rows, ModelTag m) {
    std::vector<ObservationPair> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back({r.project_id, r.actual, r.estimate(m)});
    return out;
}

inline EvaluationGroup summarize_group(std::string label, std::vector<EvaluationRow> rows,
                                       const std::vector<ModelTag>& models) {
    EvaluationGroup g{std::move(label), std::move(rows), {}, {}};
    for (auto m : models) g.summaries.push_back({m, summarize(pairs_for(g.rows, m))});
    for (std::size_t i = 1; i < models.size(); ++i)
        g.improvements.push_back({models[0], models[i], improvement(g.summaries[0].summary, g.summaries[i].summary)});
    return g;
}

/// The first model in `models` is the baseline for improvement figures.
inline EvaluationReport evaluate(const std::vector<EvaluationRow>& rows, const std::vector<ModelTag>& models,
                                 bool by_stage) {
    if (models.empty()) throw ValidationError("evaluate", "models", "no models selected");
    if (rows.empty()) throw ValidationError("evaluate", "", "no projects to evaluate");
    EvaluationReport report{models, {}};
    if (!by_stage) {
        report.groups.push_back(summarize_group("all", rows, models));
        return report;
    }
    for (auto stage : {StageLabel::stage1, StageLabel::stage2, StageLabel::stage3}) {
        std::vector<EvaluationRow> members;
        for (const auto& r : rows) {
            if (!r.stage) throw ValidationError("project '" + r.project_id + "'", "stage", "no stage known");
            if (*r.stage == stage) members.push_back(r);
        }
        if (!members.empty()) report.groups.push_back(summarize_group(std::string(to_string(stage)), members, models));
    }
    return report;
}

/// Estimates every project with every model. Projects lacking usable actuals
/// are all reported together.
inline std::vector<EvaluationRow> rows_from_corpus(const Corpus& corpus, const std::vector<ModelTag>& models,
                                                   const EstimationOptions& opt, const WarningSink& warn = {}) {
    std::vector<EvaluationRow> rows;
    std::vector<Issue> issues;
    for (const auto& p : corpus.projects) {
        EvaluationRow row;
        row.project_id = p.id;
        row.stage = stage_of(p);
        try {
            row.actual = actual_uucp(p, opt.risk).uucp;
        } catch (const ValidationError& e) {
            issues.insert(issues.end(), e.issues().begin(), e.issues().end());
            continue;
        } catch (const TeamRiskError& e) {
            issues.push_back({"project '" + p.id + "'", "actual_effort_ph",
                              std::string("cannot convert effort to size: ") + e.what()});
            continue;
        }
        const WarningSink project_warn = [&](const std::string& w) {
            if (warn) warn("project '" + p.id + "': " + w);
        };
        for (auto m : models)
            row.estimates.emplace_back(
                m, estimate_project(p, m, opt, m == models.front() ? project_warn : WarningSink{}).uucp);
        rows.push_back(std::move(row));
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return rows;
}

// ---------------------------------------------------------------------------
// Observations file: actual sizes with precomputed estimates per model.

inline nlohmann::ordered_json observations_to_json(const std::vector<EvaluationRow>& rows,
                                                   const std::string& description = {}) {
    using J = nlohmann::ordered_json;
    J j;
    j["format_version"] = 1;
    j["description"] = description;
    J obs = J::array();
    for (const auto& r : rows) {
        J o;
        o["project_id"] = r.project_id;
        if (r.stage) o["stage"] = to_string(*r.stage);
        o["actual"] = r.actual;
        J est = J::object();
        for (const auto& [m, v] : r.estimates) est[std::string(to_string(m))] = v;
        o["estimates"] = est;
        obs.push_back(o);
    }
    j["observations"] = obs;
    return j;
}

inline std::vector<EvaluationRow> observations_from_json(const nlohmann::json& j) {
    std::vector<Issue> issues;
    std::vector<EvaluationRow> rows;
    try {
        if (j.at("format_version").get<int>() != 1)
            throw ValidationError("observations", "format_version", "unsupported version");
        const auto& obs = j.at("observations");
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const auto& o = obs[i];
            EvaluationRow r;
            r.project_id = o.at("project_id").get<std::string>();
            const std::string subject = "observation '" + r.project_id + "'";
            if (o.contains("stage")) {
                r.stage = parse_stage(o["stage"].get<std::string>());
                if (!r.stage) issues.push_back({subject, "stage", "expected stage1, stage2 or stage3"});
            }
            r.actual = o.at("actual").get<double>();
            if (!(r.actual > 0.0)) issues.push_back({subject, "actual", "must be positive"});
            for (const auto& [key, value] : o.at("estimates").items()) {
                auto tag = parse_model_tag(key);
                if (!tag) {
                    issues.push_back({subject, "estimates", "unknown model '" + key + "'"});
                    continue;
                }
                const double v = value.get<double>();
                if (!(v > 0.0)) issues.push_back({subject, "estimates." + key, "must be positive"});
                r.estimates.emplace_back(*tag, v);
            }
            rows.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        issues.push_back({"observations", "", e.what()});
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return rows;
}

inline std::vector<EvaluationRow> load_observations(const std::string& path) {
    return observations_from_json(io::read_json(path));
}

}  // namespace ucp
