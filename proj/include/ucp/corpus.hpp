#pragma once

// Project corpora: the versioned JSON file format, validation on load,
// stage partitioning by extend/include share, and train/test splits.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ucp/errors.hpp"
#include "ucp/json_io.hpp"
#include "ucp/karner.hpp"
#include "ucp/model.hpp"

namespace ucp {

inline constexpr int kCorpusFormatVersion = 1;

struct Corpus {
    std::string description;
    std::vector<ProjectSpec> projects;

    const ProjectSpec* find(std::string_view id) const {
        for (const auto& p : projects)
            if (p.id == id) return &p;
        return nullptr;
    }

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

inline std::vector<Issue> validate(const Corpus& c) {
    std::vector<Issue> issues;
    std::set<std::string> seen;
    for (const auto& p : c.projects) {
        if (!seen.insert(p.id).second) issues.push_back({"project '" + p.id + "'", "id", "duplicate project id"});
        auto more = validate(p);
        issues.insert(issues.end(), more.begin(), more.end());
    }
    return issues;
}

/// Builds a corpus, rejecting it as a whole if any project is invalid.
inline Corpus make_corpus(std::vector<ProjectSpec> projects, std::string description = {}) {
    Corpus c{std::move(description), std::move(projects)};
    if (auto issues = validate(c); !issues.empty()) throw ValidationError(std::move(issues));
    return c;
}

// ---------------------------------------------------------------------------
// Stages

enum class StageLabel { stage1, stage2, stage3 };

inline std::string_view to_string(StageLabel s) {
    switch (s) {
        case StageLabel::stage1: return "stage1";
        case StageLabel::stage2: return "stage2";
        case StageLabel::stage3: return "stage3";
    }
    return "stage1";
}

inline std::optional<StageLabel> parse_stage(std::string_view s) {
    if (s == "stage1") return StageLabel::stage1;
    if (s == "stage2") return StageLabel::stage2;
    if (s == "stage3") return StageLabel::stage3;
    return std::nullopt;
}

/// Stage from the count of include/extend use cases among `total`:
/// share < 15% is stage1, 15%..25% inclusive is stage2, above 25% is stage3.
inline StageLabel stage_for_counts(std::size_t related, std::size_t total) {
    if (100 * related < 15 * total) return StageLabel::stage1;
    if (100 * related > 25 * total) return StageLabel::stage3;
    return StageLabel::stage2;
}

inline StageLabel stage_of(const ProjectSpec& p) {
    const auto related = static_cast<std::size_t>(std::count_if(
        p.use_cases.begin(), p.use_cases.end(), [](const UseCaseSpec& uc) { return uc.relation != Relation::base; }));
    return stage_for_counts(related, p.use_cases.size());
}

// ---------------------------------------------------------------------------
// Actual size

struct ActualSize {
    double uucp = 0.0;
    std::string derivation;  // how the value was obtained
};

/// Supplied UUCP, or UUCP recovered from effort through Schneider's rate and
/// the inverse of UCP = UUCP * TF * EF.
inline ActualSize actual_uucp(const ProjectSpec& p, RiskOverride override = RiskOverride::refuse) {
    if (p.actual_size_uucp) return {*p.actual_size_uucp, "supplied"};
    if (!p.actual_effort_ph)
        throw ValidationError("project '" + p.id + "'", "actual_size_uucp", "no actual size or effort given");
    const EffortRate rate = schneider_rate(p.factors, override);
    const double tf = technical_factor(p.factors);
    const double ef = environmental_factor(p.factors);
    const double ucp_value = *p.actual_effort_ph / ph_per_ucp(rate);
    const double size = uucp_from_ucp(ucp_value, tf, ef);
    return {size, "effort " + std::to_string(*p.actual_effort_ph) + " ph / " +
                      std::to_string(static_cast<int>(rate)) + " ph/UCP = " + std::to_string(ucp_value) +
                      " UCP; / (TF " + std::to_string(tf) + " * EF " + std::to_string(ef) + ") = " +
                      std::to_string(size) + " UUCP"};
}

// ---------------------------------------------------------------------------
// Splits

struct Split {
    Corpus train;
    Corpus test;
};

/// Projects named in `train_ids` go to training, the rest to testing; corpus order is kept.
inline Split split(const Corpus& c, const std::vector<std::string>& train_ids) {
    std::set<std::string> wanted(train_ids.begin(), train_ids.end());
    std::vector<Issue> issues;
    for (const auto& id : wanted)
        if (!c.find(id)) issues.push_back({"split", "train_ids", "unknown project id '" + id + "'"});
    if (!issues.empty()) throw ValidationError(std::move(issues));
    Split s{{c.description, {}}, {c.description, {}}};
    for (const auto& p : c.projects) (wanted.count(p.id) ? s.train : s.test).projects.push_back(p);
    if (s.train.projects.empty() || s.test.projects.empty())
        throw ValidationError("split", "train_ids", "split leaves one side empty");
    return s;
}

/// Random split with round(fraction * n) training projects, reproducible from `seed`.
inline Split split(const Corpus& c, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValidationError("split", "fraction", "must be in (0, 1)");
    const std::size_t n = c.projects.size();
    const auto k = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (k == 0 || k >= n) throw ValidationError("split", "fraction", "split leaves one side empty");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 gen(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(gen() % (i + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < k; ++i) ids.push_back(c.projects[order[i]].id);
    return split(c, ids);
}

// ---------------------------------------------------------------------------
// File format

inline nlohmann::ordered_json to_json(const ProjectSpec& p) {
    using J = nlohmann::ordered_json;
    J j;
    j["id"] = p.id;
    J ucs = J::array();
    for (const auto& uc : p.use_cases) {
        J u;
        u["name"] = uc.name;
        if (const auto* d = std::get_if<DirectCount>(&uc.source)) {
            u["transactions"] = d->transactions;
        } else {
            const auto& s = std::get<Scenario>(uc.source);
            u["scenario"] = {{"main_steps", s.main_steps}, {"extension_steps", s.extension_steps}};
        }
        u["relation"] = to_string(uc.relation);
        ucs.push_back(u);
    }
    j["use_cases"] = ucs;
    J actors = J::array();
    for (const auto& a : p.actors) actors.push_back({{"name", a.name}, {"kind", to_string(a.kind)}});
    j["actors"] = actors;
    j["factors"] = {{"technical", p.factors.technical}, {"environmental", p.factors.environmental}};
    if (p.actual_effort_ph) j["actual_effort_ph"] = *p.actual_effort_ph;
    if (p.actual_size_uucp) j["actual_size_uucp"] = *p.actual_size_uucp;
    return j;
}

inline nlohmann::ordered_json to_json(const Corpus& c) {
    nlohmann::ordered_json j;
    j["format_version"] = kCorpusFormatVersion;
    j["description"] = c.description;
    j["projects"] = nlohmann::ordered_json::array();
    for (const auto& p : c.projects) j["projects"].push_back(to_json(p));
    return j;
}

namespace detail {

/// Reads fields while recording type and presence problems instead of throwing.
class FieldReader {
public:
    FieldReader(std::vector<Issue>& issues, std::string subject) : issues_(issues), subject_(std::move(subject)) {}

    const nlohmann::json* get(const nlohmann::json& obj, const std::string& key, const std::string& path,
                              bool required = true) {
        if (!obj.is_object()) {
            fail(path, "expected an object");
            return nullptr;
        }
        auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(path.empty() ? key : path + "." + key, "missing field");
            return nullptr;
        }
        return &*it;
    }

    std::optional<std::string> string(const nlohmann::json& obj, const std::string& key, const std::string& path) {
        const auto* v = get(obj, key, path);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            fail(join(path, key), "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<int> integer(const nlohmann::json& v, const std::string& field) {
        if (!v.is_number_integer()) {
            fail(field, "expected an integer");
            return std::nullopt;
        }
        return v.get<int>();
    }

    std::optional<double> number(const nlohmann::json& obj, const std::string& key, const std::string& path) {
        const auto* v = get(obj, key, path, false);
        if (!v) return std::nullopt;
        if (!v->is_number()) {
            fail(join(path, key), "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    void fail(const std::string& field, const std::string& reason) { issues_.push_back({subject_, field, reason}); }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

private:
    std::vector<Issue>& issues_;
    std::string subject_;
};

template <std::size_t N>
void read_ratings(FieldReader& r, const nlohmann::json& factors, const char* key, std::array<int, N>& out) {
    const auto* arr = r.get(factors, key, "factors");
    if (!arr) return;
    const std::string field = std::string("factors.") + key;
    if (!arr->is_array() || arr->size() != N) {
        r.fail(field, "expected exactly " + std::to_string(N) + " ratings");
        return;
    }
    for (std::size_t i = 0; i < N; ++i)
        if (auto v = r.integer((*arr)[i], field + "[F" + std::to_string(i + 1) + "]")) out[i] = *v;
}

inline std::optional<ProjectSpec> read_project(const nlohmann::json& j, std::size_t index, std::vector<Issue>& issues) {
    std::string label = "projects[" + std::to_string(index) + "]";
    if (j.is_object() && j.contains("id") && j["id"].is_string()) label = "project '" + j["id"].get<std::string>() + "'";
    const std::size_t before = issues.size();
    FieldReader r(issues, label);
    ProjectSpec p;
    std::vector<bool> uc_clean, actor_clean;
    if (auto id = r.string(j, "id", "")) p.id = *id;

    if (const auto* ucs = r.get(j, "use_cases", "")) {
        if (!ucs->is_array()) r.fail("use_cases", "expected an array");
        else {
            for (std::size_t i = 0; i < ucs->size(); ++i) {
                const auto& u = (*ucs)[i];
                const std::string path = "use_cases[" + std::to_string(i) + "]";
                const std::size_t mark = issues.size();
                UseCaseSpec uc;
                if (auto name = r.string(u, "name", path)) uc.name = *name;
                const bool has_direct = u.is_object() && u.contains("transactions");
                const bool has_scenario = u.is_object() && u.contains("scenario");
                if (has_direct == has_scenario) {
                    r.fail(path, "exactly one of 'transactions' or 'scenario' is required");
                } else if (has_direct) {
                    if (auto t = r.integer(u["transactions"], path + ".transactions")) uc.source = DirectCount{*t};
                } else {
                    Scenario s;
                    const auto& sc = u["scenario"];
                    if (const auto* m = r.get(sc, "main_steps", path + ".scenario"))
                        if (auto v = r.integer(*m, path + ".scenario.main_steps")) s.main_steps = *v;
                    if (const auto* e = r.get(sc, "extension_steps", path + ".scenario"))
                        if (auto v = r.integer(*e, path + ".scenario.extension_steps")) s.extension_steps = *v;
                    uc.source = s;
                }
                if (auto rel = r.string(u, "relation", path)) {
                    if (auto parsed = parse_relation(*rel)) uc.relation = *parsed;
                    else r.fail(path + ".relation", "expected base, include or extend; got '" + *rel + "'");
                }
                p.use_cases.push_back(std::move(uc));
                uc_clean.push_back(issues.size() == mark);
            }
        }
    }

    if (const auto* actors = r.get(j, "actors", "")) {
        if (!actors->is_array()) r.fail("actors", "expected an array");
        else {
            for (std::size_t i = 0; i < actors->size(); ++i) {
                const std::string path = "actors[" + std::to_string(i) + "]";
                const std::size_t mark = issues.size();
                ActorSpec a;
                if (auto name = r.string((*actors)[i], "name", path)) a.name = *name;
                if (auto kind = r.string((*actors)[i], "kind", path)) {
                    if (auto parsed = parse_actor_kind(*kind)) a.kind = *parsed;
                    else r.fail(path + ".kind", "expected simple, average or complex; got '" + *kind + "'");
                }
                p.actors.push_back(std::move(a));
                actor_clean.push_back(issues.size() == mark);
            }
        }
    }

    if (const auto* factors = r.get(j, "factors", "")) {
        read_ratings(r, *factors, "technical", p.factors.technical);
        read_ratings(r, *factors, "environmental", p.factors.environmental);
    }
    p.actual_effort_ph = r.number(j, "actual_effort_ph", "");
    p.actual_size_uucp = r.number(j, "actual_size_uucp", "");

    if (issues.size() == before) {
        auto more = validate(p);
        issues.insert(issues.end(), more.begin(), more.end());
        return issues.size() == before ? std::optional<ProjectSpec>(std::move(p)) : std::nullopt;
    }
    // Structural problems found: still check whatever did read cleanly.
    ProjectSpec clean = p;
    clean.use_cases.clear();
    clean.actors.clear();
    for (std::size_t i = 0; i < p.use_cases.size(); ++i)
        if (uc_clean[i]) clean.use_cases.push_back(p.use_cases[i]);
    for (std::size_t i = 0; i < p.actors.size(); ++i)
        if (actor_clean[i]) clean.actors.push_back(p.actors[i]);
    for (auto& issue : validate(clean)) {
        if (issue.field == "id" && p.id.empty()) continue;
        if (issue.field == "use_cases" && (clean.use_cases.size() != p.use_cases.size() || !j.contains("use_cases")))
            continue;
        if (issue.field == "actors" && (clean.actors.size() != p.actors.size() || !j.contains("actors"))) continue;
        issues.push_back(std::move(issue));
    }
    return std::nullopt;
}

}  // namespace detail

/// Validates every project and reports all violations together.
inline Corpus corpus_from_json(const nlohmann::json& j) {
    std::vector<Issue> issues;
    Corpus c;
    detail::FieldReader r(issues, "corpus");
    if (const auto* v = r.get(j, "format_version", "")) {
        if (!v->is_number_integer() || v->get<int>() != kCorpusFormatVersion)
            r.fail("format_version", "unsupported format version (expected " + std::to_string(kCorpusFormatVersion) + ")");
    }
    if (j.is_object() && j.contains("description")) {
        if (j["description"].is_string()) c.description = j["description"].get<std::string>();
        else r.fail("description", "expected a string");
    }
    if (const auto* projects = r.get(j, "projects", "")) {
        if (!projects->is_array()) r.fail("projects", "expected an array");
        else
            for (std::size_t i = 0; i < projects->size(); ++i)
                if (auto p = detail::read_project((*projects)[i], i, issues)) c.projects.push_back(std::move(*p));
    }
    std::set<std::string> seen;
    for (const auto& p : c.projects)
        if (!seen.insert(p.id).second) issues.push_back({"project '" + p.id + "'", "id", "duplicate project id"});
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return c;
}

inline Corpus load_corpus(const std::string& path) { return corpus_from_json(io::read_json(path)); }

inline std::string serialize(const Corpus& c) { return io::dump(to_json(c)); }

inline void save_corpus(const Corpus& c, const std::string& path) { io::write_text(path, serialize(c)); }

}  // namespace ucp
