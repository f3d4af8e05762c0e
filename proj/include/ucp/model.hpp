#pragma once

// Project, use case and actor descriptions plus transaction counting.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ucp/errors.hpp"

namespace ucp {

inline constexpr int kMaxTransactionLevel = 10;
inline constexpr std::size_t kTechnicalFactorCount = 13;
inline constexpr std::size_t kEnvironmentalFactorCount = 8;

/// How much each extension-part transaction counts relative to a main-scenario one.
struct TransactionPolicy {
    double extension_weight = 1.0;

    static constexpr TransactionPolicy full() { return {1.0}; }
    static constexpr TransactionPolicy discounted() { return {0.3}; }

    bool valid() const { return extension_weight >= 0.0 && extension_weight <= 1.0; }
};

struct Scenario {
    int main_steps = 0;
    int extension_steps = 0;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Transaction count given directly instead of through a scenario.
struct DirectCount {
    int transactions = 0;

    friend bool operator==(const DirectCount&, const DirectCount&) = default;
};

enum class Relation { base, include, extend };
enum class ActorKind { simple, average, complex };

struct UseCaseSpec {
    std::string name;
    std::variant<DirectCount, Scenario> source;
    Relation relation = Relation::base;

    friend bool operator==(const UseCaseSpec&, const UseCaseSpec&) = default;
};

struct ActorSpec {
    std::string name;
    ActorKind kind = ActorKind::simple;

    friend bool operator==(const ActorSpec&, const ActorSpec&) = default;
};

/// Ratings 0..5. Technical ratings are ordered as the 13 technical factors,
/// environmental ratings as the 8 environmental factors.
struct FactorRatings {
    std::array<int, kTechnicalFactorCount> technical{};
    std::array<int, kEnvironmentalFactorCount> environmental{};

    static FactorRatings uniform(int rating) {
        FactorRatings r;
        r.technical.fill(rating);
        r.environmental.fill(rating);
        return r;
    }

    friend bool operator==(const FactorRatings&, const FactorRatings&) = default;
};

struct ProjectSpec {
    std::string id;
    std::vector<UseCaseSpec> use_cases;
    std::vector<ActorSpec> actors;
    FactorRatings factors;
    std::optional<double> actual_effort_ph;
    std::optional<double> actual_size_uucp;

    friend bool operator==(const ProjectSpec&, const ProjectSpec&) = default;
};

using WarningSink = std::function<void(const std::string&)>;

// ---------------------------------------------------------------------------
// Enum names, as used by the file formats and reports.

inline std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::base: return "base";
        case Relation::include: return "include";
        case Relation::extend: return "extend";
    }
    return "base";
}

inline std::string_view to_string(ActorKind k) {
    switch (k) {
        case ActorKind::simple: return "simple";
        case ActorKind::average: return "average";
        case ActorKind::complex: return "complex";
    }
    return "simple";
}

inline std::optional<Relation> parse_relation(std::string_view s) {
    if (s == "base") return Relation::base;
    if (s == "include") return Relation::include;
    if (s == "extend") return Relation::extend;
    return std::nullopt;
}

inline std::optional<ActorKind> parse_actor_kind(std::string_view s) {
    if (s == "simple") return ActorKind::simple;
    if (s == "average") return ActorKind::average;
    if (s == "complex") return ActorKind::complex;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation. Each function collects every violation rather than stopping at the first.

inline std::vector<Issue> validate(const UseCaseSpec& uc) {
    std::vector<Issue> issues;
    const std::string subject = "use case '" + uc.name + "'";
    if (uc.name.empty()) issues.push_back({subject, "name", "must not be empty"});
    if (const auto* d = std::get_if<DirectCount>(&uc.source)) {
        if (d->transactions < 1)
            issues.push_back({subject, "transactions", "must be >= 1, got " + std::to_string(d->transactions)});
    } else {
        const auto& s = std::get<Scenario>(uc.source);
        if (s.main_steps < 1)
            issues.push_back({subject, "scenario.main_steps", "must be >= 1, got " + std::to_string(s.main_steps)});
        if (s.extension_steps < 0)
            issues.push_back(
                {subject, "scenario.extension_steps", "must be >= 0, got " + std::to_string(s.extension_steps)});
    }
    return issues;
}

inline std::vector<Issue> validate(const FactorRatings& f, const std::string& subject = "factors") {
    std::vector<Issue> issues;
    for (std::size_t i = 0; i < f.technical.size(); ++i)
        if (f.technical[i] < 0 || f.technical[i] > 5)
            issues.push_back({subject, "technical[F" + std::to_string(i + 1) + "]",
                              "rating must be in 0..5, got " + std::to_string(f.technical[i])});
    for (std::size_t i = 0; i < f.environmental.size(); ++i)
        if (f.environmental[i] < 0 || f.environmental[i] > 5)
            issues.push_back({subject, "environmental[F" + std::to_string(i + 1) + "]",
                              "rating must be in 0..5, got " + std::to_string(f.environmental[i])});
    return issues;
}

inline std::vector<Issue> validate(const ProjectSpec& p) {
    std::vector<Issue> issues;
    const std::string subject = "project '" + p.id + "'";
    if (p.id.empty()) issues.push_back({subject, "id", "must not be empty"});
    if (p.use_cases.empty()) issues.push_back({subject, "use_cases", "at least one use case is required"});
    if (p.actors.empty()) issues.push_back({subject, "actors", "at least one actor is required"});
    for (const auto& uc : p.use_cases)
        for (auto& i : validate(uc)) issues.push_back({subject, i.subject + "." + i.field, i.reason});
    for (const auto& a : p.actors)
        if (a.name.empty()) issues.push_back({subject, "actors", "actor name must not be empty"});
    for (auto& i : validate(p.factors)) issues.push_back({subject, "factors." + i.field, i.reason});
    if (p.actual_effort_ph && !(*p.actual_effort_ph > 0.0 && std::isfinite(*p.actual_effort_ph)))
        issues.push_back({subject, "actual_effort_ph", "must be a positive number"});
    if (p.actual_size_uucp && !(*p.actual_size_uucp > 0.0 && std::isfinite(*p.actual_size_uucp)))
        issues.push_back({subject, "actual_size_uucp", "must be a positive number"});
    return issues;
}

inline void require_valid(const ProjectSpec& p) {
    if (auto issues = validate(p); !issues.empty()) throw ValidationError(std::move(issues));
}

inline void require_valid(const TransactionPolicy& policy) {
    if (!policy.valid())
        throw ValidationError("transaction policy", "extension_weight",
                              "must be in [0, 1], got " + std::to_string(policy.extension_weight));
}

// ---------------------------------------------------------------------------
// Transaction counting

/// Direct counts pass through; scenarios count main steps plus weighted extension steps.
inline double count_transactions(const UseCaseSpec& uc, TransactionPolicy policy) {
    if (auto issues = validate(uc); !issues.empty()) throw ValidationError(std::move(issues));
    require_valid(policy);
    if (const auto* d = std::get_if<DirectCount>(&uc.source)) return d->transactions;
    const auto& s = std::get<Scenario>(uc.source);
    return s.main_steps + policy.extension_weight * s.extension_steps;
}

struct EffectiveCount {
    int level = 1;     // in [1, kMaxTransactionLevel]
    double raw = 1.0;  // before rounding and clamping
    bool clamped = false;
};

/// Rounds half away from zero and clamps into [1, 10]. A clamp from above is
/// reported through `warn` when one is given.
inline EffectiveCount effective_transactions(const UseCaseSpec& uc, TransactionPolicy policy,
                                             const WarningSink& warn = {}) {
    const double raw = count_transactions(uc, policy);
    const auto rounded = static_cast<long>(std::lround(raw));
    EffectiveCount out{static_cast<int>(std::clamp<long>(rounded, 1, kMaxTransactionLevel)), raw, false};
    if (rounded > kMaxTransactionLevel) {
        out.clamped = true;
        if (warn) {
            warn("use case '" + uc.name + "': " + std::to_string(rounded) + " transactions clamped to " +
                 std::to_string(kMaxTransactionLevel));
        }
    }
    return out;
}

/// Fraction of use cases that are include or extend relations.
inline double extend_include_ratio(const ProjectSpec& p) {
    if (p.use_cases.empty()) return 0.0;
    std::size_t n = 0;
    for (const auto& uc : p.use_cases)
        if (uc.relation != Relation::base) ++n;
    return static_cast<double>(n) / static_cast<double>(p.use_cases.size());
}

}  // namespace ucp
