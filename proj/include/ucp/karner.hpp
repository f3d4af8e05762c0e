#pragma once

// Classical use case points: complexity bands, UUCP, technical and
// environmental factors, adjusted UCP and effort conversion.

#include <array>
#include <numeric>
#include <optional>
#include <string_view>

#include "ucp/errors.hpp"
#include "ucp/model.hpp"

namespace ucp {

enum class Complexity { simple, average, complex };

inline std::string_view to_string(Complexity c) {
    switch (c) {
        case Complexity::simple: return "simple";
        case Complexity::average: return "average";
        case Complexity::complex: return "complex";
    }
    return "simple";
}

/// Karner's weights per complexity class and the transaction bands that select a class.
struct WeightTable {
    std::array<double, 3> use_case_weights{5.0, 10.0, 15.0};
    std::array<double, 3> actor_weights{1.0, 2.0, 3.0};
    int average_from = 4;  // simple is 1..average_from-1
    int complex_from = 8;  // average is average_from..complex_from-1

    double use_case_weight(Complexity c) const { return use_case_weights[static_cast<std::size_t>(c)]; }
    double actor_weight(ActorKind k) const { return actor_weights[static_cast<std::size_t>(k)]; }
};

inline constexpr std::array<double, kTechnicalFactorCount> kTechnicalWeights{2, 1, 1, 1, 1, 0.5, 0.5,
                                                                              2, 1, 1, 1, 1, 1};
inline constexpr std::array<double, kEnvironmentalFactorCount> kEnvironmentalWeights{1.5, -1, 0.5, 0.5,
                                                                                      1,   1,  -1, 2};

struct FactorConstants {
    std::array<double, kTechnicalFactorCount> tf_weights = kTechnicalWeights;
    std::array<double, kEnvironmentalFactorCount> ef_weights = kEnvironmentalWeights;
    double tf_c1 = 0.6;
    double tf_c2 = 0.01;
    double ef_c1 = 1.4;
    double ef_c2 = -0.03;
};

inline Complexity classify_use_case(int transactions, const WeightTable& table = {}) {
    if (transactions < 1)
        throw ValidationError("use case", "transactions", "must be >= 1, got " + std::to_string(transactions));
    if (transactions < table.average_from) return Complexity::simple;
    if (transactions < table.complex_from) return Complexity::average;
    return Complexity::complex;
}

/// Karner's weight for a use case at the given effective transaction level.
inline double karner_use_case_weight(int transactions, const WeightTable& table = {}) {
    return table.use_case_weight(classify_use_case(transactions, table));
}

inline double actor_weight_sum(const ProjectSpec& project, const WeightTable& table = {}) {
    double sum = 0.0;
    for (const auto& a : project.actors) sum += table.actor_weight(a.kind);
    return sum;
}

/// UseCase_WeightFactor + Actor_WeightFactor. Use cases are weighted at their
/// effective (rounded, clamped) transaction level.
inline double uucp(const ProjectSpec& project, TransactionPolicy policy, const WeightTable& table = {},
                   const WarningSink& warn = {}) {
    require_valid(project);
    double sum = 0.0;
    for (const auto& uc : project.use_cases)
        sum += karner_use_case_weight(effective_transactions(uc, policy, warn).level, table);
    return sum + actor_weight_sum(project, table);
}

inline double technical_factor(const FactorRatings& ratings, const FactorConstants& k = {}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kTechnicalFactorCount; ++i) sum += ratings.technical[i] * k.tf_weights[i];
    return k.tf_c1 + k.tf_c2 * sum;
}

inline double environmental_factor(const FactorRatings& ratings, const FactorConstants& k = {}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kEnvironmentalFactorCount; ++i) sum += ratings.environmental[i] * k.ef_weights[i];
    return k.ef_c1 + k.ef_c2 * sum;
}

inline double adjusted_ucp(double uucp_value, double tf, double ef) { return uucp_value * tf * ef; }

/// Inverse of adjusted_ucp: recovers UUCP from an adjusted size.
inline double uucp_from_ucp(double ucp_value, double tf, double ef) {
    if (!(tf > 0.0 && ef > 0.0)) throw NumericError("cannot invert UCP with non-positive TF or EF");
    return ucp_value / (tf * ef);
}

// ---------------------------------------------------------------------------
// Effort

enum class EffortRate : int { standard = 20, elevated = 28 };

inline constexpr double ph_per_ucp(EffortRate r) { return static_cast<double>(static_cast<int>(r)); }

/// Schneider's count: environmental F1..F6 rated below 3 plus F7..F8 rated above 3.
inline int schneider_count(const FactorRatings& ratings) {
    int t = 0;
    for (std::size_t i = 0; i < 6; ++i)
        if (ratings.environmental[i] < 3) ++t;
    for (std::size_t i = 6; i < 8; ++i)
        if (ratings.environmental[i] > 3) ++t;
    return t;
}

struct SchneiderAssessment {
    int count = 0;
    std::optional<EffortRate> rate;  // empty when the team is at risk

    bool at_risk() const { return !rate.has_value(); }
};

/// Count <= 2 gives 20 ph/UCP, 3..4 gives 28, 5 or more is flagged with no rate.
inline SchneiderAssessment assess_schneider(const FactorRatings& ratings) {
    const int t = schneider_count(ratings);
    if (t <= 2) return {t, EffortRate::standard};
    if (t <= 4) return {t, EffortRate::elevated};
    return {t, std::nullopt};
}

enum class RiskOverride { refuse, force };

/// Throws TeamRiskError for an at-risk team unless forced, in which case 28 ph/UCP is used.
inline EffortRate schneider_rate(const FactorRatings& ratings, RiskOverride override = RiskOverride::refuse) {
    const auto a = assess_schneider(ratings);
    if (a.rate) return *a.rate;
    if (override == RiskOverride::force) return EffortRate::elevated;
    throw TeamRiskError(a.count);
}

inline double effort(double ucp_value, EffortRate rate) { return ucp_value * ph_per_ucp(rate); }

// ---------------------------------------------------------------------------

enum class ModelTag { karner, fuzzy, mlp };

inline std::string_view to_string(ModelTag m) {
    switch (m) {
        case ModelTag::karner: return "karner";
        case ModelTag::fuzzy: return "fuzzy";
        case ModelTag::mlp: return "mlp";
    }
    return "karner";
}

inline std::optional<ModelTag> parse_model_tag(std::string_view s) {
    if (s == "karner") return ModelTag::karner;
    if (s == "fuzzy") return ModelTag::fuzzy;
    if (s == "mlp") return ModelTag::mlp;
    return std::nullopt;
}

struct SizeEstimate {
    ModelTag model = ModelTag::karner;
    double uucp = 0.0;
    double tf = 1.0;
    double ef = 1.0;
    double ucp = 0.0;
    std::optional<double> effort_ph;
    std::optional<EffortRate> rate;
    int schneider_count = 0;
};

/// Applies TF, EF and an effort rate to an already computed UUCP.
/// `rate` empty means Schneider's rule; an at-risk team leaves effort unset
/// unless `override` forces the elevated rate.
inline SizeEstimate complete_estimate(ModelTag model, double uucp_value, const FactorRatings& ratings,
                                      std::optional<EffortRate> fixed_rate = std::nullopt,
                                      RiskOverride override = RiskOverride::refuse) {
    SizeEstimate e;
    e.model = model;
    e.uucp = uucp_value;
    e.tf = technical_factor(ratings);
    e.ef = environmental_factor(ratings);
    e.ucp = adjusted_ucp(e.uucp, e.tf, e.ef);
    const auto assessment = assess_schneider(ratings);
    e.schneider_count = assessment.count;
    if (fixed_rate) {
        e.rate = fixed_rate;
    } else if (assessment.rate) {
        e.rate = assessment.rate;
    } else if (override == RiskOverride::force) {
        e.rate = EffortRate::elevated;
    }
    if (e.rate) e.effort_ph = effort(e.ucp, *e.rate);
    return e;
}

inline SizeEstimate estimate_karner(const ProjectSpec& project, TransactionPolicy policy,
                                    std::optional<EffortRate> fixed_rate = std::nullopt,
                                    RiskOverride override = RiskOverride::refuse, const WarningSink& warn = {}) {
    return complete_estimate(ModelTag::karner, uucp(project, policy, {}, warn), project.factors, fixed_rate,
                             override);
}

}  // namespace ucp
