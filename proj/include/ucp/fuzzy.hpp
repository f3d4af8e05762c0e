#pragma once

// Three-rule Mamdani system that grades use-case weights over 1..10
// transactions instead of Karner's three bands.
//
// Inputs are triangles peaked at 2, 6 and 10 transactions, outputs are
// triangles peaked at weights 5, 10 and 15. Each rule clips (or scales) its
// output set by the input degree, the clipped sets are aggregated, and the
// centroid of the aggregate is sampled on a uniform grid.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ucp/errors.hpp"
#include "ucp/json_io.hpp"
#include "ucp/karner.hpp"
#include "ucp/model.hpp"

namespace ucp {

struct TriangularMF {
    double a = 0.0;  // left foot
    double b = 0.0;  // peak
    double c = 0.0;  // right foot

    bool valid() const { return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && a <= b && b <= c; }

    friend bool operator==(const TriangularMF&, const TriangularMF&) = default;
};

inline double membership(double x, const TriangularMF& mf) {
    if (x == mf.b) return 1.0;
    if (x <= mf.a || x >= mf.c) return 0.0;
    if (x < mf.b) return (x - mf.a) / (mf.b - mf.a);
    return (mf.c - x) / (mf.c - mf.b);
}

enum class Implication { min, product };
enum class Aggregation { max, bounded_sum };

struct FuzzyRule {
    std::size_t input = 0;   // index into input_sets
    std::size_t output = 0;  // index into output_sets

    friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

struct FuzzyConfig {
    std::array<TriangularMF, 3> input_sets;
    std::array<TriangularMF, 3> output_sets;
    std::array<FuzzyRule, 3> rules{FuzzyRule{0, 0}, FuzzyRule{1, 1}, FuzzyRule{2, 2}};
    Implication implication = Implication::min;
    Aggregation aggregation = Aggregation::max;
    double universe_min = 0.0;
    double universe_max = 20.0;
    double resolution = 0.01;

    /// Calibrated against the published adjusted-weight table (max deviation ~0.05).
    static FuzzyConfig defaults() {
        FuzzyConfig cfg;
        cfg.input_sets = {TriangularMF{-2, 2, 6}, TriangularMF{2, 6, 10}, TriangularMF{6, 10, 14}};
        cfg.output_sets = {TriangularMF{0, 5, 10}, TriangularMF{5, 10, 15}, TriangularMF{10, 15, 20}};
        return cfg;
    }

    friend bool operator==(const FuzzyConfig&, const FuzzyConfig&) = default;
};

inline constexpr std::array<double, 3> kRuleInputPeaks{2.0, 6.0, 10.0};
inline constexpr std::array<double, 3> kRuleOutputPeaks{5.0, 10.0, 15.0};

inline std::vector<Issue> validate(const FuzzyConfig& cfg) {
    std::vector<Issue> issues;
    const std::string subject = "fuzzy config";
    for (std::size_t i = 0; i < 3; ++i) {
        if (!cfg.input_sets[i].valid())
            issues.push_back({subject, "input_sets[" + std::to_string(i) + "]", "requires a <= b <= c"});
        if (!cfg.output_sets[i].valid())
            issues.push_back({subject, "output_sets[" + std::to_string(i) + "]", "requires a <= b <= c"});
    }
    for (std::size_t r = 0; r < 3; ++r) {
        const auto& rule = cfg.rules[r];
        const std::string field = "rules[" + std::to_string(r) + "]";
        if (rule.input > 2 || rule.output > 2) {
            issues.push_back({subject, field, "set index out of range"});
            continue;
        }
        if (cfg.input_sets[rule.input].b != kRuleInputPeaks[r] || cfg.output_sets[rule.output].b != kRuleOutputPeaks[r])
            issues.push_back({subject, field,
                              "must map input peak " + std::to_string(kRuleInputPeaks[r]) + " to output peak " +
                                  std::to_string(kRuleOutputPeaks[r])});
    }
    if (!(cfg.universe_min < cfg.universe_max))
        issues.push_back({subject, "universe", "min must be below max"});
    if (!(cfg.resolution > 0.0) || cfg.resolution > (cfg.universe_max - cfg.universe_min))
        issues.push_back({subject, "resolution", "must be positive and smaller than the universe width"});
    return issues;
}

/// Immutable inference engine over a validated configuration.
class FuzzyInference {
public:
    explicit FuzzyInference(FuzzyConfig cfg = FuzzyConfig::defaults()) : cfg_(std::move(cfg)) {
        if (auto issues = validate(cfg_); !issues.empty()) throw ValidationError(std::move(issues));
        samples_ = static_cast<std::size_t>(std::llround((cfg_.universe_max - cfg_.universe_min) / cfg_.resolution)) + 1;
    }

    const FuzzyConfig& config() const { return cfg_; }

    /// Firing strength of each rule for a crisp transaction count.
    std::array<double, 3> activations(double transactions) const {
        std::array<double, 3> act{};
        for (std::size_t r = 0; r < 3; ++r) act[r] = membership(transactions, cfg_.input_sets[cfg_.rules[r].input]);
        return act;
    }

    /// Aggregated output membership at weight y.
    double aggregate(const std::array<double, 3>& act, double y) const {
        double out = 0.0;
        for (std::size_t r = 0; r < 3; ++r) {
            const double mu = membership(y, cfg_.output_sets[cfg_.rules[r].output]);
            const double implied = cfg_.implication == Implication::min ? std::min(act[r], mu) : act[r] * mu;
            out = cfg_.aggregation == Aggregation::max ? std::max(out, implied) : std::min(1.0, out + implied);
        }
        return out;
    }

    /// Centroid of the aggregated output set, without clamping.
    double infer(double transactions) const {
        const auto act = activations(transactions);
        double num = 0.0;
        double den = 0.0;
        for (std::size_t k = 0; k < samples_; ++k) {
            const double y = cfg_.universe_min + static_cast<double>(k) * cfg_.resolution;
            const double m = aggregate(act, y);
            num += m * y;
            den += m;
        }
        if (den <= 0.0)
            throw NumericError("no fuzzy rule fires for input " + std::to_string(transactions));
        return num / den;
    }

private:
    FuzzyConfig cfg_;
    std::size_t samples_ = 0;
};

/// Graduated use-case weight for each transaction level 1..10.
class AdjustedWeightTable {
public:
    static constexpr double kMinWeight = 5.0;
    static constexpr double kMaxWeight = 15.0;

    explicit AdjustedWeightTable(const FuzzyInference& engine) {
        for (int level = 1; level <= kMaxTransactionLevel; ++level)
            weights_[level - 1] = std::clamp(quantize(engine.infer(level)), kMinWeight, kMaxWeight);
        weights_.front() = kMinWeight;
        weights_.back() = kMaxWeight;
        for (std::size_t i = 1; i < weights_.size(); ++i)
            if (weights_[i] < weights_[i - 1])
                throw ValidationError("fuzzy config", "", "adjusted weights are not non-decreasing at level " +
                                                              std::to_string(i + 1));
    }

    double weight(int level) const {
        if (level < 1 || level > kMaxTransactionLevel)
            throw ValidationError("adjusted weight", "transactions",
                                  "level must be in 1..10, got " + std::to_string(level));
        return weights_[static_cast<std::size_t>(level - 1)];
    }

    const std::array<double, kMaxTransactionLevel>& weights() const { return weights_; }

private:
    // Drops sampling round-off so symmetric aggregates land exactly on their peak.
    static double quantize(double w) { return std::round(w * 1e9) / 1e9; }

    std::array<double, kMaxTransactionLevel> weights_{};
};

/// Table built from the shipped default configuration, computed once.
inline const AdjustedWeightTable& default_weight_table() {
    static const AdjustedWeightTable table{FuzzyInference{}};
    return table;
}

inline double adjusted_weight(int transactions, const AdjustedWeightTable& table = default_weight_table()) {
    return table.weight(transactions);
}

/// UUCP with graduated use-case weights. Actor weights stay Karner's.
inline double fuzzy_uucp(const ProjectSpec& project, TransactionPolicy policy,
                         const AdjustedWeightTable& table = default_weight_table(), const WarningSink& warn = {}) {
    require_valid(project);
    double sum = 0.0;
    for (const auto& uc : project.use_cases) sum += table.weight(effective_transactions(uc, policy, warn).level);
    return sum + actor_weight_sum(project);
}

inline SizeEstimate estimate_fuzzy(const ProjectSpec& project, TransactionPolicy policy,
                                   const AdjustedWeightTable& table = default_weight_table(),
                                   std::optional<EffortRate> fixed_rate = std::nullopt,
                                   RiskOverride override = RiskOverride::refuse, const WarningSink& warn = {}) {
    return complete_estimate(ModelTag::fuzzy, fuzzy_uucp(project, policy, table, warn), project.factors,
                             fixed_rate, override);
}

// ---------------------------------------------------------------------------
// Configuration file

inline nlohmann::ordered_json to_json(const FuzzyConfig& cfg) {
    auto sets = [](const std::array<TriangularMF, 3>& s) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& mf : s) arr.push_back(nlohmann::ordered_json::array({mf.a, mf.b, mf.c}));
        return arr;
    };
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["input_sets"] = sets(cfg.input_sets);
    j["output_sets"] = sets(cfg.output_sets);
    auto rules = nlohmann::ordered_json::array();
    for (const auto& r : cfg.rules) rules.push_back({{"input", r.input}, {"output", r.output}});
    j["rules"] = rules;
    j["implication"] = cfg.implication == Implication::min ? "min" : "product";
    j["aggregation"] = cfg.aggregation == Aggregation::max ? "max" : "bounded_sum";
    j["universe"] = {{"min", cfg.universe_min}, {"max", cfg.universe_max}};
    j["resolution"] = cfg.resolution;
    return j;
}

inline FuzzyConfig fuzzy_config_from_json(const nlohmann::json& j) {
    FuzzyConfig cfg;
    try {
        if (j.at("format_version").get<int>() != 1)
            throw ValidationError("fuzzy config", "format_version", "unsupported version");
        auto sets = [](const nlohmann::json& arr, const char* name) {
            if (!arr.is_array() || arr.size() != 3)
                throw ValidationError("fuzzy config", name, "expected exactly three [a, b, c] triples");
            std::array<TriangularMF, 3> s;
            for (std::size_t i = 0; i < 3; ++i) {
                if (!arr[i].is_array() || arr[i].size() != 3)
                    throw ValidationError("fuzzy config", name, "expected [a, b, c]");
                s[i] = {arr[i][0].get<double>(), arr[i][1].get<double>(), arr[i][2].get<double>()};
            }
            return s;
        };
        cfg.input_sets = sets(j.at("input_sets"), "input_sets");
        cfg.output_sets = sets(j.at("output_sets"), "output_sets");
        const auto& rules = j.at("rules");
        if (!rules.is_array() || rules.size() != 3)
            throw ValidationError("fuzzy config", "rules", "expected exactly three rules");
        for (std::size_t i = 0; i < 3; ++i)
            cfg.rules[i] = {rules[i].at("input").get<std::size_t>(), rules[i].at("output").get<std::size_t>()};
        const auto imp = j.at("implication").get<std::string>();
        if (imp == "min") cfg.implication = Implication::min;
        else if (imp == "product") cfg.implication = Implication::product;
        else throw ValidationError("fuzzy config", "implication", "expected 'min' or 'product'");
        const auto agg = j.at("aggregation").get<std::string>();
        if (agg == "max") cfg.aggregation = Aggregation::max;
        else if (agg == "bounded_sum") cfg.aggregation = Aggregation::bounded_sum;
        else throw ValidationError("fuzzy config", "aggregation", "expected 'max' or 'bounded_sum'");
        cfg.universe_min = j.at("universe").at("min").get<double>();
        cfg.universe_max = j.at("universe").at("max").get<double>();
        cfg.resolution = j.at("resolution").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("fuzzy config", "", e.what());
    }
    if (auto issues = validate(cfg); !issues.empty()) throw ValidationError(std::move(issues));
    return cfg;
}

inline FuzzyConfig load_fuzzy_config(const std::string& path) { return fuzzy_config_from_json(io::read_json(path)); }

inline void save_fuzzy_config(const FuzzyConfig& cfg, const std::string& path) { io::write_text(path, io::dump(to_json(cfg))); }

}  // namespace ucp
