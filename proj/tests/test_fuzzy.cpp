#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "ucp/fuzzy.hpp"

using namespace ucp;

namespace {

// Oracle: the same three-rule min/max system written independently and
// integrated by fine midpoint quadrature instead of the engine's grid.
double tri(double x, double a, double b, double c) {
    return std::max(0.0, std::min((x - a) / (b - a), (c - x) / (c - b)));
}

double oracle_centroid(double x) {
    const std::array<double, 3> in{tri(x, -2, 2, 6), tri(x, 2, 6, 10), tri(x, 6, 10, 14)};
    const std::array<std::array<double, 3>, 3> out{{{0, 5, 10}, {5, 10, 15}, {10, 15, 20}}};
    const int n = 400000;
    const double h = 20.0 / n;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
        const double y = (k + 0.5) * h;
        double m = 0.0;
        for (int r = 0; r < 3; ++r) m = std::max(m, std::min(in[r], tri(y, out[r][0], out[r][1], out[r][2])));
        num += m * y;
        den += m;
    }
    return num / den;
}

// Published adjusted weights for 1..10 transactions.
constexpr std::array<double, 10> kPublished{5, 5, 6.45, 7.5, 8.55, 10, 11.4, 12.5, 13.6, 15};

}  // namespace

TEST(Membership, TriangleShape) {
    const TriangularMF mf{2, 6, 10};
    EXPECT_DOUBLE_EQ(membership(6, mf), 1.0);
    EXPECT_DOUBLE_EQ(membership(2, mf), 0.0);
    EXPECT_DOUBLE_EQ(membership(-1, mf), 0.0);
    EXPECT_DOUBLE_EQ(membership(10, mf), 0.0);
    EXPECT_DOUBLE_EQ(membership(4, mf), 0.5);
    EXPECT_DOUBLE_EQ(membership(9, mf), 0.25);
}

TEST(Membership, DegenerateShoulders) {
    const TriangularMF left{0, 0, 4};
    EXPECT_DOUBLE_EQ(membership(0, left), 1.0);
    EXPECT_DOUBLE_EQ(membership(-0.1, left), 0.0);
    EXPECT_DOUBLE_EQ(membership(2, left), 0.5);
    const TriangularMF right{0, 4, 4};
    EXPECT_DOUBLE_EQ(membership(4, right), 1.0);
    EXPECT_DOUBLE_EQ(membership(4.1, right), 0.0);
}

TEST(Membership, ContinuousAndBounded) {
    const TriangularMF mf{-2, 2, 6};
    double prev = membership(-3, mf);
    for (double x = -3; x <= 7; x += 0.001) {
        const double m = membership(x, mf);
        ASSERT_GE(m, 0.0);
        ASSERT_LE(m, 1.0);
        ASSERT_LE(std::abs(m - prev), 0.001 / 4 + 1e-12);
        prev = m;
    }
}

TEST(FuzzyInference, MatchesQuadratureOracle) {
    const FuzzyInference engine;
    for (double x = 1.0; x <= 10.0; x += 0.25) EXPECT_NEAR(engine.infer(x), oracle_centroid(x), 1e-3) << x;
}

TEST(FuzzyInference, FrozenOracleValues) {
    // Computed with the quadrature oracle above.
    const FuzzyInference engine;
    EXPECT_NEAR(engine.infer(3), 6.447368, 1e-5);
    EXPECT_NEAR(engine.infer(4), 7.5, 1e-9);
    EXPECT_NEAR(engine.infer(5), 8.552632, 1e-5);
    EXPECT_NEAR(engine.infer(7), 11.447368, 1e-5);
    EXPECT_NEAR(engine.infer(9), 13.552632, 1e-5);
}

TEST(FuzzyInference, OutputWithinWeightRange) {
    const FuzzyInference engine;
    for (double x = 1.0; x <= 10.0; x += 0.01) {
        const double w = engine.infer(x);
        EXPECT_GE(w, 5.0 - 1e-9);
        EXPECT_LE(w, 15.0 + 1e-9);
    }
}

TEST(FuzzyInference, NoFiringRuleIsNumericError) {
    const FuzzyInference engine;
    EXPECT_THROW(engine.infer(20.0), NumericError);
}

TEST(FuzzyConfigValidation, RejectsWrongPeaksAndBadUniverse) {
    auto cfg = FuzzyConfig::defaults();
    cfg.input_sets[1] = {2, 5, 10};
    EXPECT_THROW(FuzzyInference{cfg}, ValidationError);
    cfg = FuzzyConfig::defaults();
    cfg.output_sets[0] = {6, 5, 10};
    EXPECT_THROW(FuzzyInference{cfg}, ValidationError);
    cfg = FuzzyConfig::defaults();
    cfg.resolution = 0.0;
    EXPECT_THROW(FuzzyInference{cfg}, ValidationError);
    cfg = FuzzyConfig::defaults();
    cfg.universe_max = cfg.universe_min;
    EXPECT_THROW(FuzzyInference{cfg}, ValidationError);
}

TEST(AdjustedWeight, RulePeaksExact) {
    EXPECT_EQ(adjusted_weight(2), 5.0);
    EXPECT_EQ(adjusted_weight(6), 10.0);
    EXPECT_EQ(adjusted_weight(10), 15.0);
    EXPECT_EQ(adjusted_weight(1), 5.0);
}

TEST(AdjustedWeight, PublishedTableWithinTolerance) {
    for (int level = 1; level <= 10; ++level)
        EXPECT_NEAR(adjusted_weight(level), kPublished[static_cast<std::size_t>(level - 1)], 0.2) << level;
    EXPECT_NEAR(adjusted_weight(4), 7.5, 1e-9);
    EXPECT_NEAR(adjusted_weight(3), 6.45, 0.2);
}

TEST(AdjustedWeight, MonotoneAndSmooth) {
    for (int level = 2; level <= 10; ++level) {
        const double step = adjusted_weight(level) - adjusted_weight(level - 1);
        EXPECT_GE(step, 0.0);
        EXPECT_LT(step, 2.0);
    }
    EXPECT_EQ(karner_use_case_weight(4) - karner_use_case_weight(3), 5.0);
}

TEST(AdjustedWeight, NeverAboveKarnerAtPeaksAndLowerInTotal) {
    for (int level : {2, 6, 10}) EXPECT_LE(adjusted_weight(level), karner_use_case_weight(level));
    double karner = 0.0;
    for (int level = 1; level <= 10; ++level) karner += karner_use_case_weight(level);
    const double published = std::accumulate(kPublished.begin(), kPublished.end(), 0.0);
    EXPECT_DOUBLE_EQ(karner, 100.0);
    EXPECT_NEAR(published, 95.0, 1e-9);
    EXPECT_LT(published, karner);
    const auto& w = default_weight_table().weights();
    EXPECT_LT(std::accumulate(w.begin(), w.end(), 0.0), karner);
}

TEST(AdjustedWeight, OutOfRangeLevel) {
    EXPECT_THROW(adjusted_weight(0), ValidationError);
    EXPECT_THROW(adjusted_weight(11), ValidationError);
}

TEST(AdjustedWeight, EndpointsPinnedForDriftingConfig) {
    // Wider output sets shift edge centroids inward; the table still pins 1 and 10.
    auto cfg = FuzzyConfig::defaults();
    cfg.output_sets = {TriangularMF{-1, 5, 11}, TriangularMF{4, 10, 16}, TriangularMF{9, 15, 21}};
    cfg.universe_min = -1;
    cfg.universe_max = 21;
    const FuzzyInference engine(cfg);
    const AdjustedWeightTable table(engine);
    EXPECT_EQ(table.weight(1), 5.0);
    EXPECT_EQ(table.weight(10), 15.0);
    for (int level = 1; level <= 10; ++level) {
        EXPECT_GE(table.weight(level), 5.0);
        EXPECT_LE(table.weight(level), 15.0);
    }
}

namespace {

ProjectSpec project_with(std::vector<int> transactions, std::vector<ActorKind> actors) {
    ProjectSpec p;
    p.id = "p";
    int i = 0;
    for (int t : transactions) p.use_cases.push_back({"uc" + std::to_string(i++), DirectCount{t}, Relation::base});
    for (auto k : actors) p.actors.push_back({"a" + std::to_string(i++), k});
    p.factors = FactorRatings::uniform(3);
    return p;
}

}  // namespace

TEST(FuzzyUucp, Examples) {
    EXPECT_DOUBLE_EQ(fuzzy_uucp(project_with({2}, {ActorKind::simple}), TransactionPolicy::full()), 6.0);
    EXPECT_DOUBLE_EQ(fuzzy_uucp(project_with({2, 6, 10}, {ActorKind::complex}), TransactionPolicy::full()), 33.0);
}

TEST(FuzzyUucp, DoublingCritiqueSoftened) {
    // 10 use cases at 3 and 10 at 4 transactions, plus one simple actor.
    std::vector<int> t(10, 3);
    t.insert(t.end(), 10, 4);
    const double got = fuzzy_uucp(project_with(t, {ActorKind::simple}), TransactionPolicy::full()) - 1.0;
    EXPECT_NEAR(got, 10 * 6.45 + 10 * 7.5, 10 * 0.2);
    // Exact value from the table itself.
    EXPECT_NEAR(got, 10 * adjusted_weight(3) + 10 * adjusted_weight(4), 1e-9);
}

TEST(FuzzyConfigFile, ShippedFileMatchesDefaults) {
    const auto cfg = load_fuzzy_config(std::string(UCP_SOURCE_DIR) + "/data/fuzzy_default.json");
    EXPECT_EQ(cfg, FuzzyConfig::defaults());
}

TEST(FuzzyConfigFile, RoundTrip) {
    auto cfg = FuzzyConfig::defaults();
    cfg.implication = Implication::product;
    cfg.aggregation = Aggregation::bounded_sum;
    cfg.resolution = 0.005;
    EXPECT_EQ(fuzzy_config_from_json(nlohmann::json::parse(to_json(cfg).dump())), cfg);
}

TEST(FuzzyConfigFile, RejectsMalformed) {
    auto j = nlohmann::json::parse(to_json(FuzzyConfig::defaults()).dump());
    j["implication"] = "max";
    EXPECT_THROW(fuzzy_config_from_json(j), ValidationError);
    j = nlohmann::json::parse(to_json(FuzzyConfig::defaults()).dump());
    j["input_sets"].erase(0);
    EXPECT_THROW(fuzzy_config_from_json(j), ValidationError);
}
