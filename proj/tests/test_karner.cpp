#include <gtest/gtest.h>

#include <random>

#include "ucp/karner.hpp"

using namespace ucp;

namespace {

ProjectSpec project_with(std::vector<int> transactions, std::vector<ActorKind> actors) {
    ProjectSpec p;
    p.id = "p";
    int i = 0;
    for (int t : transactions) p.use_cases.push_back({"uc" + std::to_string(i++), DirectCount{t}, Relation::base});
    for (auto k : actors) p.actors.push_back({"actor" + std::to_string(i++), k});
    p.factors = FactorRatings::uniform(3);
    return p;
}

/// Use-case part of UUCP only, so projects without actors can be compared.
double use_case_weight_sum(const std::vector<int>& transactions) {
    double s = 0.0;
    for (int t : transactions) s += karner_use_case_weight(t);
    return s;
}

}  // namespace

TEST(Classify, BandEdges) {
    EXPECT_EQ(classify_use_case(1), Complexity::simple);
    EXPECT_EQ(classify_use_case(3), Complexity::simple);
    EXPECT_EQ(classify_use_case(4), Complexity::average);
    EXPECT_EQ(classify_use_case(7), Complexity::average);
    EXPECT_EQ(classify_use_case(8), Complexity::complex);
    EXPECT_EQ(classify_use_case(20), Complexity::complex);
    EXPECT_THROW(classify_use_case(0), ValidationError);
}

TEST(Classify, TotalAndMonotone) {
    Complexity prev = classify_use_case(1);
    for (int t = 2; t <= 200; ++t) {
        const Complexity c = classify_use_case(t);
        EXPECT_GE(static_cast<int>(c), static_cast<int>(prev));
        prev = c;
    }
}

TEST(WeightTableDefaults, StrictlyIncreasing) {
    WeightTable w;
    EXPECT_LT(w.use_case_weights[0], w.use_case_weights[1]);
    EXPECT_LT(w.use_case_weights[1], w.use_case_weights[2]);
    EXPECT_LT(w.actor_weights[0], w.actor_weights[1]);
    EXPECT_LT(w.actor_weights[1], w.actor_weights[2]);
}

TEST(FactorConstantsDefaults, WeightSums) {
    FactorConstants k;
    EXPECT_DOUBLE_EQ(std::accumulate(k.tf_weights.begin(), k.tf_weights.end(), 0.0), 14.0);
    EXPECT_DOUBLE_EQ(std::accumulate(k.ef_weights.begin(), k.ef_weights.end(), 0.0), 4.5);
}

TEST(Uucp, SingleUseCaseAndSimpleActor) {
    EXPECT_DOUBLE_EQ(uucp(project_with({2}, {ActorKind::simple}), TransactionPolicy::full()), 6.0);
}

TEST(Uucp, MixedBands) {
    EXPECT_DOUBLE_EQ(uucp(project_with({2, 5, 9}, {ActorKind::average}), TransactionPolicy::full()), 32.0);
}

TEST(Uucp, DoublingCritique) {
    std::vector<int> t(10, 3);
    t.insert(t.end(), 10, 4);
    EXPECT_DOUBLE_EQ(use_case_weight_sum(t), 150.0);

    // Identical projects except 3 vs 4 transactions per use case.
    for (int n = 1; n <= 30; ++n) {
        const double three = use_case_weight_sum(std::vector<int>(n, 3));
        const double four = use_case_weight_sum(std::vector<int>(n, 4));
        EXPECT_DOUBLE_EQ(four, 2.0 * three);
    }
}

TEST(Uucp, AdditiveOverDisjointProjects) {
    std::mt19937 gen(11);
    std::uniform_int_distribution<int> tx(1, 14), count(1, 8), kind(0, 2);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> ta, tb;
        std::vector<ActorKind> aa, ab;
        for (int i = count(gen); i > 0; --i) ta.push_back(tx(gen));
        for (int i = count(gen); i > 0; --i) tb.push_back(tx(gen));
        for (int i = count(gen); i > 0; --i) aa.push_back(static_cast<ActorKind>(kind(gen)));
        for (int i = count(gen); i > 0; --i) ab.push_back(static_cast<ActorKind>(kind(gen)));
        auto t = ta;
        t.insert(t.end(), tb.begin(), tb.end());
        auto a = aa;
        a.insert(a.end(), ab.begin(), ab.end());
        const auto policy = TransactionPolicy::full();
        EXPECT_DOUBLE_EQ(uucp(project_with(t, a), policy),
                         uucp(project_with(ta, aa), policy) + uucp(project_with(tb, ab), policy));
    }
}

TEST(Uucp, ScenarioOverTenClampsToComplex) {
    ProjectSpec p = project_with({}, {ActorKind::simple});
    p.use_cases.push_back({"Enroll", Scenario{7, 8}, Relation::base});
    int warnings = 0;
    EXPECT_DOUBLE_EQ(uucp(p, TransactionPolicy::full(), {}, [&](const std::string&) { ++warnings; }), 16.0);
    EXPECT_EQ(warnings, 1);
}

TEST(TechnicalFactor, Examples) {
    // Tabled weights sum to 14, so the midpoint sits at 1.02 rather than exactly 1.
    EXPECT_NEAR(technical_factor(FactorRatings::uniform(3)), 1.02, 1e-12);
    EXPECT_DOUBLE_EQ(technical_factor(FactorRatings::uniform(0)), 0.6);
    EXPECT_NEAR(technical_factor(FactorRatings::uniform(5)), 1.3, 1e-12);
}

TEST(EnvironmentalFactor, Examples) {
    EXPECT_NEAR(environmental_factor(FactorRatings::uniform(3)), 0.995, 1e-12);
    EXPECT_DOUBLE_EQ(environmental_factor(FactorRatings::uniform(0)), 1.4);
    FactorRatings r = FactorRatings::uniform(5);
    r.environmental[1] = 0;
    r.environmental[6] = 0;
    EXPECT_NEAR(environmental_factor(r), 0.425, 1e-12);
}

TEST(Factors, BoundsOverRandomRatings) {
    std::mt19937 gen(3);
    std::uniform_int_distribution<int> rating(0, 5);
    for (int i = 0; i < 10000; ++i) {
        FactorRatings r;
        for (auto& v : r.technical) v = rating(gen);
        for (auto& v : r.environmental) v = rating(gen);
        const double tf = technical_factor(r);
        const double ef = environmental_factor(r);
        ASSERT_GE(tf, 0.6 - 1e-12);
        ASSERT_LE(tf, 1.3 + 1e-12);
        ASSERT_GE(ef, 0.425 - 1e-12);
        ASSERT_LE(ef, 1.7 + 1e-12);
    }
}

TEST(Factors, EnvironmentalMaximumAtNegativeFactorsFive) {
    FactorRatings r = FactorRatings::uniform(0);
    r.environmental[1] = 5;
    r.environmental[6] = 5;
    EXPECT_NEAR(environmental_factor(r), 1.7, 1e-12);
}

TEST(AdjustedUcp, Examples) {
    EXPECT_DOUBLE_EQ(adjusted_ucp(100, 1.0, 1.0), 100.0);
    EXPECT_NEAR(adjusted_ucp(100, 1.3, 1.0), 130.0, 1e-9);
    EXPECT_NEAR(adjusted_ucp(100, 0.6, 1.4), 84.0, 1e-9);
}

TEST(AdjustedUcp, InversionRecoversUucp) {
    EXPECT_NEAR(uucp_from_ucp(adjusted_ucp(72.44, 0.87, 1.13), 0.87, 1.13), 72.44, 1e-9);
    EXPECT_THROW(uucp_from_ucp(10.0, 0.0, 1.0), NumericError);
}

TEST(Schneider, AllThreesGivesTwenty) {
    const auto r = FactorRatings::uniform(3);
    EXPECT_EQ(schneider_count(r), 0);
    EXPECT_EQ(schneider_rate(r), EffortRate::standard);
}

TEST(Schneider, SixLowRatingsIsRisk) {
    FactorRatings r = FactorRatings::uniform(3);
    for (int i = 0; i < 6; ++i) r.environmental[i] = 2;
    EXPECT_EQ(schneider_count(r), 6);
    EXPECT_TRUE(assess_schneider(r).at_risk());
    try {
        schneider_rate(r);
        FAIL() << "expected TeamRiskError";
    } catch (const TeamRiskError& e) {
        EXPECT_EQ(e.risk_count(), 6);
    }
    EXPECT_EQ(schneider_rate(r, RiskOverride::force), EffortRate::elevated);
}

TEST(Schneider, ThreeLowRatingsGivesTwentyEight) {
    FactorRatings r = FactorRatings::uniform(3);
    for (int i = 0; i < 3; ++i) r.environmental[i] = 2;
    EXPECT_EQ(schneider_count(r), 3);
    EXPECT_EQ(schneider_rate(r), EffortRate::elevated);
}

// The rule's prose overlaps at three; counts 0..2 -> 20, 3..4 -> 28, 5+ -> risk.
TEST(Schneider, ThresholdResolution) {
    for (int t = 0; t <= 8; ++t) {
        FactorRatings r = FactorRatings::uniform(3);
        for (int i = 0; i < t; ++i) {
            if (i < 6) r.environmental[static_cast<std::size_t>(i)] = 1;
            else r.environmental[static_cast<std::size_t>(i)] = 5;
        }
        ASSERT_EQ(schneider_count(r), t);
        const auto a = assess_schneider(r);
        if (t <= 2) EXPECT_EQ(a.rate, EffortRate::standard) << t;
        else if (t <= 4) EXPECT_EQ(a.rate, EffortRate::elevated) << t;
        else EXPECT_FALSE(a.rate.has_value()) << t;
    }
}

TEST(Schneider, UpperFactorsCountWhenAboveThree) {
    FactorRatings r = FactorRatings::uniform(3);
    r.environmental[6] = 4;
    r.environmental[7] = 3;
    EXPECT_EQ(schneider_count(r), 1);
    r.environmental[7] = 2;  // below three does not count for F7..F8
    EXPECT_EQ(schneider_count(r), 1);
}

TEST(Schneider, IgnoresTechnicalRatings) {
    std::mt19937 gen(5);
    std::uniform_int_distribution<int> rating(0, 5);
    for (int i = 0; i < 500; ++i) {
        FactorRatings r;
        for (auto& v : r.environmental) v = rating(gen);
        for (auto& v : r.technical) v = rating(gen);
        FactorRatings other = r;
        for (auto& v : other.technical) v = rating(gen);
        EXPECT_EQ(assess_schneider(r).count, assess_schneider(other).count);
        EXPECT_EQ(assess_schneider(r).rate, assess_schneider(other).rate);
    }
}

TEST(Effort, Examples) {
    EXPECT_DOUBLE_EQ(effort(1, EffortRate::standard), 20.0);
    EXPECT_DOUBLE_EQ(effort(0.5, EffortRate::standard), 10.0);
    EXPECT_NEAR(effort(74.33, EffortRate::elevated), 2081.24, 1e-9);
}

TEST(EstimateKarner, MinimalProject) {
    const auto e = estimate_karner(project_with({2}, {ActorKind::simple}), TransactionPolicy::full());
    EXPECT_EQ(e.model, ModelTag::karner);
    EXPECT_DOUBLE_EQ(e.uucp, 6.0);
    EXPECT_NEAR(e.tf, 1.02, 1e-12);
    EXPECT_NEAR(e.ef, 0.995, 1e-12);
    EXPECT_NEAR(e.ucp, 6.0894, 1e-9);
    ASSERT_TRUE(e.effort_ph.has_value());
    EXPECT_NEAR(*e.effort_ph, 121.788, 1e-9);
    EXPECT_NEAR(e.ucp, e.uucp * e.tf * e.ef, 1e-9);
}

TEST(EstimateKarner, AtRiskTeamOmitsEffortUnlessForced) {
    auto p = project_with({2}, {ActorKind::simple});
    for (int i = 0; i < 6; ++i) p.factors.environmental[i] = 1;
    EXPECT_FALSE(estimate_karner(p, TransactionPolicy::full()).effort_ph.has_value());
    const auto forced = estimate_karner(p, TransactionPolicy::full(), std::nullopt, RiskOverride::force);
    ASSERT_TRUE(forced.effort_ph.has_value());
    EXPECT_NEAR(*forced.effort_ph, forced.ucp * 28.0, 1e-9);
    const auto flat = estimate_karner(p, TransactionPolicy::full(), EffortRate::standard);
    EXPECT_NEAR(*flat.effort_ph, flat.ucp * 20.0, 1e-9);
}
