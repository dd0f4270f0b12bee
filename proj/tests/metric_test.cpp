#include "symchaos/metric.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace symchaos;

namespace {

/// Member of c with random symbols on [-reach, reach] outside the window.
BiSequence random_member(const CylinderSet& c, int m, std::mt19937_64& rng, Position reach = 60) {
    FiniteWord w(static_cast<std::size_t>(2 * reach + 1));
    for (Position j = -reach; j <= reach; ++j)
        w[j + reach] = c.fixes(j) ? c.at(j) : 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    return make_window_padded(w, -reach, 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m)));
}

/// Sum of free-position weights by direct enumeration over [-reach, reach].
double brute_free_weight(const CylinderSet& c, double r, Position reach = 600) {
    double sum = 0.0;
    for (Position j = reach; j >= 1; --j)
        if (!c.fixes(j)) sum += std::pow(r, static_cast<double>(j));
    for (Position j = -reach; j <= 0; ++j)
        if (!c.fixes(j)) sum += std::pow(r, static_cast<double>(-j + 1));
    return sum;
}

}  // namespace

TEST(MetricParams, RejectsOutOfRangeBase) {
    EXPECT_THROW(MetricParams(0.0), std::invalid_argument);
    EXPECT_THROW(MetricParams(1.0), std::invalid_argument);
    EXPECT_THROW(MetricParams(-0.5), std::invalid_argument);
    EXPECT_DOUBLE_EQ(MetricParams(0.5).space_diameter(), 2.0);
}

TEST(Distance, SelfDistanceIsExactZero) {
    MetricParams p;
    for (const auto& s : {make_periodic({1, 2}), make_universal_sequence(Alphabet(2)), make_window_padded({2, 1}, 3, 2)}) {
        DistanceBound d = distance(s, s, p);
        EXPECT_EQ(d.value, 0.0);
        EXPECT_EQ(d.error, 0.0);
    }
}

TEST(Distance, SingleMismatchAtPositionOne) {
    MetricParams p(0.5);
    BiSequence s = make_window_padded({}, 0, 1);
    BiSequence t = make_window_padded({2}, 1, 1);
    DistanceBound d = distance(s, t, p);
    EXPECT_EQ(d.value, 0.5);
    EXPECT_EQ(d.error, 0.0);
    EXPECT_EQ(oracle::direct_distance(s, t, 0.5), 0.5);
}

TEST(Distance, EverywhereDifferentSumsToTwo) {
    MetricParams p(0.5);
    BiSequence s = make_periodic({1}), t = make_periodic({2});
    DistanceBound d = distance(s, t, p);
    EXPECT_NEAR(d.value, 2.0, 1e-15);
    EXPECT_EQ(d.error, 0.0);
    EXPECT_NEAR(oracle::direct_distance(s, t, 0.5), 2.0, 1e-12);
}

TEST(Distance, PeriodicTailsClosedFormMatchesDirectSum) {
    MetricParams p(0.5);
    BiSequence s = make_periodic({1, 2, 2}, 1);
    BiSequence t(EventuallyPeriodic{{2, 1}, {1, 1, 2}, -2, {1, 2}});
    DistanceBound d = distance(s, t, p);
    EXPECT_EQ(d.error, 0.0);
    EXPECT_NEAR(d.value, oracle::direct_distance(s, t, 0.5), 1e-14);
}

TEST(Distance, TruncatedPairsCarryCertifiedError) {
    for (double r : {0.5, 0.3, 0.8}) {
        MetricParams p(r);
        BiSequence u = make_universal_sequence(Alphabet(2));
        BiSequence v = shift(u, 37);
        DistanceBound d = distance(u, v, p, 1e-9);
        EXPECT_GT(d.error, 0.0);
        EXPECT_LE(d.error, 1e-9);
        EXPECT_NEAR(d.value, oracle::direct_distance(u, v, r, 400), d.error + 1e-12);
    }
}

TEST(Distance, RejectsNonPositiveTolerance) {
    EXPECT_THROW(distance(make_periodic({1}), make_periodic({2}), MetricParams{}, 0.0), std::invalid_argument);
}

TEST(MetricProperty, SymmetryAndTriangleOnRandomTriples) {
    std::mt19937_64 rng(2024);
    MetricParams p(0.5);
    auto draw = [&]() -> BiSequence {
        FiniteWord w(1 + rng() % 12);
        for (auto& s : w) s = 1 + static_cast<int>(rng() % 3);
        switch (rng() % 4) {
            case 0: return make_periodic(w, static_cast<Position>(rng() % 7));
            case 1: return make_window_padded(w, static_cast<Position>(rng() % 11) - 5, 1 + static_cast<int>(rng() % 3));
            case 2: return shift(make_universal_sequence(Alphabet(3)), static_cast<Position>(rng() % 50));
            default: return patch(make_periodic({1, 2}), w, static_cast<Position>(rng() % 9) - 4);
        }
    };
    for (int i = 0; i < 1000; ++i) {
        BiSequence a = draw(), b = draw(), c = draw();
        DistanceBound ab = distance(a, b, p), ba = distance(b, a, p), bc = distance(b, c, p), ac = distance(a, c, p);
        ASSERT_NEAR(ab.value, ba.value, ab.error + ba.error + 1e-15);
        ASSERT_LE(ac.lower(), ab.upper() + bc.upper() + 1e-15);
        ASSERT_GE(ab.upper(), 0.0);
    }
}

TEST(CylinderDiameter, WholeSpaceAndSmallWindow) {
    MetricParams p(0.5);
    EXPECT_EQ(p.cylinder_diameter(CylinderSet{}), 2.0);
    CylinderSet c = two_sided_cylinder({1, 2}, {1});  // window [-1, 1]
    EXPECT_EQ(p.cylinder_diameter(c), 0.75);
    EXPECT_NEAR(brute_free_weight(c, 0.5), 0.75, 1e-15);

    // Sampled sup over random member pairs approaches 0.75 from below.
    std::mt19937_64 rng(7);
    double sup = 0.0;
    for (int i = 0; i < 200; ++i) {
        BiSequence x = random_member(c, 2, rng), y = random_member(c, 2, rng);
        DistanceBound d = distance(x, y, p);
        ASSERT_LE(d.lower(), 0.75);
        sup = std::max(sup, d.value);
    }
    EXPECT_GT(sup, 0.6);
}

TEST(CylinderDiameter, OneSidedAndDetachedWindows) {
    MetricParams p(0.5);
    for (const auto& c : {future_cylinder({1, 2, 2}), past_cylinder({2, 1}), CylinderSet{{1, 2}, 3}, CylinderSet{{2}, -4}})
        EXPECT_NEAR(p.cylinder_diameter(c), brute_free_weight(c, 0.5), 1e-15) << c.label();
}

TEST(CylinderDiameter, ShrinksMonotonically) {
    MetricParams p(0.5);
    double prev = p.space_diameter();
    for (int d = 1; d <= 30; ++d) {
        double cur = p.cylinder_diameter(CylinderSet{FiniteWord(static_cast<std::size_t>(2 * d + 1), 1), -d});
        EXPECT_LT(cur, prev);
        prev = cur;
    }
    EXPECT_LT(prev, 1e-8);
}

TEST(SetDistance, Examples) {
    MetricParams p(0.5);
    CylinderSet f1 = future_cylinder({1}), f2 = future_cylinder({2});
    EXPECT_EQ(p.set_distance(f1, f1), 0.0);
    EXPECT_EQ(p.set_distance(f1, f2), 0.5);
    EXPECT_EQ(p.set_distance(past_cylinder({2}), f1), 0.0);

    // No member pair beats the bound; a pair sharing every free symbol attains it.
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        BiSequence x = random_member(f1, 2, rng, 12), y = random_member(f2, 2, rng, 12);
        ASSERT_GE(distance(x, y, p).value, 0.5);
        BiSequence twin = patch(x, {2}, 1);
        ASSERT_EQ(oracle::direct_distance(x, twin, 0.5), 0.5);
    }
}

TEST(DiameterCondition, HalfBaseDepthTen) {
    DiameterReport rep = check_diameter_condition(Alphabet(2), MetricParams(0.5), 10);
    ASSERT_EQ(rep.rows.size(), 10u);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.rows.back().diameter, std::ldexp(1.0, -10) + std::ldexp(1.0, -11));
    EXPECT_NEAR(rep.rows.back().diameter, 1.465e-3, 1e-6);
    EXPECT_EQ(rep.rows.front().diameter, 0.75);
}

TEST(DiameterCondition, QuarterBaseAgainstBruteSum) {
    DiameterReport rep = check_diameter_condition(Alphabet(2), MetricParams(0.25), 5);
    EXPECT_TRUE(rep.ok());
    CylinderSet c{FiniteWord(11, 1), -5};
    EXPECT_NEAR(rep.rows.back().diameter, brute_free_weight(c, 0.25), 1e-18);
    EXPECT_NEAR(rep.rows.back().diameter, 4.0690104166666663e-4, 1e-18);
    EXPECT_THROW(check_diameter_condition(Alphabet(2), MetricParams(0.25), 0), std::invalid_argument);
}

TEST(Separation, FirstSymbolFlip) {
    SeparationReport s1 = check_separation(Alphabet(2), MetricParams(0.5), 1);
    EXPECT_EQ(s1.epsilon0, 0.5);
    EXPECT_EQ(s1.witness.first, future_cylinder({1}));
    EXPECT_EQ(s1.witness.second, future_cylinder({2}));

    EXPECT_EQ(check_separation(Alphabet(2), MetricParams(0.5), 3).epsilon0, 0.5);
    EXPECT_EQ(check_separation(Alphabet(3), MetricParams(0.25), 2).epsilon0, 0.25);
    EXPECT_THROW(check_separation(Alphabet(2), MetricParams(0.5), 0), std::invalid_argument);
}

TEST(Separation, ExhaustivePairOracle) {
    for (int m : {2, 3}) {
        for (double r : {0.5, 0.25}) {
            MetricParams p(r);
            for (int n = 1; n <= 3; ++n) {
                auto words = all_words(Alphabet(m), n);
                double min_first_split = 1e9;
                for (const auto& i : words) {
                    double best_partner = 0.0;
                    for (const auto& j : words) {
                        double d = p.set_distance(future_cylinder(i), future_cylinder(j));
                        best_partner = std::max(best_partner, d);
                        if (i[0] != j[0]) min_first_split = std::min(min_first_split, d);
                    }
                    ASSERT_GE(best_partner, r);  // every i has a partner at least r away
                }
                SeparationReport rep = check_separation(Alphabet(m), p, n);
                EXPECT_EQ(rep.epsilon0, min_first_split);
                EXPECT_EQ(rep.epsilon0, r);
                EXPECT_LE(rep.epsilon0, p.space_diameter());
            }
        }
    }
}
