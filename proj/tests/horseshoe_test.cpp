#include "symchaos/horseshoe.hpp"
#include "symchaos/metric.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace symchaos;

namespace {

const HorseshoeParams kDefault{};

FiniteWord random_word(std::mt19937_64& rng, std::size_t len) {
    FiniteWord w(len);
    for (auto& s : w) s = 1 + static_cast<int>(rng() % 2);
    return w;
}

/// Forward-iteration oracle: strip sequence of the first `steps` iterates.
FiniteWord forward_strips(PlanePoint q, const HorseshoeParams& hp, int steps) {
    FiniteWord out;
    for (int i = 0; i < steps; ++i) {
        out.push_back(q.y <= 1.0 / hp.mu() + 1e-12 ? 1 : 2);
        q = horseshoe_map(q, hp);
    }
    return out;
}

}  // namespace

TEST(HorseshoeParams, Invariants) {
    EXPECT_NO_THROW(HorseshoeParams(0.49, 2.01));
    EXPECT_THROW(HorseshoeParams(0.5, 3.0), std::invalid_argument);
    EXPECT_THROW(HorseshoeParams(0.0, 3.0), std::invalid_argument);
    EXPECT_THROW(HorseshoeParams(0.3, 2.0), std::invalid_argument);
}

TEST(HorseshoeMap, FixedPointsAndEscape) {
    EXPECT_EQ(horseshoe_map({0, 0}, kDefault), (PlanePoint{0, 0}));
    PlanePoint one = horseshoe_map({1, 1}, kDefault);
    EXPECT_NEAR(one.x, 1.0, 1e-15);
    EXPECT_NEAR(one.y, 1.0, 1e-15);
    EXPECT_THROW(horseshoe_map({0.5, 0.5}, kDefault), EscapeError);
    EXPECT_THROW(horseshoe_map({0.2, 1.5}, kDefault), EscapeError);

    PlanePoint a = horseshoe_map({0.7, 0.1}, kDefault);
    EXPECT_LE(a.x, 1.0 / 3.0);
    PlanePoint b = horseshoe_map({0.7, 0.9}, kDefault);
    EXPECT_GE(b.x, 2.0 / 3.0);
}

TEST(HorseshoeInverse, Examples) {
    EXPECT_EQ(horseshoe_inverse({0, 0}, kDefault), (PlanePoint{0, 0}));
    PlanePoint q = horseshoe_inverse({0.25 / 3.0, 0.2}, kDefault);
    EXPECT_NEAR(q.x, 0.25, 1e-15);
    EXPECT_NEAR(q.y, 0.2 / 3.0, 1e-15);
    EXPECT_THROW(horseshoe_inverse({0.5, 0.5}, kDefault), EscapeError);
}

TEST(HorseshoeInverse, RoundTripOnRandomStripPoints) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& hp : {kDefault, HorseshoeParams(0.2, 4.5)}) {
        for (int i = 0; i < 1000; ++i) {
            double y = unit(rng) / hp.mu();
            if (rng() % 2) y += 1.0 - 1.0 / hp.mu();
            PlanePoint q{unit(rng), y};
            PlanePoint back = horseshoe_inverse(horseshoe_map(q, hp), hp);
            ASSERT_NEAR(back.x, q.x, 1e-12);
            ASSERT_NEAR(back.y, q.y, 1e-12);
            PlanePoint v{unit(rng) * hp.lambda(), unit(rng)};
            PlanePoint fwd = horseshoe_map(horseshoe_inverse(v, hp), hp);
            ASSERT_NEAR(fwd.x, v.x, 1e-12);
            ASSERT_NEAR(fwd.y, v.y, 1e-12);
        }
    }
}

TEST(HorseshoeMap, GapPointsAlwaysEscape) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        double gap_y = 1.0 / 3.0 + 1e-9 + unit(rng) * (1.0 / 3.0 - 2e-9);
        EXPECT_THROW(horseshoe_map({unit(rng), gap_y}, kDefault), EscapeError);
        EXPECT_THROW(horseshoe_inverse({gap_y, unit(rng)}, kDefault), EscapeError);
        EXPECT_THROW(itinerary({unit(rng), gap_y}, kDefault, 0, 1), EscapeError);
    }
}

TEST(Itinerary, FixedPoints) {
    CylinderSet lo = itinerary({0, 0}, kDefault, 4, 5);
    EXPECT_EQ(lo.start, -3);
    EXPECT_EQ(lo.fixed, FiniteWord(9, 1));
    EXPECT_EQ(itinerary({1, 1}, kDefault, 4, 5).fixed, FiniteWord(9, 2));
    try {
        itinerary({0.1, 0.4 / 3.0}, kDefault, 0, 4);
        ADD_FAILURE() << "expected escape";
    } catch (const EscapeError& e) {
        EXPECT_EQ(e.step(), 1);
    }
}

TEST(PointFromItinerary, ConstantSequences) {
    ReconstructedPoint lo = point_from_itinerary(make_periodic({1}), kDefault, 30);
    EXPECT_EQ(lo.point, (PlanePoint{0, 0}));
    EXPECT_EQ(lo.error_x, std::pow(1.0 / 3.0, 30));
    ReconstructedPoint hi = point_from_itinerary(make_periodic({2}), kDefault, 30);
    EXPECT_NEAR(hi.point.x, 1.0, hi.error_x + 1e-15);
    EXPECT_NEAR(hi.point.y, 1.0, hi.error_y + 1e-15);
    EXPECT_LE(1.0 - hi.point.x, hi.error_x + 1e-15);
    EXPECT_THROW(point_from_itinerary(make_periodic({1}), kDefault, 0), std::invalid_argument);
}

TEST(PointFromItinerary, PeriodTwoMatchesGeometricSeriesAndForwardOracle) {
    BiSequence s = periodic_point({1, 2});  // positions 1, 2, ... read 1, 2, 1, 2, ...
    ReconstructedPoint r = point_from_itinerary(s, kDefault, 40);
    // y = sum over even j of 2/3^j = 2/9 / (1 - 1/9) = 1/4; x from past digits a_0 = 1, a_{-2} = 1, ...
    EXPECT_NEAR(r.point.y, 0.25, 1e-15);
    double px = (2.0 / 3.0) * (1.0 / (1.0 - 1.0 / 9.0));
    EXPECT_NEAR(r.point.x, px, 1e-15);
    EXPECT_EQ(forward_strips(r.point, kDefault, 20), s.block(1, 20));
}

TEST(Itinerary, RoundTripEveryWordOfLengthTwelve) {
    for (const auto& w : all_words(Alphabet(2), 12)) {
        BiSequence s = periodic_point(w);
        PlanePoint q = point_from_itinerary(s, kDefault, 40).point;
        CylinderSet it = itinerary(q, kDefault, 12, 12);
        ASSERT_EQ(it.start, -11);
        for (Position j = -11; j <= 12; ++j) ASSERT_EQ(it.at(j), s.symbol_at(j)) << word_to_string(w) << " at " << j;
    }
}

TEST(Conjugacy, ConstantAndPeriodic) {
    ConjugacyReport zero = conjugacy_check(make_periodic({1}), kDefault, 30);
    EXPECT_EQ(zero.defect, 0.0);
    ConjugacyReport two = conjugacy_check(periodic_point({1, 2}), kDefault, 20);
    EXPECT_TRUE(two.ok());
    EXPECT_LT(two.defect, 1e-8);
    EXPECT_THROW(conjugacy_check(make_periodic({1}), kDefault, 1), std::invalid_argument);
}

TEST(Conjugacy, RandomPeriodicItineraries) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        BiSequence s = periodic_point(random_word(rng, 1 + rng() % 16));
        ConjugacyReport rep = conjugacy_check(s, kDefault, 30);
        ASSERT_TRUE(rep.ok()) << rep.defect << " > " << rep.bound;
        ASSERT_LE(rep.defect, 1e-8);
    }
}

TEST(Rectangles, LevelZeroOne) {
    auto rects = level_rectangles(kDefault, 0, 1);
    ASSERT_EQ(rects.size(), 4u);
    for (const auto& r : rects) {
        EXPECT_NEAR(r.width, 1.0 / 3.0, 1e-15);
        EXPECT_NEAR(r.height, 1.0 / 3.0, 1e-15);
        // Corner oracle: the past symbol picks the vertical strip, the future one the horizontal strip.
        PlanePoint corners[] = {{r.x_lo, r.y_lo}, {r.x_hi, r.y_hi}, {r.x_lo, r.y_hi}, {r.x_hi, r.y_lo}};
        for (const auto& c : corners) {
            EXPECT_EQ(vertical_branch(c, kDefault), r.word.at(0));
            EXPECT_EQ(horizontal_branch(c, kDefault), r.word.at(1));
        }
    }
}

TEST(Rectangles, CountsScalesAndDisjointness) {
    for (const auto& hp : {kDefault, HorseshoeParams(0.4, 2.2)}) {
        auto r33 = level_rectangles(hp, 3, 3);
        ASSERT_EQ(r33.size(), 128u);
        for (const auto& r : r33) {
            EXPECT_NEAR(r.height, std::pow(hp.mu(), -3), 1e-15);
            EXPECT_NEAR(r.width, std::pow(hp.lambda(), 4), 1e-15);
            EXPECT_GE(r.x_lo, 0.0);
            EXPECT_LE(r.x_hi, 1.0 + 1e-15);
            EXPECT_GE(r.y_lo, 0.0);
            EXPECT_LE(r.y_hi, 1.0 + 1e-15);
            EXPECT_NEAR(std::hypot(r.x_hi - r.x_lo, r.y_hi - r.y_lo), r.diagonal(), 1e-15);
        }
        for (std::size_t i = 0; i < r33.size(); ++i)
            for (std::size_t j = i + 1; j < r33.size(); ++j) ASSERT_GT(rectangle_gap(r33[i], r33[j]), 0.0);

        EXPECT_NEAR(level_rectangles(hp, 4, 1)[0].width / level_rectangles(hp, 3, 1)[0].width, hp.lambda(), 1e-14);
    }
}

TEST(Rectangles, RefinementsNestInsideParents) {
    auto parents = level_rectangles(kDefault, 1, 2);
    auto children = level_rectangles(kDefault, 2, 3);
    for (const auto& c : children) {
        CylinderSet parent_word{FiniteWord(c.word.fixed.begin() + 1, c.word.fixed.end() - 1), -1};
        bool found = false;
        for (const auto& q : parents) {
            if (q.word != parent_word) continue;
            found = true;
            EXPECT_GE(c.x_lo, q.x_lo - 1e-15);
            EXPECT_LE(c.x_hi, q.x_hi + 1e-15);
            EXPECT_GE(c.y_lo, q.y_lo - 1e-15);
            EXPECT_LE(c.y_hi, q.y_hi + 1e-15);
        }
        ASSERT_TRUE(found);
    }
}

TEST(Rectangles, CapAndArguments) {
    EXPECT_THROW(level_rectangles(kDefault, 15, 15), std::length_error);
    EXPECT_NO_THROW(level_rectangles(kDefault, 9, 10));
    EXPECT_THROW(level_rectangles(kDefault, 0, 0), std::invalid_argument);
    EXPECT_THROW(rectangle_of(CylinderSet{{1}, 3}, kDefault), std::invalid_argument);
}

TEST(Rectangles, PointsLandInsideTheirRectangles) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 200; ++i) {
        BiSequence s = periodic_point(random_word(rng, 1 + rng() % 9));
        PlanePoint q = point_from_itinerary(s, kDefault, 40).point;
        SymbolicRectangle r = rectangle_of(CylinderSet{s.block(-2, 6), -2}, kDefault);
        ASSERT_GE(q.x, r.x_lo - 1e-15);
        ASSERT_LE(q.x, r.x_hi + 1e-15);
        ASSERT_GE(q.y, r.y_lo - 1e-15);
        ASSERT_LE(q.y, r.y_hi + 1e-15);
    }
}

TEST(Hyperbolic, DiagonalTableAndSeparation) {
    HyperbolicReport rep = verify_hyperbolic_conditions(kDefault, 8);
    EXPECT_TRUE(rep.ok());
    ASSERT_EQ(rep.diagonals.size(), 9u * 8u);
    for (const auto& row : rep.diagonals)
        EXPECT_EQ(row.max_diagonal, std::sqrt(std::pow(1.0 / 3.0, 2.0 * (row.k + 1)) + std::pow(3.0, -2.0 * row.n)));
    const auto& last = rep.diagonals.back();
    EXPECT_EQ(last.k, 8);
    EXPECT_EQ(last.n, 8);
    EXPECT_NEAR(last.max_diagonal, std::sqrt(std::pow(3.0, -18) + std::pow(3.0, -16)), 1e-18);
    EXPECT_NEAR(rep.epsilon0, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(rep.brute_force_gap, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(rep.brute_force_min_any, 1.0 / 3.0, 1e-12);
    EXPECT_NE(rep.witness.first.word.at(1), rep.witness.second.word.at(1));
}

TEST(Hyperbolic, SameCheckersAsTheAbstractSpace) {
    HorseshoeMetric metric(kDefault);
    DiameterReport d = check_diameter_condition(Alphabet(2), metric, 8);
    EXPECT_TRUE(d.ok());
    EXPECT_TRUE(d.has_prediction);
    SeparationReport s = check_separation(Alphabet(2), metric, 3);
    EXPECT_NEAR(s.epsilon0, 1.0 / 3.0, 1e-12);
}
