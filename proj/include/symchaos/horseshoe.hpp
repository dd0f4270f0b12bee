// Affine Smale horseshoe on the unit square.
//
// Horizontal strips H1 = [0,1] x [0, 1/mu] and H2 = [0,1] x [1 - 1/mu, 1] are
// mapped affinely onto the vertical strips V1 = [0, lambda] x [0,1] and
// V2 = [1 - lambda, 1] x [0,1], both branches orientation preserving:
//
//   branch 1: (x, y) -> (lambda x, mu y)
//   branch 2: (x, y) -> (lambda x + 1 - lambda, mu y - (mu - 1))
//
// Symbol 1 is branch 1, symbol 2 is branch 2. With digits a_j = symbol - 1 the
// point of Lambda with itinerary s is
//
//   y = sum_{j>=1} a_j (mu - 1) / mu^j,   x = (1 - lambda) sum_{i>=0} a_{-i} lambda^i.
#pragma once

#include "symchaos/metric.hpp"
#include "symchaos/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symchaos {

class HorseshoeParams {
public:
    explicit HorseshoeParams(double lambda = 1.0 / 3.0, double mu = 3.0) : lambda_(lambda), mu_(mu) {
        if (!(lambda > 0.0 && lambda < 0.5))
            throw std::invalid_argument("horseshoe contraction lambda must lie in (0, 1/2), got " + std::to_string(lambda));
        if (!(mu > 2.0)) throw std::invalid_argument("horseshoe expansion mu must exceed 2, got " + std::to_string(mu));
    }
    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }
    bool operator==(const HorseshoeParams&) const = default;

private:
    double lambda_;
    double mu_;
};

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const PlanePoint&) const = default;
};

inline double euclidean(const PlanePoint& a, const PlanePoint& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// A point left the strips: its orbit is not in Lambda.
class EscapeError : public std::runtime_error {
public:
    EscapeError(const std::string& what, Position step) : std::runtime_error(what), step_(step) {}
    Position step() const noexcept { return step_; }

private:
    Position step_;
};

namespace detail {

/// Boundary slack for strip membership; points of Lambda sit on strip edges.
inline constexpr double kStripSlack = 1e-12;

inline bool in_unit(double v) { return v >= -kStripSlack && v <= 1.0 + kStripSlack; }
inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace detail

/// Branch (1 or 2) of the horizontal strip holding q, 0 in the gap.
inline int horizontal_branch(const PlanePoint& q, const HorseshoeParams& hp) {
    if (!detail::in_unit(q.x) || !detail::in_unit(q.y)) return 0;
    if (q.y <= 1.0 / hp.mu() + detail::kStripSlack) return 1;
    if (q.y >= 1.0 - 1.0 / hp.mu() - detail::kStripSlack) return 2;
    return 0;
}

/// Branch (1 or 2) of the vertical strip holding q, 0 in the gap.
inline int vertical_branch(const PlanePoint& q, const HorseshoeParams& hp) {
    if (!detail::in_unit(q.x) || !detail::in_unit(q.y)) return 0;
    if (q.x <= hp.lambda() + detail::kStripSlack) return 1;
    if (q.x >= 1.0 - hp.lambda() - detail::kStripSlack) return 2;
    return 0;
}

inline PlanePoint horseshoe_map(const PlanePoint& q, const HorseshoeParams& hp) {
    const double l = hp.lambda(), m = hp.mu();
    switch (horizontal_branch(q, hp)) {
        case 1: return {detail::clamp_unit(l * q.x), detail::clamp_unit(m * q.y)};
        case 2: return {detail::clamp_unit(l * q.x + (1.0 - l)), detail::clamp_unit(m * q.y - (m - 1.0))};
        default:
            throw EscapeError("point (" + std::to_string(q.x) + ", " + std::to_string(q.y) + ") escapes: not in a horizontal strip", 0);
    }
}

inline PlanePoint horseshoe_inverse(const PlanePoint& q, const HorseshoeParams& hp) {
    const double l = hp.lambda(), m = hp.mu();
    switch (vertical_branch(q, hp)) {
        case 1: return {detail::clamp_unit(q.x / l), detail::clamp_unit(q.y / m)};
        case 2: return {detail::clamp_unit((q.x - (1.0 - l)) / l), detail::clamp_unit((q.y + m - 1.0) / m)};
        default:
            throw EscapeError("point (" + std::to_string(q.x) + ", " + std::to_string(q.y) + ") escapes: not in a vertical strip", 0);
    }
}

/// Symbols on positions [1 - back, fwd]: position j >= 1 records the strip of
/// F^{j-1}(q), position j <= 0 the strip of the inverse iterate F^{j-1}(q).
inline CylinderSet itinerary(const PlanePoint& q, const HorseshoeParams& hp, int back, int fwd) {
    if (back < 0 || fwd < 0) throw std::invalid_argument("itinerary lengths must be nonnegative");
    CylinderSet word{FiniteWord(static_cast<std::size_t>(back + fwd), 1), 1 - back};

    PlanePoint p = q;
    for (int j = 1; j <= fwd; ++j) {
        int b = horizontal_branch(p, hp);
        if (b == 0) throw EscapeError("forward iterate " + std::to_string(j - 1) + " escapes the strips", j - 1);
        word.fixed[static_cast<std::size_t>(back + j - 1)] = b;
        if (j < fwd) p = horseshoe_map(p, hp);
    }
    p = q;
    for (int i = 1; i <= back; ++i) {
        int b = vertical_branch(p, hp);
        if (b == 0) throw EscapeError("inverse iterate " + std::to_string(-i) + " escapes the strips", -i);
        word.fixed[static_cast<std::size_t>(back - i)] = b;
        p = horseshoe_inverse(p, hp);
    }
    return word;
}

struct ReconstructedPoint {
    PlanePoint point;
    /// Truncation error per axis and combined (Euclidean).
    double error_x = 0.0;
    double error_y = 0.0;
    double error_bound = 0.0;
};

/// The point of Lambda with itinerary s, summed to `depth` digits per axis.
/// The truncated sums are lower-left corners of the true location.
inline ReconstructedPoint point_from_itinerary(const BiSequence& s, const HorseshoeParams& hp, int depth) {
    if (depth < 1) throw std::invalid_argument("point_from_itinerary needs depth >= 1");
    const double l = hp.lambda(), m = hp.mu();
    double x = 0.0, y = 0.0;
    for (int i = depth - 1; i >= 0; --i) x += (s.symbol_at(-i) - 1) * std::pow(l, i);
    for (int j = depth; j >= 1; --j) y += (s.symbol_at(j) - 1) * std::pow(m, -j);
    ReconstructedPoint r;
    r.point = {(1.0 - l) * x, (m - 1.0) * y};
    r.error_x = std::pow(l, depth);
    r.error_y = std::pow(m, -depth);
    r.error_bound = std::hypot(r.error_x, r.error_y);
    return r;
}

struct ConjugacyReport {
    double defect = 0.0;
    double bound = 0.0;
    bool ok() const { return defect <= bound; }
};

/// |F(P(s)) - P(shift(s, 1))| against the propagated truncation bounds; F
/// contracts x errors by lambda and stretches y errors by mu.
inline ConjugacyReport conjugacy_check(const BiSequence& s, const HorseshoeParams& hp, int depth) {
    if (depth < 2) throw std::invalid_argument("conjugacy_check needs depth >= 2");
    ReconstructedPoint here = point_from_itinerary(s, hp, depth);
    ReconstructedPoint next = point_from_itinerary(shift(s, 1), hp, depth);
    PlanePoint image = horseshoe_map(here.point, hp);
    ConjugacyReport r;
    r.defect = euclidean(image, next.point);
    const double rounding = 64 * std::numeric_limits<double>::epsilon();
    r.bound = std::hypot(hp.lambda() * here.error_x + next.error_x, hp.mu() * here.error_y + next.error_y) + rounding;
    return r;
}

// ---------------------------------------------------------------------------
// Level rectangles: the geometric cylinders of window [-k, n].

inline constexpr int kRectangleCapLog2 = 20;

struct SymbolicRectangle {
    CylinderSet word;
    double x_lo = 0.0, x_hi = 0.0;
    double y_lo = 0.0, y_hi = 0.0;
    double width = 0.0, height = 0.0;
    /// Window [-past_depth, future_depth]; past_depth = -1 when no past symbol is fixed.
    Position past_depth = -1;
    Position future_depth = 0;
    double lambda = 1.0 / 3.0, mu = 3.0;

    /// sqrt(lambda^{2(k+1)} + mu^{-2n})
    double diagonal() const {
        return std::sqrt(std::pow(lambda, 2.0 * static_cast<double>(past_depth + 1)) +
                         std::pow(mu, -2.0 * static_cast<double>(future_depth)));
    }
};

/// Gap between two axis-aligned rectangles (0 when they overlap).
inline double rectangle_gap(const SymbolicRectangle& a, const SymbolicRectangle& b) {
    double dx = std::max({0.0, a.x_lo - b.x_hi, b.x_lo - a.x_hi});
    double dy = std::max({0.0, a.y_lo - b.y_hi, b.y_lo - a.y_hi});
    return std::hypot(dx, dy);
}

/// Rectangle of a window touching the dot (start <= 1, end >= 0). Past
/// symbols pin x, future symbols pin y; an empty side leaves [0, 1].
inline SymbolicRectangle rectangle_of(const CylinderSet& c, const HorseshoeParams& hp) {
    const double l = hp.lambda(), m = hp.mu();
    SymbolicRectangle r;
    r.word = c;
    r.width = 1.0;
    r.height = 1.0;
    r.lambda = l;
    r.mu = m;
    if (!c.whole_space()) {
        if (c.start > 1 || c.end() < 0)
            throw std::invalid_argument("horseshoe rectangles need a window adjacent to the dot");
        for (Symbol s : c.fixed)
            if (s < 1 || s > 2) throw std::invalid_argument("horseshoe symbols are 1 and 2");
        const Position k = -c.start;  // past depth; k = -1 means no past symbols
        const Position n = c.end();
        double x = 0.0, y = 0.0;
        for (Position i = 0; i <= k; ++i) x += (c.at(-i) - 1) * std::pow(l, static_cast<double>(i));
        for (Position j = 1; j <= n; ++j) y += (c.at(j) - 1) * std::pow(m, -static_cast<double>(j));
        r.x_lo = (1.0 - l) * x;
        r.y_lo = (m - 1.0) * y;
        r.past_depth = k;
        r.future_depth = std::max<Position>(n, 0);
        r.width = std::pow(l, static_cast<double>(k + 1));
        r.height = std::pow(m, -static_cast<double>(r.future_depth));
    }
    r.x_hi = r.x_lo + r.width;
    r.y_hi = r.y_lo + r.height;
    return r;
}

/// All 2^{k+1+n} rectangles of window [-k, n], in lexicographic word order.
inline std::vector<SymbolicRectangle> level_rectangles(const HorseshoeParams& hp, int k, int n) {
    if (k < 0 || n < 1) throw std::invalid_argument("level_rectangles needs k >= 0 and n >= 1");
    if (k + 1 + n > kRectangleCapLog2)
        throw std::length_error("level_rectangles: 2^" + std::to_string(k + 1 + n) + " rectangles exceed the cap of 2^" +
                                std::to_string(kRectangleCapLog2));
    std::vector<SymbolicRectangle> out;
    const Alphabet two(2);
    for (const auto& w : all_words(two, k + 1 + n)) out.push_back(rectangle_of({w, -k}, hp));
    return out;
}

/// Euclidean realization of the abstract metric on Lambda: cylinders become
/// rectangles, whose corners lie in Lambda, so diameters are diagonals and
/// set distances are rectangle gaps.
class HorseshoeMetric {
public:
    explicit HorseshoeMetric(HorseshoeParams hp = HorseshoeParams{}) : hp_(hp) {}

    double cylinder_diameter(const CylinderSet& c) const { return rectangle_of(c, hp_).diagonal(); }
    double set_distance(const CylinderSet& a, const CylinderSet& b) const {
        return rectangle_gap(rectangle_of(a, hp_), rectangle_of(b, hp_));
    }
    double window_diameter(Position k, Position n) const {
        return std::sqrt(std::pow(hp_.lambda(), 2.0 * static_cast<double>(k + 1)) +
                         std::pow(hp_.mu(), -2.0 * static_cast<double>(n)));
    }
    const HorseshoeParams& params() const noexcept { return hp_; }

private:
    HorseshoeParams hp_;
};

struct DiagonalRow {
    int k = 0;
    int n = 0;
    double max_diagonal = 0.0;
    double prediction = 0.0;
};

struct HyperbolicReport {
    std::vector<DiagonalRow> diagonals;
    bool diagonals_match = true;
    bool monotone = true;
    /// 1 - 2/mu: vertical gap between the two future symbols.
    double epsilon0_future = 0.0;
    /// 1 - 2 lambda: horizontal gap between the two past symbols.
    double epsilon0_past = 0.0;
    /// Certified separation constant for future cylinders (position 1).
    double epsilon0 = 0.0;
    /// Brute-force minimum gap over depth-1 rectangle pairs differing at position 1.
    double brute_force_gap = 0.0;
    /// Brute-force minimum gap over all distinct depth-1 rectangle pairs.
    double brute_force_min_any = 0.0;
    std::pair<SymbolicRectangle, SymbolicRectangle> witness;
    bool separation_holds = true;

    bool ok() const { return diagonals_match && monotone && separation_holds; }
};

/// Diameter condition: the max rectangle diagonal of window [-k, n] equals
/// sqrt(lambda^{2(k+1)} + mu^{-2n}) and decreases in k and n. Separation:
/// rectangles differing at position 1 are at least 1 - 2/mu apart, checked by
/// brute force on every level up to max_depth.
inline HyperbolicReport verify_hyperbolic_conditions(const HorseshoeParams& hp, int max_depth) {
    if (max_depth < 1) throw std::invalid_argument("verify_hyperbolic_conditions needs max_depth >= 1");
    if (2 * max_depth + 1 > kRectangleCapLog2)
        throw std::length_error("verify_hyperbolic_conditions: depth exceeds the rectangle cap");
    HorseshoeMetric metric(hp);
    HyperbolicReport rep;

    std::vector<std::vector<double>> table(static_cast<std::size_t>(max_depth + 1),
                                           std::vector<double>(static_cast<std::size_t>(max_depth + 1), 0.0));
    for (int k = 0; k <= max_depth; ++k) {
        for (int n = 1; n <= max_depth; ++n) {
            double best = 0.0;
            for (const auto& r : level_rectangles(hp, k, n)) best = std::max(best, r.diagonal());
            double pred = metric.window_diameter(k, n);
            rep.diagonals.push_back({k, n, best, pred});
            if (best != pred) rep.diagonals_match = false;
            table[k][n] = best;
            if (k > 0 && !(best < table[k - 1][n])) rep.monotone = false;
            if (n > 1 && !(best < table[k][n - 1])) rep.monotone = false;
        }
    }

    rep.epsilon0_future = 1.0 - 2.0 / hp.mu();
    rep.epsilon0_past = 1.0 - 2.0 * hp.lambda();
    rep.epsilon0 = rep.epsilon0_future;

    auto level1 = level_rectangles(hp, 0, 1);
    rep.brute_force_gap = std::numeric_limits<double>::infinity();
    rep.brute_force_min_any = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < level1.size(); ++i) {
        for (std::size_t j = i + 1; j < level1.size(); ++j) {
            double g = rectangle_gap(level1[i], level1[j]);
            rep.brute_force_min_any = std::min(rep.brute_force_min_any, g);
            if (level1[i].word.at(1) != level1[j].word.at(1) && g < rep.brute_force_gap) {
                rep.brute_force_gap = g;
                rep.witness = {level1[i], level1[j]};
            }
        }
    }
    if (std::abs(rep.brute_force_gap - rep.epsilon0) > 1e-12) rep.separation_holds = false;

    // Deeper levels: every pair split at position 1 keeps at least epsilon0.
    // Rectangles with symbol 1 at position 1 have y_hi <= 1/mu, those with 2 have y_lo >= 1 - 1/mu.
    for (int d = 1; d <= max_depth && 2 * d + 1 <= kRectangleCapLog2; ++d) {
        double top_of_low = 0.0, bottom_of_high = 1.0;
        for (const auto& r : level_rectangles(hp, d, d)) {
            if (r.word.at(1) == 1) top_of_low = std::max(top_of_low, r.y_hi);
            else bottom_of_high = std::min(bottom_of_high, r.y_lo);
        }
        if (bottom_of_high - top_of_low < rep.epsilon0 - 1e-12) rep.separation_holds = false;
    }
    return rep;
}

}  // namespace symchaos
