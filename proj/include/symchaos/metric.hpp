// The weighted symbol-mismatch metric on bi-infinite sequences:
//
//   d(s, t) = sum_j [s_j != t_j] * w_j,   w_j = r^j (j >= 1),  w_j = r^(|j|+1) (j <= 0)
//
// Counting outward from the dot on either side, the i-th position carries
// weight r^i, so both tails are geometric with total r / (1 - r) each.
#pragma once

#include "symchaos/symbolic.hpp"

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symchaos {

/// A distance value and a certified bound on its truncation error:
/// the true distance lies in [value - error, value + error].
struct DistanceBound {
    double value = 0.0;
    double error = 0.0;

    double upper() const noexcept { return value + error; }
    double lower() const noexcept { return value - error; }
};

class MetricParams {
public:
    explicit MetricParams(double r = 0.5) : r_(r) {
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("metric base r must lie in (0, 1), got " + std::to_string(r));
    }

    double r() const noexcept { return r_; }

    /// r^i, the weight of the i-th position counted outward from the dot.
    double outward_weight(Position i) const { return std::pow(r_, static_cast<double>(i)); }

    double weight(Position j) const { return j >= 1 ? outward_weight(j) : outward_weight(-j + 1); }

    /// Sum of r^i over i > n on one side.
    double side_tail(Position n) const { return std::pow(r_, static_cast<double>(n + 1)) / (1.0 - r_); }

    /// Sum of w_j over j > n (n >= 0).
    double future_tail(Position n) const { return side_tail(n); }

    /// Sum of w_j over j < -k (k >= -1).
    double past_tail(Position k) const { return side_tail(k + 1); }

    double space_diameter() const { return 2.0 * side_tail(0); }

    /// Diameter of a window [-k, n]; also a bound on the distance between
    /// any two points agreeing on that window.
    double window_diameter(Position k, Position n) const { return future_tail(n) + past_tail(k); }

    /// Smallest count K with side_tail(K) <= tol.
    Position truncation_depth(double tol) const {
        Position k = 0;
        while (side_tail(k) > tol) ++k;
        return k;
    }

    /// Outward count beyond which every weight is below any meaningful double.
    Position exact_cap() const { return truncation_depth(1e-300); }

    double cylinder_diameter(const CylinderSet& c) const;
    double set_distance(const CylinderSet& a, const CylinderSet& b) const;

    bool operator==(const MetricParams&) const = default;

private:
    double r_;
};

// ---------------------------------------------------------------------------
// Structural agreement of tails.

namespace detail {

/// Position on a side at outward count i (i >= 1).
inline Position side_position(Side side, Position i) { return side == Side::Right ? i : 1 - i; }

/// Outward count from which a condition "j >= x" (right) or "j <= x" (left) holds.
inline Position outward_from(Side side, Position x) {
    Position i = side == Side::Right ? x : 1 - x;
    return std::max<Position>(i, 1);
}

/// Outward count i0 such that s and t agree at every outward count >= i0 on
/// `side`, when that follows from their descriptions alone.
inline std::optional<Position> agree_from(const BiSequence& s, const BiSequence& t, Side side, int budget = 16) {
    if (s == t) return Position{1};
    if (budget <= 0) return std::nullopt;

    auto push = [](std::optional<Position> a, Position b) -> std::optional<Position> {
        if (!a) return a;
        return std::max(*a, b);
    };

    for (int pass = 0; pass < 2; ++pass) {
        const BiSequence& x = pass == 0 ? s : t;
        const BiSequence& y = pass == 0 ? t : s;
        if (const auto* g = x.as<Patched>()) {
            Position end = g->window_start + static_cast<Position>(g->window.size()) - 1;
            Position beyond = side == Side::Right ? outward_from(side, end + 1) : outward_from(side, g->window_start - 1);
            if (auto a = push(agree_from(*g->base, y, side, budget - 1), beyond)) return a;
        }
        if (const auto* g = x.as<Spliced>()) {
            const BiSequence& part = side == Side::Right ? *g->future : *g->past;
            Position from = side == Side::Right ? outward_from(side, g->cut + 1) : outward_from(side, g->cut);
            if (auto a = push(agree_from(part, y, side, budget - 1), from)) return a;
        }
        if (const auto* g = x.as<Scrambled>()) {
            if (side == Side::Left) {
                if (auto a = push(agree_from(*g->base, y, side, budget - 1), outward_from(side, -g->offset))) return a;
            } else if (const auto* h = y.as<Scrambled>(); h && h->m == g->m && h->offset == g->offset) {
                if (auto a = agree_from(*g->base, *h->base, side, budget - 1)) return a;
            }
        }
    }
    return std::nullopt;
}

inline Position gcd_pos(Position a, Position b) { return std::gcd(a, b); }

/// One side of the distance sum, outward counts i >= 1.
inline DistanceBound side_distance(const BiSequence& s, const BiSequence& t, Side side, const MetricParams& p,
                                   double tol) {
    const Position cap = p.exact_cap();
    auto mismatch = [&](Position i) { return s.symbol_at(side_position(side, i)) != t.symbol_at(side_position(side, i)); };
    auto finite_sum = [&](Position last) {
        double sum = 0.0;
        for (Position i = last; i >= 1; --i)
            if (mismatch(i)) sum += p.outward_weight(i);
        return sum;
    };

    if (auto from = agree_from(s, t, side); from && *from - 1 <= cap) return {finite_sum(*from - 1), 0.0};

    auto rs = s.ray_period(side);
    auto rt = t.ray_period(side);
    if (rs && rt) {
        Position start = std::max(outward_from(side, rs->anchor), outward_from(side, rt->anchor));
        Position period = rs->period / gcd_pos(rs->period, rt->period) * rt->period;
        if (start + period <= cap && period <= 1'000'000) {
            double cycle = 0.0;
            for (Position i = start + period - 1; i >= start; --i)
                if (mismatch(i)) cycle += p.outward_weight(i);
            return {finite_sum(start - 1) + cycle / (1.0 - p.outward_weight(period)), 0.0};
        }
    }

    Position depth = p.truncation_depth(tol);
    return {finite_sum(depth), p.side_tail(depth)};
}

}  // namespace detail

/// d(s, t) with a certified error of at most tol. Pairs whose tails are
/// eventually periodic or structurally shared are summed in closed form
/// (error 0); anything else is truncated.
inline DistanceBound distance(const BiSequence& s, const BiSequence& t, const MetricParams& p, double tol = 1e-12) {
    if (!(tol > 0.0)) throw std::invalid_argument("distance tolerance must be positive");
    DistanceBound right = detail::side_distance(s, t, Side::Right, p, tol / 2);
    DistanceBound left = detail::side_distance(s, t, Side::Left, p, tol / 2);
    return {right.value + left.value, right.error + left.error};
}

/// Sum of the weights of all free positions; the supremum is attained since
/// every free position can be made to differ.
inline double MetricParams::cylinder_diameter(const CylinderSet& c) const {
    if (c.whole_space()) return space_diameter();
    const Position a = c.start, b = c.end();
    double future = 0.0, past = 0.0;
    if (b >= 1) {
        future = future_tail(b);
        for (Position j = 1; j < a; ++j) future += weight(j);
    } else {
        future = future_tail(0);
    }
    if (a <= 0) {
        past = past_tail(-a);
        for (Position j = b + 1; j <= 0; ++j) past += weight(j);
    } else {
        past = past_tail(-1);
    }
    return future + past;
}

/// inf over member pairs: only positions fixed in both windows can be forced
/// to differ.
inline double MetricParams::set_distance(const CylinderSet& x, const CylinderSet& y) const {
    if (x.whole_space() || y.whole_space()) return 0.0;
    double sum = 0.0;
    for (Position j = std::max(x.start, y.start); j <= std::min(x.end(), y.end()); ++j)
        if (x.at(j) != y.at(j)) sum += weight(j);
    return sum;
}

// ---------------------------------------------------------------------------
// Diameter and separation checkers, generic over the metric realization.

template <class M>
concept CylinderMetric = requires(const M& m, const CylinderSet& c) {
    { m.cylinder_diameter(c) } -> std::convertible_to<double>;
    { m.set_distance(c, c) } -> std::convertible_to<double>;
};

struct DiameterRow {
    Position k = 0;
    Position n = 0;
    double diameter = 0.0;
    double prediction = 0.0;
};

struct DiameterReport {
    std::vector<DiameterRow> rows;
    bool strictly_decreasing = true;
    bool matches_prediction = true;
    bool has_prediction = false;

    bool ok() const { return strictly_decreasing && matches_prediction; }
};

/// Diameters of the windows [-d, d], d = 1..max_depth, of a representative
/// cylinder (all symbols 1). Metrics exposing window_diameter(k, n) also get
/// every row compared against that closed form, exactly.
template <CylinderMetric M>
DiameterReport check_diameter_condition(const Alphabet& a, const M& metric, int max_depth) {
    if (max_depth < 1) throw std::invalid_argument("check_diameter_condition needs max_depth >= 1");
    (void)a;
    DiameterReport report;
    report.has_prediction = requires { metric.window_diameter(Position{}, Position{}); };
    for (Position d = 1; d <= max_depth; ++d) {
        CylinderSet c = two_sided_cylinder(FiniteWord(static_cast<std::size_t>(d + 1), 1), FiniteWord(static_cast<std::size_t>(d), 1));
        DiameterRow row{d, d, static_cast<double>(metric.cylinder_diameter(c)), 0.0};
        if constexpr (requires { metric.window_diameter(Position{}, Position{}); }) {
            row.prediction = metric.window_diameter(d, d);
            if (row.prediction != row.diameter) report.matches_prediction = false;
        }
        if (!report.rows.empty() && !(row.diameter < report.rows.back().diameter)) report.strictly_decreasing = false;
        report.rows.push_back(row);
    }
    return report;
}

struct SeparationReport {
    double epsilon0 = 0.0;
    int degree = 1;
    /// A pair attaining epsilon0.
    std::pair<CylinderSet, CylinderSet> witness;
};

/// Separation of degree n: epsilon0 is the smallest set distance between two
/// depth-n future cylinders whose first symbols differ. Every F_{i1..in} then
/// has a partner (flip i1) at least epsilon0 away, and no choice of partners
/// split at position 1 can guarantee more.
template <CylinderMetric M>
SeparationReport check_separation(const Alphabet& a, const M& metric, int n) {
    if (n < 1) throw std::invalid_argument("check_separation needs n >= 1");
    SeparationReport report;
    report.degree = n;
    report.epsilon0 = std::numeric_limits<double>::infinity();
    const auto words = all_words(a, n);
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (std::size_t j = i + 1; j < words.size(); ++j) {
            if (words[i][0] == words[j][0]) continue;
            CylinderSet ci = future_cylinder(words[i]), cj = future_cylinder(words[j]);
            double d = metric.set_distance(ci, cj);
            if (d < report.epsilon0) {
                report.epsilon0 = d;
                report.witness = {ci, cj};
            }
        }
    }
    return report;
}

}  // namespace symchaos
