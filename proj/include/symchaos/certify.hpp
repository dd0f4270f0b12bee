// Finite-depth chaos witnesses on unstable sets: transitivity, dense periodic
// points, sensitivity, Poisson-stable recurrence, scrambled (Li-Yorke) pairs,
// and stable / unstable set convergence.
//
// Every certificate carries the sequences it talks about and a list of claims
// over them; verify() recomputes each claim from that data alone.
#pragma once

#include "symchaos/metric.hpp"
#include "symchaos/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symchaos {

/// The unstable set of `past`: all points sharing its symbols on positions <= 0.
struct UnstableSet {
    BiSequence past;

    BiSequence member(const BiSequence& future) const { return splice(past, future, 0); }

    /// The member whose future (positions 1, 2, ...) is the word enumeration.
    BiSequence universal_member(const Alphabet& a) const { return member(shift(make_universal_sequence(a), -1)); }

    bool contains(const BiSequence& s, Position depth = 64) const {
        for (Position j = 0; j > -depth; --j)
            if (s.symbol_at(j) != past.symbol_at(j)) return false;
        return true;
    }
};

/// True iff u is a universal member as built by UnstableSet::universal_member.
inline bool is_universal_member(const BiSequence& u) {
    const auto* g = u.as<Spliced>();
    if (!g || g->cut != 0) return false;
    const auto* f = g->future->as<Universal>();
    return f && f->offset == -1;
}

enum class CertificateKind {
    Transitivity,
    PeriodicDensity,
    Sensitivity,
    PoissonRecurrence,
    LiYorke,
    StableConvergence,
    UnstableConvergence,
};

inline const char* kind_name(CertificateKind k) {
    switch (k) {
        case CertificateKind::Transitivity: return "Transitivity";
        case CertificateKind::PeriodicDensity: return "PeriodicDensity";
        case CertificateKind::Sensitivity: return "Sensitivity";
        case CertificateKind::PoissonRecurrence: return "PoissonRecurrence";
        case CertificateKind::LiYorke: return "LiYorke";
        case CertificateKind::StableConvergence: return "StableConvergence";
        case CertificateKind::UnstableConvergence: return "UnstableConvergence";
    }
    return "?";
}

enum class Relation { Less, LessEqual, GreaterEqual };

inline const char* relation_name(Relation r) {
    switch (r) {
        case Relation::Less: return "less";
        case Relation::LessEqual: return "less_equal";
        case Relation::GreaterEqual: return "greater_equal";
    }
    return "?";
}

/// d(shift(lhs, lhs_shift), shift(rhs, rhs_shift)) <relation> threshold,
/// decided on the certified interval of `bound`.
struct DistanceClaim {
    std::string lhs;
    Position lhs_shift = 0;
    std::string rhs;
    Position rhs_shift = 0;
    Relation relation = Relation::Less;
    double threshold = 0.0;
    DistanceBound bound;

    bool holds(const DistanceBound& b) const {
        switch (relation) {
            case Relation::Less: return b.upper() < threshold;
            case Relation::LessEqual: return b.upper() <= threshold;
            case Relation::GreaterEqual: return b.lower() >= threshold;
        }
        return false;
    }
};

/// shift(sequence, shift) lies in target.
struct PositionClaim {
    std::string sequence;
    Position shift = 0;
    CylinderSet target;
};

struct Certificate {
    CertificateKind kind = CertificateKind::Transitivity;
    int alphabet = 2;
    MetricParams metric;
    double tolerance = 1e-12;
    bool degenerate = false;
    std::map<std::string, BiSequence> sequences;
    std::map<std::string, double> parameters;
    std::vector<DistanceClaim> distances;
    std::vector<PositionClaim> positions;

    const BiSequence& sequence(const std::string& name) const {
        auto it = sequences.find(name);
        if (it == sequences.end()) throw std::invalid_argument("certificate has no sequence named '" + name + "'");
        return it->second;
    }

    double parameter(const std::string& name) const {
        auto it = parameters.find(name);
        if (it == parameters.end()) throw std::invalid_argument("certificate has no parameter named '" + name + "'");
        return it->second;
    }
};

struct Verification {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

inline DistanceBound evaluate(const Certificate& c, const DistanceClaim& claim) {
    return distance(shift(c.sequence(claim.lhs), claim.lhs_shift), shift(c.sequence(claim.rhs), claim.rhs_shift),
                    c.metric, c.tolerance);
}

inline DistanceClaim make_claim(const Certificate& c, std::string lhs, Position lhs_shift, std::string rhs,
                                Position rhs_shift, Relation rel, double threshold) {
    DistanceClaim claim{std::move(lhs), lhs_shift, std::move(rhs), rhs_shift, rel, threshold, {}};
    claim.bound = evaluate(c, claim);
    return claim;
}

/// Recomputes every claim of c from its stored sequences.
inline Verification verify(const Certificate& c) {
    Verification v;
    auto fail = [&v](std::string msg) { v.failures.push_back(std::move(msg)); };
    try {
        for (std::size_t i = 0; i < c.distances.size(); ++i) {
            const auto& claim = c.distances[i];
            DistanceBound b = evaluate(c, claim);
            std::string tag = "distance claim " + std::to_string(i) + " (" + claim.lhs + ", " + claim.rhs + ")";
            if (std::abs(b.value - claim.bound.value) > c.tolerance || b.error > claim.bound.error + c.tolerance)
                fail(tag + ": recomputed distance does not reproduce the stored value");
            if (!claim.holds(b)) fail(tag + ": relation " + relation_name(claim.relation) + " fails");
        }
        for (std::size_t i = 0; i < c.positions.size(); ++i) {
            const auto& claim = c.positions[i];
            if (!claim.target.contains(shift(c.sequence(claim.sequence), claim.shift)))
                fail("position claim " + std::to_string(i) + ": shifted point misses the target cylinder");
        }

        switch (c.kind) {
            case CertificateKind::Transitivity:
                if (c.positions.empty()) fail("transitivity certificate has no position claim");
                break;
            case CertificateKind::PeriodicDensity:
                if (c.sequence("witness").kind() != SequenceKind::Periodic) fail("density witness is not periodic");
                if (c.distances.size() != 1) fail("density certificate needs exactly one distance claim");
                break;
            case CertificateKind::Sensitivity:
                if (c.distances.size() != 2) fail("sensitivity certificate needs two distance claims");
                if (c.sequence("s") == c.sequence("t")) fail("sensitivity pair is degenerate");
                break;
            case CertificateKind::PoissonRecurrence:
                if (c.distances.empty()) fail("recurrence certificate has no return times");
                if (!is_universal_member(c.sequence("u"))) fail("recurrence point is not a universal member");
                for (std::size_t i = 1; i < c.distances.size(); ++i) {
                    if (!(c.distances[i].lhs_shift > c.distances[i - 1].lhs_shift)) fail("return times not strictly increasing");
                    if (!(c.distances[i].threshold < c.distances[i - 1].threshold)) fail("thresholds not strictly decreasing");
                }
                break;
            case CertificateKind::LiYorke:
                if (c.sequence("s") == c.sequence("t")) fail("scrambled pair is degenerate");
                if (c.distances.size() != 2) fail("Li-Yorke certificate needs a proximal and a separated claim");
                break;
            case CertificateKind::StableConvergence:
            case CertificateKind::UnstableConvergence:
                for (std::size_t i = 1; i + 1 < c.distances.size(); ++i)
                    if (c.distances[i].bound.value > c.distances[i - 1].bound.value) fail("distances not monotone");
                break;
        }
    } catch (const std::exception& e) {
        fail(std::string("verification error: ") + e.what());
    }
    return v;
}

// ---------------------------------------------------------------------------

/// Smallest k >= 0 with diam([-k, k]) < bound, or nullopt when not even a
/// huge k gets there.
inline std::optional<Position> centered_depth(const MetricParams& p, double bound) {
    for (Position k = 0; k <= p.exact_cap(); ++k)
        if (p.window_diameter(k, k) < bound) return k;
    return std::nullopt;
}

/// The universal member u of U lands, after p shifts, in `target`.
inline Certificate transitivity_witness(const UnstableSet& U, const CylinderSet& target, const Alphabet& a,
                                        const MetricParams& p = MetricParams{}) {
    check_word(target.fixed, a);
    Certificate c;
    c.kind = CertificateKind::Transitivity;
    c.alphabet = a.size();
    c.metric = p;
    c.sequences.emplace("u", U.universal_member(a));
    // u's future is the enumeration E from position 1 on, so E's slot q for
    // the target word sits at position q + 1.
    Position steps = target.whole_space() ? 0 : enumeration::slot(a.size(), target.fixed) + 1 - target.start;
    c.positions.push_back({"u", steps, target});
    c.parameters["shift"] = static_cast<double>(steps);
    c.parameters["window_start"] = static_cast<double>(target.start);
    c.parameters["window_end"] = static_cast<double>(target.end());
    return c;
}

/// A periodic point within delta of s: the block s_{-k} .. s_k repeated, with
/// k minimal such that diam([-k, k]) < delta.
inline Certificate periodic_density_witness(const BiSequence& s, double delta, const MetricParams& p,
                                            double tol = 1e-12) {
    if (!(delta > 0.0)) throw std::invalid_argument("periodic density needs delta > 0");
    Certificate c;
    c.kind = CertificateKind::PeriodicDensity;
    c.alphabet = s.max_symbol() < 2 ? 2 : s.max_symbol();
    c.metric = p;
    c.tolerance = tol;
    c.degenerate = delta > p.space_diameter();

    c.sequences.emplace("s", s);
    Position k = 0;
    if (s.kind() == SequenceKind::Periodic) {
        c.sequences.emplace("witness", s);
    } else {
        auto depth = centered_depth(p, delta);
        if (!depth) throw std::invalid_argument("delta below representable precision");
        k = *depth;
        c.sequences.emplace("witness", make_periodic(s.block(-k, static_cast<std::size_t>(2 * k + 1)), k));
    }
    c.parameters["delta"] = delta;
    c.parameters["k"] = static_cast<double>(k);
    c.distances.push_back(make_claim(c, "s", 0, "witness", 0, Relation::Less, delta));
    return c;
}

/// t agrees with s on every position except k + 1, where the first symbol of
/// the separating block is flipped; d(s, t) < eps while after k shifts the
/// pair sits in separated future cylinders, d >= epsilon0 = r.
inline Certificate sensitivity_witness(const BiSequence& s, double eps, const MetricParams& p, const Alphabet& a,
                                       double tol = 1e-12) {
    if (!(eps > 0.0)) throw std::invalid_argument("sensitivity needs eps > 0");
    auto depth = centered_depth(p, eps);
    if (!depth) throw std::invalid_argument("eps below representable precision");
    const Position k = *depth;
    const double eps0 = check_separation(a, p, 1).epsilon0;

    Certificate c;
    c.kind = CertificateKind::Sensitivity;
    c.alphabet = a.size();
    c.metric = p;
    c.tolerance = tol;
    c.degenerate = eps >= p.space_diameter();
    c.sequences.emplace("s", s);
    c.sequences.emplace("t", patch(s, {a.flip(s.symbol_at(k + 1))}, k + 1));
    c.parameters["eps"] = eps;
    c.parameters["k"] = static_cast<double>(k);
    c.parameters["epsilon0"] = eps0;
    c.distances.push_back(make_claim(c, "s", 0, "t", 0, Relation::Less, eps));
    c.distances.push_back(make_claim(c, "s", k, "t", k, Relation::GreaterEqual, eps0));
    return c;
}

/// First n > previous such that shift(u, n) agrees with u on [-j, j]. The
/// scan cannot run past the enumeration slot of that window.
inline Position next_return(const BiSequence& u, int m, Position j, Position previous) {
    const FiniteWord pattern = u.block(-j, static_cast<std::size_t>(2 * j + 1));
    const auto len = static_cast<Position>(pattern.size());
    const Position bound = enumeration::slot(m, pattern) + 1 + j;

    // Knuth-Morris-Pratt over the text u(x), x = previous + 1 - j, ...
    std::vector<Position> fail(pattern.size(), 0);
    for (Position i = 1, q = 0; i < len; ++i) {
        while (q > 0 && pattern[i] != pattern[q]) q = fail[q - 1];
        if (pattern[i] == pattern[q]) ++q;
        fail[i] = q;
    }
    Position q = 0;
    for (Position x = previous + 1 - j;; ++x) {
        Symbol sym = u.symbol_at(x);
        while (q > 0 && sym != pattern[q]) q = fail[q - 1];
        if (sym == pattern[q]) ++q;
        if (q == len) {
            Position n = x - len + 1 + j;
            if (n > previous) return n;
            q = fail[q - 1];
        }
        if (x - len + 1 + j > bound) throw std::logic_error("enumeration slot bound exceeded in recurrence scan");
    }
}

/// Return times n_1 < n_2 < ... of the universal member u to the shrinking
/// neighbourhoods {x : x agrees with u on [-j, j]}, each certified with
/// d(shift(u, n_j), u) < diam([-j, j]).
inline Certificate poisson_recurrence_witness(const BiSequence& u, int depths, const MetricParams& p,
                                              double tol = 1e-12) {
    if (depths < 1) throw std::invalid_argument("recurrence witness needs depths >= 1");
    if (!is_universal_member(u)) throw std::invalid_argument("recurrence witness needs the universal member of an unstable set");
    const int m = u.as<Spliced>()->future->as<Universal>()->m;

    Certificate c;
    c.kind = CertificateKind::PoissonRecurrence;
    c.alphabet = m;
    c.metric = p;
    c.tolerance = tol;
    c.sequences.emplace("u", u);
    c.parameters["depths"] = depths;
    Position previous = 0;
    for (Position j = 1; j <= depths; ++j) {
        Position n = next_return(u, m, j, previous);
        c.distances.push_back(make_claim(c, "u", n, "u", 0, Relation::Less, p.window_diameter(j, j)));
        previous = n;
    }
    return c;
}

inline Certificate poisson_recurrence_witness(const UnstableSet& U, int depths, const MetricParams& p,
                                              const Alphabet& a, double tol = 1e-12) {
    return poisson_recurrence_witness(U.universal_member(a), depths, p, tol);
}

/// Certifies a candidate scrambled pair over shifts 0..horizon: the orbit
/// distance dips below `proximal_threshold` and rises to at least epsilon0.
inline Certificate scrambled_pair_certificate(const BiSequence& s, const BiSequence& t, Position horizon,
                                              double proximal_threshold, const MetricParams& p, const Alphabet& a,
                                              double tol = 1e-12) {
    if (horizon < 10) throw std::invalid_argument("Li-Yorke horizon must be >= 10");
    if (s == t) throw std::invalid_argument("Li-Yorke pair is degenerate (s == t)");
    const double eps0 = check_separation(a, p, 1).epsilon0;

    Certificate c;
    c.kind = CertificateKind::LiYorke;
    c.alphabet = a.size();
    c.metric = p;
    c.tolerance = tol;
    c.sequences.emplace("s", s);
    c.sequences.emplace("t", t);

    Position argmin = 0, argmax = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = -1.0;
    for (Position n = 0; n <= horizon; ++n) {
        double d = distance(shift(s, n), shift(t, n), p, tol).value;
        if (d < lo) lo = d, argmin = n;
        if (d > hi) hi = d, argmax = n;
    }
    c.parameters["horizon"] = static_cast<double>(horizon);
    c.parameters["min_distance"] = lo;
    c.parameters["max_distance"] = hi;
    c.parameters["argmin"] = static_cast<double>(argmin);
    c.parameters["argmax"] = static_cast<double>(argmax);
    c.parameters["epsilon0"] = eps0;
    c.distances.push_back(make_claim(c, "s", argmin, "t", argmin, Relation::Less, proximal_threshold));
    c.distances.push_back(make_claim(c, "s", argmax, "t", argmax, Relation::GreaterEqual, eps0));
    return c;
}

/// Two members of U whose futures agree on the dyadic blocks A_i and disagree
/// on the blocks D_i (|A_i| = |D_i| = 2^i). Centering the largest agreement
/// block reached within the horizon gives the proximal threshold.
inline Certificate li_yorke_pair(const UnstableSet& U, Position horizon, const MetricParams& p, const Alphabet& a,
                                 double tol = 1e-12) {
    if (horizon < 10) throw std::invalid_argument("Li-Yorke horizon must be >= 10");
    BiSequence s = U.universal_member(a);
    BiSequence t = scramble_future(s, a);
    int i = 1;
    auto centered_shift = [](int i) { return scramble::agreement_start(i) + (Position{1} << (i - 1)) - 1; };
    while (centered_shift(i + 1) <= horizon) ++i;
    Position half = Position{1} << (i - 1);
    // Below a few tolerances the truncation error swamps the claim; any
    // shorter centered window is still inside the agreement block.
    while (half > 1 && p.window_diameter(half - 1, half) <= 4.0 * tol) --half;
    Certificate c = scrambled_pair_certificate(s, t, horizon, p.window_diameter(half - 1, half), p, a, tol);
    c.parameters["proximal_window"] = static_cast<double>(half);
    c.parameters["agreement_block"] = static_cast<double>(Position{1} << i);
    return c;
}

namespace detail {

inline Certificate convergence(const BiSequence& s, const BiSequence& t, Position n_max, const MetricParams& p,
                               double tol, bool forward) {
    if (n_max < 1) throw std::invalid_argument("convergence check needs n_max >= 1");
    const Side shared = forward ? Side::Right : Side::Left;
    bool common = false;
    if (auto from = agree_from(s, t, shared)) {
        common = *from == 1;
    }
    if (!common) {
        // Fall back to comparing symbols down to the resolution of the metric.
        common = true;
        for (Position i = 1; i <= p.exact_cap() && common; ++i) {
            Position j = side_position(shared, i);
            common = s.symbol_at(j) == t.symbol_at(j);
        }
    }
    if (!common)
        throw std::invalid_argument(forward ? "sequences are not in a common stable set (differ at some position >= 1)"
                                            : "sequences are not in a common unstable set (differ at some position <= 0)");

    Certificate c;
    c.kind = forward ? CertificateKind::StableConvergence : CertificateKind::UnstableConvergence;
    c.alphabet = std::max({2, s.max_symbol(), t.max_symbol()});
    c.metric = p;
    c.tolerance = tol;
    c.sequences.emplace("s", s);
    c.sequences.emplace("t", t);
    c.parameters["n_max"] = static_cast<double>(n_max);
    for (Position n = 0; n <= n_max; ++n) {
        Position steps = forward ? n : -n;
        // After n shifts the possible mismatches sit at outward counts > n on one side.
        c.distances.push_back(make_claim(c, "s", steps, "t", steps, Relation::LessEqual, p.side_tail(n)));
    }
    const Position last = forward ? n_max : -n_max;
    c.distances.push_back(make_claim(c, "s", last, "t", last, Relation::Less, std::pow(p.r(), static_cast<double>(n_max - 1))));
    return c;
}

}  // namespace detail

/// s and t share the future (positions >= 1); forward shifts drive them together.
inline Certificate stable_set_convergence(const BiSequence& s, const BiSequence& t, Position n_max,
                                          const MetricParams& p, double tol = 1e-12) {
    return detail::convergence(s, t, n_max, p, tol, true);
}

/// s and t share the past (positions <= 0); backward shifts drive them together.
inline Certificate unstable_set_convergence(const BiSequence& s, const BiSequence& t, Position n_max,
                                            const MetricParams& p, double tol = 1e-12) {
    return detail::convergence(s, t, n_max, p, tol, false);
}

}  // namespace symchaos
