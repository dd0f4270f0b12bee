// Bi-infinite symbol sequences, cylinder sets and the shift map.
//
// Positions run over all integers; the "dot" (present time) sits between
// positions 0 and 1. Symbols are encoded 1..m. shift(s, k) moves the dot k
// steps to the right: shift(s, k).symbol_at(j) == s.symbol_at(j + k).
#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace symchaos {

using Symbol = int;
using Position = std::int64_t;
using FiniteWord = std::vector<Symbol>;

/// Floor modulus; the result is always in [0, n).
constexpr Position floor_mod(Position a, Position n) {
    Position r = a % n;
    return r < 0 ? r + n : r;
}

class Alphabet {
public:
    explicit Alphabet(int m) : m_(m) {
        if (m < 2) throw std::invalid_argument("alphabet needs at least 2 symbols, got " + std::to_string(m));
    }
    int size() const noexcept { return m_; }
    bool contains(Symbol s) const noexcept { return s >= 1 && s <= m_; }
    /// The separation flip: a symbol different from s.
    Symbol flip(Symbol s) const noexcept { return s % m_ + 1; }
    bool operator==(const Alphabet&) const = default;

private:
    int m_;
};

inline void check_word(const FiniteWord& w, const Alphabet& a) {
    for (Symbol s : w)
        if (!a.contains(s))
            throw std::invalid_argument("symbol " + std::to_string(s) + " outside alphabet 1.." + std::to_string(a.size()));
}

/// Digits run together ("1212") when every symbol is a single digit,
/// comma separated otherwise.
inline std::string word_to_string(const FiniteWord& w) {
    bool wide = false;
    for (Symbol s : w) wide = wide || s > 9;
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (wide && i) out += ',';
        out += std::to_string(w[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The length-lexicographic enumeration of all words, concatenated.
//
// Index 0 starts the length-1 section: 1, 2, ..., m, then all length-2 words
// in lexicographic order, and so on. Every finite word occupies its own slot.

namespace enumeration {

/// Start index of the section holding the words of length `len` (len >= 1).
inline Position section_start(int m, int len) {
    Position start = 0, count = m;
    for (int l = 1; l < len; ++l) {
        start += count * l;
        count *= m;
    }
    return start;
}

/// Symbol at enumeration index i >= 0.
inline Symbol symbol(int m, Position i) {
    Position count = m;
    int len = 1;
    while (i >= count * len) {
        i -= count * len;
        count *= m;
        ++len;
    }
    Position rank = i / len;
    int digit = static_cast<int>(i % len);
    for (int d = len - 1; d > digit; --d) rank /= m;
    return static_cast<Symbol>(rank % m) + 1;
}

/// Index at which w starts in its own slot of the enumeration.
inline Position slot(int m, const FiniteWord& w) {
    if (w.empty()) return 0;
    Position rank = 0;
    for (Symbol s : w) rank = rank * m + (s - 1);
    return section_start(m, static_cast<int>(w.size())) + rank * static_cast<Position>(w.size());
}

}  // namespace enumeration

// ---------------------------------------------------------------------------

class BiSequence;
using SequencePtr = std::shared_ptr<const BiSequence>;

/// s_j = block[(j + phase) mod |block|]
struct Periodic {
    FiniteWord block;
    Position phase = 0;
};

/// left_block repeats leftwards of center, right_block rightwards. The center
/// occupies [center_start, center_start + |center| - 1]; position
/// center_start - 1 carries left_block.back().
struct EventuallyPeriodic {
    FiniteWord left_block;
    FiniteWord center;
    Position center_start = 1;
    FiniteWord right_block;
};

/// s_j = E(j + offset) for the enumeration E above, and 1 where j + offset < 0.
struct Universal {
    int m = 2;
    Position offset = 0;
};

struct WindowPadded {
    FiniteWord window;
    Position window_start = 0;
    Symbol pad = 1;
};

/// Takes `past` at positions <= cut and `future` at positions > cut.
struct Spliced {
    SequencePtr past;
    SequencePtr future;
    Position cut = 0;
};

/// `base` overwritten by `window` on [window_start, window_start + |window| - 1].
struct Patched {
    SequencePtr base;
    FiniteWord window;
    Position window_start = 1;
};

/// `base` with every symbol flipped on the dyadic disagreement blocks of the
/// future. With q = j + offset, the positions q >= 1 are split into
/// consecutive blocks A_0 D_0 A_1 D_1 ... where |A_i| = |D_i| = 2^i; symbols
/// in the D blocks are flipped, the A blocks and all q <= 0 agree with base.
struct Scrambled {
    SequencePtr base;
    int m = 2;
    Position offset = 0;
};

namespace scramble {

/// True iff q falls into a disagreement block.
inline bool flipped(Position q) {
    if (q < 1) return false;
    // A_i starts at 2^{i+1} - 1, D_i at 3 * 2^i - 1.
    Position i = 0;
    while ((Position{1} << (i + 2)) - 1 <= q) ++i;
    return q >= 3 * (Position{1} << i) - 1;
}

/// First position of A_i.
inline Position agreement_start(int i) { return (Position{1} << (i + 1)) - 1; }

}  // namespace scramble

enum class SequenceKind { Periodic, EventuallyPeriodic, Universal, WindowPadded, Spliced, Patched, Scrambled };

inline const char* kind_name(SequenceKind k) {
    switch (k) {
        case SequenceKind::Periodic: return "Periodic";
        case SequenceKind::EventuallyPeriodic: return "EventuallyPeriodic";
        case SequenceKind::Universal: return "Universal";
        case SequenceKind::WindowPadded: return "WindowPadded";
        case SequenceKind::Spliced: return "Spliced";
        case SequenceKind::Patched: return "Patched";
        case SequenceKind::Scrambled: return "Scrambled";
    }
    return "?";
}

/// On a ray, the sequence repeats with `period` beyond `anchor`: for the
/// right ray s_{j+period} = s_j for all j >= anchor, for the left ray
/// s_{j-period} = s_j for all j <= anchor.
struct RayPeriod {
    Position anchor;
    Position period;
};

enum class Side { Left, Right };

/// An immutable, finitely described bi-infinite sequence.
class BiSequence {
public:
    using Generator = std::variant<Periodic, EventuallyPeriodic, Universal, WindowPadded, Spliced, Patched, Scrambled>;

    explicit BiSequence(Generator g) : gen_(std::move(g)) { validate(); }

    SequenceKind kind() const noexcept { return static_cast<SequenceKind>(gen_.index()); }
    const Generator& generator() const noexcept { return gen_; }

    template <class T>
    const T* as() const noexcept { return std::get_if<T>(&gen_); }

    Symbol symbol_at(Position j) const {
        return std::visit([j](const auto& g) { return eval(g, j); }, gen_);
    }

    /// Symbols on [from, from + count - 1].
    FiniteWord block(Position from, std::size_t count) const {
        FiniteWord out(count);
        for (std::size_t i = 0; i < count; ++i) out[i] = symbol_at(from + static_cast<Position>(i));
        return out;
    }

    /// Largest symbol the description can produce (an alphabet bound).
    int max_symbol() const {
        return std::visit([](const auto& g) { return max_sym(g); }, gen_);
    }

    std::optional<RayPeriod> ray_period(Side side) const {
        return std::visit([side](const auto& g) { return ray(g, side); }, gen_);
    }

    friend bool operator==(const BiSequence& a, const BiSequence& b) { return same(a, b); }

private:
    Generator gen_;

    static Symbol eval(const Periodic& g, Position j) {
        return g.block[floor_mod(j + g.phase, static_cast<Position>(g.block.size()))];
    }
    static Symbol eval(const EventuallyPeriodic& g, Position j) {
        Position end = g.center_start + static_cast<Position>(g.center.size());
        if (j < g.center_start) return g.left_block[floor_mod(j - g.center_start, static_cast<Position>(g.left_block.size()))];
        if (j >= end) return g.right_block[floor_mod(j - end, static_cast<Position>(g.right_block.size()))];
        return g.center[j - g.center_start];
    }
    static Symbol eval(const Universal& g, Position j) {
        Position i = j + g.offset;
        return i < 0 ? 1 : enumeration::symbol(g.m, i);
    }
    static Symbol eval(const WindowPadded& g, Position j) {
        Position i = j - g.window_start;
        return (i >= 0 && i < static_cast<Position>(g.window.size())) ? g.window[i] : g.pad;
    }
    static Symbol eval(const Spliced& g, Position j) {
        return j <= g.cut ? g.past->symbol_at(j) : g.future->symbol_at(j);
    }
    static Symbol eval(const Patched& g, Position j) {
        Position i = j - g.window_start;
        return (i >= 0 && i < static_cast<Position>(g.window.size())) ? g.window[i] : g.base->symbol_at(j);
    }
    static Symbol eval(const Scrambled& g, Position j) {
        Symbol s = g.base->symbol_at(j);
        return scramble::flipped(j + g.offset) ? s % g.m + 1 : s;
    }

    static int word_max(const FiniteWord& w) {
        int best = 1;
        for (Symbol s : w) best = std::max(best, s);
        return best;
    }
    static int max_sym(const Periodic& g) { return word_max(g.block); }
    static int max_sym(const EventuallyPeriodic& g) {
        return std::max({word_max(g.left_block), word_max(g.center), word_max(g.right_block)});
    }
    static int max_sym(const Universal& g) { return g.m; }
    static int max_sym(const WindowPadded& g) { return std::max(word_max(g.window), g.pad); }
    static int max_sym(const Spliced& g) { return std::max(g.past->max_symbol(), g.future->max_symbol()); }
    static int max_sym(const Patched& g) { return std::max(g.base->max_symbol(), word_max(g.window)); }
    static int max_sym(const Scrambled& g) { return std::max(g.base->max_symbol(), g.m); }

    static std::optional<RayPeriod> ray(const Periodic& g, Side side) {
        return RayPeriod{side == Side::Right ? 1 : 0, static_cast<Position>(g.block.size())};
    }
    static std::optional<RayPeriod> ray(const EventuallyPeriodic& g, Side side) {
        if (side == Side::Right)
            return RayPeriod{g.center_start + static_cast<Position>(g.center.size()), static_cast<Position>(g.right_block.size())};
        return RayPeriod{g.center_start - 1, static_cast<Position>(g.left_block.size())};
    }
    static std::optional<RayPeriod> ray(const Universal& g, Side side) {
        if (side == Side::Right) return std::nullopt;
        return RayPeriod{-g.offset - 1, 1};
    }
    static std::optional<RayPeriod> ray(const WindowPadded& g, Side side) {
        if (side == Side::Right) return RayPeriod{g.window_start + static_cast<Position>(g.window.size()), 1};
        return RayPeriod{g.window_start - 1, 1};
    }
    static std::optional<RayPeriod> ray(const Spliced& g, Side side) {
        if (side == Side::Right) {
            auto r = g.future->ray_period(side);
            if (r) r->anchor = std::max(r->anchor, g.cut + 1);
            return r;
        }
        auto r = g.past->ray_period(side);
        if (r) r->anchor = std::min(r->anchor, g.cut);
        return r;
    }
    static std::optional<RayPeriod> ray(const Patched& g, Side side) {
        auto r = g.base->ray_period(side);
        if (!r) return r;
        if (side == Side::Right)
            r->anchor = std::max(r->anchor, g.window_start + static_cast<Position>(g.window.size()));
        else
            r->anchor = std::min(r->anchor, g.window_start - 1);
        return r;
    }
    static std::optional<RayPeriod> ray(const Scrambled& g, Side side) {
        if (side == Side::Right) return std::nullopt;
        auto r = g.base->ray_period(side);
        if (r) r->anchor = std::min(r->anchor, -g.offset);
        return r;
    }

    static bool same(const BiSequence& a, const BiSequence& b);

    void validate() const;
};

namespace detail {

inline bool same_ptr(const SequencePtr& a, const SequencePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

inline bool equal_gen(const Periodic& a, const Periodic& b) {
    auto n = static_cast<Position>(a.block.size());
    return a.block == b.block && floor_mod(a.phase, n) == floor_mod(b.phase, n);
}
inline bool equal_gen(const EventuallyPeriodic& a, const EventuallyPeriodic& b) {
    return a.left_block == b.left_block && a.center == b.center && a.center_start == b.center_start &&
           a.right_block == b.right_block;
}
inline bool equal_gen(const Universal& a, const Universal& b) { return a.m == b.m && a.offset == b.offset; }
inline bool equal_gen(const WindowPadded& a, const WindowPadded& b) {
    return a.window == b.window && a.window_start == b.window_start && a.pad == b.pad;
}
inline bool equal_gen(const Spliced& a, const Spliced& b) {
    return a.cut == b.cut && same_ptr(a.past, b.past) && same_ptr(a.future, b.future);
}
inline bool equal_gen(const Patched& a, const Patched& b) {
    return a.window == b.window && a.window_start == b.window_start && same_ptr(a.base, b.base);
}
inline bool equal_gen(const Scrambled& a, const Scrambled& b) {
    return a.m == b.m && a.offset == b.offset && same_ptr(a.base, b.base);
}

}  // namespace detail

/// Structural equality of descriptions (not extensional equality of sequences).
inline bool BiSequence::same(const BiSequence& a, const BiSequence& b) {
    if (a.gen_.index() != b.gen_.index()) return false;
    return std::visit(
        [&b](const auto& ga) {
            using T = std::decay_t<decltype(ga)>;
            return detail::equal_gen(ga, std::get<T>(b.gen_));
        },
        a.gen_);
}

inline void BiSequence::validate() const {
    auto positive = [](const FiniteWord& w, const char* what) {
        for (Symbol s : w)
            if (s < 1) throw std::invalid_argument(std::string(what) + " contains a symbol below 1");
    };
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Periodic>) {
                if (g.block.empty()) throw std::invalid_argument("periodic block must be nonempty");
                positive(g.block, "periodic block");
            } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
                if (g.left_block.empty() || g.right_block.empty())
                    throw std::invalid_argument("eventually periodic tails must be nonempty");
                positive(g.left_block, "left block");
                positive(g.center, "center");
                positive(g.right_block, "right block");
            } else if constexpr (std::is_same_v<T, Universal>) {
                if (g.m < 2) throw std::invalid_argument("universal sequence needs m >= 2");
            } else if constexpr (std::is_same_v<T, WindowPadded>) {
                positive(g.window, "window");
                if (g.pad < 1) throw std::invalid_argument("pad symbol must be >= 1");
            } else if constexpr (std::is_same_v<T, Spliced>) {
                if (!g.past || !g.future) throw std::invalid_argument("spliced sequence needs both sides");
            } else if constexpr (std::is_same_v<T, Patched>) {
                if (!g.base) throw std::invalid_argument("patched sequence needs a base");
                positive(g.window, "patch window");
            } else if constexpr (std::is_same_v<T, Scrambled>) {
                if (!g.base) throw std::invalid_argument("scrambled sequence needs a base");
                if (g.m < 2) throw std::invalid_argument("scrambled sequence needs m >= 2");
            }
        },
        gen_);
}

inline SequencePtr share(BiSequence s) { return std::make_shared<const BiSequence>(std::move(s)); }

// ---------------------------------------------------------------------------
// Shift

/// result.symbol_at(j) == s.symbol_at(j + steps). Kind-preserving.
inline BiSequence shift(const BiSequence& s, Position steps) {
    if (steps == 0) return s;
    return std::visit(
        [steps](const auto& g) -> BiSequence {
            using T = std::decay_t<decltype(g)>;
            T h = g;
            if constexpr (std::is_same_v<T, Periodic>) {
                h.phase = floor_mod(g.phase + steps, static_cast<Position>(g.block.size()));
            } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
                h.center_start -= steps;
            } else if constexpr (std::is_same_v<T, Universal>) {
                h.offset += steps;
            } else if constexpr (std::is_same_v<T, WindowPadded>) {
                h.window_start -= steps;
            } else if constexpr (std::is_same_v<T, Spliced>) {
                h.past = share(shift(*g.past, steps));
                h.future = share(shift(*g.future, steps));
                h.cut -= steps;
            } else if constexpr (std::is_same_v<T, Patched>) {
                h.base = share(shift(*g.base, steps));
                h.window_start -= steps;
            } else if constexpr (std::is_same_v<T, Scrambled>) {
                h.base = share(shift(*g.base, steps));
                h.offset += steps;
            }
            return BiSequence(std::move(h));
        },
        s.generator());
}

// ---------------------------------------------------------------------------
// Constructors

inline BiSequence make_periodic(FiniteWord block, Position phase = 0) {
    return BiSequence(Periodic{std::move(block), phase});
}

inline BiSequence make_window_padded(FiniteWord window, Position window_start, Symbol pad) {
    return BiSequence(WindowPadded{std::move(window), window_start, pad});
}

inline BiSequence make_universal_sequence(const Alphabet& a) { return BiSequence(Universal{a.size(), 0}); }

/// Endless repetition of `block`, with the block on positions 1..|block|.
inline BiSequence periodic_point(const FiniteWord& block) {
    if (block.empty()) throw std::invalid_argument("periodic point needs a nonempty block");
    auto n = static_cast<Position>(block.size());
    return make_periodic(block, floor_mod(-1, n));
}

/// `past` at positions <= 0, `future` at positions >= 1.
inline BiSequence splice(const BiSequence& past, const BiSequence& future, Position cut = 0) {
    return BiSequence(Spliced{share(past), share(future), cut});
}

inline BiSequence patch(const BiSequence& base, FiniteWord window, Position window_start) {
    return BiSequence(Patched{share(base), std::move(window), window_start});
}

inline BiSequence scramble_future(const BiSequence& base, const Alphabet& a) {
    return BiSequence(Scrambled{share(base), a.size(), 0});
}

/// Returns p with shift(u, p) carrying w on positions [1, |w|], using the
/// slot of w in the enumeration.
inline Position locate_block(const BiSequence& u, const FiniteWord& w) {
    const auto* g = u.as<Universal>();
    if (!g) throw std::invalid_argument("locate_block needs a universal sequence");
    check_word(w, Alphabet(g->m));
    if (w.empty()) return 0;
    return enumeration::slot(g->m, w) - g->offset - 1;
}

// ---------------------------------------------------------------------------
// Cylinder sets

/// Points whose symbols on [start, start + |fixed| - 1] equal `fixed`.
/// An empty word is the whole space.
struct CylinderSet {
    FiniteWord fixed;
    Position start = 1;

    bool whole_space() const noexcept { return fixed.empty(); }
    Position length() const noexcept { return static_cast<Position>(fixed.size()); }
    Position end() const noexcept { return start + length() - 1; }
    bool is_future() const noexcept { return !fixed.empty() && start == 1; }
    bool is_past() const noexcept { return !fixed.empty() && end() == 0; }
    bool is_two_sided() const noexcept { return !fixed.empty() && start <= 0 && end() >= 1; }

    bool fixes(Position j) const noexcept { return !fixed.empty() && j >= start && j <= end(); }
    Symbol at(Position j) const { return fixed.at(static_cast<std::size_t>(j - start)); }

    bool contains(const BiSequence& s) const {
        for (Position j = start; j <= end(); ++j)
            if (s.symbol_at(j) != at(j)) return false;
        return true;
    }

    /// Window symbols with a '.' between positions 0 and 1 ("12.212") when the
    /// window touches the dot, "@start:symbols" otherwise.
    std::string label() const {
        if (fixed.empty()) return ".";
        if (start > 1 || end() < 0) return "@" + std::to_string(start) + ":" + word_to_string(fixed);
        FiniteWord past(fixed.begin(), fixed.begin() + (1 - start));
        FiniteWord fut(fixed.begin() + (1 - start), fixed.end());
        return word_to_string(past) + "." + word_to_string(fut);
    }

    bool operator==(const CylinderSet&) const = default;
};

inline CylinderSet future_cylinder(FiniteWord w) { return {std::move(w), 1}; }

inline CylinderSet past_cylinder(FiniteWord w) {
    auto n = static_cast<Position>(w.size());
    return {std::move(w), 1 - n};
}

/// Window [-k, n]: `past` fills positions -k..0 (k = |past| - 1), `future`
/// fills 1..n.
inline CylinderSet two_sided_cylinder(const FiniteWord& past, const FiniteWord& future) {
    FiniteWord w = past;
    w.insert(w.end(), future.begin(), future.end());
    return {std::move(w), 1 - static_cast<Position>(past.size())};
}

/// True iff every point of `sub` lies in `super`: super's window is covered by
/// sub's window with matching symbols.
inline bool entails(const CylinderSet& sub, const CylinderSet& super) {
    if (super.whole_space()) return true;
    if (sub.whole_space()) return false;
    if (super.start < sub.start || super.end() > sub.end()) return false;
    for (Position j = super.start; j <= super.end(); ++j)
        if (sub.at(j) != super.at(j)) return false;
    return true;
}

/// Every word over `a` of the given length, in lexicographic order.
inline std::vector<FiniteWord> all_words(const Alphabet& a, int length) {
    std::vector<FiniteWord> out;
    FiniteWord w(static_cast<std::size_t>(length), 1);
    while (true) {
        out.push_back(w);
        int i = length - 1;
        while (i >= 0 && w[i] == a.size()) w[i--] = 1;
        if (i < 0) break;
        ++w[i];
    }
    return out;
}

/// Checks F ⊇ F_{i1} ⊇ F_{i1 i2} ⊇ ... and F ⊇ F_{i0} ⊇ F_{i-1 i0} ⊇ ... for
/// every word of length < depth and each one-symbol extension.
inline bool nesting_check(const Alphabet& a, int depth) {
    if (depth < 1) throw std::invalid_argument("nesting_check needs depth >= 1");
    if (!entails(future_cylinder({}), CylinderSet{})) return false;
    for (int len = 0; len < depth; ++len) {
        for (const auto& w : all_words(a, len)) {
            for (Symbol s = 1; s <= a.size(); ++s) {
                FiniteWord fut = w;
                fut.push_back(s);
                FiniteWord past{s};
                past.insert(past.end(), w.begin(), w.end());
                if (!entails(future_cylinder(fut), future_cylinder(w))) return false;
                if (!entails(past_cylinder(past), past_cylinder(w))) return false;
            }
        }
    }
    return true;
}

/// Finite-depth check of shift^n(F_{i1..in}) = F (future cylinder) and
/// shift^{-n}(F_{i-n+1..i0}) = F (past cylinder), n = |c|: every word w with
/// |w| <= depth - n is carried, next to the dot, by the image of some member
/// of c, and that member indeed lies in c.
inline bool similarity_identity_check(const CylinderSet& c, const Alphabet& a, int depth) {
    check_word(c.fixed, a);
    if (c.whole_space()) {
        for (int len = 0; len <= depth; ++len)
            for (const auto& w : all_words(a, len))
                if (!future_cylinder(w).contains(make_window_padded(w, 1, 1))) return false;
        return true;
    }
    if (!c.is_future() && !c.is_past())
        throw std::invalid_argument("similarity check needs a future (start = 1) or past (end = 0) cylinder");
    const Position n = c.length();
    if (depth < n) throw std::invalid_argument("similarity check needs depth >= cylinder length");

    for (int len = 0; len <= depth - n; ++len) {
        for (const auto& w : all_words(a, len)) {
            if (c.is_future()) {
                FiniteWord window = c.fixed;
                window.insert(window.end(), w.begin(), w.end());
                BiSequence member = make_window_padded(window, 1, 1);
                if (!c.contains(member)) return false;
                if (!future_cylinder(w).contains(shift(member, n))) return false;
            } else {
                FiniteWord window = w;
                window.insert(window.end(), c.fixed.begin(), c.fixed.end());
                BiSequence member = make_window_padded(window, 1 - n - len, 1);
                if (!c.contains(member)) return false;
                if (!past_cylinder(w).contains(shift(member, -n))) return false;
            }
        }
    }
    return true;
}

}  // namespace symchaos
