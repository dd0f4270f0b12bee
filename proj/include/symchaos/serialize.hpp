// JSON shapes for sequences, certificates and reports, plus the compact text
// descriptors accepted on the command line.
//
// Certificate (schema 1):
//   { "schema": 1, "kind": "Sensitivity", "alphabet": 2, "metric": {"r": 0.5},
//     "tolerance": 1e-12, "degenerate": false,
//     "parameters": {"eps": 0.25, ...},
//     "sequences": {"s": <sequence>, "t": <sequence>},
//     "distance_claims": [{"lhs": "s", "lhs_shift": 0, "rhs": "t", "rhs_shift": 0,
//                          "relation": "less", "threshold": 0.25,
//                          "value": 0.0625, "error": 0}],
//     "position_claims": [{"sequence": "u", "shift": 17, "window_start": -1,
//                          "symbols": [1, 2, 1]}] }
//
// Sequence: {"kind": "Periodic", "block": [1, 2], "phase": 0}, and likewise
// EventuallyPeriodic (left_block, center, center_start, right_block),
// Universal (m, offset), WindowPadded (window, window_start, pad),
// Spliced (past, future, cut), Patched (base, window, window_start),
// Scrambled (base, m, offset).
#pragma once

#include "symchaos/certify.hpp"
#include "symchaos/horseshoe.hpp"
#include "symchaos/metric.hpp"
#include "symchaos/symbolic.hpp"

#include "json.hpp"

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace symchaos {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Sequences

inline json to_json(const BiSequence& s) {
    return std::visit(
        [](const auto& g) -> json {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Periodic>) {
                return {{"kind", "Periodic"}, {"block", g.block}, {"phase", g.phase}};
            } else if constexpr (std::is_same_v<T, EventuallyPeriodic>) {
                return {{"kind", "EventuallyPeriodic"}, {"left_block", g.left_block}, {"center", g.center},
                        {"center_start", g.center_start}, {"right_block", g.right_block}};
            } else if constexpr (std::is_same_v<T, Universal>) {
                return {{"kind", "Universal"}, {"m", g.m}, {"offset", g.offset}};
            } else if constexpr (std::is_same_v<T, WindowPadded>) {
                return {{"kind", "WindowPadded"}, {"window", g.window}, {"window_start", g.window_start}, {"pad", g.pad}};
            } else if constexpr (std::is_same_v<T, Spliced>) {
                return {{"kind", "Spliced"}, {"past", to_json(*g.past)}, {"future", to_json(*g.future)}, {"cut", g.cut}};
            } else if constexpr (std::is_same_v<T, Patched>) {
                return {{"kind", "Patched"}, {"base", to_json(*g.base)}, {"window", g.window}, {"window_start", g.window_start}};
            } else {
                return {{"kind", "Scrambled"}, {"base", to_json(*g.base)}, {"m", g.m}, {"offset", g.offset}};
            }
        },
        s.generator());
}

inline BiSequence sequence_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "Periodic") return BiSequence(Periodic{j.at("block").get<FiniteWord>(), j.at("phase").get<Position>()});
        if (kind == "EventuallyPeriodic")
            return BiSequence(EventuallyPeriodic{j.at("left_block").get<FiniteWord>(), j.at("center").get<FiniteWord>(),
                                                 j.at("center_start").get<Position>(), j.at("right_block").get<FiniteWord>()});
        if (kind == "Universal") return BiSequence(Universal{j.at("m").get<int>(), j.at("offset").get<Position>()});
        if (kind == "WindowPadded")
            return BiSequence(WindowPadded{j.at("window").get<FiniteWord>(), j.at("window_start").get<Position>(),
                                           j.at("pad").get<Symbol>()});
        if (kind == "Spliced")
            return BiSequence(Spliced{share(sequence_from_json(j.at("past"))), share(sequence_from_json(j.at("future"))),
                                      j.at("cut").get<Position>()});
        if (kind == "Patched")
            return BiSequence(Patched{share(sequence_from_json(j.at("base"))), j.at("window").get<FiniteWord>(),
                                      j.at("window_start").get<Position>()});
        if (kind == "Scrambled")
            return BiSequence(Scrambled{share(sequence_from_json(j.at("base"))), j.at("m").get<int>(), j.at("offset").get<Position>()});
        throw FormatError("unknown sequence kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed sequence: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Certificates

inline CertificateKind certificate_kind_from(const std::string& name) {
    for (auto k : {CertificateKind::Transitivity, CertificateKind::PeriodicDensity, CertificateKind::Sensitivity,
                   CertificateKind::PoissonRecurrence, CertificateKind::LiYorke, CertificateKind::StableConvergence,
                   CertificateKind::UnstableConvergence})
        if (name == kind_name(k)) return k;
    throw FormatError("unknown certificate kind '" + name + "'");
}

inline Relation relation_from(const std::string& name) {
    for (auto r : {Relation::Less, Relation::LessEqual, Relation::GreaterEqual})
        if (name == relation_name(r)) return r;
    throw FormatError("unknown relation '" + name + "'");
}

inline json to_json(const Certificate& c) {
    json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = kind_name(c.kind);
    j["alphabet"] = c.alphabet;
    j["metric"] = {{"r", c.metric.r()}};
    j["tolerance"] = c.tolerance;
    j["degenerate"] = c.degenerate;
    j["parameters"] = json::object();
    for (const auto& [k, v] : c.parameters) j["parameters"][k] = v;
    j["sequences"] = json::object();
    for (const auto& [k, v] : c.sequences) j["sequences"][k] = to_json(v);
    j["distance_claims"] = json::array();
    for (const auto& d : c.distances)
        j["distance_claims"].push_back({{"lhs", d.lhs}, {"lhs_shift", d.lhs_shift}, {"rhs", d.rhs}, {"rhs_shift", d.rhs_shift},
                                        {"relation", relation_name(d.relation)}, {"threshold", d.threshold},
                                        {"value", d.bound.value}, {"error", d.bound.error}});
    j["position_claims"] = json::array();
    for (const auto& p : c.positions)
        j["position_claims"].push_back(
            {{"sequence", p.sequence}, {"shift", p.shift}, {"window_start", p.target.start}, {"symbols", p.target.fixed}});
    return j;
}

inline Certificate certificate_from_json(const json& j) {
    try {
        if (j.at("schema").get<int>() != kSchemaVersion)
            throw FormatError("unsupported certificate schema " + j.at("schema").dump());
        Certificate c;
        c.kind = certificate_kind_from(j.at("kind").get<std::string>());
        c.alphabet = j.at("alphabet").get<int>();
        c.metric = MetricParams(j.at("metric").at("r").get<double>());
        c.tolerance = j.at("tolerance").get<double>();
        c.degenerate = j.at("degenerate").get<bool>();
        for (const auto& [k, v] : j.at("parameters").items()) c.parameters[k] = v.get<double>();
        for (const auto& [k, v] : j.at("sequences").items()) c.sequences.emplace(k, sequence_from_json(v));
        for (const auto& d : j.at("distance_claims"))
            c.distances.push_back({d.at("lhs").get<std::string>(), d.at("lhs_shift").get<Position>(),
                                   d.at("rhs").get<std::string>(), d.at("rhs_shift").get<Position>(),
                                   relation_from(d.at("relation").get<std::string>()), d.at("threshold").get<double>(),
                                   {d.at("value").get<double>(), d.at("error").get<double>()}});
        for (const auto& p : j.at("position_claims"))
            c.positions.push_back({p.at("sequence").get<std::string>(), p.at("shift").get<Position>(),
                                   CylinderSet{p.at("symbols").get<FiniteWord>(), p.at("window_start").get<Position>()}});
        if (!(c.tolerance > 0.0)) throw FormatError("certificate tolerance must be positive");
        return c;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed certificate: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid certificate: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Reports

inline json cylinder_json(const CylinderSet& c) {
    return {{"window_start", c.start}, {"symbols", c.fixed}, {"label", c.label()}};
}

inline json to_json(const DiameterReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json jr = {{"k", row.k}, {"n", row.n}, {"diameter", row.diameter}};
        if (r.has_prediction) jr["prediction"] = row.prediction;
        rows.push_back(jr);
    }
    return {{"schema", kSchemaVersion}, {"check", "diameter_condition"}, {"rows", rows},
            {"strictly_decreasing", r.strictly_decreasing}, {"matches_prediction", r.matches_prediction}};
}

inline json to_json(const SeparationReport& r) {
    return {{"schema", kSchemaVersion}, {"check", "separation_condition"}, {"degree", r.degree}, {"epsilon0", r.epsilon0},
            {"witness", {cylinder_json(r.witness.first), cylinder_json(r.witness.second)}}};
}

inline json rectangle_json(const SymbolicRectangle& r) {
    return {{"word", r.word.label()}, {"x_lo", r.x_lo}, {"x_hi", r.x_hi}, {"y_lo", r.y_lo}, {"y_hi", r.y_hi}};
}

inline json to_json(const HyperbolicReport& r) {
    json rows = json::array();
    for (const auto& d : r.diagonals)
        rows.push_back({{"k", d.k}, {"n", d.n}, {"max_diagonal", d.max_diagonal}, {"prediction", d.prediction}});
    return {{"schema", kSchemaVersion},
            {"check", "horseshoe_hyperbolic_conditions"},
            {"diagonals", rows},
            {"diagonals_match", r.diagonals_match},
            {"monotone", r.monotone},
            {"epsilon0", r.epsilon0},
            {"epsilon0_future", r.epsilon0_future},
            {"epsilon0_past", r.epsilon0_past},
            {"brute_force_gap", r.brute_force_gap},
            {"brute_force_min_any", r.brute_force_min_any},
            {"witness", {rectangle_json(r.witness.first), rectangle_json(r.witness.second)}},
            {"separation_holds", r.separation_holds}};
}

// ---------------------------------------------------------------------------
// Text descriptors and number formatting

/// Shortest round-trip decimal form, independent of the locale.
inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t from = 0;
    while (true) {
        auto at = s.find(sep, from);
        out.push_back(s.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from));
        if (at == std::string_view::npos) break;
        from = at + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view s, const char* what) {
    T v{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw FormatError(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
    return v;
}

/// "1,2,2" or, for single-digit symbols, "122".
inline FiniteWord parse_word(std::string_view s) {
    FiniteWord w;
    if (s.find(',') != std::string_view::npos) {
        for (auto part : split(s, ',')) w.push_back(parse_number<Symbol>(part, "symbol"));
    } else {
        for (char ch : s) {
            if (ch < '0' || ch > '9') throw FormatError("bad symbol '" + std::string(1, ch) + "' in word");
            w.push_back(ch - '0');
        }
    }
    return w;
}

}  // namespace detail

/// Parses a sequence descriptor:
///   periodic:<word>[@phase]             e.g. periodic:12
///   padded:<word>@<start>/<pad>         e.g. padded:2@0/1
///   universal:<m>
///   eventual:<left>|<center>@<start>|<right>
///   or a JSON sequence object.
inline BiSequence parse_sequence(std::string_view text) {
    if (!text.empty() && text.front() == '{') {
        try {
            return sequence_from_json(json::parse(text));
        } catch (const json::exception& e) {
            throw FormatError(std::string("bad JSON sequence: ") + e.what());
        }
    }
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw FormatError("sequence descriptor needs '<kind>:<payload>'");
    std::string_view kind = text.substr(0, colon), body = text.substr(colon + 1);
    try {
        if (kind == "periodic") {
            auto parts = detail::split(body, '@');
            Position phase = parts.size() > 1 ? detail::parse_number<Position>(parts[1], "phase") : 0;
            if (parts.size() > 2) throw FormatError("periodic descriptor has extra '@'");
            return make_periodic(detail::parse_word(parts[0]), phase);
        }
        if (kind == "padded") {
            auto parts = detail::split(body, '@');
            if (parts.size() != 2) throw FormatError("padded descriptor is padded:<word>@<start>/<pad>");
            auto tail = detail::split(parts[1], '/');
            if (tail.size() != 2) throw FormatError("padded descriptor is padded:<word>@<start>/<pad>");
            return make_window_padded(detail::parse_word(parts[0]), detail::parse_number<Position>(tail[0], "start"),
                                      detail::parse_number<Symbol>(tail[1], "pad"));
        }
        if (kind == "universal") return make_universal_sequence(Alphabet(detail::parse_number<int>(body, "alphabet size")));
        if (kind == "eventual") {
            auto parts = detail::split(body, '|');
            if (parts.size() != 3) throw FormatError("eventual descriptor is eventual:<left>|<center>@<start>|<right>");
            auto center = detail::split(parts[1], '@');
            if (center.size() != 2) throw FormatError("eventual center needs '@<start>'");
            return BiSequence(EventuallyPeriodic{detail::parse_word(parts[0]), detail::parse_word(center[0]),
                                                 detail::parse_number<Position>(center[1], "center start"),
                                                 detail::parse_word(parts[2])});
        }
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    throw FormatError("unknown sequence kind '" + std::string(kind) + "'");
}

/// "point:x,y"
inline PlanePoint parse_point(std::string_view text) {
    constexpr std::string_view prefix = "point:";
    if (text.substr(0, prefix.size()) != prefix) throw FormatError("point descriptor is point:<x>,<y>");
    auto parts = detail::split(text.substr(prefix.size()), ',');
    if (parts.size() != 2) throw FormatError("point descriptor is point:<x>,<y>");
    PlanePoint p{detail::parse_number<double>(parts[0], "x"), detail::parse_number<double>(parts[1], "y")};
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) throw FormatError("point lies outside the unit square");
    return p;
}

}  // namespace symchaos
