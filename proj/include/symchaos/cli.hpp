// Command implementations behind the symchaos executable: run configuration,
// the certification suite, horseshoe exports, orbits and certificate
// re-verification. Each command returns a process exit status:
// 0 success, 1 a check failed, 2 invalid input.
#pragma once

#include "symchaos/certify.hpp"
#include "symchaos/horseshoe.hpp"
#include "symchaos/metric.hpp"
#include "symchaos/serialize.hpp"
#include "symchaos/symbolic.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace symchaos {

namespace fs = std::filesystem;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int m = 2;
    double r = 0.5;
    double lambda = 1.0 / 3.0;
    double mu = 3.0;
    int k = 3;
    int n = 3;
    int horizon = 1000;
    /// Poisson recurrence depth.
    int depths = 10;
    /// Digits used when reconstructing horseshoe points.
    int depth = 30;
    int max_depth = 12;
    int hyperbolic_depth = 8;
    int unstable_sets = 20;
    int targets = 10;
    int conjugacy_samples = 100;
    int convergence_steps = 20;
    double tol = 1e-12;
    std::string out = "out";
    std::set<std::string> formats = {"json", "csv"};
    std::uint64_t seed = 1;

    bool wants(const std::string& fmt) const { return formats.count(fmt) > 0; }

    /// Re-checks every module-level invariant; throws ConfigError listing all problems.
    void validate() const {
        std::vector<std::string> problems;
        if (m < 2) problems.push_back("m must be >= 2");
        if (!(r > 0.0 && r < 1.0)) problems.push_back("r must lie in (0, 1)");
        if (!(lambda > 0.0 && lambda < 0.5)) problems.push_back("lambda must lie in (0, 1/2)");
        if (!(mu > 2.0)) problems.push_back("mu must exceed 2");
        if (k < 0) problems.push_back("k must be >= 0");
        if (n < 1) problems.push_back("n must be >= 1");
        if (horizon < 10) problems.push_back("horizon must be >= 10");
        if (depths < 1) problems.push_back("depths must be >= 1");
        if (depth < 2) problems.push_back("depth must be >= 2");
        if (max_depth < 1) problems.push_back("max_depth must be >= 1");
        if (hyperbolic_depth < 1 || 2 * hyperbolic_depth + 1 > kRectangleCapLog2)
            problems.push_back("hyperbolic_depth must lie in [1, " + std::to_string((kRectangleCapLog2 - 1) / 2) + "]");
        if (unstable_sets < 1) problems.push_back("unstable_sets must be >= 1");
        if (targets < 0) problems.push_back("targets must be >= 0");
        if (conjugacy_samples < 0) problems.push_back("conjugacy_samples must be >= 0");
        if (convergence_steps < 1) problems.push_back("convergence_steps must be >= 1");
        if (!(tol > 0.0)) problems.push_back("tol must be positive");
        for (const auto& f : formats)
            if (f != "json" && f != "csv" && f != "svg") problems.push_back("unknown format '" + f + "'");
        if (out.empty()) problems.push_back("output directory must be set");
        if (!problems.empty()) {
            std::string msg = "invalid configuration:";
            for (const auto& p : problems) msg += "\n  " + p;
            throw ConfigError(msg);
        }
    }

    /// Sets one key from its textual value.
    void set(const std::string& key, const std::string& value) {
        auto num = [&](auto& field) {
            using T = std::decay_t<decltype(field)>;
            try {
                field = detail::parse_number<T>(value, key.c_str());
            } catch (const FormatError& e) {
                throw ConfigError(e.what());
            }
        };
        if (key == "m") num(m);
        else if (key == "r") num(r);
        else if (key == "lambda") num(lambda);
        else if (key == "mu") num(mu);
        else if (key == "k") num(k);
        else if (key == "n") num(n);
        else if (key == "horizon") num(horizon);
        else if (key == "depths") num(depths);
        else if (key == "depth") num(depth);
        else if (key == "max_depth") num(max_depth);
        else if (key == "hyperbolic_depth") num(hyperbolic_depth);
        else if (key == "unstable_sets") num(unstable_sets);
        else if (key == "targets") num(targets);
        else if (key == "conjugacy_samples") num(conjugacy_samples);
        else if (key == "convergence_steps") num(convergence_steps);
        else if (key == "tol") num(tol);
        else if (key == "seed") num(seed);
        else if (key == "out") out = value;
        else if (key == "format" || key == "formats") {
            formats.clear();
            for (auto part : detail::split(value, ','))
                if (!part.empty()) formats.insert(std::string(part));
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
};

/// Flat "key = value" lines; '#' starts a comment.
inline RunConfig load_config(std::istream& in, RunConfig base = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

inline RunConfig load_config_file(const fs::path& path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return load_config(in, base);
}

namespace detail {

inline void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline FiniteWord random_word(std::mt19937_64& rng, int m, std::size_t len) {
    FiniteWord w(len);
    for (auto& s : w) s = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(m)) + 1;
    return w;
}

/// Past tails alternate between padded windows and periodic blocks.
inline UnstableSet random_unstable_set(std::mt19937_64& rng, int m, int index) {
    if (index % 2 == 0) {
        FiniteWord window = random_word(rng, m, 8);
        Symbol pad = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(m)) + 1;
        return UnstableSet{make_window_padded(window, -7, pad)};
    }
    std::size_t len = 1 + rng() % 5;
    return UnstableSet{make_periodic(random_word(rng, m, len), static_cast<Position>(rng() % len))};
}

/// Window [-k, n] with k in [0, 2], n in [1, 3].
inline CylinderSet random_target(std::mt19937_64& rng, int m) {
    int k = static_cast<int>(rng() % 3);
    int n = 1 + static_cast<int>(rng() % 3);
    return CylinderSet{random_word(rng, m, static_cast<std::size_t>(k + 1 + n)), -k};
}

struct NamedCertificate {
    std::string name;
    Certificate certificate;
};

inline std::vector<NamedCertificate> certify_unstable_set(const UnstableSet& U, const std::vector<CylinderSet>& targets,
                                                          const RunConfig& cfg, int index) {
    const Alphabet a(cfg.m);
    const MetricParams p(cfg.r);
    std::vector<NamedCertificate> out;
    std::ostringstream prefix;
    prefix << "u" << std::setw(3) << std::setfill('0') << index << "_";
    for (std::size_t t = 0; t < targets.size(); ++t)
        out.push_back({prefix.str() + "transitivity_" + std::to_string(t), transitivity_witness(U, targets[t], a, p)});
    const BiSequence u = U.universal_member(a);
    const double deltas[] = {0.1, 1e-2, 1e-3};
    for (int i = 0; i < 3; ++i)
        out.push_back({prefix.str() + "density_" + std::to_string(i), periodic_density_witness(u, deltas[i], p, cfg.tol)});
    const double epss[] = {0.25, 1e-2};
    for (int i = 0; i < 2; ++i)
        out.push_back({prefix.str() + "sensitivity_" + std::to_string(i), sensitivity_witness(u, epss[i], p, a, cfg.tol)});
    return out;
}

inline std::string csv_line(std::initializer_list<std::string> cells) {
    std::string out;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out += ',';
        out += c;
        first = false;
    }
    return out + "\n";
}

}  // namespace detail

/// Runs the full certification suite and writes one JSON file per
/// certificate under <out>/certificates, plus the diameter and separation
/// reports. Certificates are always JSON: --verify reads them back.
/// Exit 0 iff everything verifies.
inline int cmd_certify(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    }
    const Alphabet a(cfg.m);
    const MetricParams p(cfg.r);
    const fs::path out(cfg.out);
    std::vector<std::string> failures;
    bool separated = true;

    DiameterReport diam = check_diameter_condition(a, p, cfg.max_depth);
    detail::write_json(out / "diameter_condition.json", to_json(diam));
    if (!diam.ok()) failures.push_back("diameter_condition");

    json separation = json::array();
    for (int deg = 1; deg <= 3; ++deg) {
        SeparationReport sep = check_separation(a, p, deg);
        separation.push_back(to_json(sep));
        if (!(sep.epsilon0 > 0.0)) {
            separated = false;
            failures.push_back("separation_degree_" + std::to_string(deg));
        }
    }
    detail::write_json(out / "separation_condition.json", separation);

    // Inputs are drawn sequentially so the suite is reproducible whatever the
    // scheduling of the workers below.
    std::mt19937_64 rng(cfg.seed);
    std::vector<UnstableSet> sets;
    std::vector<std::vector<CylinderSet>> targets;
    for (int i = 0; i < cfg.unstable_sets; ++i) {
        sets.push_back(detail::random_unstable_set(rng, cfg.m, i));
        std::vector<CylinderSet> ts;
        for (int t = 0; t < cfg.targets; ++t) ts.push_back(detail::random_target(rng, cfg.m));
        targets.push_back(std::move(ts));
    }

    std::vector<std::future<std::vector<detail::NamedCertificate>>> jobs;
    for (int i = 0; i < cfg.unstable_sets; ++i)
        jobs.push_back(std::async(std::launch::async, [&, i] { return detail::certify_unstable_set(sets[i], targets[i], cfg, i); }));

    std::vector<detail::NamedCertificate> all;
    for (auto& job : jobs)
        for (auto& nc : job.get()) all.push_back(std::move(nc));

    all.push_back({"poisson_recurrence", poisson_recurrence_witness(sets.front(), cfg.depths, p, a, cfg.tol)});
    all.push_back({"li_yorke", li_yorke_pair(sets.front(), cfg.horizon, p, a, cfg.tol)});
    {
        BiSequence base = make_window_padded({}, 0, 1);
        BiSequence stable_partner = make_window_padded({2}, 0, 1);
        BiSequence unstable_partner = make_window_padded({2}, 1, 1);
        all.push_back({"stable_convergence", stable_set_convergence(base, stable_partner, cfg.convergence_steps, p, cfg.tol)});
        all.push_back({"unstable_convergence", unstable_set_convergence(base, unstable_partner, cfg.convergence_steps, p, cfg.tol)});
    }

    std::map<std::string, std::pair<int, int>> tally;  // kind -> (count, verified)
    std::string summary_csv = "file,kind,verified\n";
    for (const auto& nc : all) {
        const auto file = out / "certificates" / (nc.name + ".json");
        detail::write_json(file, to_json(nc.certificate));
        const bool ok = verify(nc.certificate).ok();
        auto& t = tally[kind_name(nc.certificate.kind)];
        ++t.first;
        if (ok) ++t.second;
        else failures.push_back(nc.name);
        summary_csv += detail::csv_line({"certificates/" + nc.name + ".json", kind_name(nc.certificate.kind), ok ? "1" : "0"});
    }
    if (cfg.wants("csv")) detail::write_text(out / "summary.csv", summary_csv);

    log << std::left << std::setw(22) << "check" << std::setw(8) << "count" << "verified\n";
    log << std::setw(22) << "DiameterCondition" << std::setw(8) << 1 << (diam.ok() ? 1 : 0) << "\n";
    log << std::setw(22) << "SeparationCondition" << std::setw(8) << 3 << (separated ? 3 : 0) << "\n";
    for (const auto& [kind, t] : tally) log << std::setw(22) << kind << std::setw(8) << t.first << t.second << "\n";
    for (const auto& f : failures) err << "FAILED: " << f << "\n";
    return failures.empty() ? 0 : 1;
}

inline std::string render_svg(const std::vector<SymbolicRectangle>& rects) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                    "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" height=\"1000\">\n"
                    "  <path d=\"M0 0H1000V1000H0Z\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (const auto& r : rects) {
        const char* color = r.word.at(1) == 1 ? "#1f77b4" : "#d62728";
        s += "  <rect x=\"" + format_number(1000.0 * r.x_lo) + "\" y=\"" + format_number(1000.0 * (1.0 - r.y_hi)) +
             "\" width=\"" + format_number(1000.0 * r.width) + "\" height=\"" + format_number(1000.0 * r.height) +
             "\" fill=\"" + color + "\"><title>" + r.word.label() + "</title></rect>\n";
    }
    return s + "</svg>\n";
}

/// Rectangles of window [-k, n] (CSV, optional SVG), the hyperbolic
/// conditions report and a conjugacy report over random periodic itineraries.
inline int cmd_horseshoe(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
    try {
        cfg.validate();
        if (cfg.k + 1 + cfg.n > kRectangleCapLog2)
            throw ConfigError("rectangle cap exceeded: 2^" + std::to_string(cfg.k + 1 + cfg.n) + " > 2^" +
                              std::to_string(kRectangleCapLog2));
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    }
    const HorseshoeParams hp(cfg.lambda, cfg.mu);
    const fs::path out(cfg.out);
    std::vector<std::string> failures;

    const auto rects = level_rectangles(hp, cfg.k, cfg.n);
    std::string csv = "word,x_lo,x_hi,y_lo,y_hi\n";
    for (const auto& r : rects)
        csv += detail::csv_line({r.word.label(), format_number(r.x_lo), format_number(r.x_hi), format_number(r.y_lo),
                                 format_number(r.y_hi)});
    if (cfg.wants("csv")) detail::write_text(out / "rectangles.csv", csv);
    if (cfg.wants("svg")) detail::write_text(out / "rectangles.svg", render_svg(rects));

    HyperbolicReport hyp = verify_hyperbolic_conditions(hp, cfg.hyperbolic_depth);
    if (cfg.wants("json")) detail::write_json(out / "hyperbolic_conditions.json", to_json(hyp));
    if (!hyp.ok()) failures.push_back("hyperbolic_conditions");

    std::mt19937_64 rng(cfg.seed);
    json samples = json::array();
    double worst = 0.0;
    bool conj_ok = true;
    for (int i = 0; i < cfg.conjugacy_samples; ++i) {
        FiniteWord block = detail::random_word(rng, 2, 1 + rng() % 12);
        ConjugacyReport c = conjugacy_check(periodic_point(block), hp, cfg.depth);
        worst = std::max(worst, c.defect);
        conj_ok = conj_ok && c.ok();
        samples.push_back({{"block", word_to_string(block)}, {"defect", c.defect}, {"bound", c.bound}, {"ok", c.ok()}});
    }
    if (cfg.wants("json"))
        detail::write_json(out / "conjugacy.json", {{"schema", kSchemaVersion}, {"check", "conjugacy"}, {"depth", cfg.depth},
                                                    {"max_defect", worst}, {"all_within_bound", conj_ok}, {"samples", samples}});
    if (!conj_ok) failures.push_back("conjugacy");

    log << "rectangles: " << rects.size() << "\n"
        << "hyperbolic conditions: " << (hyp.ok() ? "ok" : "FAILED") << " (epsilon0 = " << format_number(hyp.epsilon0) << ")\n"
        << "conjugacy: " << (conj_ok ? "ok" : "FAILED") << " (max defect " << format_number(worst) << ")\n";
    for (const auto& f : failures) err << "FAILED: " << f << "\n";
    return failures.empty() ? 0 : 1;
}

/// Symbolic orbit (n, distance_to_start) or horseshoe orbit (n, x, y, symbol)
/// written to <out>/orbit.csv.
inline int cmd_orbit(const RunConfig& cfg, const std::string& descriptor, int steps, std::ostream& log, std::ostream& err) {
    try {
        cfg.validate();
        if (steps < 0) throw ConfigError("steps must be >= 0");
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    }
    const fs::path file = fs::path(cfg.out) / "orbit.csv";

    if (descriptor.rfind("point:", 0) == 0) {
        PlanePoint q;
        try {
            q = parse_point(descriptor);
        } catch (const FormatError& e) {
            err << e.what() << "\n";
            return 2;
        }
        const HorseshoeParams hp(cfg.lambda, cfg.mu);
        std::string csv = "n,x,y,symbol\n";
        int status = 0;
        for (int i = 0; i <= steps; ++i) {
            int b = horizontal_branch(q, hp);
            if (b == 0) {
                csv += detail::csv_line({std::to_string(i), format_number(q.x), format_number(q.y), "escaped"});
                err << "orbit escapes the strips at step " << i << "\n";
                status = 1;
                break;
            }
            csv += detail::csv_line({std::to_string(i), format_number(q.x), format_number(q.y), std::to_string(b)});
            if (i < steps) q = horseshoe_map(q, hp);
        }
        detail::write_text(file, csv);
        log << "wrote " << file.string() << "\n";
        return status;
    }

    std::optional<BiSequence> s;
    try {
        s = parse_sequence(descriptor);
        check_word({s->max_symbol()}, Alphabet(std::max(cfg.m, 2)));
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 2;
    }
    const MetricParams p(cfg.r);
    std::string csv = "n,distance_to_start\n";
    for (int i = 0; i <= steps; ++i)
        csv += detail::csv_line({std::to_string(i), format_number(distance(shift(*s, i), *s, p, cfg.tol).value)});
    detail::write_text(file, csv);
    log << "wrote " << file.string() << "\n";
    return 0;
}

/// Loads a certificate file and recomputes all of its claims.
inline int cmd_verify(const fs::path& path, std::ostream& log, std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << "cannot open " << path.string() << "\n";
        return 2;
    }
    Certificate c;
    try {
        c = certificate_from_json(json::parse(in));
    } catch (const std::exception& e) {
        err << path.string() << ": " << e.what() << "\n";
        return 2;
    }
    Verification v = verify(c);
    if (v.ok()) {
        log << path.string() << ": " << kind_name(c.kind) << " verified (" << c.distances.size() << " distance claims, "
            << c.positions.size() << " position claims)\n";
        return 0;
    }
    for (const auto& f : v.failures) err << path.string() << ": " << f << "\n";
    return 1;
}

}  // namespace symchaos
