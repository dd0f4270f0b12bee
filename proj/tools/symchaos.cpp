// symchaos: certification suites, horseshoe exports and orbits from the command line.
#include "symchaos/cli.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
};

symchaos::RunConfig resolve(const Overrides& o) {
    symchaos::RunConfig cfg;
    if (o.config) cfg = symchaos::load_config_file(*o.config);
    for (const auto& kv : o.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw symchaos::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.out) cfg.out = *o.out;
    if (o.format) cfg.set("format", *o.format);
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic shift chaos certification and affine horseshoe tools"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // global options may follow the subcommand

    Overrides o;
    std::optional<std::string> verify_file;
    app.add_option("--config", o.config, "Flat key = value configuration file");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--format", o.format, "Comma separated subset of json,csv,svg");
    app.add_option("--seed", o.seed, "Seed for randomized suites");
    app.add_option("--set", o.sets, "Override a configuration key (key=value), repeatable");
    app.add_option("--verify", verify_file, "Re-verify a certificate file and exit");

    auto* certify = app.add_subcommand("certify", "Run the chaos certification suite");
    auto* horseshoe = app.add_subcommand("horseshoe", "Export horseshoe rectangles and condition reports");
    auto* orbit = app.add_subcommand("orbit", "Write the orbit of a sequence or plane point");
    std::string descriptor;
    int steps = 100;
    orbit->add_option("--seq", descriptor,
                      "periodic:<word>[@phase] | padded:<word>@<start>/<pad> | universal:<m> | "
                      "eventual:<left>|<center>@<start>|<right> | point:<x>,<y>")
        ->required();
    orbit->add_option("--steps", steps, "Number of shifts or map iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (verify_file) return symchaos::cmd_verify(*verify_file, std::cout, std::cerr);

    symchaos::RunConfig cfg;
    try {
        cfg = resolve(o);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*certify) return symchaos::cmd_certify(cfg, std::cout, std::cerr);
        if (*horseshoe) return symchaos::cmd_horseshoe(cfg, std::cout, std::cerr);
        if (*orbit) return symchaos::cmd_orbit(cfg, descriptor, steps, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << app.help();
    return 2;
}
