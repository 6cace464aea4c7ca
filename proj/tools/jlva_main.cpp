#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jlva/jlva.h"

namespace {

struct ConfigDeleter {
    void operator()(jlva_config* c) const { jlva_config_free(c); }
};
struct ReportDeleter {
    void operator()(jlva_report* r) const { jlva_report_free(r); }
};
using ConfigPtr = std::unique_ptr<jlva_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<jlva_report, ReportDeleter>;

struct Common {
    std::string config;
    std::optional<double> maturity;
    std::optional<std::uint64_t> samples, seed, paths;
    std::optional<std::string> method;
    std::optional<std::string> out;
    std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "config file (defaults apply when omitted)");
    app->add_option("--maturity", c.maturity, "contract maturity in years");
    app->add_option("--samples", c.samples, "MC samples per integral");
    app->add_option("--seed", c.seed, "RNG seed");
    app->add_option("--method", c.method, "auto | quad | mc | oracle | all")
        ->check(CLI::IsMember({"auto", "quad", "mc", "mc-is", "oracle", "all"}));
    app->add_option("--paths", c.paths, "oracle paths");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--set", c.sets, "override a config key: section.key=value");
}

int fail(jlva_status st) {
    std::fprintf(stderr, "error: %s\n", jlva_last_error());
    return static_cast<int>(st);
}

jlva_status set(jlva_config* cfg, const char* key, const std::string& v) { return jlva_config_set(cfg, key, v.c_str()); }

// Builds the config; returns nullptr after printing the error.
ConfigPtr make_config(const Common& c, int& code) {
    jlva_config* raw = nullptr;
    jlva_status st = c.config.empty() ? jlva_config_default(&raw) : jlva_config_load(c.config.c_str(), &raw);
    if (st != JLVA_OK) {
        code = fail(st);
        return nullptr;
    }
    ConfigPtr cfg(raw);
    auto apply = [&](const char* key, const std::string& v) {
        if (st == JLVA_OK) st = set(cfg.get(), key, v);
    };
    char buf[64];
    if (c.maturity) {
        std::snprintf(buf, sizeof buf, "%.17g", *c.maturity);
        apply("contract.maturity", buf);
    }
    if (c.samples) apply("numerics.samples", std::to_string(*c.samples));
    if (c.seed) apply("numerics.seed", std::to_string(*c.seed));
    if (c.paths) apply("numerics.oracle_paths", std::to_string(*c.paths));
    if (c.method) apply("numerics.method", *c.method == "mc-is" ? "mc" : *c.method);
    if (c.out) apply("output.dir", *c.out);
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects section.key=value, got '%s'\n", s.c_str());
            code = JLVA_ERR_CONFIG;
            return nullptr;
        }
        apply(s.substr(0, eq).c_str(), s.substr(eq + 1));
    }
    if (st != JLVA_OK) {
        code = fail(st);
        return nullptr;
    }
    return cfg;
}

int emit(const jlva_config* cfg, jlva_report* raw, jlva_status st) {
    ReportPtr rep(raw);
    if (!rep) return fail(st);
    std::fputs(jlva_report_text(rep.get()), stdout);
    if (jlva_report_file_count(rep.get()) > 0) {
        char* dir = nullptr;
        if (jlva_config_get(cfg, "output.dir", &dir) != JLVA_OK) return fail(JLVA_ERR_CONFIG);
        const std::string d = dir;
        jlva_string_free(dir);
        const jlva_status ws = jlva_report_write(rep.get(), d.c_str());
        if (ws != JLVA_OK) return fail(ws);
        for (std::size_t k = 0; k < jlva_report_file_count(rep.get()); ++k)
            std::printf("wrote %s/%s\n", d.c_str(), jlva_report_file_name(rep.get(), k));
    }
    if (st != JLVA_OK) {
        std::fprintf(stderr, "error: %s\n", jlva_last_error());
        return static_cast<int>(st);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint-life variable annuity pricer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(jlva_version()));

    Common price_opts, bench_opts, sens_opts, val_opts, cfg_opts;
    auto* price = app.add_subcommand("price", "price GMAB, SB and DB");
    add_common(price, price_opts);
    auto* bench = app.add_subcommand("benchmark", "quadrature vs MC-IS per integral");
    add_common(bench, bench_opts);
    auto* sens = app.add_subcommand("sensitivity", "2-D parameter grid, one CSV per benefit plus total");
    add_common(sens, sens_opts);
    std::string p1 = "beta", p2 = "C";
    std::vector<double> r1, r2;
    std::size_t resolution = 4;
    sens->add_option("--axis1", p1, "beta | C | delta | eps1 | eps2 | kappa1 | kappa2");
    sens->add_option("--axis2", p2, "second parameter");
    sens->add_option("--range1", r1, "lo hi for axis1")->expected(2);
    sens->add_option("--range2", r2, "lo hi for axis2")->expected(2);
    sens->add_option("--resolution", resolution, "points per axis")->check(CLI::Range(2, 100));
    auto* val = app.add_subcommand("validate", "run the invariant battery");
    add_common(val, val_opts);
    auto* cfgc = app.add_subcommand("config", "print the effective config in canonical form");
    add_common(cfgc, cfg_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : JLVA_ERR_CONFIG;
    }

    int code = 0;
    jlva_report* rep = nullptr;
    if (*price) {
        auto cfg = make_config(price_opts, code);
        if (!cfg) return code;
        const jlva_status st = jlva_price(cfg.get(), &rep);
        return emit(cfg.get(), rep, st);
    }
    if (*bench) {
        auto cfg = make_config(bench_opts, code);
        if (!cfg) return code;
        const jlva_status st = jlva_benchmark(cfg.get(), &rep);
        return emit(cfg.get(), rep, st);
    }
    if (*sens) {
        auto cfg = make_config(sens_opts, code);
        if (!cfg) return code;
        const double lo1 = r1.empty() ? 1.0 : r1[0], hi1 = r1.empty() ? 0.0 : r1[1];
        const double lo2 = r2.empty() ? 1.0 : r2[0], hi2 = r2.empty() ? 0.0 : r2[1];
        const jlva_status st =
            jlva_sensitivity(cfg.get(), p1.c_str(), lo1, hi1, p2.c_str(), lo2, hi2, resolution, &rep);
        return emit(cfg.get(), rep, st);
    }
    if (*val) {
        auto cfg = make_config(val_opts, code);
        if (!cfg) return code;
        const jlva_status st = jlva_validate(cfg.get(), &rep);
        return emit(cfg.get(), rep, st);
    }
    if (*cfgc) {
        auto cfg = make_config(cfg_opts, code);
        if (!cfg) return code;
        char* text = nullptr;
        const jlva_status st = jlva_config_serialize(cfg.get(), &text);
        if (st != JLVA_OK) return fail(st);
        std::fputs(text, stdout);
        jlva_string_free(text);
    }
    return 0;
}
