#include "jlva/jlva.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "commands.hpp"
#include "config.hpp"

struct jlva_config {
    jlva::RunConfig cfg;
};

struct jlva_report {
    jlva::Report rep;
};

namespace {

thread_local std::string g_last_error;

template <class F>
jlva_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const jlva::ConfigError& e) {
        g_last_error = e.what();
        return JLVA_ERR_CONFIG;
    } catch (const jlva::NumericError& e) {
        g_last_error = e.what();
        return JLVA_ERR_NUMERIC;
    } catch (const jlva::ValidationError& e) {
        g_last_error = e.what();
        return JLVA_ERR_VALIDATION;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return JLVA_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return JLVA_ERR_INTERNAL;
    }
}

jlva_status null_arg(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return JLVA_ERR_CONFIG;
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

template <class Run>
jlva_status run_report(const jlva_config* cfg, jlva_report** out, Run&& run) {
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<jlva_report>();
        r->rep = run(cfg->cfg);
        const int st = r->rep.status;
        *out = r.release();
        if (st != 0) g_last_error = "validation failed";
        return st ? JLVA_ERR_VALIDATION : JLVA_OK;
    });
}

}  // namespace

extern "C" {

const char* jlva_version(void) { return "1.0.0"; }

const char* jlva_last_error(void) { return g_last_error.c_str(); }

jlva_status jlva_config_default(jlva_config** out) {
    if (!out) return null_arg("out");
    return guarded([&] {
        *out = new jlva_config{};
        return JLVA_OK;
    });
}

jlva_status jlva_config_load(const char* path, jlva_config** out) {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        *out = new jlva_config{jlva::load_config(path)};
        return JLVA_OK;
    });
}

jlva_status jlva_config_parse(const char* text, jlva_config** out) {
    if (!text) return null_arg("text");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        *out = new jlva_config{jlva::parse_config(text)};
        return JLVA_OK;
    });
}

jlva_status jlva_config_set(jlva_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return null_arg("cfg/key/value");
    return guarded([&] {
        jlva::set_config_value(cfg->cfg, key, value);
        return JLVA_OK;
    });
}

jlva_status jlva_config_get(const jlva_config* cfg, const char* key, char** out) {
    if (!cfg || !key || !out) return null_arg("cfg/key/out");
    return guarded([&] {
        *out = dup(jlva::get_config_value(cfg->cfg, key));
        return JLVA_OK;
    });
}

jlva_status jlva_config_serialize(const jlva_config* cfg, char** out) {
    if (!cfg || !out) return null_arg("cfg/out");
    return guarded([&] {
        *out = dup(jlva::serialize_config(cfg->cfg));
        return JLVA_OK;
    });
}

void jlva_config_free(jlva_config* cfg) { delete cfg; }

jlva_status jlva_price(const jlva_config* cfg, jlva_report** out) {
    return run_report(cfg, out, [](const jlva::RunConfig& c) { return jlva::cmd_price(c); });
}

jlva_status jlva_benchmark(const jlva_config* cfg, jlva_report** out) {
    return run_report(cfg, out, [](const jlva::RunConfig& c) { return jlva::cmd_benchmark(c); });
}

jlva_status jlva_sensitivity(const jlva_config* cfg, const char* param1, double lo1, double hi1, const char* param2,
                             double lo2, double hi2, size_t resolution, jlva_report** out) {
    if (!param1 || !param2) return null_arg("param");
    return run_report(cfg, out, [&](const jlva::RunConfig& c) {
        jlva::SensitivityRequest req;
        req.axis1 = jlva::default_axis(jlva::parse_sensitivity_param(param1));
        req.axis2 = jlva::default_axis(jlva::parse_sensitivity_param(param2));
        if (lo1 <= hi1) {
            req.axis1.lo = lo1;
            req.axis1.hi = hi1;
        }
        if (lo2 <= hi2) {
            req.axis2.lo = lo2;
            req.axis2.hi = hi2;
        }
        req.resolution = resolution;
        return jlva::cmd_sensitivity(c, req);
    });
}

jlva_status jlva_validate(const jlva_config* cfg, jlva_report** out) {
    return run_report(cfg, out, [](const jlva::RunConfig& c) { return jlva::cmd_validate(c); });
}

const char* jlva_report_text(const jlva_report* r) { return r ? r->rep.text.c_str() : ""; }

size_t jlva_report_file_count(const jlva_report* r) { return r ? r->rep.files.size() : 0; }

const char* jlva_report_file_name(const jlva_report* r, size_t k) {
    return r && k < r->rep.files.size() ? r->rep.files[k].first.c_str() : nullptr;
}

const char* jlva_report_file_content(const jlva_report* r, size_t k) {
    return r && k < r->rep.files.size() ? r->rep.files[k].second.c_str() : nullptr;
}

jlva_status jlva_report_write(const jlva_report* r, const char* dir) {
    if (!r || !dir) return null_arg("report/dir");
    return guarded([&] {
        jlva::write_report_files(r->rep, dir);
        return JLVA_OK;
    });
}

jlva_status jlva_report_breakdown(const jlva_report* r, jlva_breakdown* out) {
    if (!r || !out) return null_arg("report/out");
    if (!r->rep.breakdown) {
        g_last_error = "report carries no price breakdown";
        return JLVA_ERR_CONFIG;
    }
    const auto& b = *r->rep.breakdown;
    *out = {b.gmab.value, b.gmab.std_error, b.sb.value, b.sb.std_error, b.db.value,
            b.db.std_error, b.total.value, b.total.std_error, b.seed};
    return JLVA_OK;
}

void jlva_report_free(jlva_report* r) { delete r; }

void jlva_string_free(char* s) { std::free(s); }

}  // extern "C"
