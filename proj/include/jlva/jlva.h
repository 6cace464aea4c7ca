#ifndef JLVA_JLVA_H
#define JLVA_JLVA_H

#include <stddef.h>
#include <stdint.h>

#if defined(JLVA_BUILDING_LIBRARY)
#define JLVA_API __attribute__((visibility("default")))
#else
#define JLVA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jlva_status {
    JLVA_OK = 0,
    JLVA_ERR_CONFIG = 1,
    JLVA_ERR_NUMERIC = 2,
    JLVA_ERR_VALIDATION = 3,
    JLVA_ERR_INTERNAL = 4
} jlva_status;

typedef struct jlva_config jlva_config;
typedef struct jlva_report jlva_report;

/* Price components of the last priced report. */
typedef struct jlva_breakdown {
    double gmab, gmab_se;
    double sb, sb_se;
    double db, db_se;
    double total, total_se;
    uint64_t seed;
} jlva_breakdown;

JLVA_API const char* jlva_version(void);

/* Message of the last failed call on this thread ("" if none). */
JLVA_API const char* jlva_last_error(void);

JLVA_API jlva_status jlva_config_default(jlva_config** out);
JLVA_API jlva_status jlva_config_load(const char* path, jlva_config** out);
JLVA_API jlva_status jlva_config_parse(const char* text, jlva_config** out);
/* key is "section.key", e.g. "contract.maturity". */
JLVA_API jlva_status jlva_config_set(jlva_config* cfg, const char* key, const char* value);
/* Caller frees *out with jlva_string_free. */
JLVA_API jlva_status jlva_config_get(const jlva_config* cfg, const char* key, char** out);
JLVA_API jlva_status jlva_config_serialize(const jlva_config* cfg, char** out);
JLVA_API void jlva_config_free(jlva_config* cfg);

JLVA_API jlva_status jlva_price(const jlva_config* cfg, jlva_report** out);
JLVA_API jlva_status jlva_benchmark(const jlva_config* cfg, jlva_report** out);
/* param names: beta, C, delta, eps1, eps2, kappa1, kappa2. lo > hi means
   "use the default range". */
JLVA_API jlva_status jlva_sensitivity(const jlva_config* cfg, const char* param1, double lo1, double hi1,
                                      const char* param2, double lo2, double hi2, size_t resolution,
                                      jlva_report** out);
/* Returns JLVA_ERR_VALIDATION (with the report still filled) when a check fails. */
JLVA_API jlva_status jlva_validate(const jlva_config* cfg, jlva_report** out);

JLVA_API const char* jlva_report_text(const jlva_report* r);
JLVA_API size_t jlva_report_file_count(const jlva_report* r);
JLVA_API const char* jlva_report_file_name(const jlva_report* r, size_t k);
JLVA_API const char* jlva_report_file_content(const jlva_report* r, size_t k);
/* Writes the report's files under dir (created if needed). */
JLVA_API jlva_status jlva_report_write(const jlva_report* r, const char* dir);
JLVA_API jlva_status jlva_report_breakdown(const jlva_report* r, jlva_breakdown* out);
JLVA_API void jlva_report_free(jlva_report* r);

JLVA_API void jlva_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
