#include <doctest.h>

#include <cstring>
#include <string>

#include "jlva/jlva.h"

TEST_CASE("config handles and canonical text") {
    jlva_config* c = nullptr;
    REQUIRE(jlva_config_default(&c) == JLVA_OK);
    CHECK(jlva_config_set(c, "contract.maturity", "4") == JLVA_OK);
    char* v = nullptr;
    REQUIRE(jlva_config_get(c, "contract.maturity", &v) == JLVA_OK);
    CHECK(std::string(v) == "4");
    jlva_string_free(v);

    char* text = nullptr;
    REQUIRE(jlva_config_serialize(c, &text) == JLVA_OK);
    jlva_config* d = nullptr;
    REQUIRE(jlva_config_parse(text, &d) == JLVA_OK);
    char* text2 = nullptr;
    REQUIRE(jlva_config_serialize(d, &text2) == JLVA_OK);
    CHECK(std::strcmp(text, text2) == 0);
    jlva_string_free(text);
    jlva_string_free(text2);
    jlva_config_free(c);
    jlva_config_free(d);
}

TEST_CASE("errors map to status codes") {
    jlva_config* c = nullptr;
    CHECK(jlva_config_parse("[market]\nfoo = 1\n", &c) == JLVA_ERR_CONFIG);
    CHECK(c == nullptr);
    CHECK(std::string(jlva_last_error()).find("foo") != std::string::npos);
    CHECK(jlva_config_load("/nonexistent.cfg", &c) == JLVA_ERR_CONFIG);
    CHECK(jlva_config_default(nullptr) == JLVA_ERR_CONFIG);

    REQUIRE(jlva_config_default(&c) == JLVA_OK);
    CHECK(jlva_config_set(c, "market.sigma2", "2") == JLVA_OK);
    jlva_report* r = nullptr;
    CHECK(jlva_price(c, &r) == JLVA_ERR_NUMERIC);
    CHECK(r == nullptr);
    CHECK(std::string(jlva_last_error()).find("strip") != std::string::npos);
    jlva_config_free(c);
}

TEST_CASE("price report through the shared library") {
    jlva_config* c = nullptr;
    REQUIRE(jlva_config_default(&c) == JLVA_OK);
    jlva_config_set(c, "contract.maturity", "2");
    jlva_config_set(c, "numerics.quad_tol", "1e-6");
    jlva_report* r = nullptr;
    REQUIRE(jlva_price(c, &r) == JLVA_OK);
    jlva_breakdown b{};
    REQUIRE(jlva_report_breakdown(r, &b) == JLVA_OK);
    CHECK(b.total == b.gmab + b.sb + b.db);
    CHECK(b.gmab > 0.0);
    CHECK(std::string(jlva_report_text(r)).find("seed=") != std::string::npos);
    REQUIRE(jlva_report_file_count(r) == 2);
    CHECK(std::string(jlva_report_file_name(r, 0)) == "price.csv");
    CHECK(std::string(jlva_report_file_content(r, 0)).rfind("component,value,std_error\n", 0) == 0);
    CHECK(jlva_report_file_name(r, 5) == nullptr);
    jlva_report_free(r);
    jlva_config_free(c);
}

TEST_CASE("validate reports a forced strip violation by name") {
    jlva_config* c = nullptr;
    REQUIRE(jlva_config_default(&c) == JLVA_OK);
    jlva_config_set(c, "contract.maturity", "2");
    jlva_config_set(c, "market.sigma2", "2");
    jlva_config_set(c, "numerics.oracle_paths", "2000");
    jlva_report* r = nullptr;
    CHECK(jlva_validate(c, &r) == JLVA_ERR_VALIDATION);
    REQUIRE(r != nullptr);
    const std::string t = jlva_report_text(r);
    CHECK(t.find("strip violation") != std::string::npos);
    CHECK(t.find("FAIL") != std::string::npos);
    jlva_report_free(r);
    jlva_config_free(c);
}
