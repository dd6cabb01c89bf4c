#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <thread>

#include "specmult/specmult.h"

TEST_SUITE("capi")
{
    TEST_CASE("experiment names")
    {
        REQUIRE(specmult_experiment_count() == 6);
        CHECK(std::string(specmult_experiment_name(0)) == "imaginary-growth");
        CHECK(specmult_experiment_name(6) == nullptr);
        CHECK(std::string(specmult_version()).size() > 0);
    }

    TEST_CASE("config errors map to status codes")
    {
        specmult_config* c = reinterpret_cast<specmult_config*>(0x1);
        CHECK(specmult_config_parse("{\"experiment\":\"bogus\",\"output\":\"x\"}", &c) == SPECMULT_ERR_PARAMETER);
        CHECK(c == nullptr);
        CHECK(std::string(specmult_last_error()).find("available") != std::string::npos);
        CHECK(specmult_config_load("/nonexistent/c.json", &c) == SPECMULT_ERR_IO);
        CHECK(specmult_config_parse(nullptr, &c) == SPECMULT_ERR_NULL_ARGUMENT);
        CHECK(specmult_config_parse("{}", nullptr) == SPECMULT_ERR_NULL_ARGUMENT);
        CHECK(specmult_run(nullptr, nullptr) == SPECMULT_ERR_NULL_ARGUMENT);
        CHECK(std::string(specmult_status_name(SPECMULT_ERR_DIVERGENCE)) == "divergence");
    }

    TEST_CASE("last error is per thread")
    {
        specmult_config* c = nullptr;
        CHECK(specmult_config_parse("{", &c) == SPECMULT_ERR_PARAMETER);
        const std::string mine = specmult_last_error();
        std::string other;
        std::thread t([&] { other = specmult_last_error(); });
        t.join();
        CHECK(other.empty());
        CHECK(std::string(specmult_last_error()) == mine);
    }

    TEST_CASE("run an experiment through handles")
    {
        const std::string out = "capi_riesz.csv";
        const std::string text = "{\"experiment\":\"riesz-dim-sweep\",\"seed\":3,\"sweep\":{\"K\":[4],\"d\":[1,2],\"p\":[2]},\"output\":\"" + out + "\"}";
        specmult_config* c = nullptr;
        REQUIRE(specmult_config_parse(text.c_str(), &c) == SPECMULT_OK);
        CHECK(std::string(specmult_config_experiment(c)) == "riesz-dim-sweep");
        CHECK(specmult_config_seed(c) == 3);
        specmult_result* r = nullptr;
        REQUIRE(specmult_run(c, &r) == SPECMULT_OK);
        CHECK(specmult_result_file_count(r) == 1);
        CHECK(std::string(specmult_result_file(r, 0)) == out);
        CHECK(specmult_result_file(r, 1) == nullptr);
        CHECK(specmult_result_divergent(r) == 0);
        specmult_result_free(r);
        specmult_config_free(c);
        std::remove(out.c_str());
    }

    TEST_CASE("selftest and riesz norm")
    {
        specmult_result* r = nullptr;
        REQUIRE(specmult_selftest(&r) == SPECMULT_OK);
        CHECK(specmult_result_passed(r) == 1);
        CHECK(std::string(specmult_result_summary(r)).find("PASS") != std::string::npos);
        specmult_result_free(r);
        double v = 0;
        REQUIRE(specmult_discrete_riesz_l2_norm(8, 2, 1, &v) == SPECMULT_OK);
        CHECK(std::abs(v - std::sqrt(2.0)) <= 1e-10);
        CHECK(specmult_discrete_riesz_l2_norm(8, 2, 5, &v) != SPECMULT_OK);
        CHECK(specmult_discrete_riesz_l2_norm(8, 2, 0, nullptr) == SPECMULT_ERR_NULL_ARGUMENT);
        specmult_result_free(nullptr);
        specmult_config_free(nullptr);
    }
}
