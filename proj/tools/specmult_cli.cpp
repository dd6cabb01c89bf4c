#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "specmult/specmult.h"

namespace {

int exit_code(specmult_status s)
{
    switch (s) {
    case SPECMULT_OK: return 0;
    case SPECMULT_ERR_DIVERGENCE: return 3;
    case SPECMULT_ERR_INTERNAL: return 1;
    default: return 2;
    }
}

int fail(specmult_status s)
{
    std::fprintf(stderr, "error (%s): %s\n", specmult_status_name(s), specmult_last_error());
    return exit_code(s);
}

bool threads_env_ok()
{
    const char* env = std::getenv("SPECMULT_THREADS");
    if (!env) return true;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    return end != env && *end == '\0' && v >= 1;
}

int cmd_run(const std::string& path)
{
    specmult_config* cfg = nullptr;
    specmult_status s = specmult_config_load(path.c_str(), &cfg);
    if (s != SPECMULT_OK) return fail(s);
    specmult_result* res = nullptr;
    s = specmult_run(cfg, &res);
    specmult_config_free(cfg);
    if (s != SPECMULT_OK) return fail(s);
    for (size_t i = 0; i < specmult_result_file_count(res); ++i) std::printf("%s\n", specmult_result_file(res, i));
    const int div = specmult_result_divergent(res);
    if (div) std::fprintf(stderr, "%s\n", specmult_result_summary(res));
    specmult_result_free(res);
    return div ? 3 : 0;
}

int cmd_list()
{
    for (size_t i = 0; i < specmult_experiment_count(); ++i) std::printf("%s\n", specmult_experiment_name(i));
    return 0;
}

int cmd_selftest()
{
    specmult_result* res = nullptr;
    const specmult_status s = specmult_selftest(&res);
    if (s != SPECMULT_OK) return fail(s);
    std::fputs(specmult_result_summary(res), stdout);
    const int ok = specmult_result_passed(res);
    specmult_result_free(res);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"spectral multiplier experiments"};
    app.require_subcommand(1);
    std::string config;
    auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config, "config file")->required();
    auto* list = app.add_subcommand("list-experiments", "print the known experiment names");
    auto* self = app.add_subcommand("selftest", "run quick built-in checks");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (!threads_env_ok()) {
        std::fprintf(stderr, "error: SPECMULT_THREADS must be a positive integer\n");
        return 2;
    }
    if (*run) return cmd_run(config);
    if (*list) return cmd_list();
    if (*self) return cmd_selftest();
    return 2;
}
