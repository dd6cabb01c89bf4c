#include "specmult/specmult.h"

#include <new>
#include <string>
#include <vector>

#include "specmult/errors.hpp"
#include "specmult/experiments.hpp"
#include "specmult/riesz.hpp"

struct specmult_config {
    specmult::ExperimentConfig cfg;
};

struct specmult_result {
    std::vector<std::string> files;
    bool divergent = false;
    bool passed = true;
    std::string summary;
};

namespace {

thread_local std::string last_error;

template <class F>
specmult_status guarded(F&& f)
{
    try {
        f();
        last_error.clear();
        return SPECMULT_OK;
    } catch (const specmult::Error& e) {
        last_error = e.what();
        return static_cast<specmult_status>(static_cast<int>(e.kind()));
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return SPECMULT_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return SPECMULT_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown exception";
        return SPECMULT_ERR_INTERNAL;
    }
}

specmult_status null_arg(const char* what)
{
    last_error = std::string("null argument: ") + what;
    return SPECMULT_ERR_NULL_ARGUMENT;
}

}  // namespace

extern "C" {

const char* specmult_last_error(void) { return last_error.c_str(); }

const char* specmult_status_name(specmult_status s)
{
    switch (s) {
    case SPECMULT_OK: return "ok";
    case SPECMULT_ERR_PARAMETER: return "parameter error";
    case SPECMULT_ERR_DOMAIN: return "domain error";
    case SPECMULT_ERR_SHAPE: return "shape error";
    case SPECMULT_ERR_UNSUPPORTED: return "unsupported mode";
    case SPECMULT_ERR_IO: return "io error";
    case SPECMULT_ERR_DIVERGENCE: return "divergence";
    case SPECMULT_ERR_NULL_ARGUMENT: return "null argument";
    case SPECMULT_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* specmult_version(void) { return "0.1.0"; }

size_t specmult_experiment_count(void) { return specmult::experiment_names().size(); }

const char* specmult_experiment_name(size_t i)
{
    const auto& n = specmult::experiment_names();
    return i < n.size() ? n[i].c_str() : nullptr;
}

specmult_status specmult_config_load(const char* path, specmult_config** out)
{
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new specmult_config{specmult::load_config(path)}; });
}

specmult_status specmult_config_parse(const char* json_text, specmult_config** out)
{
    if (!json_text) return null_arg("json_text");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] { *out = new specmult_config{specmult::parse_config(json_text)}; });
}

const char* specmult_config_experiment(const specmult_config* cfg) { return cfg ? cfg->cfg.experiment.c_str() : nullptr; }

uint64_t specmult_config_seed(const specmult_config* cfg) { return cfg ? cfg->cfg.seed : 0; }

void specmult_config_free(specmult_config* cfg) { delete cfg; }

specmult_status specmult_run(const specmult_config* cfg, specmult_result** out)
{
    if (!cfg) return null_arg("cfg");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        const auto r = specmult::run_experiment(cfg->cfg);
        *out = new specmult_result{r.files, r.divergent, !r.divergent, r.summary};
    });
}

specmult_status specmult_selftest(specmult_result** out)
{
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        std::string report;
        const bool ok = specmult::selftest(report);
        *out = new specmult_result{{}, false, ok, report};
    });
}

size_t specmult_result_file_count(const specmult_result* r) { return r ? r->files.size() : 0; }

const char* specmult_result_file(const specmult_result* r, size_t i)
{
    return r && i < r->files.size() ? r->files[i].c_str() : nullptr;
}

int specmult_result_divergent(const specmult_result* r) { return r && r->divergent ? 1 : 0; }

int specmult_result_passed(const specmult_result* r) { return r && r->passed ? 1 : 0; }

const char* specmult_result_summary(const specmult_result* r) { return r ? r->summary.c_str() : nullptr; }

void specmult_result_free(specmult_result* r) { delete r; }

specmult_status specmult_discrete_riesz_l2_norm(size_t K, size_t d, size_t r, double* out)
{
    if (!out) return null_arg("out");
    return guarded([&] { *out = specmult::discrete_riesz_l2_norm(specmult::cyclic_system(K, d), r); });
}

}  // extern "C"
