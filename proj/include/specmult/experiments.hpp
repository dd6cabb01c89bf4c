#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "specmult/core.hpp"

namespace specmult {

/// Parsed experiment configuration.  system / symbol / sweep stay as JSON
/// objects; each experiment reads the keys it knows and rejects the rest.
struct ExperimentConfig {
    std::string experiment;
    nlohmann::json system = nlohmann::json::object();
    nlohmann::json symbol = nlohmann::json::object();
    nlohmann::json sweep = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string output;

    void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

const std::vector<std::string>& experiment_names();

struct ExperimentResult {
    std::vector<std::string> files;
    /// set when any row carries a divergence flag or a non-finite value
    bool divergent = false;
    std::string summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Shortest round-trip decimal, '.' separator, no locale.
std::string format_number(double x);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double max_residual = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// imaginary-growth

struct GrowthRow {
    std::string system;
    std::size_t n_max = 0;
    double p = 4.0;
    double v = 0.0;
    double log_lower = 0.0;
};

/// log of the p-norm lower bound of (A + shift)^{iv} for
/// kind in {ou, laguerre, jacobi, cyclic}; cyclic uses Z_{n_max} with I - M.
std::vector<GrowthRow> imaginary_growth(const std::string& kind, std::size_t n_max, double p, const std::vector<double>& v,
                                        std::uint64_t seed, double shift = 1.0, double alpha = 0.0, double beta = 0.0);

// mellin-selftest

struct MellinSelftest {
    std::size_t count = 0;
    double plancherel_rel_err = 0.0;
    double inversion_rel_err = 0.0;
    bool decay_warning = false;
    nlohmann::ordered_json per_symbol = nlohmann::ordered_json::array();
};

/// count random log-Gaussian symbols, alternating over dims.
MellinSelftest mellin_selftest(std::uint64_t seed, std::size_t count = 20, const std::vector<std::size_t>& dims = {1, 2});

// hankel-dunkl-conformance

struct ConformanceRow {
    double alpha = 0.0;
    double hankel_involution = 0.0;
    double hankel_gaussian = 0.0;
    double hankel_convolution = 0.0;
    double dunkl_involution = 0.0;
    double dunkl_convolution = 0.0;
    double dunkl_fourier = 0.0;  // alpha = 0 only, else 0
};

ConformanceRow hankel_dunkl_conformance(double alpha, std::size_t n = 192);

// marcinkiewicz-verify

struct MarcinkiewiczRow {
    std::string symbol;
    std::string system;
    std::size_t n = 0;
    double p = 4.0;
    double log_lower = 0.0;
    double mar_norm = 0.0;
    bool divergent = false;
};

/// symbol in {imaginary-power, sin}; system in {cyclic, ou}.
/// cyclic uses the eigenvalues (2K sin(pi k / K))^2 with the zero mode removed.
std::vector<MarcinkiewiczRow> marcinkiewicz_verify(const std::vector<std::string>& symbols, const std::string& system,
                                                   const std::vector<std::size_t>& sizes, double p, double u,
                                                   std::uint64_t seed);

// cz-suite

struct CZSuiteRow {
    std::size_t trial = 0;
    std::size_t n1 = 0;
    double threshold = 0.0;
    double C_mu = 0.0;
    std::size_t parts = 0;
    bool props[5] = {false, false, false, false, false};
    double l1_ratio = 0.0;
    double g_max_over_s = 0.0;
};

std::vector<CZSuiteRow> cz_suite(std::size_t K, std::size_t generations, const std::vector<std::size_t>& n1_list,
                                 std::size_t trials, std::uint64_t seed);

/// Quick built-in checks; one line per check.
bool selftest(std::string& report);

}  // namespace specmult
