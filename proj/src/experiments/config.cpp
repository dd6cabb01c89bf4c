#include <algorithm>
#include <fstream>
#include <sstream>

#include "specmult/errors.hpp"
#include "specmult/experiments.hpp"

namespace specmult {

using nlohmann::json;

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{"imaginary-growth", "riesz-dim-sweep", "marcinkiewicz-verify",
                                                "mellin-selftest",  "cz-suite",        "hankel-dunkl-conformance"};
    return names;
}

void ExperimentConfig::validate() const
{
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
        std::string msg = "unknown experiment '" + experiment + "'; available:";
        for (const auto& n : names) msg += " " + n;
        throw ParameterError(msg);
    }
    if (output.empty()) throw ParameterError("config needs a non-empty output path");
    for (const auto* obj : {&system, &symbol, &sweep})
        if (!obj->is_object()) throw ParameterError("system, symbol and sweep must be JSON objects");
}

ExperimentConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    ExperimentConfig c;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "experiment") {
            if (!v.is_string()) throw ParameterError("experiment must be a string");
            c.experiment = v.get<std::string>();
        } else if (k == "output") {
            if (!v.is_string()) throw ParameterError("output must be a string");
            c.output = v.get<std::string>();
        } else if (k == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                throw ParameterError("seed must be a non-negative integer");
            c.seed = v.get<std::uint64_t>();
        } else if (k == "system") {
            c.system = v;
        } else if (k == "symbol") {
            c.symbol = v;
        } else if (k == "sweep") {
            c.sweep = v;
        } else {
            throw ParameterError("unknown config key '" + k + "'");
        }
    }
    if (!j.contains("experiment")) throw ParameterError("config is missing 'experiment'");
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace specmult
