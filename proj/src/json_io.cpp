#include "tailrisk/json_io.hpp"

#include <cstdio>
#include <ctime>
#include <set>

#include <json.hpp>

#include "tailrisk/errors.hpp"
#include "tailrisk/version.hpp"

namespace tailrisk {

using nlohmann::json;

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string utc_now_iso8601() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fit_to_json(const ScalingFit& fit) {
    json j;
    j["eta"] = fit.eta;
    j["log_prefactor"] = fit.log_prefactor;
    j["ti"] = fit.ti;
    j["slope_stderr"] = fit.slope_stderr;
    j["r_squared"] = fit.r_squared;
    j["source"] = fit_source_name(fit.source);
    return j.dump(2) + "\n";
}

std::string summary_to_json(const SimSummary& summary) {
    json cells = json::array();
    for (const SimCell& cell : summary.cells) {
        json c;
        c["method"] = estimator_name(cell.method);
        c["effective_size"] = cell.effective_size;
        c["tail_index"] = cell.tail_index;
        c["mean"] = cell.mean;
        c["sd"] = cell.sd;
        c["mape"] = cell.mape;
        c["successes"] = cell.successes;
        c["failures"] = cell.failures;
        cells.push_back(std::move(c));
    }
    json j;
    j["config"] = json::parse(sim_config_to_json(summary.config));
    j["cells"] = std::move(cells);
    return j.dump(2) + "\n";
}

std::string manifest_to_json(const RunManifest& manifest) {
    json j;
    j["command"] = manifest.command;
    j["config_digest"] = manifest.config_digest;
    j["seed"] = manifest.seed;
    j["tool_version"] = manifest.tool_version;
    j["created_utc"] = manifest.created_utc;
    j["outputs"] = manifest.outputs;
    return j.dump(2) + "\n";
}

std::string sim_config_to_json(const SimConfig& config) {
    json j;
    j["family"] = family_name(config.family);
    j["pareto_scale"] = config.pareto_scale;
    j["tail_indices"] = config.tail_indices;
    j["effective_sizes"] = config.effective_sizes;
    j["tail_fraction"] = config.tail_fraction;
    j["replications"] = config.replications;
    std::vector<std::string> names;
    names.reserve(config.estimators.size());
    for (Estimator e : config.estimators) names.push_back(estimator_name(e));
    j["estimators"] = names;
    j["base_seed"] = config.base_seed;
    j["grid_points"] = config.pipeline.grid_points;
    j["subsamples"] = config.pipeline.subsamples;
    return j.dump(2) + "\n";  // nlohmann objects iterate sorted by key
}

SimConfig sim_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw DataError("config: top level must be an object");

    static const std::set<std::string> known = {
        "family",       "pareto_scale", "tail_indices", "effective_sizes",
        "tail_fraction", "replications", "estimators",   "base_seed",
        "grid_points",  "subsamples"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw DataError("config: unknown key '" + key + "'");
        }
    }

    SimConfig config;
    try {
        if (j.contains("family")) config.family = family_from_name(j["family"]);
        if (j.contains("pareto_scale")) config.pareto_scale = j["pareto_scale"];
        if (j.contains("tail_indices")) {
            config.tail_indices = j["tail_indices"].get<std::vector<double>>();
        }
        if (j.contains("effective_sizes")) {
            config.effective_sizes = j["effective_sizes"].get<std::vector<std::size_t>>();
        }
        if (j.contains("tail_fraction")) config.tail_fraction = j["tail_fraction"];
        if (j.contains("replications")) config.replications = j["replications"];
        if (j.contains("estimators")) {
            config.estimators.clear();
            for (const auto& name : j["estimators"]) {
                config.estimators.push_back(estimator_from_name(name.get<std::string>()));
            }
        }
        if (j.contains("base_seed")) config.base_seed = j["base_seed"];
        if (j.contains("grid_points")) config.pipeline.grid_points = j["grid_points"];
        if (j.contains("subsamples")) config.pipeline.subsamples = j["subsamples"];
    } catch (const json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("config: ") + e.what());
    }
    return config;
}

}  // namespace tailrisk
