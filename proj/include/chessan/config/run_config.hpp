#pragma once

#include "chessan/engine/session.hpp"
#include "chessan/positions/position_set.hpp"
#include "chessan/stats/statistics.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chessan::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "section.key" -> value, the layered source of a RunConfig. Engine options
/// live under "engine_options.<Name>".
using ConfigValues = std::map<std::string, std::string>;

/// Every recognised "section.key", in documentation order.
const std::vector<std::string>& known_keys();

/// Built-in defaults.
ConfigValues default_values();

/// INI file with [paths] [engine] [engine_options] [run] [stats] sections.
/// Unknown sections or keys are rejected.
ConfigValues read_config_file(const std::filesystem::path& path);

/// CHESSAN_<SECTION>_<KEY> for every known key, e.g. CHESSAN_RUN_POOL_SIZE.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
ConfigValues read_environment(const EnvLookup& env);
EnvLookup process_environment();

/// Later layers win key by key.
ConfigValues merge(ConfigValues base, const ConfigValues& overlay);

struct RunConfig {
    std::vector<std::filesystem::path> pgn_inputs;
    std::filesystem::path eco_table;
    std::filesystem::path store_dir;
    std::filesystem::path output_dir;
    std::filesystem::path workload;
    std::filesystem::path shard_dir;

    engine::EngineConfig engine;

    std::uint64_t shard_size = 10'000;
    int pool_size = 1;
    int retry_limit = 2;
    int worker_failure_budget = 6;
    positions::KeyMode key_mode = positions::KeyMode::SixField;

    int elo_bin_width = 25;
    int band_width = 100;
    int top_k = 4;
    bool include_draws = false;
    bool svg = true;
    std::string corpus_id;
    stats::CorpusFilter filter;

    /// Resolved values this config was built from.
    ConfigValues effective;

    /// Effective values as "key=value" lines, for provenance.
    std::vector<std::string> provenance_lines() const;
};

/// Parses and checks numbers (positive where they are counts or sizes).
RunConfig build_config(const ConfigValues& values);

/// Defaults, then the file, then the environment, then the flags.
RunConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigValues& flags,
                      const EnvLookup& env = process_environment());

/// Throws ConfigError when an input path given in the config does not exist.
void require_inputs(const RunConfig& cfg, bool pgn, bool eco, bool workload);

} // namespace chessan::config
