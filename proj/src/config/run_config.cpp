#include "chessan/config/run_config.hpp"

#include "chessan/util/text.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace chessan::config {

namespace {

const std::vector<std::pair<std::string, std::string>>& defaults_table()
{
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"paths.pgn", ""},
        {"paths.eco", ""},
        {"paths.store", "chessan-store"},
        {"paths.out", "chessan-out"},
        {"paths.workload", ""},
        {"paths.shards", ""},
        {"engine.binary", "stockfish"},
        {"engine.args", ""},
        {"engine.depth", "20"},
        {"engine.multipv", "1"},
        {"engine.handshake_timeout_s", "10"},
        {"engine.position_timeout_s", "120"},
        {"engine.quit_grace_s", "2"},
        {"run.shard_size", "10000"},
        {"run.pool_size", "1"},
        {"run.retry_limit", "2"},
        {"run.worker_failure_budget", "6"},
        {"run.key_mode", "6-field"},
        {"stats.elo_bin_width", "25"},
        {"stats.band_width", "100"},
        {"stats.top_k", "4"},
        {"stats.include_draws", "false"},
        {"stats.svg", "true"},
        {"stats.corpus_id", ""},
        {"stats.require_both_elos", "false"},
        {"stats.year_min", ""},
        {"stats.year_max", ""},
        {"stats.min_ply", ""},
        {"stats.require_known_result", "false"},
    };
    return table;
}

constexpr std::string_view kOptionPrefix = "engine_options.";

bool is_known(const std::string& key)
{
    const auto& keys = known_keys();
    return key.starts_with(kOptionPrefix) || std::find(keys.begin(), keys.end(), key) != keys.end();
}

const std::string& value_of(const ConfigValues& v, const std::string& key)
{
    const auto it = v.find(key);
    if (it == v.end())
        throw ConfigError("missing config value " + key);
    return it->second;
}

long long integer(const ConfigValues& v, const std::string& key, long long min)
{
    const auto& text = value_of(v, key);
    const auto n = parse_integer(trim(text));
    if (!n)
        throw ConfigError(key + ": not an integer: '" + text + "'");
    if (*n < min)
        throw ConfigError(key + ": must be at least " + std::to_string(min) + ", got " + text);
    return *n;
}

std::optional<int> optional_integer(const ConfigValues& v, const std::string& key)
{
    if (trim(value_of(v, key)).empty())
        return std::nullopt;
    return static_cast<int>(integer(v, key, 0));
}

bool boolean(const ConfigValues& v, const std::string& key)
{
    const auto text = ascii_lower(trim(value_of(v, key)));
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off" || text.empty())
        return false;
    throw ConfigError(key + ": not a boolean: '" + text + "'");
}

std::chrono::milliseconds seconds(const ConfigValues& v, const std::string& key)
{
    const auto& text = value_of(v, key);
    const auto s = parse_double(trim(text));
    if (!s || !(*s > 0))
        throw ConfigError(key + ": must be a positive number of seconds, got '" + text + "'");
    return std::chrono::milliseconds(static_cast<long long>(std::llround(*s * 1000)));
}

std::filesystem::path path_or(const ConfigValues& v, const std::string& key, const std::filesystem::path& fallback)
{
    const auto text = std::string(trim(value_of(v, key)));
    return text.empty() ? fallback : std::filesystem::path(text);
}

std::string env_name(const std::string& key)
{
    std::string out = "CHESSAN_";
    for (const char c : key)
        out += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [k, v] : defaults_table())
            out.push_back(k);
        return out;
    }();
    return keys;
}

ConfigValues default_values()
{
    const auto& t = defaults_table();
    return ConfigValues(t.begin(), t.end());
}

ConfigValues read_config_file(const std::filesystem::path& path)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    ConfigValues out;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError("config " + path.string() + ": key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            const auto full = section + "." + key;
            if (!is_known(full))
                throw ConfigError("config " + path.string() + ": unknown key '" + full + "'");
            out[full] = value.data();
        }
    }
    return out;
}

ConfigValues read_environment(const EnvLookup& env)
{
    ConfigValues out;
    for (const auto& key : known_keys())
        if (auto v = env(env_name(key)))
            out[key] = *v;
    return out;
}

EnvLookup process_environment()
{
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str()))
            return std::string(v);
        return std::nullopt;
    };
}

ConfigValues merge(ConfigValues base, const ConfigValues& overlay)
{
    for (const auto& [k, v] : overlay)
        base[k] = v;
    return base;
}

RunConfig build_config(const ConfigValues& v)
{
    for (const auto& [k, value] : v)
        if (!is_known(k))
            throw ConfigError("unknown config key '" + k + "'");
    RunConfig c;
    c.effective = v;

    for (const auto part : split_whitespace(value_of(v, "paths.pgn")))
        c.pgn_inputs.emplace_back(std::string(part));
    c.eco_table = path_or(v, "paths.eco", {});
    c.store_dir = path_or(v, "paths.store", "chessan-store");
    c.output_dir = path_or(v, "paths.out", "chessan-out");
    c.workload = path_or(v, "paths.workload", c.output_dir / "workload.fen");
    c.shard_dir = path_or(v, "paths.shards", c.output_dir / "shards");

    c.engine.binary = std::string(trim(value_of(v, "engine.binary")));
    if (c.engine.binary.empty())
        throw ConfigError("engine.binary: must not be empty");
    for (const auto part : split_whitespace(value_of(v, "engine.args")))
        c.engine.args.emplace_back(part);
    c.engine.target_depth = static_cast<int>(integer(v, "engine.depth", 1));
    c.engine.multipv = static_cast<int>(integer(v, "engine.multipv", 1));
    c.engine.handshake_timeout = seconds(v, "engine.handshake_timeout_s");
    c.engine.position_timeout = seconds(v, "engine.position_timeout_s");
    c.engine.quit_grace = seconds(v, "engine.quit_grace_s");
    for (const auto& [k, value] : v)
        if (k.starts_with(kOptionPrefix)) {
            const auto name = k.substr(kOptionPrefix.size());
            if (name == "MultiPV")
                throw ConfigError("engine_options.MultiPV: set engine.multipv instead");
            c.engine.options.emplace_back(name, value);
        }

    c.shard_size = static_cast<std::uint64_t>(integer(v, "run.shard_size", 1));
    c.pool_size = static_cast<int>(integer(v, "run.pool_size", 1));
    c.retry_limit = static_cast<int>(integer(v, "run.retry_limit", 0));
    c.worker_failure_budget = static_cast<int>(integer(v, "run.worker_failure_budget", 1));
    try {
        c.key_mode = positions::key_mode_from_string(trim(value_of(v, "run.key_mode")));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("run.key_mode: ") + e.what());
    }

    c.elo_bin_width = static_cast<int>(integer(v, "stats.elo_bin_width", 1));
    c.band_width = static_cast<int>(integer(v, "stats.band_width", 1));
    c.top_k = static_cast<int>(integer(v, "stats.top_k", 1));
    c.include_draws = boolean(v, "stats.include_draws");
    c.svg = boolean(v, "stats.svg");
    c.corpus_id = std::string(trim(value_of(v, "stats.corpus_id")));
    if (c.corpus_id.empty())
        c.corpus_id = c.store_dir.filename().empty() ? "corpus" : c.store_dir.filename().string();
    c.filter.require_both_elos = boolean(v, "stats.require_both_elos");
    c.filter.year_min = optional_integer(v, "stats.year_min");
    c.filter.year_max = optional_integer(v, "stats.year_max");
    c.filter.min_ply = optional_integer(v, "stats.min_ply");
    c.filter.require_known_result = boolean(v, "stats.require_known_result");
    if (c.filter.year_min && c.filter.year_max && *c.filter.year_min > *c.filter.year_max)
        throw ConfigError("stats.year_min is after stats.year_max");
    return c;
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const ConfigValues& flags, const EnvLookup& env)
{
    auto values = default_values();
    if (file) {
        if (!std::filesystem::exists(*file))
            throw ConfigError("config file not found: " + file->string());
        values = merge(std::move(values), read_config_file(*file));
    }
    values = merge(std::move(values), read_environment(env));
    values = merge(std::move(values), flags);
    return build_config(values);
}

std::vector<std::string> RunConfig::provenance_lines() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : effective)
        out.push_back(k + "=" + v);
    return out;
}

void require_inputs(const RunConfig& cfg, bool pgn, bool eco, bool workload)
{
    if (pgn) {
        if (cfg.pgn_inputs.empty())
            throw ConfigError("no PGN input given (paths.pgn)");
        for (const auto& p : cfg.pgn_inputs)
            if (!std::filesystem::is_regular_file(p))
                throw ConfigError("PGN input not found: " + p.string());
    }
    if (eco && !cfg.eco_table.empty() && !std::filesystem::is_regular_file(cfg.eco_table))
        throw ConfigError("ECO table not found: " + cfg.eco_table.string());
    if (workload && !std::filesystem::is_regular_file(cfg.workload))
        throw ConfigError("workload file not found: " + cfg.workload.string());
}

} // namespace chessan::config
