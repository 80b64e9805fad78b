#include "chessan/orchestrator/manifest.hpp"

#include "chessan/util/text.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace chessan::orchestrator {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string_view to_string(ShardStatus s) noexcept
{
    switch (s) {
    case ShardStatus::Pending: return "pending";
    case ShardStatus::Running: return "running";
    case ShardStatus::Done: return "done";
    case ShardStatus::Failed: return "failed";
    }
    return "pending";
}

ShardStatus shard_status_from_string(std::string_view s)
{
    if (s == "pending") return ShardStatus::Pending;
    if (s == "running") return ShardStatus::Running;
    if (s == "done") return ShardStatus::Done;
    if (s == "failed") return ShardStatus::Failed;
    throw std::invalid_argument(fmt::format("unknown shard status '{}'", s));
}

void Checkpoint::mark_done(std::uint64_t index)
{
    if (index < start + completed)
        return;
    out_of_order.insert(index);
    while (!out_of_order.empty() && *out_of_order.begin() == start + completed) {
        out_of_order.erase(out_of_order.begin());
        ++completed;
    }
}

std::optional<std::uint64_t> Checkpoint::highest_contiguous() const noexcept
{
    if (completed == 0)
        return std::nullopt;
    return start + completed - 1;
}

std::string manifest_to_json(const ShardManifest& m)
{
    ordered_json j;
    j["format"] = "chessan-shard-manifest";
    j["version"] = ShardManifest::kVersion;
    j["shard_id"] = m.shard_id;
    j["workload"] = m.workload;
    j["start"] = m.start;
    j["end"] = m.end;
    j["engine_config"] = m.engine_config;
    j["status"] = std::string(to_string(m.status));
    j["evaluated"] = m.evaluated;
    j["skipped_existing"] = m.skipped_existing;
    j["failed_positions"] = m.failed_positions;
    j["busy_seconds"] = m.busy_seconds;
    j["elapsed_seconds"] = m.elapsed_seconds;
    j["pool_size"] = m.pool_size;
    j["updated_at"] = m.updated_at;
    return j.dump(2) + "\n";
}

ShardManifest manifest_from_json(std::string_view text)
{
    const auto j = ordered_json::parse(text);
    if (j.value("format", "") != "chessan-shard-manifest")
        throw std::runtime_error("not a shard manifest");
    if (j.at("version").get<int>() != ShardManifest::kVersion)
        throw std::runtime_error(fmt::format("unsupported manifest version {}", j.at("version").get<int>()));
    ShardManifest m;
    m.shard_id = j.at("shard_id").get<std::string>();
    m.workload = j.at("workload").get<std::string>();
    m.start = j.at("start").get<std::uint64_t>();
    m.end = j.at("end").get<std::uint64_t>();
    m.engine_config = j.value("engine_config", "");
    m.status = shard_status_from_string(j.at("status").get<std::string>());
    m.evaluated = j.value("evaluated", std::uint64_t{0});
    m.skipped_existing = j.value("skipped_existing", std::uint64_t{0});
    m.failed_positions = j.value("failed_positions", std::uint64_t{0});
    m.busy_seconds = j.value("busy_seconds", 0.0);
    m.elapsed_seconds = j.value("elapsed_seconds", 0.0);
    m.pool_size = j.value("pool_size", 0);
    m.updated_at = j.value("updated_at", "");
    if (m.end <= m.start)
        throw std::runtime_error("manifest range is empty");
    return m;
}

void save_manifest(const fs::path& path, const ShardManifest& m) { write_file_atomically(path, manifest_to_json(m)); }

ShardManifest load_manifest(const fs::path& path) { return manifest_from_json(read_file(path)); }

std::string checkpoint_to_json(const Checkpoint& c)
{
    ordered_json j;
    j["format"] = "chessan-checkpoint";
    j["version"] = Checkpoint::kVersion;
    j["shard_id"] = c.shard_id;
    j["start"] = c.start;
    j["completed"] = c.completed;
    j["out_of_order"] = c.out_of_order;
    ordered_json attempts = ordered_json::object();
    for (const auto& [line, n] : c.attempts)
        attempts[std::to_string(line)] = n;
    j["attempts"] = attempts;
    return j.dump() + "\n";
}

Checkpoint checkpoint_from_json(std::string_view text)
{
    const auto j = ordered_json::parse(text);
    if (j.value("format", "") != "chessan-checkpoint")
        throw std::runtime_error("not a checkpoint");
    if (j.at("version").get<int>() != Checkpoint::kVersion)
        throw std::runtime_error("unsupported checkpoint version");
    Checkpoint c;
    c.shard_id = j.at("shard_id").get<std::string>();
    c.start = j.at("start").get<std::uint64_t>();
    c.completed = j.at("completed").get<std::uint64_t>();
    for (const auto& v : j.at("out_of_order"))
        c.out_of_order.insert(v.get<std::uint64_t>());
    for (const auto& [k, v] : j.at("attempts").items())
        c.attempts[std::stoull(k)] = v.get<int>();
    return c;
}

void save_checkpoint(const fs::path& path, const Checkpoint& c) { write_file_atomically(path, checkpoint_to_json(c)); }

Checkpoint load_checkpoint(const fs::path& path, const ShardManifest& m)
{
    if (!path.empty() && fs::exists(path)) {
        auto c = checkpoint_from_json(read_file(path));
        if (c.shard_id == m.shard_id && c.start == m.start)
            return c;
    }
    Checkpoint c;
    c.shard_id = m.shard_id;
    c.start = m.start;
    return c;
}

std::uint64_t count_workload_lines(const fs::path& workload)
{
    std::ifstream in(workload);
    if (!in)
        throw std::runtime_error("cannot open workload " + workload.string());
    std::uint64_t n = 0;
    std::string line;
    while (std::getline(in, line))
        if (!trim(line).empty())
            ++n;
    return n;
}

std::vector<ShardManifest> make_shards(std::uint64_t n_positions, std::uint64_t shard_size, const std::string& workload,
                                       const std::string& engine_config)
{
    if (shard_size == 0)
        throw std::invalid_argument("shard size must be at least 1");
    std::vector<ShardManifest> out;
    const std::uint64_t count = (n_positions + shard_size - 1) / shard_size;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        ShardManifest m;
        m.shard_id = fmt::format("shard-{:05d}", i);
        m.workload = workload;
        m.start = i * shard_size;
        m.end = std::min(n_positions, m.start + shard_size);
        m.engine_config = engine_config;
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<ShardManifest> make_shards(const fs::path& workload, std::uint64_t shard_size,
                                       const std::string& engine_config)
{
    return make_shards(count_workload_lines(workload), shard_size, workload.string(), engine_config);
}

fs::path manifest_path(const fs::path& dir, const std::string& shard_id) { return dir / (shard_id + ".json"); }

fs::path checkpoint_path(const fs::path& dir, const std::string& shard_id)
{
    return dir / (shard_id + ".checkpoint.json");
}

void write_shards(const fs::path& dir, const std::vector<ShardManifest>& shards)
{
    fs::create_directories(dir);
    for (const auto& m : shards) {
        const auto p = manifest_path(dir, m.shard_id);
        if (fs::exists(p)) {
            const auto existing = load_manifest(p);
            if (existing.start == m.start && existing.end == m.end && existing.workload == m.workload)
                continue;
            fs::remove(checkpoint_path(dir, m.shard_id));
        }
        save_manifest(p, m);
    }
}

std::vector<ShardManifest> load_all_manifests(const fs::path& dir)
{
    std::vector<ShardManifest> out;
    if (!fs::exists(dir))
        return out;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.starts_with("shard-") && name.ends_with(".json") && !name.ends_with(".checkpoint.json"))
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        out.push_back(load_manifest(f));
    return out;
}

std::vector<std::string> read_workload_range(const fs::path& workload, std::uint64_t start, std::uint64_t end)
{
    std::ifstream in(workload);
    if (!in)
        throw std::runtime_error("cannot open workload " + workload.string());
    std::vector<std::string> out;
    std::string line;
    std::uint64_t index = 0;
    while (index < end && std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty())
            continue;
        if (index >= start)
            out.emplace_back(t);
        ++index;
    }
    return out;
}

} // namespace chessan::orchestrator
