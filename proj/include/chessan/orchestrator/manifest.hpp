#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace chessan::orchestrator {

enum class ShardStatus { Pending, Running, Done, Failed };

std::string_view to_string(ShardStatus s) noexcept;
ShardStatus shard_status_from_string(std::string_view s);

/// A contiguous line range [start, end) of the workload file.
struct ShardManifest {
    static constexpr int kVersion = 1;

    std::string shard_id;
    std::string workload;
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    std::string engine_config;
    ShardStatus status = ShardStatus::Pending;
    std::uint64_t evaluated = 0;
    std::uint64_t skipped_existing = 0;
    std::uint64_t failed_positions = 0;
    /// Summed engine wall time of evaluated positions.
    double busy_seconds = 0;
    /// Wall time of the last invocation.
    double elapsed_seconds = 0;
    int pool_size = 0;
    std::string updated_at;

    std::uint64_t size() const noexcept { return end - start; }
    std::uint64_t accounted() const noexcept { return evaluated + skipped_existing + failed_positions; }

    friend bool operator==(const ShardManifest&, const ShardManifest&) = default;
};

/// Resume state of one shard. `completed` counts the contiguous prefix of
/// finished lines; finished lines past a gap wait in `out_of_order`.
struct Checkpoint {
    static constexpr int kVersion = 1;

    std::string shard_id;
    std::uint64_t start = 0;
    std::uint64_t completed = 0;
    std::set<std::uint64_t> out_of_order;
    std::map<std::uint64_t, int> attempts; // line index -> engine attempts so far

    /// Marks line `index` finished and advances the prefix where possible.
    void mark_done(std::uint64_t index);
    /// Highest line index of the contiguous prefix, if any.
    std::optional<std::uint64_t> highest_contiguous() const noexcept;

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

std::string manifest_to_json(const ShardManifest& m);
ShardManifest manifest_from_json(std::string_view text);
void save_manifest(const std::filesystem::path& path, const ShardManifest& m);
ShardManifest load_manifest(const std::filesystem::path& path);

std::string checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(std::string_view text);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
/// Missing file -> fresh checkpoint for the shard.
Checkpoint load_checkpoint(const std::filesystem::path& path, const ShardManifest& m);

std::uint64_t count_workload_lines(const std::filesystem::path& workload);

/// ceil(n / shard_size) manifests covering [0, n) in order.
std::vector<ShardManifest> make_shards(std::uint64_t n_positions, std::uint64_t shard_size, const std::string& workload,
                                       const std::string& engine_config = {});
std::vector<ShardManifest> make_shards(const std::filesystem::path& workload, std::uint64_t shard_size,
                                       const std::string& engine_config = {});

/// <dir>/<shard_id>.json and <dir>/<shard_id>.checkpoint.json
std::filesystem::path manifest_path(const std::filesystem::path& dir, const std::string& shard_id);
std::filesystem::path checkpoint_path(const std::filesystem::path& dir, const std::string& shard_id);
void write_shards(const std::filesystem::path& dir, const std::vector<ShardManifest>& shards);
/// Manifests in the directory, sorted by shard id.
std::vector<ShardManifest> load_all_manifests(const std::filesystem::path& dir);

/// Workload lines [start, end).
std::vector<std::string> read_workload_range(const std::filesystem::path& workload, std::uint64_t start,
                                             std::uint64_t end);

} // namespace chessan::orchestrator
