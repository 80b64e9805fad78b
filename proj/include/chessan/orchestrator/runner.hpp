#pragma once

#include "chessan/engine/session.hpp"
#include "chessan/orchestrator/cost.hpp"
#include "chessan/orchestrator/manifest.hpp"
#include "chessan/store/corpus_store.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chessan::orchestrator {

inline constexpr int kExitDone = 0;
inline constexpr int kExitShardFailed = 2;
inline constexpr int kExitStoreUnreachable = 3;

struct RunOptions {
    int pool_size = 1;
    int retry_limit = 2; // extra attempts after the first
    /// Consecutive engine failures after which a worker gives up.
    int worker_failure_budget = 6;
    std::filesystem::path manifest_file;   // rewritten with status and counts when set
    std::filesystem::path checkpoint_file; // rewritten after every finished line when set
    std::function<void(const std::string&)> on_event;
};

struct RunResult {
    ShardManifest manifest;
    int exit_code = kExitDone;
    std::string message;
};

/// Evaluates every line of the shard not already in the store. Each record
/// batch is durably stored before the checkpoint advances.
RunResult run_shard(ShardManifest manifest, const RunOptions& opt, store::CorpusStore& store,
                    const engine::EngineConfig& cfg);

struct ProgressSummary {
    std::uint64_t shards = 0;
    std::uint64_t pending = 0, running = 0, done = 0, failed = 0;
    std::uint64_t positions = 0;
    std::uint64_t evaluated = 0, skipped_existing = 0, failed_positions = 0;
    double percent_complete = 0;
    /// positions per second of engine wall time across the pool
    std::optional<double> throughput;
    std::optional<double> mean_secs_per_position;
    int sessions = 1;
    std::optional<double> eta_seconds; // absent when nothing has been measured

    std::string summary_line() const;
    std::string to_text() const;
    std::string to_csv() const;
};

/// `sessions` overrides the pool size recorded in the manifests.
ProgressSummary run_status(const std::vector<ShardManifest>& manifests, std::optional<int> sessions = std::nullopt);

} // namespace chessan::orchestrator
