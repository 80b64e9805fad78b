#pragma once

#include "chessan/core/position.hpp"
#include "chessan/positions/trace.hpp"

#include <array>
#include <atomic>
#include <cstdint>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>

namespace chessan::positions {

enum class KeyMode {
    SixField,  // clocks included
    FourField, // transposition level: placement, side, castling, en passant
};

std::string_view to_string(KeyMode m) noexcept;
KeyMode key_mode_from_string(std::string_view s);

/// Exact set of position keys, split into independently locked shards.
class PositionSet {
public:
    explicit PositionSet(KeyMode mode = KeyMode::SixField);

    /// Counts the sighting and returns true if the key was new.
    bool insert_if_absent(const FenKey& fen);
    bool contains(const FenKey& fen) const;

    std::uint64_t unique_count() const noexcept { return unique_.load(); }
    std::uint64_t total_seen_count() const noexcept { return seen_.load(); }
    KeyMode mode() const noexcept { return mode_; }

    std::string key_of(const FenKey& fen) const;

    /// Text snapshot: "chessan-position-set <version> <mode> <count>", then
    /// one key per line in sorted order. Sighting counts are not kept.
    static constexpr int kSnapshotVersion = 1;
    void write_snapshot(std::ostream& out) const;
    /// Throws std::runtime_error on a bad header or a count mismatch.
    static std::unique_ptr<PositionSet> read_snapshot(std::istream& in);

private:
    static constexpr std::size_t kShards = 64;
    struct Shard {
        mutable std::mutex mu;
        std::unordered_set<std::string> keys;
    };

    KeyMode mode_;
    std::array<Shard, kShards> shards_;
    std::atomic<std::uint64_t> unique_{0};
    std::atomic<std::uint64_t> seen_{0};
};

class WorkloadWriteError : public std::runtime_error {
public:
    WorkloadWriteError(std::uint64_t durable_offset, const std::string& detail);
    std::uint64_t last_durable_offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

struct PositionDedupReport {
    std::uint64_t games = 0;
    std::uint64_t plies_seen = 0;       // every ply of every traced game
    std::uint64_t theory_plies = 0;     // removed by the opening filter
    std::uint64_t non_theory_plies = 0; // total_seen_count of the set
    std::uint64_t duplicate_plies = 0;  // removed by position dedup
    std::uint64_t unique_positions = 0; // lines in the workload

    std::string summary_line() const;
};

/// Feeds traces into a PositionSet and appends each newly seen non-theory
/// position to the workload stream, one canonical FEN per line, in
/// first-seen order.
class PositionDeduper {
public:
    PositionDeduper(PositionSet& set, std::ostream& workload);

    void add(const GamePositionTrace& trace);
    /// Flushes the stream; throws WorkloadWriteError on failure.
    void finish();

    const PositionDedupReport& report() const noexcept { return report_; }
    std::uint64_t durable_offset() const noexcept { return durable_; }

private:
    void flush_or_throw();

    PositionSet& set_;
    std::ostream& out_;
    PositionDedupReport report_;
    std::uint64_t written_ = 0;
    std::uint64_t durable_ = 0;
    std::uint64_t since_flush_ = 0;
};

} // namespace chessan::positions
