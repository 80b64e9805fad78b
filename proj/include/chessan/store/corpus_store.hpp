#pragma once

#include "chessan/core/position.hpp"
#include "chessan/engine/evaluation.hpp"
#include "chessan/engine/score.hpp"
#include "chessan/game_record.hpp"
#include "chessan/stats/game_summary.hpp"
#include "chessan/util/hash.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

struct sqlite3;

namespace chessan::store {

enum class StoreErrorKind { Unreachable, WriteFailure, ReadFailure, UnknownGame, LayoutMismatch };

class StoreError : public std::runtime_error {
public:
    StoreError(StoreErrorKind kind, const std::string& detail);
    StoreErrorKind kind() const noexcept { return kind_; }

private:
    StoreErrorKind kind_;
};

enum class PutResult { Inserted, AlreadyPresent };

struct GamePosition {
    int ply_index = 0;
    FenKey fen;
    bool theory = false;
};

struct StoredGame {
    GameRecord record;
    Digest128 dedup_key;
    bool corrupt = false;
    std::string corrupt_detail;
};

struct FailureRecord {
    FenKey fen;
    std::string engine;
    int depth = 0;
    int attempts = 0;
    std::string kind;
    std::string detail;
    std::string raw_log;
};

struct TrajectoryPoint {
    int ply_index = 0;
    FenKey fen;
    std::optional<engine::Score> score; // white perspective
    bool theory = false;
};

struct ScoreTrajectory {
    std::string game_id;
    std::vector<TrajectoryPoint> points;
};

/// Directory-backed corpus store: corpus.sqlite holds games, players,
/// positions and evaluations; raw engine logs live gzip-compressed under
/// logs/, one file per (fen, engine, depth).
///
/// One writer per store; concurrent readers see committed state only.
class CorpusStore {
public:
    static constexpr int kLayoutVersion = 1;

    /// Opens or creates the store. Throws StoreError(Unreachable) if the
    /// directory cannot be created or the database cannot be opened.
    explicit CorpusStore(const std::filesystem::path& dir, bool create_if_missing = true);
    ~CorpusStore();
    CorpusStore(const CorpusStore&) = delete;
    CorpusStore& operator=(const CorpusStore&) = delete;

    const std::filesystem::path& directory() const noexcept { return dir_; }

    // games

    std::vector<Digest128> game_keys() const;
    /// Inserts a game with its per-ply positions and summary. Returns
    /// AlreadyPresent when the dedup key is already stored.
    PutResult put_game(const GameRecord& game, const Digest128& dedup_key, const std::vector<FenKey>& ply_fens,
                       const std::optional<stats::GameSummary>& summary, const std::string& corrupt_detail = {});
    std::optional<StoredGame> get_game(const std::string& game_id) const;
    std::uint64_t game_count() const;
    std::uint64_t player_count() const;

    /// Games in insertion order.
    void for_each_game(const std::function<void(const StoredGame&)>& fn) const;
    /// Non-corrupt games in insertion order, with their positions.
    void for_each_game_positions(
        const std::function<void(const std::string& game_id, const std::vector<GamePosition>&)>& fn) const;
    std::vector<GamePosition> game_positions(const std::string& game_id) const;
    /// Replaces the theory flags of one game (flags[i] belongs to ply i + 1).
    void set_theory_flags(const std::string& game_id, const std::vector<bool>& flags);
    void set_theory_flags_bulk(const std::vector<std::pair<std::string, std::vector<bool>>>& batch);

    /// Summaries of non-corrupt games, in insertion order.
    std::vector<stats::GameSummary> summaries() const;

    // evaluations

    PutResult put_evaluation(const engine::EvaluationRecord& rec);
    /// All ranks of one search in one transaction; raw_log of the first
    /// record is stored once for the batch.
    std::vector<PutResult> put_evaluations(const std::vector<engine::EvaluationRecord>& recs);
    std::optional<engine::EvaluationRecord> get_evaluation(const FenKey& fen, const std::string& engine, int depth,
                                                           int rank, bool with_log = true) const;
    /// Number of stored ranks in [1, max_rank] for (fen, engine, depth), and
    /// whether a terminal record is among them.
    std::pair<int, bool> evaluation_coverage(const FenKey& fen, const std::string& engine, int depth,
                                             int max_rank) const;
    std::uint64_t evaluation_count() const;
    /// Rows as (fen, engine, depth, rank) in key order.
    std::vector<std::tuple<std::string, std::string, int, int>> evaluation_keys() const;
    /// Distinct (engine identity, depth) pairs with stored evaluations.
    std::vector<std::pair<std::string, int>> engine_depths() const;

    void record_failure(const FailureRecord& f);
    std::vector<FailureRecord> failures() const;

    ScoreTrajectory score_trajectory(const std::string& game_id, const std::string& engine, int depth) const;

    /// fen, engine, depth, rank, score_kind, score_value, pv, nodes, wall_ms
    void export_evaluations_csv(std::ostream& out) const;

    std::filesystem::path log_path(const FenKey& fen, const std::string& engine, int depth) const;

private:
    void exec(const char* sql) const;
    std::string read_log(const std::string& relative) const;

    std::filesystem::path dir_;
    sqlite3* db_ = nullptr;
    mutable std::recursive_mutex mu_;
};

} // namespace chessan::store
