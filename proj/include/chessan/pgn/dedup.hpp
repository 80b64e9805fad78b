#pragma once

#include "chessan/core/replay.hpp"
#include "chessan/game_record.hpp"
#include "chessan/pgn/reader.hpp"
#include "chessan/util/hash.hpp"

#include <cstdint>
#include <functional>
#include <istream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace chessan::pgn {

/// Case-folds, collapses whitespace and drops trailing titles such as
/// "GM" or a parenthesised rating, so "Klip, H (2305)" == "klip, h".
std::string normalize_player_name(std::string_view name);

/// Digest of the mainline with check and mate suffixes removed.
Digest128 moves_digest(const std::vector<std::string>& san_moves);

/// Duplicate class of a game: normalized names, result and moves digest.
/// Date, event and site are deliberately not part of the key.
Digest128 dedup_key(const GameRecord& game);

struct IngestReport {
    std::uint64_t games_read = 0;
    std::uint64_t games_kept = 0;
    std::uint64_t duplicates_removed = 0;
    std::uint64_t parse_failures = 0;
    std::uint64_t illegal_replay_failures = 0;
    std::vector<std::string> diagnostics;

    bool balanced() const noexcept { return games_kept + duplicates_removed + parse_failures == games_read; }
    void merge(const IngestReport& other);

    std::string summary_line() const;
    std::string to_text() const;
    std::string to_csv() const;
};

/// Shared duplicate-key set; insert_if_absent is serialized.
class GameDeduplicator {
public:
    bool insert_if_absent(const Digest128& key);
    bool contains(const Digest128& key) const;
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::unordered_set<Digest128> keys_;
};

struct DedupResult {
    std::vector<GameRecord> kept;
    IngestReport report;
};

/// Keeps the first game of every duplicate class, in input order.
DedupResult dedup_games(const std::vector<GameRecord>& games);

/// A game that survived parsing and dedup. Corrupt games fail replay; they
/// are retained for header statistics but contribute no positions.
struct IngestedGame {
    GameRecord game;
    Digest128 key;
    std::vector<PlyRecord> plies;
    std::optional<int> corrupt_at_ply;
    std::string corrupt_detail;
};

/// parse -> dedup -> replay gate, streaming one game at a time.
class IngestPipeline {
public:
    using Sink = std::function<void(IngestedGame&&)>;

    IngestPipeline(GameDeduplicator& dedup, Sink sink);

    void consume(std::istream& in, const std::string& source_name);
    void consume_record(GameRecord&& game);
    const IngestReport& report() const noexcept { return report_; }

private:
    void note(std::string diagnostic);

    GameDeduplicator& dedup_;
    Sink sink_;
    IngestReport report_;
};

} // namespace chessan::pgn
