#pragma once

#include "chessan/core/replay.hpp"
#include "chessan/core/square.hpp"
#include "chessan/game_record.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>

namespace chessan::stats {

/// Per-game facts every corpus statistic is computed from.
struct GameSummary {
    std::string game_id;
    std::optional<int> year;
    std::optional<int> white_elo;
    std::optional<int> black_elo;
    GameResult result = GameResult::Unknown;
    int plies = 0;
    std::string first_move; // empty for games without moves
    bool final_checkmate = false;
    int captures = 0;
    int promotions = 0;
    int castles_kingside = 0;
    int castles_queenside = 0;
    std::array<int, kPieceKindCount> piece_moves{}; // indexed by PieceKind

    friend bool operator==(const GameSummary&, const GameSummary&) = default;
};

/// `plies` must be the replay of `game`.
GameSummary summarize(const GameRecord& game, std::span<const PlyRecord> plies);

} // namespace chessan::stats
