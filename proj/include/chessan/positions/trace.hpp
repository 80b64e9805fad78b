#pragma once

#include "chessan/core/position.hpp"
#include "chessan/core/replay.hpp"
#include "chessan/game_record.hpp"
#include "chessan/positions/eco.hpp"

#include <span>
#include <string>
#include <vector>

namespace chessan::positions {

struct TracePly {
    int ply_index = 0;
    FenKey fen;
    bool theory = false;

    friend bool operator==(const TracePly&, const TracePly&) = default;
};

struct GamePositionTrace {
    std::string game_id;
    std::vector<TracePly> plies;

    std::size_t theory_prefix_length() const noexcept;
};

/// theory(i) holds iff every position after plies 1..i is in the book.
/// Throws ReplayError if the game does not replay.
GamePositionTrace trace_game(const GameRecord& game, const EcoIndex& eco);
GamePositionTrace trace_plies(const std::string& game_id, std::span<const PlyRecord> plies, const EcoIndex& eco);
/// fens[i] is the position after ply i + 1.
GamePositionTrace trace_fens(const std::string& game_id, std::span<const FenKey> fens, const EcoIndex& eco);

} // namespace chessan::positions
