#pragma once

#include "chessan/core/move.hpp"
#include "chessan/core/position.hpp"
#include "chessan/game_record.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chessan {

struct PlyRecord {
    int ply_index = 0; // 1-based; the position is the one AFTER this ply
    FenKey fen;
    MoveKind kind;
    Position position;
};

/// Raised when a game's movetext stops matching the rules.
class ReplayError : public std::runtime_error {
public:
    ReplayError(int ply_index, const std::string& detail);
    int ply_index() const noexcept { return ply_; }

private:
    int ply_;
};

std::vector<PlyRecord> replay_moves(std::span<const std::string> san_moves);
std::vector<PlyRecord> replay_game(const GameRecord& game);

} // namespace chessan
