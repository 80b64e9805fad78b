#pragma once

#include "chessan/core/move.hpp"
#include "chessan/core/position.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace chessan {

class IllegalMoveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully legal moves under FIDE rules (no check is left unanswered).
std::vector<Move> legal_moves(const Position& pos);

bool has_legal_move(const Position& pos);

bool is_attacked(const Position& pos, Square s, Color by);
bool in_check(const Position& pos);
bool is_checkmate(const Position& pos);
bool is_stalemate(const Position& pos);

/// Successor position and its classification. Throws IllegalMoveError when
/// `m` is not in legal_moves(pos).
std::pair<Position, MoveKind> apply_move(const Position& pos, const Move& m);

/// Leaf-node count of the legal move tree.
std::uint64_t perft(const Position& pos, int depth);

} // namespace chessan
