#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Slow, straightforward move generator used only to check chess_core.
namespace oracle {

struct Board {
    char sq[8][8]; // [rank][file], '.' when empty
    bool white_to_move = true;
    bool castle[4] = {}; // K Q k q
    int ep_file = -1;
};

Board parse_fen(const std::string& fen);

/// UCI text of every legal move, unsorted.
std::vector<std::string> legal_moves(const Board& b);
Board play(const Board& b, const std::string& uci);
bool king_attacked(const Board& b, bool white_king);

std::uint64_t perft(const Board& b, int depth);

} // namespace oracle
