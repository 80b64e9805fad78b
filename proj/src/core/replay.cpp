#include "chessan/core/replay.hpp"

#include "chessan/core/movegen.hpp"
#include "chessan/core/san.hpp"

#include <fmt/format.h>

namespace chessan {

ReplayError::ReplayError(int ply_index, const std::string& detail)
    : std::runtime_error(fmt::format("illegal-move-at-ply({}): {}", ply_index, detail)), ply_(ply_index)
{
}

std::vector<PlyRecord> replay_moves(std::span<const std::string> san_moves)
{
    std::vector<PlyRecord> out;
    out.reserve(san_moves.size());
    Position pos = initial_position();
    int ply = 0;
    for (const auto& san : san_moves) {
        ++ply;
        try {
            const Move m = parse_san(pos, san);
            auto [next, kind] = apply_move(pos, m);
            pos = std::move(next);
            out.push_back({ply, encode_fen(pos), kind, pos});
        } catch (const SanError& e) {
            throw ReplayError(ply, e.what());
        }
    }
    return out;
}

std::vector<PlyRecord> replay_game(const GameRecord& game) { return replay_moves(game.san_moves); }

} // namespace chessan
