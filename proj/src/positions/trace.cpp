#include "chessan/positions/trace.hpp"

namespace chessan::positions {

std::size_t GamePositionTrace::theory_prefix_length() const noexcept
{
    std::size_t n = 0;
    while (n < plies.size() && plies[n].theory)
        ++n;
    return n;
}

GamePositionTrace trace_plies(const std::string& game_id, std::span<const PlyRecord> plies, const EcoIndex& eco)
{
    std::vector<FenKey> fens;
    fens.reserve(plies.size());
    for (const auto& p : plies)
        fens.push_back(p.fen);
    return trace_fens(game_id, fens, eco);
}

GamePositionTrace trace_fens(const std::string& game_id, std::span<const FenKey> fens, const EcoIndex& eco)
{
    GamePositionTrace t;
    t.game_id = game_id;
    t.plies.reserve(fens.size());
    bool in_book = !eco.empty();
    for (std::size_t i = 0; i < fens.size(); ++i) {
        in_book = in_book && eco.contains(fens[i]);
        t.plies.push_back({static_cast<int>(i + 1), fens[i], in_book});
    }
    return t;
}

GamePositionTrace trace_game(const GameRecord& game, const EcoIndex& eco)
{
    const auto plies = replay_game(game);
    return trace_plies(game.game_id, plies, eco);
}

} // namespace chessan::positions
