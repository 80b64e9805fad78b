#include "chessan/stats/game_summary.hpp"

#include "chessan/core/san.hpp"

namespace chessan::stats {

GameSummary summarize(const GameRecord& game, std::span<const PlyRecord> plies)
{
    GameSummary s;
    s.game_id = game.game_id;
    if (game.date)
        s.year = game.date->year;
    s.white_elo = game.white_elo;
    s.black_elo = game.black_elo;
    s.result = game.result;
    s.plies = static_cast<int>(plies.size());
    if (!game.san_moves.empty())
        s.first_move = strip_annotation_glyphs(game.san_moves.front());
    for (const auto& p : plies) {
        const auto& k = p.kind;
        s.captures += k.is_capture;
        s.promotions += k.is_promotion();
        s.castles_kingside += k.is_castle_kingside;
        s.castles_queenside += k.is_castle_queenside;
        ++s.piece_moves[index_of(k.moved_piece)];
    }
    s.final_checkmate = !plies.empty() && plies.back().kind.gives_checkmate;
    return s;
}

} // namespace chessan::stats
