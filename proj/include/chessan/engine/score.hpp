#pragma once

#include "chessan/core/square.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace chessan::engine {

enum class ScoreKind {
    Centipawns,
    MateIn,     // signed moves; positive = the perspective side mates
    Checkmated, // the position is already mate; value -1 = perspective side is mated, +1 = its opponent is
};

enum class Perspective { SideToMove, White };

std::string_view to_string(ScoreKind k) noexcept;
std::optional<ScoreKind> score_kind_from_string(std::string_view s) noexcept;

struct Score {
    ScoreKind kind = ScoreKind::Centipawns;
    int value = 0;
    Perspective perspective = Perspective::SideToMove;

    static Score centipawns(int cp) { return {ScoreKind::Centipawns, cp, Perspective::SideToMove}; }
    static Score mate_in(int moves) { return {ScoreKind::MateIn, moves, Perspective::SideToMove}; }
    static Score checkmated() { return {ScoreKind::Checkmated, -1, Perspective::SideToMove}; }

    /// Re-expresses a side-to-move score from white's point of view.
    /// Scores already in white perspective are returned unchanged.
    Score to_white(Color side_to_move) const noexcept;

    /// "cp 34", "mate -3", "mated"
    std::string to_uci_text() const;

    friend bool operator==(const Score&, const Score&) = default;
};

} // namespace chessan::engine
