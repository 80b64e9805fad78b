#pragma once

#include "chessan/core/square.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace chessan {

struct Move {
    Square from;
    Square to;
    std::optional<PieceKind> promotion;

    friend constexpr bool operator==(const Move&, const Move&) = default;
};

/// Per-ply classification consumed by the corpus statistics.
struct MoveKind {
    PieceKind moved_piece = PieceKind::Pawn;
    bool is_capture = false;
    std::optional<PieceKind> promoted_to;
    bool is_castle_kingside = false;
    bool is_castle_queenside = false;
    bool gives_check = false;
    bool gives_checkmate = false;

    bool is_promotion() const noexcept { return promoted_to.has_value(); }

    friend bool operator==(const MoveKind&, const MoveKind&) = default;
};

/// UCI long algebraic text, e.g. "e2e4" or "e7e8q".
std::string to_uci(const Move& m);
std::optional<Move> parse_uci(std::string_view text);

} // namespace chessan
