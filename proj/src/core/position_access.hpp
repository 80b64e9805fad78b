#pragma once

// Mutation primitives for Position, private to the rules kernel.

#include "chessan/core/position.hpp"

namespace chessan::detail {

struct PositionAccess {
    static Position empty()
    {
        Position p;
        p.board_.fill(Position::kEmpty);
        return p;
    }

    static void put(Position& p, Square s, Piece piece)
    {
        p.board_[s.index()] = static_cast<std::int8_t>(index_of(piece.color) * kPieceKindCount + index_of(piece.kind));
        p.by_color_[index_of(piece.color)] |= bit(s);
        p.by_kind_[index_of(piece.kind)] |= bit(s);
    }

    static void remove(Position& p, Square s)
    {
        const auto code = p.board_[s.index()];
        if (code == Position::kEmpty)
            return;
        p.board_[s.index()] = Position::kEmpty;
        p.by_color_[code / kPieceKindCount] &= ~bit(s);
        p.by_kind_[code % kPieceKindCount] &= ~bit(s);
    }

    static void set_side(Position& p, Color c) { p.side_ = c; }
    static CastlingRights& castling(Position& p) { return p.castling_; }
    static void set_ep(Position& p, std::optional<Square> s) { p.ep_ = s; }
    static void set_halfmove(Position& p, int v) { p.halfmove_ = v; }
    static void set_fullmove(Position& p, int v) { p.fullmove_ = v; }
};

} // namespace chessan::detail
