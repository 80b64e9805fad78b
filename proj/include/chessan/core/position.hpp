#pragma once

#include "chessan/core/square.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace chessan {

struct CastlingRights {
    bool white_king = false;
    bool white_queen = false;
    bool black_king = false;
    bool black_queen = false;

    friend constexpr bool operator==(const CastlingRights&, const CastlingRights&) = default;
};

/// Canonical 6-field FEN text. The identity used to deduplicate positions.
///
/// Construction does not validate; use `FenKey::parse` for untrusted text.
class FenKey {
public:
    FenKey() = default;
    explicit FenKey(std::string text) : text_(std::move(text)) {}

    /// Validates that `text` decodes and re-encodes to itself.
    static FenKey parse(const std::string& text);

    const std::string& str() const noexcept { return text_; }

    /// Placement, side, castling and en-passant fields only.
    std::string four_field_prefix() const;

    friend auto operator<=>(const FenKey&, const FenKey&) = default;

private:
    std::string text_;
};

enum class FenErrorKind { MalformedField, IllegalPlacement, InconsistentEpSquare };

class FenError : public std::runtime_error {
public:
    FenError(FenErrorKind kind, std::string field, const std::string& detail);

    FenErrorKind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

private:
    FenErrorKind kind_;
    std::string field_;
};

namespace detail {
struct PositionAccess;
}

/// Full board state. Immutable from the outside; successors come from
/// `apply_move` and instances from `decode_fen` / `initial_position`.
class Position {
public:
    std::optional<Piece> piece_at(Square s) const noexcept;
    Color side_to_move() const noexcept { return side_; }
    const CastlingRights& castling_rights() const noexcept { return castling_; }
    std::optional<Square> en_passant_target() const noexcept { return ep_; }
    int halfmove_clock() const noexcept { return halfmove_; }
    int fullmove_number() const noexcept { return fullmove_; }

    Bitboard occupied() const noexcept { return by_color_[0] | by_color_[1]; }
    Bitboard pieces(Color c) const noexcept { return by_color_[index_of(c)]; }
    Bitboard pieces(Color c, PieceKind k) const noexcept
    {
        return by_color_[index_of(c)] & by_kind_[index_of(k)];
    }
    Square king_square(Color c) const noexcept { return lowest_square(pieces(c, PieceKind::King)); }

    friend bool operator==(const Position&, const Position&) = default;

private:
    friend struct detail::PositionAccess;

    static constexpr std::int8_t kEmpty = -1;

    std::array<std::int8_t, 64> board_{};
    std::array<Bitboard, 2> by_color_{};
    std::array<Bitboard, kPieceKindCount> by_kind_{};
    Color side_ = Color::White;
    CastlingRights castling_{};
    std::optional<Square> ep_{};
    int halfmove_ = 0;
    int fullmove_ = 1;
};

Position initial_position();

/// Parses a 6-field FEN. Throws FenError naming the offending field.
Position decode_fen(const std::string& text);

FenKey encode_fen(const Position& pos);

} // namespace chessan

template <>
struct std::hash<chessan::FenKey> {
    std::size_t operator()(const chessan::FenKey& k) const noexcept
    {
        return std::hash<std::string>{}(k.str());
    }
};
