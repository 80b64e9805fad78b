#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace chessan {

enum class Color : std::uint8_t { White = 0, Black = 1 };

constexpr Color operator~(Color c) noexcept
{
    return c == Color::White ? Color::Black : Color::White;
}

constexpr int index_of(Color c) noexcept { return static_cast<int>(c); }

enum class PieceKind : std::uint8_t { Pawn = 0, Knight, Bishop, Rook, Queen, King };

inline constexpr int kPieceKindCount = 6;

constexpr int index_of(PieceKind k) noexcept { return static_cast<int>(k); }

struct Piece {
    Color color;
    PieceKind kind;

    friend constexpr bool operator==(Piece, Piece) = default;
};

/// FEN letter: uppercase for white, lowercase for black.
char to_fen_char(Piece p) noexcept;
std::optional<Piece> piece_from_fen_char(char c) noexcept;

/// Uppercase SAN letter for a kind ('P' for pawns, which SAN itself omits).
char kind_letter(PieceKind k) noexcept;
std::optional<PieceKind> kind_from_letter(char upper) noexcept;

/// Board square, a1 = 0 ... h8 = 63.
class Square {
public:
    constexpr Square() noexcept = default;
    constexpr explicit Square(int index) noexcept : index_(static_cast<std::uint8_t>(index)) {}

    static constexpr Square at(int file, int rank) noexcept { return Square(rank * 8 + file); }
    static std::optional<Square> parse(std::string_view text) noexcept;

    constexpr int index() const noexcept { return index_; }
    constexpr int file() const noexcept { return index_ & 7; }
    constexpr int rank() const noexcept { return index_ >> 3; }
    std::string name() const;

    friend constexpr auto operator<=>(Square, Square) = default;

private:
    std::uint8_t index_ = 0;
};

using Bitboard = std::uint64_t;

constexpr Bitboard bit(Square s) noexcept { return Bitboard{1} << s.index(); }

inline Square lowest_square(Bitboard b) noexcept { return Square(std::countr_zero(b)); }
inline Square highest_square(Bitboard b) noexcept { return Square(63 - std::countl_zero(b)); }

inline Square pop_lowest(Bitboard& b) noexcept
{
    const Square s = lowest_square(b);
    b &= b - 1;
    return s;
}

} // namespace chessan
