#include "chessan/core/square.hpp"

namespace chessan {

namespace {
constexpr std::string_view kKindLetters = "PNBRQK";
}

char to_fen_char(Piece p) noexcept
{
    const char upper = kKindLetters[index_of(p.kind)];
    return p.color == Color::White ? upper : static_cast<char>(upper - 'A' + 'a');
}

std::optional<Piece> piece_from_fen_char(char c) noexcept
{
    const bool white = c >= 'A' && c <= 'Z';
    const char upper = white ? c : static_cast<char>(c - 'a' + 'A');
    const auto kind = kind_from_letter(upper);
    if (!kind || (!white && !(c >= 'a' && c <= 'z')))
        return std::nullopt;
    return Piece{white ? Color::White : Color::Black, *kind};
}

char kind_letter(PieceKind k) noexcept { return kKindLetters[index_of(k)]; }

std::optional<PieceKind> kind_from_letter(char upper) noexcept
{
    const auto pos = kKindLetters.find(upper);
    if (pos == std::string_view::npos)
        return std::nullopt;
    return static_cast<PieceKind>(pos);
}

std::optional<Square> Square::parse(std::string_view text) noexcept
{
    if (text.size() != 2 || text[0] < 'a' || text[0] > 'h' || text[1] < '1' || text[1] > '8')
        return std::nullopt;
    return Square::at(text[0] - 'a', text[1] - '1');
}

std::string Square::name() const
{
    return {static_cast<char>('a' + file()), static_cast<char>('1' + rank())};
}

} // namespace chessan
