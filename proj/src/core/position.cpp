#include "chessan/core/position.hpp"

#include "position_access.hpp"

#include <fmt/format.h>

#include <charconv>
#include <string_view>
#include <vector>

namespace chessan {

using detail::PositionAccess;

namespace {

constexpr std::string_view kStartFen = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

std::string_view error_name(FenErrorKind k)
{
    switch (k) {
    case FenErrorKind::MalformedField: return "malformed-field";
    case FenErrorKind::IllegalPlacement: return "illegal-placement";
    case FenErrorKind::InconsistentEpSquare: return "inconsistent-ep-square";
    }
    return "fen-error";
}

std::vector<std::string_view> split_fields(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find(' ', start);
        if (end == std::string_view::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::optional<int> parse_count(std::string_view s)
{
    if (s.empty() || s.size() > 9)
        return std::nullopt;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

[[noreturn]] void fail(FenErrorKind kind, const char* field, const std::string& detail)
{
    throw FenError(kind, field, detail);
}

void parse_placement(Position& pos, std::string_view field)
{
    int rank = 7;
    int file = 0;
    for (const char c : field) {
        if (c == '/') {
            if (file != 8 || rank == 0)
                fail(FenErrorKind::MalformedField, "placement", "rank does not span 8 files");
            --rank;
            file = 0;
        } else if (c >= '1' && c <= '8') {
            file += c - '0';
            if (file > 8)
                fail(FenErrorKind::MalformedField, "placement", "rank overflows 8 files");
        } else if (const auto piece = piece_from_fen_char(c)) {
            if (file >= 8)
                fail(FenErrorKind::MalformedField, "placement", "rank overflows 8 files");
            PositionAccess::put(pos, Square::at(file, rank), *piece);
            ++file;
        } else {
            fail(FenErrorKind::MalformedField, "placement", fmt::format("unexpected character '{}'", c));
        }
    }
    if (rank != 0 || file != 8)
        fail(FenErrorKind::MalformedField, "placement", "expected 8 ranks of 8 files");
}

void check_placement(const Position& pos)
{
    for (const Color c : {Color::White, Color::Black}) {
        if (std::popcount(pos.pieces(c, PieceKind::King)) != 1)
            fail(FenErrorKind::IllegalPlacement, "placement",
                 fmt::format("{} must have exactly one king", c == Color::White ? "white" : "black"));
    }
    constexpr Bitboard kBackRanks = 0xFF000000000000FFULL;
    if ((pos.pieces(Color::White, PieceKind::Pawn) | pos.pieces(Color::Black, PieceKind::Pawn)) & kBackRanks)
        fail(FenErrorKind::IllegalPlacement, "placement", "pawn on first or last rank");
}

bool has_piece(const Position& pos, Square s, Piece p)
{
    const auto at = pos.piece_at(s);
    return at && *at == p;
}

void parse_castling(Position& pos, std::string_view field)
{
    auto& rights = PositionAccess::castling(pos);
    if (field == "-")
        return;
    if (field.empty())
        fail(FenErrorKind::MalformedField, "castling", "empty field");
    constexpr std::string_view kOrder = "KQkq";
    std::size_t next = 0;
    for (const char c : field) {
        const auto at = kOrder.find(c, next);
        if (at == std::string_view::npos)
            fail(FenErrorKind::MalformedField, "castling",
                 fmt::format("unsupported or out-of-order flag '{}'", c));
        next = at + 1;
        const bool white = c == 'K' || c == 'Q';
        const bool king_side = c == 'K' || c == 'k';
        const Color color = white ? Color::White : Color::Black;
        const int rank = white ? 0 : 7;
        if (!has_piece(pos, Square::at(4, rank), {color, PieceKind::King})
            || !has_piece(pos, Square::at(king_side ? 7 : 0, rank), {color, PieceKind::Rook}))
            fail(FenErrorKind::IllegalPlacement, "castling",
                 fmt::format("flag '{}' without king and rook on their origin squares", c));
        (white ? (king_side ? rights.white_king : rights.white_queen)
               : (king_side ? rights.black_king : rights.black_queen)) = true;
    }
}

void parse_en_passant(Position& pos, std::string_view field)
{
    if (field == "-")
        return;
    const auto sq = Square::parse(field);
    if (!sq)
        fail(FenErrorKind::MalformedField, "en-passant", fmt::format("bad square '{}'", field));
    const Color mover = pos.side_to_move();
    const int expected_rank = mover == Color::White ? 5 : 2;
    if (sq->rank() != expected_rank)
        fail(FenErrorKind::InconsistentEpSquare, "en-passant",
             fmt::format("{} is not on rank {}", field, expected_rank + 1));
    const int dir = mover == Color::White ? -1 : 1;
    const Square pawn_sq = Square::at(sq->file(), sq->rank() + dir);
    const Square origin = Square::at(sq->file(), sq->rank() - dir);
    if (!has_piece(pos, pawn_sq, {~mover, PieceKind::Pawn}) || pos.piece_at(*sq) || pos.piece_at(origin))
        fail(FenErrorKind::InconsistentEpSquare, "en-passant",
             fmt::format("{} does not follow a double pawn push", field));
    PositionAccess::set_ep(pos, *sq);
}

} // namespace

FenError::FenError(FenErrorKind kind, std::string field, const std::string& detail)
    : std::runtime_error(fmt::format("{} in {}: {}", error_name(kind), field, detail)),
      kind_(kind), field_(std::move(field))
{
}

FenKey FenKey::parse(const std::string& text)
{
    FenKey key = encode_fen(decode_fen(text));
    if (key.str() != text)
        throw FenError(FenErrorKind::MalformedField, "fen", "not in canonical form");
    return key;
}

std::string FenKey::four_field_prefix() const
{
    std::size_t from = 0;
    std::size_t space = std::string::npos;
    for (int i = 0; i < 4; ++i) {
        space = text_.find(' ', from);
        if (space == std::string::npos)
            return text_;
        from = space + 1;
    }
    return text_.substr(0, space);
}

std::optional<Piece> Position::piece_at(Square s) const noexcept
{
    const auto code = board_[s.index()];
    if (code == kEmpty)
        return std::nullopt;
    return Piece{static_cast<Color>(code / kPieceKindCount), static_cast<PieceKind>(code % kPieceKindCount)};
}

Position initial_position()
{
    static const Position start = decode_fen(std::string(kStartFen));
    return start;
}

Position decode_fen(const std::string& text)
{
    const auto fields = split_fields(text);
    if (fields.size() != 6)
        fail(FenErrorKind::MalformedField, "fen", fmt::format("expected 6 fields, found {}", fields.size()));

    Position pos = PositionAccess::empty();
    parse_placement(pos, fields[0]);
    check_placement(pos);

    if (fields[1] == "w")
        PositionAccess::set_side(pos, Color::White);
    else if (fields[1] == "b")
        PositionAccess::set_side(pos, Color::Black);
    else
        fail(FenErrorKind::MalformedField, "side-to-move", fmt::format("expected 'w' or 'b', found '{}'", fields[1]));

    parse_castling(pos, fields[2]);
    parse_en_passant(pos, fields[3]);

    const auto halfmove = parse_count(fields[4]);
    if (!halfmove)
        fail(FenErrorKind::MalformedField, "halfmove-clock", fmt::format("bad count '{}'", fields[4]));
    const auto fullmove = parse_count(fields[5]);
    if (!fullmove || *fullmove < 1)
        fail(FenErrorKind::MalformedField, "fullmove-number", fmt::format("bad count '{}'", fields[5]));
    PositionAccess::set_halfmove(pos, *halfmove);
    PositionAccess::set_fullmove(pos, *fullmove);
    return pos;
}

FenKey encode_fen(const Position& pos)
{
    std::string out;
    out.reserve(90);
    for (int rank = 7; rank >= 0; --rank) {
        int gap = 0;
        for (int file = 0; file < 8; ++file) {
            const auto p = pos.piece_at(Square::at(file, rank));
            if (!p) {
                ++gap;
                continue;
            }
            if (gap)
                out.push_back(static_cast<char>('0' + gap));
            gap = 0;
            out.push_back(to_fen_char(*p));
        }
        if (gap)
            out.push_back(static_cast<char>('0' + gap));
        if (rank)
            out.push_back('/');
    }
    out.push_back(' ');
    out.push_back(pos.side_to_move() == Color::White ? 'w' : 'b');
    out.push_back(' ');
    const auto& c = pos.castling_rights();
    const auto before = out.size();
    if (c.white_king) out.push_back('K');
    if (c.white_queen) out.push_back('Q');
    if (c.black_king) out.push_back('k');
    if (c.black_queen) out.push_back('q');
    if (out.size() == before)
        out.push_back('-');
    out.push_back(' ');
    out += pos.en_passant_target() ? pos.en_passant_target()->name() : std::string("-");
    out += fmt::format(" {} {}", pos.halfmove_clock(), pos.fullmove_number());
    return FenKey(std::move(out));
}

} // namespace chessan
