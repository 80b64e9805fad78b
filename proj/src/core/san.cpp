#include "chessan/core/san.hpp"

#include "chessan/core/movegen.hpp"

#include <fmt/format.h>

namespace chessan {

namespace {

bool is_file(char c) { return c >= 'a' && c <= 'h'; }
bool is_rank(char c) { return c >= '1' && c <= '8'; }

struct SanPattern {
    PieceKind piece = PieceKind::Pawn;
    std::optional<int> from_file;
    std::optional<int> from_rank;
    bool capture = false;
    Square to;
    std::optional<PieceKind> promotion;
    std::optional<bool> castle_king_side;
};

[[noreturn]] void malformed(std::string_view san)
{
    throw SanError(SanErrorKind::MalformedSan, fmt::format("malformed SAN '{}'", san));
}

SanPattern parse_pattern(std::string_view original)
{
    std::string_view s = original;
    while (!s.empty() && (s.back() == '+' || s.back() == '#' || s.back() == '!' || s.back() == '?'))
        s.remove_suffix(1);
    if (s.empty())
        malformed(original);

    SanPattern p;
    if (s == "O-O" || s == "0-0") {
        p.castle_king_side = true;
        return p;
    }
    if (s == "O-O-O" || s == "0-0-0") {
        p.castle_king_side = false;
        return p;
    }

    if (const auto kind = kind_from_letter(s.front()); kind && *kind != PieceKind::Pawn) {
        p.piece = *kind;
        s.remove_prefix(1);
    }

    // Promotion suffix: "=Q" or a bare trailing piece letter after the rank.
    if (s.size() >= 2) {
        const auto kind = kind_from_letter(s.back());
        if (kind && *kind != PieceKind::Pawn && *kind != PieceKind::King) {
            s.remove_suffix(1);
            if (!s.empty() && s.back() == '=')
                s.remove_suffix(1);
            p.promotion = kind;
        }
    }

    if (s.size() < 2 || !is_file(s[s.size() - 2]) || !is_rank(s.back()))
        malformed(original);
    p.to = *Square::parse(s.substr(s.size() - 2));
    s.remove_suffix(2);

    if (!s.empty() && (s.back() == 'x' || s.back() == ':')) {
        p.capture = true;
        s.remove_suffix(1);
    }
    if (s.size() > 2)
        malformed(original);
    for (const char c : s) {
        if (is_file(c) && !p.from_file && !p.from_rank)
            p.from_file = c - 'a';
        else if (is_rank(c) && !p.from_rank)
            p.from_rank = c - '1';
        else
            malformed(original);
    }
    if (p.piece == PieceKind::Pawn) {
        if (p.capture != p.from_file.has_value() || p.from_rank)
            malformed(original);
    } else if (p.promotion) {
        malformed(original);
    }
    return p;
}

bool is_castle(const Position& pos, const Move& m)
{
    const auto piece = pos.piece_at(m.from);
    return piece && piece->kind == PieceKind::King && std::abs(m.to.file() - m.from.file()) == 2;
}

} // namespace

std::string_view strip_annotation_glyphs(std::string_view san) noexcept
{
    while (!san.empty() && (san.back() == '!' || san.back() == '?'))
        san.remove_suffix(1);
    return san;
}

Move parse_san(const Position& pos, std::string_view san)
{
    const SanPattern p = parse_pattern(san);
    const auto moves = legal_moves(pos);
    std::optional<Move> found;
    int matches = 0;
    for (const auto& m : moves) {
        const auto piece = pos.piece_at(m.from);
        if (p.castle_king_side) {
            if (!is_castle(pos, m) || (m.to.file() == 6) != *p.castle_king_side)
                continue;
        } else {
            if (piece->kind != p.piece || m.to != p.to || is_castle(pos, m))
                continue;
            if (p.from_file && m.from.file() != *p.from_file)
                continue;
            if (p.from_rank && m.from.rank() != *p.from_rank)
                continue;
            if (m.promotion != p.promotion)
                continue;
        }
        ++matches;
        found = m;
    }
    if (matches == 0)
        throw SanError(SanErrorKind::IllegalMove, fmt::format("illegal move '{}' in {}", san, encode_fen(pos).str()));
    if (matches > 1)
        throw SanError(SanErrorKind::AmbiguousMove, fmt::format("ambiguous move '{}' in {}", san, encode_fen(pos).str()));
    return *found;
}

std::string to_san(const Position& pos, const Move& m)
{
    const Piece piece = *pos.piece_at(m.from);
    std::string out;
    if (is_castle(pos, m)) {
        out = m.to.file() == 6 ? "O-O" : "O-O-O";
    } else {
        const bool capture = pos.piece_at(m.to).has_value()
            || (piece.kind == PieceKind::Pawn && m.from.file() != m.to.file());
        if (piece.kind == PieceKind::Pawn) {
            if (capture)
                out.push_back(static_cast<char>('a' + m.from.file()));
        } else {
            out.push_back(kind_letter(piece.kind));
            bool clash = false;
            bool same_file = false;
            bool same_rank = false;
            for (const auto& other : legal_moves(pos)) {
                if (other.from == m.from || other.to != m.to)
                    continue;
                const auto op = pos.piece_at(other.from);
                if (op->kind != piece.kind)
                    continue;
                clash = true;
                same_file = same_file || other.from.file() == m.from.file();
                same_rank = same_rank || other.from.rank() == m.from.rank();
            }
            if (clash) {
                if (!same_file)
                    out.push_back(static_cast<char>('a' + m.from.file()));
                else if (!same_rank)
                    out.push_back(static_cast<char>('1' + m.from.rank()));
                else
                    out += m.from.name();
            }
        }
        if (capture)
            out.push_back('x');
        out += m.to.name();
        if (m.promotion) {
            out.push_back('=');
            out.push_back(kind_letter(*m.promotion));
        }
    }
    const auto [next, kind] = apply_move(pos, m);
    if (kind.gives_checkmate)
        out.push_back('#');
    else if (kind.gives_check)
        out.push_back('+');
    return out;
}

} // namespace chessan
