#include "chessan/core/movegen.hpp"

#include "position_access.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace chessan {

using detail::PositionAccess;

namespace {

enum Direction { North, South, East, West, NorthEast, NorthWest, SouthEast, SouthWest };

constexpr std::array<std::pair<int, int>, 8> kDirSteps{{
    {0, 1}, {0, -1}, {1, 0}, {-1, 0}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1},
}};

// Rays where square indices grow away from the origin.
constexpr bool increasing(int dir) { return dir == North || dir == East || dir == NorthEast || dir == NorthWest; }

struct AttackTables {
    std::array<Bitboard, 64> knight{};
    std::array<Bitboard, 64> king{};
    std::array<std::array<Bitboard, 64>, 2> pawn{};
    std::array<std::array<Bitboard, 64>, 8> ray{};

    AttackTables()
    {
        auto offset = [](int sq, int df, int dr) -> Bitboard {
            const int f = (sq & 7) + df;
            const int r = (sq >> 3) + dr;
            if (f < 0 || f > 7 || r < 0 || r > 7)
                return 0;
            return bit(Square::at(f, r));
        };
        constexpr std::array<std::pair<int, int>, 8> kKnight{{
            {1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2},
        }};
        for (int sq = 0; sq < 64; ++sq) {
            for (auto [df, dr] : kKnight)
                knight[sq] |= offset(sq, df, dr);
            for (auto [df, dr] : kDirSteps)
                king[sq] |= offset(sq, df, dr);
            pawn[0][sq] = offset(sq, -1, 1) | offset(sq, 1, 1);
            pawn[1][sq] = offset(sq, -1, -1) | offset(sq, 1, -1);
            for (int d = 0; d < 8; ++d) {
                const auto [df, dr] = kDirSteps[d];
                int f = (sq & 7) + df;
                int r = (sq >> 3) + dr;
                while (f >= 0 && f <= 7 && r >= 0 && r <= 7) {
                    ray[d][sq] |= bit(Square::at(f, r));
                    f += df;
                    r += dr;
                }
            }
        }
    }
};

const AttackTables& tables()
{
    static const AttackTables t;
    return t;
}

Bitboard slide(const AttackTables& t, int sq, Bitboard occ, int first_dir, int last_dir)
{
    Bitboard attacks = 0;
    for (int d = first_dir; d <= last_dir; ++d) {
        Bitboard r = t.ray[d][sq];
        if (const Bitboard blockers = r & occ) {
            const Square b = increasing(d) ? lowest_square(blockers) : highest_square(blockers);
            r &= ~t.ray[d][b.index()];
        }
        attacks |= r;
    }
    return attacks;
}

Bitboard rook_attacks(const AttackTables& t, int sq, Bitboard occ) { return slide(t, sq, occ, North, West); }
Bitboard bishop_attacks(const AttackTables& t, int sq, Bitboard occ) { return slide(t, sq, occ, NorthEast, SouthWest); }

using MoveList = std::vector<Move>;

void add_targets(MoveList& out, Square from, Bitboard targets)
{
    while (targets)
        out.push_back({from, pop_lowest(targets), std::nullopt});
}

void add_pawn_move(MoveList& out, Square from, Square to)
{
    if (to.rank() == 0 || to.rank() == 7) {
        for (const auto k : {PieceKind::Queen, PieceKind::Rook, PieceKind::Bishop, PieceKind::Knight})
            out.push_back({from, to, k});
    } else {
        out.push_back({from, to, std::nullopt});
    }
}

void pseudo_legal(const Position& pos, MoveList& out)
{
    const auto& t = tables();
    const Color us = pos.side_to_move();
    const Color them = ~us;
    const Bitboard own = pos.pieces(us);
    const Bitboard opp = pos.pieces(them);
    const Bitboard occ = own | opp;
    const int forward = us == Color::White ? 8 : -8;
    const int start_rank = us == Color::White ? 1 : 6;

    Bitboard pawns = pos.pieces(us, PieceKind::Pawn);
    while (pawns) {
        const Square from = pop_lowest(pawns);
        const Square one(from.index() + forward);
        if (!(occ & bit(one))) {
            add_pawn_move(out, from, one);
            const Square two(one.index() + forward);
            if (from.rank() == start_rank && !(occ & bit(two)))
                out.push_back({from, two, std::nullopt});
        }
        Bitboard caps = t.pawn[index_of(us)][from.index()] & opp;
        while (caps)
            add_pawn_move(out, from, pop_lowest(caps));
        if (const auto ep = pos.en_passant_target(); ep && (t.pawn[index_of(us)][from.index()] & bit(*ep)))
            out.push_back({from, *ep, std::nullopt});
    }

    Bitboard knights = pos.pieces(us, PieceKind::Knight);
    while (knights) {
        const Square from = pop_lowest(knights);
        add_targets(out, from, t.knight[from.index()] & ~own);
    }
    Bitboard diag = pos.pieces(us, PieceKind::Bishop) | pos.pieces(us, PieceKind::Queen);
    while (diag) {
        const Square from = pop_lowest(diag);
        add_targets(out, from, bishop_attacks(t, from.index(), occ) & ~own);
    }
    Bitboard straight = pos.pieces(us, PieceKind::Rook) | pos.pieces(us, PieceKind::Queen);
    while (straight) {
        const Square from = pop_lowest(straight);
        add_targets(out, from, rook_attacks(t, from.index(), occ) & ~own);
    }
    const Square king = pos.king_square(us);
    add_targets(out, king, t.king[king.index()] & ~own);

    const int rank = us == Color::White ? 0 : 7;
    const auto& rights = pos.castling_rights();
    const bool can_king_side = us == Color::White ? rights.white_king : rights.black_king;
    const bool can_queen_side = us == Color::White ? rights.white_queen : rights.black_queen;
    if ((can_king_side || can_queen_side) && !is_attacked(pos, king, them)) {
        auto empty = [&](int file) { return !(occ & bit(Square::at(file, rank))); };
        auto safe = [&](int file) { return !is_attacked(pos, Square::at(file, rank), them); };
        if (can_king_side && empty(5) && empty(6) && safe(5))
            out.push_back({king, Square::at(6, rank), std::nullopt});
        if (can_queen_side && empty(1) && empty(2) && empty(3) && safe(3))
            out.push_back({king, Square::at(2, rank), std::nullopt});
    }
}

void clear_rights_for(CastlingRights& r, Square s)
{
    switch (s.index()) {
    case 0: r.white_queen = false; break;
    case 7: r.white_king = false; break;
    case 56: r.black_queen = false; break;
    case 63: r.black_king = false; break;
    default: break;
    }
}

// Plays a pseudo-legal move. Fills everything in MoveKind except check flags.
MoveKind make_unchecked(Position& p, const Move& m)
{
    const Piece piece = *p.piece_at(m.from);
    const Color us = piece.color;
    const auto captured = p.piece_at(m.to);
    const bool is_ep = piece.kind == PieceKind::Pawn && !captured && m.from.file() != m.to.file();
    const bool is_castle = piece.kind == PieceKind::King && std::abs(m.to.file() - m.from.file()) == 2;

    MoveKind kind;
    kind.moved_piece = piece.kind;
    kind.is_capture = captured.has_value() || is_ep;
    kind.promoted_to = m.promotion;

    PositionAccess::remove(p, m.from);
    if (captured)
        PositionAccess::remove(p, m.to);
    if (is_ep)
        PositionAccess::remove(p, Square::at(m.to.file(), m.from.rank()));
    PositionAccess::put(p, m.to, m.promotion ? Piece{us, *m.promotion} : piece);

    if (is_castle) {
        const int rank = m.from.rank();
        const bool king_side = m.to.file() == 6;
        const Square rook_from = Square::at(king_side ? 7 : 0, rank);
        const Square rook_to = Square::at(king_side ? 5 : 3, rank);
        PositionAccess::remove(p, rook_from);
        PositionAccess::put(p, rook_to, {us, PieceKind::Rook});
        kind.is_castle_kingside = king_side;
        kind.is_castle_queenside = !king_side;
    }

    auto& rights = PositionAccess::castling(p);
    if (piece.kind == PieceKind::King) {
        if (us == Color::White)
            rights.white_king = rights.white_queen = false;
        else
            rights.black_king = rights.black_queen = false;
    }
    clear_rights_for(rights, m.from);
    clear_rights_for(rights, m.to);

    if (piece.kind == PieceKind::Pawn && std::abs(m.to.rank() - m.from.rank()) == 2)
        PositionAccess::set_ep(p, Square::at(m.from.file(), (m.from.rank() + m.to.rank()) / 2));
    else
        PositionAccess::set_ep(p, std::nullopt);

    PositionAccess::set_halfmove(p, (piece.kind == PieceKind::Pawn || kind.is_capture) ? 0 : p.halfmove_clock() + 1);
    if (us == Color::Black)
        PositionAccess::set_fullmove(p, p.fullmove_number() + 1);
    PositionAccess::set_side(p, ~us);
    return kind;
}

bool leaves_king_safe(const Position& pos, const Move& m)
{
    Position next = pos;
    make_unchecked(next, m);
    const Color us = pos.side_to_move();
    return !is_attacked(next, next.king_square(us), ~us);
}

} // namespace

bool is_attacked(const Position& pos, Square s, Color by)
{
    const auto& t = tables();
    const int sq = s.index();
    const Bitboard occ = pos.occupied();
    if (t.pawn[index_of(~by)][sq] & pos.pieces(by, PieceKind::Pawn))
        return true;
    if (t.knight[sq] & pos.pieces(by, PieceKind::Knight))
        return true;
    if (t.king[sq] & pos.pieces(by, PieceKind::King))
        return true;
    const Bitboard queens = pos.pieces(by, PieceKind::Queen);
    if (bishop_attacks(t, sq, occ) & (pos.pieces(by, PieceKind::Bishop) | queens))
        return true;
    return (rook_attacks(t, sq, occ) & (pos.pieces(by, PieceKind::Rook) | queens)) != 0;
}

bool in_check(const Position& pos)
{
    const Color us = pos.side_to_move();
    return is_attacked(pos, pos.king_square(us), ~us);
}

std::vector<Move> legal_moves(const Position& pos)
{
    std::vector<Move> pseudo;
    pseudo.reserve(64);
    pseudo_legal(pos, pseudo);
    std::vector<Move> legal;
    legal.reserve(pseudo.size());
    for (const auto& m : pseudo)
        if (leaves_king_safe(pos, m))
            legal.push_back(m);
    return legal;
}

bool has_legal_move(const Position& pos)
{
    std::vector<Move> pseudo;
    pseudo.reserve(64);
    pseudo_legal(pos, pseudo);
    for (const auto& m : pseudo)
        if (leaves_king_safe(pos, m))
            return true;
    return false;
}

bool is_checkmate(const Position& pos) { return in_check(pos) && !has_legal_move(pos); }
bool is_stalemate(const Position& pos) { return !in_check(pos) && !has_legal_move(pos); }

std::pair<Position, MoveKind> apply_move(const Position& pos, const Move& m)
{
    const auto moves = legal_moves(pos);
    if (std::find(moves.begin(), moves.end(), m) == moves.end())
        throw IllegalMoveError("illegal move " + to_uci(m) + " in " + encode_fen(pos).str());
    Position next = pos;
    MoveKind kind = make_unchecked(next, m);
    kind.gives_check = in_check(next);
    kind.gives_checkmate = kind.gives_check && !has_legal_move(next);
    return {std::move(next), kind};
}

std::uint64_t perft(const Position& pos, int depth)
{
    if (depth <= 0)
        return 1;
    const auto moves = legal_moves(pos);
    if (depth == 1)
        return moves.size();
    std::uint64_t nodes = 0;
    for (const auto& m : moves) {
        Position next = pos;
        make_unchecked(next, m);
        nodes += perft(next, depth - 1);
    }
    return nodes;
}

std::string to_uci(const Move& m)
{
    std::string out = m.from.name() + m.to.name();
    if (m.promotion)
        out.push_back(static_cast<char>(kind_letter(*m.promotion) - 'A' + 'a'));
    return out;
}

std::optional<Move> parse_uci(std::string_view text)
{
    if (text.size() != 4 && text.size() != 5)
        return std::nullopt;
    const auto from = Square::parse(text.substr(0, 2));
    const auto to = Square::parse(text.substr(2, 2));
    if (!from || !to || *from == *to)
        return std::nullopt;
    Move m{*from, *to, std::nullopt};
    if (text.size() == 5) {
        const char c = text[4];
        const auto kind = kind_from_letter(static_cast<char>(c >= 'a' && c <= 'z' ? c - 'a' + 'A' : 0));
        if (!kind || *kind == PieceKind::Pawn || *kind == PieceKind::King)
            return std::nullopt;
        m.promotion = kind;
    }
    return m;
}

} // namespace chessan
