#include "oracle/naive_chess.hpp"
#include "support/fixtures.hpp"

#include "chessan/core/movegen.hpp"
#include "chessan/core/position.hpp"
#include "chessan/core/replay.hpp"
#include "chessan/core/san.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace chessan;

namespace {

const std::string kStart = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

const std::vector<std::string> kMidgame = {
    "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
    "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
    "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
    "rnbq1k1r/pp1Pbppp/2p5/8/2B5/8/PPP1NnPP/RNBQK2R w KQ - 1 8",
};

Position after(const std::vector<std::string>& san)
{
    Position p = initial_position();
    for (const auto& s : san)
        p = apply_move(p, parse_san(p, s)).first;
    return p;
}

std::vector<std::string> sorted_uci(const Position& p)
{
    std::vector<std::string> out;
    for (const auto& m : legal_moves(p))
        out.push_back(to_uci(m));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(InitialPosition, EncodesToStandardFen)
{
    const auto p = initial_position();
    EXPECT_EQ(encode_fen(p).str(), kStart);
    EXPECT_EQ(p.side_to_move(), Color::White);
    EXPECT_EQ(p.halfmove_clock(), 0);
    EXPECT_EQ(p.fullmove_number(), 1);
}

TEST(DecodeFen, StartIsInitialPosition) { EXPECT_EQ(decode_fen(kStart), initial_position()); }

TEST(DecodeFen, TwoWhiteKingsIsIllegalPlacement)
{
    try {
        decode_fen("8/8/8/8/8/8/8/KK6 w - - 0 1");
        FAIL() << "accepted two white kings";
    } catch (const FenError& e) {
        EXPECT_EQ(e.kind(), FenErrorKind::IllegalPlacement);
        EXPECT_EQ(e.field(), "placement");
    }
}

TEST(DecodeFen, AfterE4MatchesAppliedMove)
{
    const auto p = decode_fen("rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq e3 0 1");
    EXPECT_EQ(p, after({"e4"}));
}

TEST(DecodeFen, RejectsMalformedFields)
{
    const std::vector<std::pair<std::string, FenErrorKind>> bad = {
        {"rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0", FenErrorKind::MalformedField},
        {"rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP w KQkq - 0 1", FenErrorKind::MalformedField},
        {"rnbqkbnr/pppppppp/9/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1", FenErrorKind::MalformedField},
        {"rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR x KQkq - 0 1", FenErrorKind::MalformedField},
        {"rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 0", FenErrorKind::MalformedField},
        {"Pnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1", FenErrorKind::IllegalPlacement},
        {"rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBN1 w KQkq - 0 1", FenErrorKind::IllegalPlacement},
        {"rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq e6 0 1", FenErrorKind::InconsistentEpSquare},
        {"rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq e3 0 1", FenErrorKind::InconsistentEpSquare},
    };
    for (const auto& [fen, kind] : bad) {
        try {
            decode_fen(fen);
            ADD_FAILURE() << "accepted " << fen;
        } catch (const FenError& e) {
            EXPECT_EQ(e.kind(), kind) << fen;
            EXPECT_FALSE(e.field().empty());
        }
    }
}

TEST(EncodeFen, AfterE4E5)
{
    EXPECT_EQ(encode_fen(after({"e4", "e5"})).str(), "rnbqkbnr/pppp1ppp/8/4p3/4P3/8/PPPP1PPP/RNBQKBNR w KQkq e6 0 2");
}

TEST(EncodeFen, FieldSeparatorCounts)
{
    const auto t = encode_fen(after({"Nf3", "d5", "g3"})).str();
    EXPECT_EQ(std::count(t.begin(), t.end(), ' '), 5);
    EXPECT_EQ(std::count(t.begin(), t.begin() + static_cast<long>(t.find(' ')), '/'), 7);
}

TEST(FenKey, FourFieldPrefixDropsClocks)
{
    EXPECT_EQ(FenKey(kStart).four_field_prefix(), "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq -");
    EXPECT_THROW(FenKey::parse("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq -  0 1"), FenError);
}

TEST(LegalMoves, InitialHasTwenty) { EXPECT_EQ(legal_moves(initial_position()).size(), 20u); }

TEST(LegalMoves, KlipBottemaFinalIsMate)
{
    const auto p = after({"e4", "f6", "d4", "g5", "Qh5#"});
    EXPECT_TRUE(legal_moves(p).empty());
    EXPECT_TRUE(in_check(p));
    EXPECT_TRUE(is_checkmate(p));
}

TEST(LegalMoves, StalemateIsEmptyWithoutCheck)
{
    const auto p = decode_fen("7k/5Q2/6K1/8/8/8/8/8 b - - 0 1");
    EXPECT_TRUE(legal_moves(p).empty());
    EXPECT_FALSE(in_check(p));
    EXPECT_TRUE(is_stalemate(p));
}

TEST(Perft, StartDepthsOneToThree)
{
    EXPECT_EQ(perft(initial_position(), 1), 20u);
    EXPECT_EQ(perft(initial_position(), 2), 400u);
    EXPECT_EQ(perft(initial_position(), 3), 8902u);
}

TEST(Perft, MidgameAgreesWithNaiveOracle)
{
    for (const auto& fen : kMidgame)
        for (int d = 1; d <= 2; ++d)
            EXPECT_EQ(perft(decode_fen(fen), d), oracle::perft(oracle::parse_fen(fen), d)) << fen << " depth " << d;
}

TEST(LegalMoves, RandomPositionsAgreeWithNaiveOracle)
{
    std::mt19937_64 rng(11);
    for (int game = 0; game < 60; ++game) {
        Position p = initial_position();
        for (int ply = 0; ply < 120; ++ply) {
            const auto fen = encode_fen(p).str();
            auto mine = sorted_uci(p);
            auto theirs = oracle::legal_moves(oracle::parse_fen(fen));
            std::sort(theirs.begin(), theirs.end());
            ASSERT_EQ(mine, theirs) << fen;
            const auto moves = legal_moves(p);
            if (moves.empty())
                break;
            p = apply_move(p, moves[rng() % moves.size()]).first;
        }
    }
}

TEST(ParseSan, Examples)
{
    const auto m = parse_san(initial_position(), "e4");
    EXPECT_EQ(to_uci(m), "e2e4");
    EXPECT_THROW(parse_san(initial_position(), "Ke2"), std::exception);

    const auto pre = after({"e4", "f6", "d4", "g5"});
    const auto q = parse_san(pre, "Qh5#");
    EXPECT_EQ(to_uci(q), "d1h5");
    EXPECT_TRUE(apply_move(pre, q).second.gives_checkmate);
}

TEST(ParseSan, ToleratesGlyphsAndZeroCastling)
{
    const auto p = after({"e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5"});
    EXPECT_EQ(to_uci(parse_san(p, "0-0")), "e1g1");
    EXPECT_EQ(to_uci(parse_san(p, "O-O!?")), "e1g1");
    EXPECT_EQ(to_uci(parse_san(after({"e4"}), "e5!!")), "e7e5");
}

TEST(ParseSan, AmbiguityNeedsDisambiguation)
{
    const auto p = decode_fen("4k3/8/8/8/8/8/4K3/R6R w - - 0 1");
    EXPECT_THROW(parse_san(p, "Rd1"), std::exception);
    EXPECT_EQ(to_uci(parse_san(p, "Rad1")), "a1d1");
    EXPECT_EQ(to_san(p, parse_san(p, "Rhf1")), "Rhf1");
    EXPECT_THROW(parse_san(p, "Q@d4"), std::exception);
}

TEST(ParseSan, Promotion)
{
    const auto p = decode_fen("8/4P3/8/8/8/8/k7/4K3 w - - 0 1");
    const auto m = parse_san(p, "e8=Q+");
    EXPECT_EQ(to_uci(m), "e7e8q");
    EXPECT_EQ(to_san(p, m), "e8=Q");
    const auto [next, kind] = apply_move(p, m);
    EXPECT_EQ(kind.promoted_to, PieceKind::Queen);
    EXPECT_EQ(to_uci(parse_san(p, "e8=N")), "e7e8n");
}

TEST(ApplyMove, DoublePushSetsEpAndClock)
{
    const auto [p, kind] = apply_move(initial_position(), *parse_uci("e2e4"));
    ASSERT_TRUE(p.en_passant_target());
    EXPECT_EQ(encode_fen(p).str(), "rnbqkbnr/pppppppp/8/8/4P3/8/PPPP1PPP/RNBQKBNR b KQkq e3 0 1");
    EXPECT_EQ(p.halfmove_clock(), 0);
    EXPECT_EQ(kind.moved_piece, PieceKind::Pawn);
    EXPECT_FALSE(kind.is_capture);
}

TEST(ApplyMove, CastlingKingsideFlag)
{
    const auto p = after({"e4", "e5", "Nf3", "Nc6", "Bc4", "Bc5"});
    const auto [next, kind] = apply_move(p, *parse_uci("e1g1"));
    EXPECT_TRUE(kind.is_castle_kingside);
    EXPECT_FALSE(kind.is_castle_queenside);
    EXPECT_EQ(kind.moved_piece, PieceKind::King);
    EXPECT_FALSE(next.castling_rights().white_king);
    EXPECT_FALSE(next.castling_rights().white_queen);
    EXPECT_TRUE(next.castling_rights().black_king);
}

TEST(ApplyMove, EnPassantCountsAsCapture)
{
    const auto p = after({"e4", "a6", "e5", "d5"});
    const auto [next, kind] = apply_move(p, parse_san(p, "exd6"));
    EXPECT_TRUE(kind.is_capture);
    EXPECT_FALSE(next.piece_at(*Square::parse("d5")));
}

TEST(ApplyMove, ClocksAndRookRights)
{
    auto p = after({"Nf3"});
    EXPECT_EQ(p.halfmove_clock(), 1);
    p = after({"Nf3", "Nf6", "Ng1", "Ng8"});
    EXPECT_EQ(p.halfmove_clock(), 4);
    EXPECT_EQ(p.fullmove_number(), 3);
    p = after({"a4", "b5", "axb5", "e6", "Rxa7", "Rxa7"}); // both a-rooks gone / moved
    EXPECT_FALSE(p.castling_rights().white_queen);
    EXPECT_FALSE(p.castling_rights().black_queen);
    EXPECT_EQ(p.halfmove_clock(), 0);
}

TEST(ApplyMove, RejectsIllegalMove)
{
    EXPECT_THROW(apply_move(initial_position(), *parse_uci("e1e2")), std::exception);
}

TEST(ApplyMove, LandaGrallMateFlag)
{
    const auto pre = after({"e4", "e5", "Bc4", "Bc5", "Qh5", "Nf6"});
    const auto [next, kind] = apply_move(pre, parse_san(pre, "Qxf7#"));
    EXPECT_TRUE(kind.gives_checkmate);
    EXPECT_TRUE(kind.gives_check);
    EXPECT_TRUE(kind.is_capture);
    EXPECT_EQ(kind.moved_piece, PieceKind::Queen);
}

TEST(UciText, RoundTrip)
{
    for (const std::string t : {"e2e4", "e7e8q", "a7b8n", "h1h8"})
        EXPECT_EQ(to_uci(*parse_uci(t)), t);
    EXPECT_FALSE(parse_uci("e2e2"));
    EXPECT_FALSE(parse_uci("e2e9"));
    EXPECT_FALSE(parse_uci("e7e8k"));
    EXPECT_FALSE(parse_uci("(none)"));
}

TEST(Replay, ShortMatingGames)
{
    const auto games = testsupport::parse_games(testsupport::slurp(testsupport::data_dir() / "short_mates.pgn"));
    ASSERT_EQ(games.size(), 3u);
    const std::vector<std::size_t> plies = {5, 7, 8};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto r = replay_game(games[i]);
        ASSERT_EQ(r.size(), plies[i]);
        EXPECT_TRUE(r.back().kind.gives_checkmate);
        for (std::size_t k = 0; k < r.size(); ++k)
            EXPECT_EQ(r[k].ply_index, static_cast<int>(k + 1));
    }
}

TEST(Replay, EmptyMovetextGivesEmptyList)
{
    GameRecord g;
    EXPECT_TRUE(replay_game(g).empty());
}

TEST(Replay, IllegalMoveReportsPly)
{
    const std::vector<std::string> moves = {"e4", "e5", "Ke3"};
    try {
        replay_moves(moves);
        FAIL();
    } catch (const ReplayError& e) {
        EXPECT_EQ(e.ply_index(), 3);
    }
}

// properties over random playouts

class RandomPlayouts : public ::testing::Test {
protected:
    template <class F>
    void each_ply(int games, std::uint64_t seed, F&& f)
    {
        std::mt19937_64 rng(seed);
        for (int g = 0; g < games; ++g) {
            Position p = initial_position();
            for (int ply = 0; ply < 200; ++ply) {
                const auto moves = legal_moves(p);
                if (moves.empty())
                    break;
                const auto& m = moves[rng() % moves.size()];
                f(p, m);
                p = apply_move(p, m).first;
            }
        }
    }
};

TEST_F(RandomPlayouts, FenRoundTrip)
{
    each_ply(40, 3, [](const Position& p, const Move&) {
        const auto text = encode_fen(p).str();
        ASSERT_EQ(decode_fen(text), p);
        ASSERT_EQ(encode_fen(decode_fen(text)).str(), text);
    });
}

TEST_F(RandomPlayouts, MateSoundnessAndFlagInvariants)
{
    each_ply(40, 5, [](const Position& p, const Move& m) {
        const auto [next, kind] = apply_move(p, m);
        const bool mate = in_check(next) && legal_moves(next).empty();
        ASSERT_EQ(kind.gives_checkmate, mate);
        ASSERT_EQ(kind.gives_check, in_check(next));
        ASSERT_FALSE(kind.is_castle_kingside && kind.is_castle_queenside);
        ASSERT_TRUE(!kind.gives_checkmate || kind.gives_check);
    });
}

TEST_F(RandomPlayouts, ApplyNeverMutatesParent)
{
    each_ply(20, 7, [](const Position& p, const Move&) {
        const auto fen = encode_fen(p).str();
        for (const auto& m : legal_moves(p))
            (void)apply_move(p, m);
        ASSERT_EQ(p, decode_fen(fen));
    });
}

TEST_F(RandomPlayouts, SanRoundTrip)
{
    each_ply(30, 9, [](const Position& p, const Move& m) {
        const auto san = to_san(p, m);
        ASSERT_EQ(parse_san(p, san), m) << san << " in " << encode_fen(p).str();
    });
}

TEST(Replay, TotalityOnRandomGames)
{
    std::mt19937_64 rng(13);
    for (int g = 0; g < 30; ++g) {
        std::vector<std::string> san;
        Position p = initial_position();
        for (int ply = 0; ply < 150; ++ply) {
            const auto moves = legal_moves(p);
            if (moves.empty())
                break;
            const auto& m = moves[rng() % moves.size()];
            san.push_back(to_san(p, m));
            p = apply_move(p, m).first;
        }
        const auto r = replay_moves(san);
        ASSERT_EQ(r.size(), san.size());
        if (!r.empty())
            EXPECT_EQ(r.back().fen, encode_fen(p));
    }
}
