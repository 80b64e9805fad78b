#include "oracle/corpus_gen.hpp"
#include "support/fixtures.hpp"

#include "chessan/pgn/dedup.hpp"
#include "chessan/pgn/headers.hpp"
#include "chessan/pgn/reader.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace chessan;
using namespace chessan::pgn;

namespace {

const std::string kKlip = R"([Event "?"]
[Site "?"]
[Date "1990.??.??"]
[Round "?"]
[White "Klip, H."]
[Black "Bottema, T."]
[Result "1-0"]
[WhiteElo "2305"]
[BlackElo "2205"]

1. e4 f6 2. d4 g5 3. Qh5# 1-0
)";

std::string game(const std::string& white, const std::string& black, const std::string& moves,
                 const std::string& result, const std::string& date = "2000.01.01")
{
    return "[Event \"E\"]\n[Date \"" + date + "\"]\n[White \"" + white + "\"]\n[Black \"" + black +
           "\"]\n[Result \"" + result + "\"]\n\n" + moves + " " + result + "\n\n";
}

int count_errors(const std::vector<PgnItem>& items)
{
    return static_cast<int>(std::count_if(items.begin(), items.end(),
                                          [](const PgnItem& i) { return std::holds_alternative<GameError>(i); }));
}

// Brute-force duplicate classes: pairwise comparison of the key fields.
int brute_force_unique(const std::vector<GameRecord>& games)
{
    auto bare = [](std::vector<std::string> v) {
        for (auto& s : v)
            while (!s.empty() && (s.back() == '+' || s.back() == '#'))
                s.pop_back();
        return v;
    };
    int unique = 0;
    for (std::size_t i = 0; i < games.size(); ++i) {
        bool dup = false;
        for (std::size_t j = 0; j < i && !dup; ++j)
            dup = normalize_player_name(games[i].white_name) == normalize_player_name(games[j].white_name) &&
                  normalize_player_name(games[i].black_name) == normalize_player_name(games[j].black_name) &&
                  games[i].result == games[j].result && bare(games[i].san_moves) == bare(games[j].san_moves);
        unique += !dup;
    }
    return unique;
}

} // namespace

TEST(PgnReader, KlipBottema)
{
    const auto items = parse_pgn_text(kKlip);
    ASSERT_EQ(items.size(), 1u);
    const auto& g = std::get<GameRecord>(items[0]);
    EXPECT_EQ(g.san_moves, (std::vector<std::string>{"e4", "f6", "d4", "g5", "Qh5#"}));
    EXPECT_EQ(g.result, GameResult::WhiteWin);
    EXPECT_EQ(g.white_elo, 2305);
    EXPECT_EQ(g.black_elo, 2205);
    EXPECT_EQ(g.date, (PgnDate{1990, std::nullopt, std::nullopt}));
    EXPECT_EQ(g.white_name, "Klip, H.");
    EXPECT_EQ(g.byte_offset, 0u);
    EXPECT_EQ(g.ply_count(), 5u);
    EXPECT_FALSE(g.game_id.empty());
}

TEST(PgnReader, EmptyInput)
{
    EXPECT_TRUE(parse_pgn_text("").empty());
    EXPECT_TRUE(parse_pgn_text("\n\n   \n").empty());
}

TEST(PgnReader, GarbageBetweenGamesYieldsOneError)
{
    const std::string text = game("A", "B", "1. e4 e5", "1-0") + "this is @@ not a game ###\nmore junk\n\n" +
                             game("C", "D", "1. d4 d5", "0-1") + game("E", "F", "1. c4", "1/2-1/2");
    const auto items = parse_pgn_text(text);
    EXPECT_EQ(items.size(), 4u);
    EXPECT_EQ(count_errors(items), 1);
    EXPECT_EQ(std::get<GameRecord>(items.back()).white_name, "E");
}

TEST(PgnReader, VariationsCommentsAndNagsDiscarded)
{
    const std::string text = "[White \"A\"]\n[Black \"B\"]\n[Result \"*\"]\n\n"
                             "1. e4 {best by test} e5 (1... c5 2. Nf3 (2. c3) d6) 2. Nf3 $1 Nc6!? ; rest\n"
                             "3. Bb5 a6 *\n";
    const auto items = parse_pgn_text(text);
    ASSERT_EQ(items.size(), 1u);
    const auto& g = std::get<GameRecord>(items[0]);
    EXPECT_EQ(g.san_moves, (std::vector<std::string>{"e4", "e5", "Nf3", "Nc6", "Bb5", "a6"}));
    EXPECT_EQ(g.result, GameResult::Unknown);
}

TEST(PgnReader, ErrorKinds)
{
    auto first_error = [](const std::string& text) {
        for (const auto& i : parse_pgn_text(text))
            if (const auto* e = std::get_if<GameError>(&i))
                return std::optional<GameErrorKind>(e->kind);
        return std::optional<GameErrorKind>();
    };
    EXPECT_EQ(first_error("[White \"A\n\n1. e4 1-0\n"), GameErrorKind::BadTagPair);
    EXPECT_EQ(first_error("[White \"A\"]\n\n1. e4 {never closed\n"), GameErrorKind::UnterminatedComment);
    EXPECT_EQ(first_error("[White \"A\"]\n\n1. e4 @@@ 1-0\n"), GameErrorKind::BadMovetextToken);
    EXPECT_EQ(first_error("[White \"A\"]\n\n1. e4 e5\n"), GameErrorKind::MissingResult);
    EXPECT_EQ(first_error("[White \"A\"]\n\n1. e4 e5\n\n[White \"B\"]\n\n1. d4 1-0\n"), GameErrorKind::MissingResult);
}

TEST(PgnReader, ErrorDoesNotAbortStream)
{
    const std::string text = "[White \"A\"]\n\n1. e4 @@@ 1-0\n\n" + game("C", "D", "1. d4", "0-1") +
                             "[White \"A\n\n1. e4 1-0\n\n" + game("E", "F", "1. c4", "1-0");
    const auto items = parse_pgn_text(text);
    EXPECT_EQ(count_errors(items), 2);
    EXPECT_EQ(items.size(), 4u);
}

TEST(PgnReader, NonAsciiOnlyInTagsAndComments)
{
    const std::string ok = "[White \"M\xc3\xbcller\"]\n[Result \"1-0\"]\n\n1. e4 {\xe9t\xe9} 1-0\n";
    EXPECT_EQ(count_errors(parse_pgn_text(ok)), 0);
    const std::string bad = "[White \"A\"]\n[Result \"1-0\"]\n\n1. e4 \xe9 1-0\n";
    EXPECT_EQ(count_errors(parse_pgn_text(bad)), 1);
}

TEST(PgnReader, ByteOffsetsPointAtGameStarts)
{
    const std::string a = game("A", "B", "1. e4", "1-0");
    const std::string b = game("C", "D", "1. d4", "0-1");
    const auto items = parse_pgn_text(a + b);
    ASSERT_EQ(items.size(), 2u);
    EXPECT_EQ(std::get<GameRecord>(items[1]).byte_offset, a.size());
}

TEST(PgnReader, StreamsWithoutBuffering)
{
    std::ostringstream big;
    for (int i = 0; i < 500; ++i)
        big << game("P" + std::to_string(i), "Q", "1. e4 e5 2. Nf3", "1-0");
    std::istringstream in(big.str());
    PgnReader r(in, "big");
    int n = 0;
    while (auto item = r.next())
        n += std::holds_alternative<GameRecord>(*item);
    EXPECT_EQ(n, 500);
}

TEST(PgnReader, ParserTotalityOnRandomBytes)
{
    std::mt19937_64 rng(21);
    const std::string alphabet = "[]\"{}();. \n\tabcdefghKQRBNx12345678O-=+#!?*$/\\%\xff";
    for (int trial = 0; trial < 300; ++trial) {
        std::string text;
        const int len = static_cast<int>(rng() % 600);
        for (int i = 0; i < len; ++i)
            text += alphabet[rng() % alphabet.size()];
        if (trial % 3 == 0)
            text = game("A", "B", "1. e4", "1-0") + text + game("C", "D", "1. d4", "0-1");

        std::istringstream in(text);
        GameDeduplicator dedup;
        IngestPipeline pipe(dedup, [](IngestedGame&&) {});
        pipe.consume(in, "fuzz");
        EXPECT_TRUE(pipe.report().balanced());
    }
}

TEST(NormalizeHeaders, Examples)
{
    EXPECT_EQ(parse_pgn_date("1990.??.??"), (PgnDate{1990, std::nullopt, std::nullopt}));
    EXPECT_EQ(parse_pgn_date("2007.03.14"), (PgnDate{2007, 3, 14}));
    EXPECT_EQ(parse_pgn_date("????.??.??"), std::nullopt);
    EXPECT_EQ(parse_pgn_date("1990.13.01"), (PgnDate{1990, std::nullopt, std::nullopt}));
    EXPECT_EQ(parse_elo("2305"), 2305);
    EXPECT_EQ(parse_elo("-"), std::nullopt);
    EXPECT_EQ(parse_elo(""), std::nullopt);
    EXPECT_EQ(parse_elo("0"), std::nullopt);
    EXPECT_EQ(parse_elo("4000"), std::nullopt);
    EXPECT_TRUE(is_eco_code("B00"));
    EXPECT_FALSE(is_eco_code("F00"));
    EXPECT_FALSE(is_eco_code("B0"));
}

TEST(NormalizeHeaders, UnparseableValuesBecomeAbsentWithDiagnostics)
{
    const auto h = normalize_headers({{"WhiteElo", "abc"}, {"Date", "sometime"}, {"Result", "1-0"}, {"ECO", "Z99"}});
    EXPECT_FALSE(h.white_elo);
    EXPECT_FALSE(h.date);
    EXPECT_FALSE(h.eco_code);
    EXPECT_EQ(h.result_tag, GameResult::WhiteWin);
    EXPECT_EQ(h.diagnostics.size(), 3u);
    const auto quiet = normalize_headers({{"WhiteElo", "-"}, {"BlackElo", ""}, {"Date", "????.??.??"}});
    EXPECT_TRUE(quiet.diagnostics.empty());
}

TEST(NormalizePlayerName, FoldsCaseSpacingAndTitles)
{
    EXPECT_EQ(normalize_player_name("Klip, H (2305)"), normalize_player_name("klip, h"));
    EXPECT_EQ(normalize_player_name("KLIP,   H.  GM"), normalize_player_name("Klip, H."));
    EXPECT_EQ(normalize_player_name("  Kasparov,  Garry  "), "kasparov,garry");
    EXPECT_NE(normalize_player_name("Kasparov, G."), normalize_player_name("Karpov, A."));
}

TEST(Dedup, SameGameInTwoFiles)
{
    auto a = testsupport::parse_games(kKlip);
    auto b = a;
    b[0].source_file = "other.pgn";
    b[0].event = "Reprint";
    a.insert(a.end(), b.begin(), b.end());
    const auto r = dedup_games(a);
    EXPECT_EQ(r.report.games_kept, 1u);
    EXPECT_EQ(r.report.duplicates_removed, 1u);
}

TEST(Dedup, SamePlayersSameDateDifferentMovesKeepsBoth)
{
    const auto games =
        testsupport::parse_games(game("A", "B", "1. e4 e5", "1-0") + game("A", "B", "1. d4 d5", "1-0"));
    EXPECT_EQ(dedup_games(games).report.games_kept, 2u);
}

TEST(Dedup, CheckSuffixDoesNotSplitClass)
{
    const auto games = testsupport::parse_games(game("A", "B", "1. e4 f6 2. d4 g5 3. Qh5#", "1-0") +
                                                game("a", "b", "1. e4 f6 2. d4 g5 3. Qh5", "1-0"));
    EXPECT_EQ(dedup_games(games).report.duplicates_removed, 1u);
}

TEST(Dedup, ResultIsPartOfKey)
{
    const auto games =
        testsupport::parse_games(game("A", "B", "1. e4 e5", "1-0") + game("A", "B", "1. e4 e5", "1/2-1/2"));
    EXPECT_EQ(dedup_games(games).report.games_kept, 2u);
}

TEST(Dedup, HundredGamesWithSeventeenInjectedDuplicates)
{
    const auto plan = oracle::corpus_with_duplicates(83, 17, 100);
    const auto games = testsupport::parse_games(oracle::to_pgn(plan.games));
    ASSERT_EQ(games.size(), 100u);
    ASSERT_EQ(brute_force_unique(games), 83);
    const auto r = dedup_games(games);
    EXPECT_EQ(r.report.games_kept, 83u);
    EXPECT_EQ(r.report.duplicates_removed, 17u);
    EXPECT_TRUE(r.report.balanced());
}

TEST(Dedup, IdempotentAndOrderInsensitive)
{
    const auto plan = oracle::corpus_with_duplicates(150, 60, 7);
    auto games = testsupport::parse_games(oracle::to_pgn(plan.games));
    const auto once = dedup_games(games);
    const auto twice = dedup_games(once.kept);
    EXPECT_EQ(twice.report.duplicates_removed, 0u);
    EXPECT_EQ(twice.kept, once.kept);

    auto keys = [](const std::vector<GameRecord>& v) {
        std::set<Digest128> s;
        for (const auto& g : v)
            s.insert(dedup_key(g));
        return s;
    };
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(games.begin(), games.end(), rng);
        const auto r = dedup_games(games);
        EXPECT_LE(r.kept.size(), games.size());
        EXPECT_EQ(keys(r.kept), keys(once.kept));
    }
}

TEST(IngestPipeline, ReplayGateCountsIllegalGames)
{
    const std::string text = game("A", "B", "1. e4 e5 2. Ke3", "1-0") + game("C", "D", "1. e4 e5", "1-0") +
                             game("C", "D", "1. e4 e5", "1-0") + "[White \"X\"]\n\n1. e4 @@ 1-0\n\n";
    std::istringstream in(text);
    GameDeduplicator dedup;
    std::vector<IngestedGame> out;
    IngestPipeline pipe(dedup, [&](IngestedGame&& g) { out.push_back(std::move(g)); });
    pipe.consume(in, "mixed.pgn");
    const auto& r = pipe.report();
    EXPECT_EQ(r.games_read, 4u);
    EXPECT_EQ(r.games_kept, 2u);
    EXPECT_EQ(r.duplicates_removed, 1u);
    EXPECT_EQ(r.parse_failures, 1u);
    EXPECT_EQ(r.illegal_replay_failures, 1u);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].corrupt_at_ply, 3);
    EXPECT_TRUE(out[0].plies.empty());
    EXPECT_EQ(out[1].plies.size(), 2u);
    EXPECT_FALSE(r.diagnostics.empty());
    EXPECT_EQ(r.summary_line(),
              "games_read=4 games_kept=2 duplicates_removed=1 parse_failures=1 illegal_replay_failures=1");
    EXPECT_NE(r.to_csv().find("games_kept"), std::string::npos);
}

TEST(IngestPipeline, ZeroPlyGamesAreKept)
{
    std::istringstream in("[White \"A\"]\n[Black \"B\"]\n[Result \"1-0\"]\n\n1-0\n");
    GameDeduplicator dedup;
    int kept = 0;
    IngestPipeline pipe(dedup, [&](IngestedGame&& g) { kept += g.plies.empty() && !g.corrupt_at_ply; });
    pipe.consume(in, "x");
    EXPECT_EQ(kept, 1);
}

TEST(GameId, StableAndContentSensitive)
{
    const auto a = testsupport::parse_games(kKlip);
    const auto b = testsupport::parse_games("\n\n" + kKlip);
    EXPECT_EQ(a[0].game_id, b[0].game_id);
    auto c = a[0];
    c.san_moves.pop_back();
    EXPECT_NE(compute_game_id(c.raw_tags, c.san_moves), a[0].game_id);
}
