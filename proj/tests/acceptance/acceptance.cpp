#include "oracle/corpus_gen.hpp"
#include "oracle/naive_chess.hpp"
#include "oracle/naive_stats.hpp"
#include "oracle/stats_compare.hpp"
#include "support/fixtures.hpp"

#include "chessan/core/movegen.hpp"
#include "chessan/core/position.hpp"
#include "chessan/core/replay.hpp"
#include "chessan/engine/evaluation.hpp"
#include "chessan/engine/uci_parse.hpp"
#include "chessan/orchestrator/cost.hpp"
#include "chessan/pgn/dedup.hpp"
#include "chessan/positions/eco.hpp"
#include "chessan/positions/position_set.hpp"
#include "chessan/positions/trace.hpp"
#include "chessan/stats/game_summary.hpp"
#include "chessan/stats/statistics.hpp"
#include "chessan/store/corpus_store.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace chessan;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

enum class Status { Pass, Fail, Blocked };

struct Verdict {
    Status status = Status::Pass;
    std::string detail;
};

Verdict pass(std::string d) { return {Status::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Status::Fail, std::move(d)}; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string field(const std::string& text, const std::string& key)
{
    const auto at = text.rfind(key + "=");
    if (at == std::string::npos)
        return {};
    const auto from = at + key.size() + 1;
    return text.substr(from, text.find_first_of(" \n", from) - from);
}

Verdict perft_kernel()
{
    const auto t0 = Clock::now();
    const std::uint64_t want[] = {20, 400, 8902, 197281};
    for (int d = 1; d <= 4; ++d)
        if (const auto got = perft(initial_position(), d); got != want[d - 1])
            return fail(fmt::format("start depth {}: {} != {}", d, got, want[d - 1]));
    const std::vector<std::string> mid = {
        "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
        "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
        "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
    };
    std::string counts;
    for (const auto& fen : mid) {
        const auto got = perft(decode_fen(fen), 3);
        const auto ref = oracle::perft(oracle::parse_fen(fen), 3);
        if (got != ref)
            return fail(fmt::format("{} depth 3: {} != oracle {}", fen, got, ref));
        counts += fmt::format(" {}", got);
    }
    const double secs = seconds_since(t0);
    if (secs >= 60)
        return fail(fmt::format("took {:.1f} s", secs));
    return pass(fmt::format("perft 1-4 = 20/400/8902/197281; mid-game depth 3 ={} match oracle; {:.2f} s", counts,
                            secs));
}

Verdict short_mates()
{
    const auto games = testsupport::parse_games(testsupport::slurp(testsupport::data_dir() / "short_mates.pgn"));
    if (games.size() != 3)
        return fail(fmt::format("{} games parsed", games.size()));
    const std::size_t plies[] = {5, 7, 8};
    const GameResult winner[] = {GameResult::WhiteWin, GameResult::WhiteWin, GameResult::BlackWin};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto r = replay_game(games[i]);
        if (r.size() != plies[i])
            return fail(fmt::format("game {}: {} plies, expected {}", i + 1, r.size(), plies[i]));
        const auto last = decode_fen(r.back().fen.str());
        if (!r.back().kind.gives_checkmate || !legal_moves(last).empty() || !in_check(last))
            return fail(fmt::format("game {}: final position is not checkmate", i + 1));
        // the side that just moved delivered mate
        const auto mated_white = last.side_to_move() == Color::White;
        const auto mate_winner = mated_white ? GameResult::BlackWin : GameResult::WhiteWin;
        if (mate_winner != winner[i] || games[i].result != winner[i])
            return fail(fmt::format("game {}: winner mismatch", i + 1));
    }
    return pass("Qh5# 1-0 (5 plies), Qxf7# 1-0 (7 plies), Qg5# 0-1 (8 plies)");
}

Verdict fen_round_trip()
{
    std::mt19937_64 rng(2024);
    std::size_t checked = 0;
    while (checked < 10'000) {
        Position p = initial_position();
        const int len = 1 + static_cast<int>(rng() % 160);
        for (int ply = 0; ply < len && checked < 10'000; ++ply) {
            const auto moves = legal_moves(p);
            if (moves.empty())
                break;
            p = apply_move(p, moves[rng() % moves.size()]).first;
            const auto fen = encode_fen(p).str();
            const auto back = decode_fen(fen);
            if (!(back == p) || encode_fen(back).str() != fen)
                return fail("round trip broke at " + fen);
            ++checked;
        }
    }
    return pass(fmt::format("{} playout positions: decode(encode(p)) == p and encode(decode(f)) == f", checked));
}

Verdict dedup_oracle()
{
    // games
    const auto plan = oracle::corpus_with_duplicates(800, 200, 4242);
    std::set<int> classes;
    for (const auto& g : plan.games)
        classes.insert(g.class_id);
    std::istringstream in(oracle::to_pgn(plan.games));
    pgn::GameDeduplicator dedup;
    std::vector<pgn::IngestedGame> kept;
    pgn::IngestPipeline pipe(dedup, [&](pgn::IngestedGame&& g) { kept.push_back(std::move(g)); });
    pipe.consume(in, "plan.pgn");
    const auto& r = pipe.report();
    if (r.games_read != 1000 || r.games_kept != classes.size() || r.duplicates_removed != 1000 - classes.size() ||
        r.parse_failures != 0)
        return fail(fmt::format("read={} kept={} removed={} (oracle kept={} removed={})", r.games_read, r.games_kept,
                                r.duplicates_removed, classes.size(), 1000 - classes.size()));

    // positions, with the opening filter of a small book
    std::istringstream eco_text(testsupport::small_eco_tsv());
    const auto eco = positions::load_eco(eco_text);
    std::set<std::string> book;
    for (const auto& line : {std::vector<std::string>{"e4"}, std::vector<std::string>{"e4", "e5"},
                             std::vector<std::string>{"d4", "d5", "c4"}, std::vector<std::string>{"d4"},
                             std::vector<std::string>{"d4", "d5"}}) {
        const auto plies = replay_moves(line);
        book.insert(plies.back().fen.str());
    }
    std::set<std::string> brute;
    std::uint64_t theory = 0;
    positions::PositionSet set(positions::KeyMode::SixField);
    std::ostringstream workload;
    positions::PositionDeduper deduper(set, workload);
    for (const auto& g : kept) {
        if (!g.corrupt_detail.empty())
            continue;
        const auto plies = replay_game(g.game);
        bool in_book = true;
        for (const auto& p : plies) {
            in_book = in_book && book.contains(p.fen.str());
            if (in_book)
                ++theory;
            else
                brute.insert(p.fen.str());
        }
        deduper.add(positions::trace_plies(g.game.game_id, plies, eco.index));
    }
    deduper.finish();
    const auto& pr = deduper.report();
    if (set.unique_count() != brute.size() || pr.theory_plies != theory)
        return fail(fmt::format("unique={} brute={} theory={} brute theory={}", set.unique_count(), brute.size(),
                                pr.theory_plies, theory));
    const std::string text = workload.str();
    if (static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) != brute.size())
        return fail("workload line count differs from the unique count");

    // hand-traced fixture: 1. e4 e5 2. Nf3 is book, book, out
    GameRecord fixture;
    fixture.game_id = "fixture";
    fixture.san_moves = {"e4", "e5", "Nf3", "Nc6"};
    const auto t = positions::trace_game(fixture, eco.index);
    std::vector<bool> flags;
    for (const auto& p : t.plies)
        flags.push_back(p.theory);
    if (flags != std::vector<bool>{true, true, false, false})
        return fail("hand-traced ECO fixture flags differ");
    GameRecord qg;
    qg.san_moves = {"d4", "d5", "c4", "e6", "Nc3"};
    if (positions::trace_game(qg, eco.index).theory_prefix_length() != 3)
        return fail("queen's gambit fixture prefix differs");
    return pass(fmt::format("games kept={} removed={}; unique positions={} theory plies={}; ECO fixture exact",
                            r.games_kept, r.duplicates_removed, set.unique_count(), theory));
}

struct Workspace {
    testsupport::TempDir dir{"accept"};
    std::vector<std::string> with(std::vector<std::string> args) const
    {
        std::vector<std::string> v = {"--store", (dir / "store").string(), "--out", (dir / "out").string()};
        v.insert(v.end(), args.begin(), args.end());
        return v;
    }
};

std::optional<std::string> check_records(const fs::path& store_dir, const std::vector<std::string>& fens)
{
    store::CorpusStore store(store_dir, false);
    const auto keys = store.evaluation_keys();
    std::set<std::string> distinct;
    for (const auto& [fen, engine, depth, rank] : keys)
        distinct.insert(fen);
    if (keys.size() != fens.size() || distinct != std::set<std::string>(fens.begin(), fens.end()))
        return fmt::format("{} records, {} distinct fens", keys.size(), distinct.size());
    if (!store.failures().empty())
        return fmt::format("{} failures recorded", store.failures().size());
    return std::nullopt;
}

Verdict orchestrator_resilience()
{
    const auto fens = testsupport::unique_positions(1000, 99);
    const std::vector<std::string> engine = {"--engine", testsupport::mock_engine(), "--depth", "3"};
    std::vector<std::string> summary;

    for (const int pool : {1, 4, 8}) {
        Workspace w;
        const auto workload = testsupport::write_workload(w.dir / "work.fen", fens);
        if (testsupport::cli(w.with({"shard", "--workload", workload.string(), "--shard-size", "250"})) != 0)
            return fail("shard failed");
        auto args = w.with({"analyze", "--pool-size", std::to_string(pool)});
        args.insert(args.end(), engine.begin(), engine.end());
        std::string out, err;
        if (const int rc = testsupport::cli(args, &out, &err); rc != 0)
            return fail(fmt::format("pool {}: exit {}: {}", pool, rc, err));
        if (const auto bad = check_records(w.dir / "store", fens))
            return fail(fmt::format("pool {}: {}", pool, *bad));
        if (testsupport::cli(args, &out) != 0 || field(out, "evaluated") != "0" ||
            field(out, "skipped_existing") != "1000")
            return fail(fmt::format("pool {}: re-run reported {}", pool, out));
        summary.push_back(fmt::format("pool {}: 1000 records, re-run evaluated=0 skipped=1000", pool));
    }

    std::mt19937_64 rng(5150);
    int trials = 0;
    std::string kills;
    while (trials < 10) {
        Workspace w;
        const auto workload = testsupport::write_workload(w.dir / "work.fen", fens);
        testsupport::cli(w.with({"shard", "--workload", workload.string(), "--shard-size", "250"}));
        const int pool = std::array{1, 4, 8}[rng() % 3];
        const std::uint64_t kill_at = 1 + rng() % 998;
        std::vector<std::string> argv = {testsupport::cli_binary()};
        for (const auto& a : w.with({"analyze", "--pool-size", std::to_string(pool), "--set",
                                     "engine_options.DelayMs=2"}))
            argv.push_back(a);
        argv.insert(argv.end(), engine.begin(), engine.end());
        const pid_t pid = testsupport::spawn_process(argv, w.dir / "child.log");
        std::uint64_t seen = 0;
        std::optional<int> exited;
        const auto deadline = Clock::now() + std::chrono::minutes(3);
        while (seen < kill_at && Clock::now() < deadline && !(exited = testsupport::poll_process(pid))) {
            std::this_thread::sleep_for(std::chrono::milliseconds(2));
            if (!fs::exists(w.dir / "store" / "corpus.sqlite"))
                continue;
            try {
                seen = store::CorpusStore(w.dir / "store", false).evaluation_count();
            } catch (const store::StoreError&) {
            }
        }
        if (exited)
            return fail(fmt::format("analyze exited with {} before the kill: {}", *exited,
                                    testsupport::slurp(w.dir / "child.log")));
        ::kill(pid, SIGKILL);
        if (const int rc = testsupport::wait_process(pid); rc != -SIGKILL) {
            if (rc != 0)
                return fail(fmt::format("analyze exited with {}: {}", rc, testsupport::slurp(w.dir / "child.log")));
            continue; // finished before the kill landed; draw another point
        }
        ++trials;

        auto args = w.with({"analyze", "--pool-size", std::to_string(pool)});
        args.insert(args.end(), engine.begin(), engine.end());
        std::string out, err;
        if (const int rc = testsupport::cli(args, &out, &err); rc != 0)
            return fail(fmt::format("trial {}: resume exit {}: {}", trials, rc, err));
        if (const auto bad = check_records(w.dir / "store", fens))
            return fail(fmt::format("trial {} (killed after {}): {}", trials, seen, *bad));
        if (testsupport::cli(args, &out) != 0 || field(out, "evaluated") != "0" ||
            field(out, "skipped_existing") != "1000")
            return fail(fmt::format("trial {}: re-run reported {}", trials, out));
        kills += fmt::format("{}{}@p{}", kills.empty() ? "" : ",", seen, pool);
    }
    summary.push_back(fmt::format("10/10 kill+resume trials exact (killed at {})", kills));
    std::string d;
    for (const auto& s : summary)
        d += (d.empty() ? "" : "; ") + s;
    return pass(d);
}

Verdict uci_fidelity()
{
    const auto dir = testsupport::data_dir() / "engine" / "stockfish11";
    std::ifstream in(dir / "expected.tsv");
    std::map<std::string, std::vector<std::vector<std::string>>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, '\t'))
            f.push_back(cell);
        f.resize(6);
        rows[f[0]].push_back(f);
    }
    if (rows.empty())
        return fail("no expectations");
    std::size_t records = 0;
    for (const auto& [name, expected] : rows) {
        const auto log = testsupport::slurp(dir / (name + ".log"));
        const auto out = engine::records_from_log(log);
        if (out.error != engine::SelectError::None || out.records.size() != expected.size())
            return fail(fmt::format("{}: {}", name, out.detail));
        for (std::size_t i = 0; i < expected.size(); ++i) {
            const auto& r = out.records[i];
            const auto score = r.score.kind == engine::ScoreKind::Checkmated ? "mate 0" : r.score.to_uci_text();
            std::string pv;
            for (const auto& m : r.pv)
                pv += (pv.empty() ? "" : " ") + m;
            const auto& e = expected[i];
            if (r.fen.str() != e[1] || std::to_string(r.depth) != e[2] || std::to_string(r.multipv_rank) != e[3] ||
                score != e[4] || pv != e[5] || r.engine_identity().rfind("Stockfish 11", 0) != 0)
                return fail(fmt::format("{} rank {}: got {} / {}", name, i + 1, score, pv));
            if (r.raw_log != log)
                return fail(name + ": raw_log not kept verbatim");
        }
        // the record is a function of raw_log alone
        const auto again = engine::records_from_log(out.records.front().raw_log);
        for (std::size_t i = 0; i < again.records.size(); ++i)
            if (engine::serialize_record(again.records[i], false) != engine::serialize_record(out.records[i], false))
                return fail(name + ": second parse differs");
        records += expected.size();
    }
    return pass(fmt::format("{} transcripts, {} records re-parsed byte-exactly from raw_log", rows.size(), records));
}

Verdict cost_model()
{
    const auto c = orchestrator::estimate_cost(270e6, 6, 1);
    const double years = c.wall_years();
    if (c.total_core_seconds != 1.62e9 || !(years >= 48 && years <= 53))
        return fail(fmt::format("core_seconds={} years={}", c.total_core_seconds, years));
    return pass(fmt::format("1.62e9 core-seconds, {:.0f} hours, {:.0f} days, {:.2f} years", c.wall_hours(),
                            c.wall_days(), years));
}

Verdict stats_oracle()
{
    oracle::GenOptions opt;
    opt.games = 5000;
    opt.seed = 8;
    opt.max_plies = 100;
    const auto records = testsupport::parse_games(oracle::to_pgn(oracle::generate_games(opt)));
    if (records.size() != 5000)
        return fail(fmt::format("{} games parsed", records.size()));
    std::vector<stats::GameSummary> summaries;
    std::vector<oracle::NaiveGame> naive;
    for (const auto& g : records) {
        summaries.push_back(stats::summarize(g, replay_game(g)));
        naive.push_back(oracle::naive_game(g));
    }
    std::vector<stats::CorpusFilter> filters(4);
    filters[1].require_both_elos = true;
    filters[1].require_known_result = true;
    filters[2].year_min = 1980;
    filters[2].year_max = 2010;
    filters[3].min_ply = 40;
    const std::vector<stats::TableOptions> options = {{25, 100, 4, false}, {50, 200, 3, true}};
    std::size_t checks = 0;
    for (const auto& f : filters)
        for (const auto& o : options) {
            stats::StatsContext ctx;
            ctx.filter = f;
            const auto tables = stats::all_tables(summaries, ctx, o);
            auto n = oracle::naive_stats(naive, oracle::naive_filter(f), o.elo_bin_width, o.band_width);
            auto diffs = oracle::stats_mismatches(tables, n, o.top_k);
            if (o.include_draws) {
                // p_higher then counts draws in the denominator; compare it separately
                std::erase_if(diffs, [](const std::string& d) { return d.find("p_higher") != std::string::npos; });
                for (const auto& t : tables)
                    if (t.name == "winrate_vs_elo_difference")
                        for (std::size_t r = 0; r < t.rows.size(); ++r)
                            if (std::abs(t.number(r, "p_higher") - t.number(r, "higher_share")) > 1e-12)
                                diffs.push_back("p_higher with draws differs from higher_share");
            }
            const auto closure = oracle::share_closure_violations(tables);
            if (!diffs.empty())
                return fail(fmt::format("[{}] {} mismatches, first: {}", f.describe(), diffs.size(), diffs.front()));
            if (!closure.empty())
                return fail(closure.front());
            checks += tables.size();
        }
    return pass(fmt::format("5000 games, {} tables across {} filter/option sets equal the naive tally", checks,
                            filters.size() * options.size()));
}

std::vector<fs::path> real_pgn_inputs()
{
    std::vector<fs::path> out;
    auto add = [&](const fs::path& p) {
        if (fs::is_regular_file(p))
            out.push_back(p);
        else if (fs::is_directory(p))
            for (const auto& e : fs::recursive_directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".pgn")
                    out.push_back(e.path());
    };
    if (const char* env = std::getenv("CHESSAN_REAL_PGN"))
        add(env);
    else
        add(testsupport::data_dir() / "real");
    std::sort(out.begin(), out.end());
    return out;
}

Verdict real_corpus_trends()
{
    const auto inputs = real_pgn_inputs();
    if (inputs.empty())
        return {Status::Blocked, "no real PGN sample (set CHESSAN_REAL_PGN or add tests/data/real/*.pgn)"};
    const auto t0 = Clock::now();
    Workspace w;
    std::vector<std::string> args = w.with({"ingest"});
    for (const auto& p : inputs)
        args.push_back(p.string());
    std::string out, err;
    if (const int rc = testsupport::cli(args, &out, &err); rc != 0)
        return fail(fmt::format("ingest exit {}: {}", rc, err));
    if (testsupport::cli(w.with({"stats", "--no-svg"}), nullptr, &err) != 0)
        return fail("stats failed: " + err);

    store::CorpusStore store(w.dir / "store", false);
    const auto all = store.summaries();
    std::vector<stats::GameSummary> rated;
    for (const auto& g : all)
        if (g.white_elo && g.black_elo)
            rated.push_back(g);
    if (rated.size() < 2000)
        return {Status::Blocked, fmt::format("sample has {} rated games, need 2000", rated.size())};

    std::vector<std::string> problems;
    const auto win = stats::winrate_vs_elodiff(rated, {}, 100);
    double prev = -1;
    for (std::size_t r = 0; r < win.rows.size(); ++r) {
        if (win.number(r, "bin_lo") >= 400)
            break;
        const double p = win.number(r, "p_higher");
        if (p < prev)
            problems.push_back(fmt::format("p_higher falls to {:.3f} at diff {}", p, win.number(r, "bin_lo")));
        prev = p;
    }
    std::int64_t white = 0, black = 0, plies = 0;
    std::map<std::string, std::int64_t> first;
    for (const auto& g : rated) {
        white += g.result == GameResult::WhiteWin;
        black += g.result == GameResult::BlackWin;
        plies += g.plies;
        if (!g.first_move.empty())
            ++first[g.first_move];
    }
    const double white_share = static_cast<double>(white) / static_cast<double>(white + black);
    const double mean_ply = static_cast<double>(plies) / static_cast<double>(rated.size());
    std::vector<std::pair<std::int64_t, std::string>> ranked;
    for (const auto& [m, n] : first)
        ranked.emplace_back(n, m);
    std::sort(ranked.rbegin(), ranked.rend());
    const std::set<std::string> top2 = ranked.size() >= 2 ? std::set<std::string>{ranked[0].second, ranked[1].second}
                                                          : std::set<std::string>{};
    if (!(white_share > 0.5))
        problems.push_back(fmt::format("white decisive share {:.3f}", white_share));
    if (!(mean_ply >= 50 && mean_ply <= 110))
        problems.push_back(fmt::format("mean ply {:.1f}", mean_ply));
    if (top2 != std::set<std::string>{"e4", "d4"})
        problems.push_back("top first moves are not e4 and d4");
    const double secs = seconds_since(t0);
    if (secs >= 300)
        problems.push_back(fmt::format("took {:.0f} s", secs));
    const auto d = fmt::format("{} rated games; white decisive share {:.3f}; mean ply {:.1f}; {:.1f} s", rated.size(),
                               white_share, mean_ply, secs);
    if (!problems.empty())
        return fail(d + "; " + problems.front());
    return pass(d);
}

Verdict pipeline_determinism()
{
    oracle::GenOptions opt;
    opt.games = 400;
    opt.seed = 10;
    const auto pgn = oracle::to_pgn(oracle::generate_games(opt));
    testsupport::TempDir root("determinism");
    std::vector<fs::path> dirs = {root / "a", root / "b"};
    for (const auto& d : dirs) {
        fs::create_directories(d);
        testsupport::write_text(d / "games.pgn", pgn);
        fs::copy_file(testsupport::eco_table(), d / "eco.tsv");
        const std::vector<std::vector<std::string>> steps = {
            {"ingest", "games.pgn"}, {"positions", "--eco", "eco.tsv"}, {"stats"}};
        for (auto step : steps) {
            std::vector<std::string> argv = {testsupport::cli_binary(), "--store", "store", "--out", "out"};
            argv.insert(argv.end(), step.begin(), step.end());
            const auto r = testsupport::run_process(argv, d);
            if (r.exit_code != 0)
                return fail(fmt::format("{} in {}: exit {}: {}", step[0], d.string(), r.exit_code, r.output));
        }
    }
    std::vector<fs::path> compared;
    for (const auto& e : fs::recursive_directory_iterator(dirs[0] / "out"))
        if (e.is_regular_file()) {
            const auto ext = e.path().extension();
            if (ext == ".csv" || ext == ".fen" || ext == ".set" || ext == ".provenance")
                compared.push_back(fs::relative(e.path(), dirs[0]));
        }
    std::sort(compared.begin(), compared.end());
    std::size_t csvs = 0;
    for (const auto& rel : compared) {
        if (!fs::exists(dirs[1] / rel))
            return fail(rel.string() + " missing in second run");
        if (testsupport::slurp(dirs[0] / rel) != testsupport::slurp(dirs[1] / rel))
            return fail(rel.string() + " differs between runs");
        csvs += rel.extension() == ".csv";
    }
    if (!fs::exists(dirs[0] / "out" / "workload.fen") || csvs < 12)
        return fail(fmt::format("only {} CSVs produced", csvs));
    return pass(fmt::format("workload.fen and {} CSVs byte-identical across two runs", csvs));
}

const std::map<int, std::pair<std::string, std::function<Verdict()>>>& criteria()
{
    static const std::map<int, std::pair<std::string, std::function<Verdict()>>> c = {
        {1, {"rules kernel perft", perft_kernel}},
        {2, {"short-game replays", short_mates}},
        {3, {"FEN round trip", fen_round_trip}},
        {4, {"dedup oracle", dedup_oracle}},
        {5, {"orchestrator resilience", orchestrator_resilience}},
        {6, {"UCI parsing fidelity", uci_fidelity}},
        {7, {"cost model", cost_model}},
        {8, {"statistics oracle equivalence", stats_oracle}},
        {9, {"real-corpus trends", real_corpus_trends}},
        {10, {"pipeline determinism", pipeline_determinism}},
    };
    return c;
}

int run(int n)
{
    const auto& [name, fn] = criteria().at(n);
    const auto t0 = Clock::now();
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception& e) {
        v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.status == Status::Pass ? "PASS" : v.status == Status::Fail ? "FAIL" : "BLOCKED";
    std::cout << fmt::format("{} criterion {} ({}): {} [{:.1f} s]", tag, n, name, v.detail, seconds_since(t0))
              << std::endl;
    return v.status == Status::Pass ? 0 : v.status == Status::Fail ? 1 : 77;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "run one criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);
    if (only != 0)
        return run(only);
    int worst = 0;
    for (const auto& [n, c] : criteria()) {
        const int rc = run(n);
        if (rc == 1 || worst == 0)
            worst = std::max(worst, rc == 77 ? 0 : rc);
    }
    return worst;
}
