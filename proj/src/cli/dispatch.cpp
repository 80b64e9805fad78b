#include "chessan/cli/dispatch.hpp"

#include "chessan/config/run_config.hpp"
#include "chessan/orchestrator/cost.hpp"
#include "chessan/orchestrator/manifest.hpp"
#include "chessan/orchestrator/runner.hpp"
#include "chessan/pgn/dedup.hpp"
#include "chessan/positions/eco.hpp"
#include "chessan/positions/position_set.hpp"
#include "chessan/positions/trace.hpp"
#include "chessan/stats/game_summary.hpp"
#include "chessan/stats/render.hpp"
#include "chessan/stats/statistics.hpp"
#include "chessan/store/corpus_store.hpp"
#include "chessan/util/text.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace chessan::cli {

namespace fs = std::filesystem;
using config::RunConfig;

namespace {

struct Io {
    std::ostream& out;
    std::ostream& err;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string provenance_block(const RunConfig& cfg, std::string_view prefix)
{
    std::string out;
    for (const auto& line : cfg.provenance_lines())
        out += fmt::format("{}config {}\n", prefix, line);
    return out;
}

store::CorpusStore open_store(const RunConfig& cfg, bool create)
{
    if (!create && !fs::exists(cfg.store_dir / "corpus.sqlite"))
        throw store::StoreError(store::StoreErrorKind::Unreachable, "no store at " + cfg.store_dir.string());
    return store::CorpusStore(cfg.store_dir, create);
}

std::string engine_descriptor(const engine::EngineConfig& e)
{
    std::string s = fmt::format("binary={} depth={} multipv={}", e.binary, e.target_depth, e.multipv);
    for (const auto& a : e.args)
        s += " arg=" + a;
    for (const auto& [k, v] : e.options)
        s += fmt::format(" option.{}={}", k, v);
    return s;
}

int cmd_ingest(const RunConfig& cfg, Io io)
{
    config::require_inputs(cfg, true, false, false);
    auto store = open_store(cfg, true);
    pgn::GameDeduplicator dedup;
    for (const auto& key : store.game_keys())
        dedup.insert_if_absent(key);

    pgn::IngestPipeline pipeline(dedup, [&](pgn::IngestedGame&& g) {
        if (g.corrupt_at_ply) {
            store.put_game(g.game, g.key, {}, std::nullopt, g.corrupt_detail);
            return;
        }
        std::vector<FenKey> fens;
        fens.reserve(g.plies.size());
        for (const auto& p : g.plies)
            fens.push_back(p.fen);
        store.put_game(g.game, g.key, fens, stats::summarize(g.game, g.plies));
    });
    for (const auto& path : cfg.pgn_inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw config::ConfigError("cannot open " + path.string());
        pipeline.consume(in, path.string());
    }
    const auto& report = pipeline.report();
    fs::create_directories(cfg.output_dir);
    write_file_atomically(cfg.output_dir / "ingest-report.txt", report.to_text() + provenance_block(cfg, ""));
    write_file_atomically(cfg.output_dir / "ingest-report.csv", provenance_block(cfg, "# ") + report.to_csv());
    io.out << report.summary_line() << fmt::format(" games_stored={}", store.game_count()) << '\n';
    return 0;
}

int cmd_positions(const RunConfig& cfg, Io io)
{
    config::require_inputs(cfg, false, true, false);
    auto store = open_store(cfg, false);
    positions::EcoLoadResult eco;
    if (!cfg.eco_table.empty()) {
        eco = positions::load_eco_file(cfg.eco_table);
        for (const auto& f : eco.failures)
            io.err << fmt::format("eco line {} skipped: {}\n", f.line_number, f.reason);
    }

    if (cfg.workload.has_parent_path())
        fs::create_directories(cfg.workload.parent_path());
    const fs::path tmp = cfg.workload.string() + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + tmp.string());

    positions::PositionSet set(cfg.key_mode);
    positions::PositionDeduper deduper(set, out);
    std::vector<std::pair<std::string, std::vector<bool>>> changed;
    store.for_each_game_positions([&](const std::string& game_id, const std::vector<store::GamePosition>& stored) {
        std::vector<FenKey> fens;
        fens.reserve(stored.size());
        for (const auto& p : stored)
            fens.push_back(p.fen);
        const auto trace = positions::trace_fens(game_id, fens, eco.index);
        deduper.add(trace);
        std::vector<bool> flags;
        bool differs = false;
        for (std::size_t i = 0; i < trace.plies.size(); ++i) {
            flags.push_back(trace.plies[i].theory);
            differs = differs || trace.plies[i].theory != stored[i].theory;
        }
        if (differs)
            changed.emplace_back(game_id, std::move(flags));
    });
    try {
        deduper.finish();
    } catch (const positions::WorkloadWriteError& e) {
        io.err << e.what() << fmt::format(" (last durable offset {})\n", e.last_durable_offset());
        return kExitRunFailure;
    }
    out.close();
    if (!out)
        throw std::runtime_error("cannot write " + tmp.string());
    commit_file(tmp, cfg.workload);
    std::ostringstream snapshot;
    set.write_snapshot(snapshot);
    write_file_atomically(cfg.workload.string() + ".set", snapshot.str());
    store.set_theory_flags_bulk(changed);

    const auto& r = deduper.report();
    std::string meta = fmt::format("workload={}\nkey_mode={}\neco_table={}\neco_positions={}\neco_max_depth={}\n{}\n",
                                   cfg.workload.string(), positions::to_string(cfg.key_mode), cfg.eco_table.string(),
                                   eco.index.size(), eco.index.max_line_depth(), r.summary_line());
    write_file_atomically(cfg.workload.string() + ".provenance", meta + provenance_block(cfg, ""));
    io.out << r.summary_line() << fmt::format(" key_mode={} eco_positions={} workload={}",
                                              positions::to_string(cfg.key_mode), eco.index.size(),
                                              cfg.workload.string())
           << '\n';
    return 0;
}

int cmd_shard(const RunConfig& cfg, Io io)
{
    config::require_inputs(cfg, false, false, true);
    const auto shards = orchestrator::make_shards(cfg.workload, cfg.shard_size, engine_descriptor(cfg.engine));
    orchestrator::write_shards(cfg.shard_dir, shards);
    std::uint64_t positions = 0;
    for (const auto& m : shards)
        positions += m.size();
    io.out << fmt::format("shards={} positions={} shard_size={} dir={}", shards.size(), positions, cfg.shard_size,
                          cfg.shard_dir.string())
           << '\n';
    return 0;
}

int cmd_analyze(const RunConfig& cfg, const std::vector<std::string>& only, Io io)
{
    auto manifests = orchestrator::load_all_manifests(cfg.shard_dir);
    if (!only.empty()) {
        const std::set<std::string> wanted(only.begin(), only.end());
        std::erase_if(manifests, [&](const auto& m) { return !wanted.contains(m.shard_id); });
        if (manifests.size() != wanted.size())
            throw UsageError("unknown shard id among --shard values");
    }
    if (manifests.empty()) {
        io.err << "no shard manifests in " << cfg.shard_dir.string() << " (run `chessan shard` first)\n";
        return kExitRunFailure;
    }
    auto store = open_store(cfg, true);

    int exit_code = 0;
    std::uint64_t evaluated = 0, skipped = 0, failed = 0, done = 0;
    for (auto& m : manifests) {
        orchestrator::RunOptions opt;
        opt.pool_size = cfg.pool_size;
        opt.retry_limit = cfg.retry_limit;
        opt.worker_failure_budget = cfg.worker_failure_budget;
        opt.manifest_file = orchestrator::manifest_path(cfg.shard_dir, m.shard_id);
        opt.checkpoint_file = orchestrator::checkpoint_path(cfg.shard_dir, m.shard_id);
        opt.on_event = [&](const std::string& e) { io.err << m.shard_id << ": " << e << '\n'; };
        const auto r = orchestrator::run_shard(m, opt, store, cfg.engine);
        io.out << fmt::format("shard={} status={} evaluated={} skipped_existing={} failed_positions={}",
                              r.manifest.shard_id, orchestrator::to_string(r.manifest.status), r.manifest.evaluated,
                              r.manifest.skipped_existing, r.manifest.failed_positions)
               << '\n';
        if (!r.message.empty())
            io.err << r.manifest.shard_id << ": " << r.message << '\n';
        evaluated += r.manifest.evaluated;
        skipped += r.manifest.skipped_existing;
        failed += r.manifest.failed_positions;
        done += r.manifest.status == orchestrator::ShardStatus::Done;
        exit_code = std::max(exit_code, r.exit_code);
        if (r.exit_code == orchestrator::kExitStoreUnreachable)
            break;
    }
    io.out << fmt::format("shards={} done={} evaluated={} skipped_existing={} failed_positions={} records={}",
                          manifests.size(), done, evaluated, skipped, failed, store.evaluation_count())
           << '\n';
    return exit_code;
}

int cmd_status(const RunConfig& cfg, std::optional<int> sessions, bool csv, bool text, Io io)
{
    const auto manifests = orchestrator::load_all_manifests(cfg.shard_dir);
    const auto p = orchestrator::run_status(manifests, sessions);
    if (csv)
        io.out << p.to_csv();
    else if (text)
        io.out << p.to_text();
    io.out << p.summary_line() << '\n';
    return 0;
}

int cmd_stats(const RunConfig& cfg, Io io)
{
    auto store = open_store(cfg, false);
    const auto corpus = store.summaries();
    const stats::StatsContext ctx{cfg.corpus_id, cfg.filter};
    stats::TableOptions opt;
    opt.elo_bin_width = cfg.elo_bin_width;
    opt.band_width = cfg.band_width;
    opt.top_k = cfg.top_k;
    opt.include_draws = cfg.include_draws;
    auto tables = stats::all_tables(corpus, ctx, opt);
    const auto dir = cfg.output_dir / "stats";
    for (auto& t : tables) {
        for (const auto& line : cfg.provenance_lines())
            t.note("config", line);
        stats::render(t, dir, cfg.svg);
    }
    io.out << fmt::format("tables={} games={} out={}", tables.size(), corpus.size(), dir.string()) << '\n';
    return 0;
}

int display_cp(const engine::Score& s)
{
    switch (s.kind) {
    case engine::ScoreKind::Centipawns: return std::clamp(s.value, -1000, 1000);
    case engine::ScoreKind::MateIn: return s.value > 0 ? 1000 : -1000;
    case engine::ScoreKind::Checkmated: return s.value > 0 ? 1000 : -1000;
    }
    return 0;
}

int cmd_trajectory(const RunConfig& cfg, const std::string& game_id, std::string engine_id, Io io)
{
    auto store = open_store(cfg, false);
    const int depth = cfg.engine.target_depth;
    if (engine_id.empty()) {
        std::set<std::string> ids;
        for (const auto& [e, d] : store.engine_depths())
            if (d == depth)
                ids.insert(e);
        if (ids.size() > 1)
            throw UsageError(fmt::format("several engines have depth-{} evaluations; pass --engine-id", depth));
        if (!ids.empty())
            engine_id = *ids.begin();
    }
    const auto traj = store.score_trajectory(game_id, engine_id, depth);

    stats::StatTable t;
    t.name = "trajectory-" + game_id;
    t.kind = stats::TableKind::Series;
    t.columns = {{"ply", "ply"},
                 {"fen", ""},
                 {"theory", "flag"},
                 {"score_kind", ""},
                 {"score_value", "white perspective"},
                 {"display_cp", "centipawns, white, clamped"}};
    t.note("game", game_id);
    t.note("engine", engine_id.empty() ? "none" : engine_id);
    t.note("depth", std::to_string(depth));
    std::size_t scored = 0;
    for (const auto& p : traj.points) {
        std::vector<stats::Cell> row{std::int64_t{p.ply_index}, p.fen.str(), std::int64_t{p.theory}};
        if (p.score) {
            ++scored;
            row.emplace_back(std::string(engine::to_string(p.score->kind)));
            row.emplace_back(std::int64_t{p.score->value});
            row.emplace_back(std::int64_t{display_cp(*p.score)});
        } else {
            row.insert(row.end(), 3, std::monostate{});
        }
        t.add_row(std::move(row));
    }
    for (const auto& line : cfg.provenance_lines())
        t.note("config", line);
    const auto files = stats::render(t, cfg.output_dir / "trajectories", cfg.svg);
    io.out << fmt::format("game={} plies={} scored={} engine=\"{}\" depth={} csv={}", game_id, traj.points.size(),
                          scored, engine_id, depth, files.csv.string())
           << '\n';
    return 0;
}

int cmd_estimate(double n, double secs, int cores, Io io)
{
    const auto c = orchestrator::estimate_cost(n, secs, cores);
    io.out << c.summary_line() << '\n';
    return 0;
}

int cmd_games(const RunConfig& cfg, Io io)
{
    auto store = open_store(cfg, false);
    io.out << "game_id\twhite\tblack\tyear\tresult\tplies\tcorrupt\n";
    store.for_each_game([&](const store::StoredGame& g) {
        const auto& r = g.record;
        io.out << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\n", r.game_id, r.white_name, r.black_name,
                              r.date ? std::to_string(r.date->year) : "", to_pgn_token(r.result), r.ply_count(),
                              g.corrupt ? 1 : 0);
    });
    return 0;
}

int cmd_export(const RunConfig& cfg, Io io)
{
    auto store = open_store(cfg, false);
    fs::create_directories(cfg.output_dir);
    const auto path = cfg.output_dir / "evaluations.csv";
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        store.export_evaluations_csv(out);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
    }
    commit_file(tmp, path);
    io.out << fmt::format("records={} csv={}", store.evaluation_count(), path.string()) << '\n';
    return 0;
}

} // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Io io{out, err};
    CLI::App app{"Chess corpus pipeline: PGN ingest, position extraction, engine analysis, statistics", "chessan"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_file;
    std::vector<std::string> sets;
    config::ConfigValues flags;
    auto bind = [&flags](CLI::App* a, const std::string& name, const std::string& key, const std::string& desc) {
        a->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags[key] = v; }, desc);
    };
    auto bind_flag = [&flags](CLI::App* a, const std::string& name, const std::string& key, const std::string& value,
                              const std::string& desc) {
        a->add_flag_callback(name, [&flags, key, value] { flags[key] = value; }, desc);
    };

    app.add_option("--config", config_file, "INI run configuration");
    app.add_option("--set", sets, "override one config value, section.key=value")->take_all();
    bind(&app, "--store", "paths.store", "store directory");
    bind(&app, "--out", "paths.out", "output directory");

    std::vector<std::string> pgn_files;
    auto* ingest = app.add_subcommand("ingest", "parse, deduplicate and store PGN games");
    ingest->add_option("pgn", pgn_files, "PGN files");

    auto* positions = app.add_subcommand("positions", "write the deduplicated, theory-filtered workload");
    bind(positions, "--eco", "paths.eco", "ECO table (code<TAB>name<TAB>moves)");
    bind(positions, "--workload", "paths.workload", "workload file to write");
    bind(positions, "--key-mode", "run.key_mode", "6-field or 4-field");

    auto* shard = app.add_subcommand("shard", "split the workload into shard manifests");
    bind(shard, "--workload", "paths.workload", "workload file");
    bind(shard, "--shards", "paths.shards", "manifest directory");
    bind(shard, "--shard-size", "run.shard_size", "positions per shard");

    std::vector<std::string> only_shards;
    std::vector<std::string> engine_args;
    auto* analyze = app.add_subcommand("analyze", "evaluate shards with a UCI engine");
    bind(analyze, "--shards", "paths.shards", "manifest directory");
    bind(analyze, "--engine", "engine.binary", "UCI engine binary");
    analyze->add_option("--engine-arg", engine_args, "argument passed to the engine (repeatable)");
    bind(analyze, "--depth", "engine.depth", "search depth");
    bind(analyze, "--multipv", "engine.multipv", "lines per position");
    bind(analyze, "--pool-size", "run.pool_size", "engine sessions");
    bind(analyze, "--retry-limit", "run.retry_limit", "extra attempts per position");
    bind(analyze, "--position-timeout", "engine.position_timeout_s", "seconds per position");
    analyze->add_option("--shard", only_shards, "run only these shard ids");

    bool status_csv = false, status_text = false;
    auto* status = app.add_subcommand("status", "aggregate shard progress");
    bind(status, "--shards", "paths.shards", "manifest directory");
    bind(status, "--pool-size", "run.pool_size", "sessions assumed for the ETA");
    status->add_flag("--csv", status_csv, "print the CSV summary");
    status->add_flag("--text", status_text, "print the plain-text summary");

    auto* stats_cmd = app.add_subcommand("stats", "corpus statistics as CSV and SVG");
    bind(stats_cmd, "--bin-width", "stats.elo_bin_width", "Elo bin width");
    bind(stats_cmd, "--band-width", "stats.band_width", "mean-Elo band width");
    bind(stats_cmd, "--top-k", "stats.top_k", "first moves shown separately");
    bind(stats_cmd, "--year-min", "stats.year_min", "first year kept");
    bind(stats_cmd, "--year-max", "stats.year_max", "last year kept");
    bind(stats_cmd, "--min-ply", "stats.min_ply", "shortest game kept");
    bind(stats_cmd, "--corpus-id", "stats.corpus_id", "name recorded in provenance");
    bind_flag(stats_cmd, "--include-draws", "stats.include_draws", "true", "count draws in p_higher");
    bind_flag(stats_cmd, "--require-both-elos", "stats.require_both_elos", "true", "drop games missing an Elo");
    bind_flag(stats_cmd, "--require-known-result", "stats.require_known_result", "true", "drop '*' games");
    bind_flag(stats_cmd, "--no-svg", "stats.svg", "false", "CSV only");

    std::string game_id, engine_id;
    auto* trajectory = app.add_subcommand("trajectory", "white-perspective score per ply of one game");
    trajectory->add_option("game_id", game_id, "game id")->required();
    trajectory->add_option("--engine-id", engine_id, "engine identity, e.g. \"Stockfish 11\"");
    bind(trajectory, "--depth", "engine.depth", "evaluation depth");
    bind_flag(trajectory, "--no-svg", "stats.svg", "false", "CSV only");

    double est_n = 0, est_secs = 0;
    int est_cores = 1;
    auto* estimate = app.add_subcommand("estimate", "cost of analysing n positions");
    estimate->add_option("n", est_n, "positions")->required();
    estimate->add_option("secs", est_secs, "seconds per position")->required();
    estimate->add_option("cores", est_cores, "cores")->required();

    auto* export_cmd = app.add_subcommand("export", "write all evaluations as CSV");
    auto* games = app.add_subcommand("games", "list stored games");

    if (argc <= 1) {
        err << app.help();
        return kExitUsage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << "run `chessan --help` for usage\n";
        return kExitUsage;
    }

    try {
        if (estimate->parsed())
            return cmd_estimate(est_n, est_secs, est_cores, io);

        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0)
                throw UsageError("--set expects section.key=value, got '" + s + "'");
            flags[s.substr(0, eq)] = s.substr(eq + 1);
        }
        if (!pgn_files.empty())
            flags["paths.pgn"] = join(pgn_files, " ");
        if (!engine_args.empty())
            flags["engine.args"] = join(engine_args, " ");
        const auto cfg = config::load_config(config_file.empty() ? std::nullopt : std::optional<fs::path>(config_file),
                                             flags);

        if (ingest->parsed())
            return cmd_ingest(cfg, io);
        if (positions->parsed())
            return cmd_positions(cfg, io);
        if (shard->parsed())
            return cmd_shard(cfg, io);
        if (analyze->parsed())
            return cmd_analyze(cfg, only_shards, io);
        if (status->parsed())
            return cmd_status(cfg, flags.contains("run.pool_size") ? std::optional<int>(cfg.pool_size) : std::nullopt,
                              status_csv, status_text, io);
        if (stats_cmd->parsed())
            return cmd_stats(cfg, io);
        if (trajectory->parsed())
            return cmd_trajectory(cfg, game_id, engine_id, io);
        if (export_cmd->parsed())
            return cmd_export(cfg, io);
        if (games->parsed())
            return cmd_games(cfg, io);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const config::ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const store::StoreError& e) {
        err << "store error: " << e.what() << '\n';
        const bool unreachable =
            e.kind() == store::StoreErrorKind::Unreachable || e.kind() == store::StoreErrorKind::LayoutMismatch;
        return unreachable ? kExitStoreUnreachable : kExitRunFailure;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRunFailure;
    }
    return kExitUsage;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"chessan"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace chessan::cli
