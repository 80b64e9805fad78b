#include "chessan/store/corpus_store.hpp"

#include "chessan/pgn/dedup.hpp"
#include "chessan/util/text.hpp"

#include <fmt/format.h>
#include <sqlite3.h>
#include <zlib.h>

#include <cstring>
#include <map>
#include <sstream>

namespace chessan::store {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS meta (
    key   TEXT PRIMARY KEY,
    value TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS players (
    id              INTEGER PRIMARY KEY,
    normalized_name TEXT NOT NULL UNIQUE,
    display_name    TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS games (
    id             INTEGER PRIMARY KEY,
    game_id        TEXT NOT NULL UNIQUE,
    dedup_key      BLOB NOT NULL UNIQUE,
    white_id       INTEGER NOT NULL REFERENCES players(id),
    black_id       INTEGER NOT NULL REFERENCES players(id),
    white_name     TEXT NOT NULL,
    black_name     TEXT NOT NULL,
    event          TEXT,
    site           TEXT,
    round          TEXT,
    date_year      INTEGER,
    date_month     INTEGER,
    date_day       INTEGER,
    white_elo      INTEGER,
    black_elo      INTEGER,
    eco            TEXT,
    result         TEXT NOT NULL,
    moves          TEXT NOT NULL,
    raw_tags       TEXT NOT NULL,
    source_file    TEXT NOT NULL,
    byte_offset    INTEGER NOT NULL,
    corrupt        INTEGER NOT NULL DEFAULT 0,
    corrupt_detail TEXT,
    plies          INTEGER NOT NULL,
    first_move     TEXT,
    final_mate     INTEGER,
    captures       INTEGER,
    promotions     INTEGER,
    castles_k      INTEGER,
    castles_q      INTEGER,
    piece_moves    TEXT
);
CREATE TABLE IF NOT EXISTS game_positions (
    game_ref  INTEGER NOT NULL REFERENCES games(id),
    ply_index INTEGER NOT NULL,
    fen       TEXT NOT NULL,
    theory    INTEGER NOT NULL DEFAULT 0,
    PRIMARY KEY (game_ref, ply_index)
) WITHOUT ROWID;
CREATE INDEX IF NOT EXISTS game_positions_fen ON game_positions(fen);
CREATE TABLE IF NOT EXISTS evaluations (
    fen            TEXT NOT NULL,
    engine         TEXT NOT NULL,
    depth          INTEGER NOT NULL,
    rank           INTEGER NOT NULL,
    engine_name    TEXT NOT NULL,
    engine_version TEXT NOT NULL,
    score_kind     TEXT NOT NULL,
    score_value    INTEGER NOT NULL,
    pv             TEXT NOT NULL,
    nodes          INTEGER,
    terminal       INTEGER NOT NULL,
    wall_ms        INTEGER NOT NULL,
    produced_at    TEXT NOT NULL,
    log_path       TEXT NOT NULL,
    PRIMARY KEY (fen, engine, depth, rank)
) WITHOUT ROWID;
CREATE TABLE IF NOT EXISTS failures (
    fen         TEXT NOT NULL,
    engine      TEXT NOT NULL,
    depth       INTEGER NOT NULL,
    attempts    INTEGER NOT NULL,
    kind        TEXT NOT NULL,
    detail      TEXT NOT NULL,
    log_path    TEXT,
    recorded_at TEXT NOT NULL,
    PRIMARY KEY (fen, engine, depth)
) WITHOUT ROWID;
)sql";

class Stmt {
public:
    Stmt(sqlite3* db, const char* sql) : db_(db)
    {
        if (sqlite3_prepare_v2(db, sql, -1, &st_, nullptr) != SQLITE_OK)
            throw StoreError(StoreErrorKind::ReadFailure, fmt::format("prepare: {}", sqlite3_errmsg(db)));
    }
    ~Stmt() { sqlite3_finalize(st_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    Stmt& bind(int i, std::string_view v)
    {
        sqlite3_bind_text(st_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
        return *this;
    }
    Stmt& bind(int i, const std::string& v) { return bind(i, std::string_view(v)); }
    Stmt& bind(int i, const char* v) { return bind(i, std::string_view(v)); }
    Stmt& bind(int i, long long v)
    {
        sqlite3_bind_int64(st_, i, v);
        return *this;
    }
    Stmt& bind(int i, int v) { return bind(i, static_cast<long long>(v)); }
    Stmt& bind(int i, const Digest128& d)
    {
        sqlite3_bind_blob(st_, i, d.bytes.data(), static_cast<int>(d.bytes.size()), SQLITE_TRANSIENT);
        return *this;
    }
    template <class T>
    Stmt& bind(int i, const std::optional<T>& v)
    {
        if (v)
            return bind(i, *v);
        sqlite3_bind_null(st_, i);
        return *this;
    }

    /// True while rows remain.
    bool step(StoreErrorKind on_error = StoreErrorKind::ReadFailure)
    {
        const int rc = sqlite3_step(st_);
        if (rc == SQLITE_ROW)
            return true;
        if (rc == SQLITE_DONE)
            return false;
        throw StoreError(on_error, fmt::format("step: {}", sqlite3_errmsg(db_)));
    }
    void run() { step(StoreErrorKind::WriteFailure); }
    void reset()
    {
        sqlite3_reset(st_);
        sqlite3_clear_bindings(st_);
    }

    bool is_null(int c) const { return sqlite3_column_type(st_, c) == SQLITE_NULL; }
    long long i64(int c) const { return sqlite3_column_int64(st_, c); }
    int i32(int c) const { return sqlite3_column_int(st_, c); }
    std::string text(int c) const
    {
        const auto* p = sqlite3_column_text(st_, c);
        return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(sqlite3_column_bytes(st_, c)))
                 : std::string{};
    }
    std::optional<int> opt_int(int c) const { return is_null(c) ? std::nullopt : std::optional<int>(i32(c)); }
    std::optional<std::string> opt_text(int c) const
    {
        return is_null(c) ? std::nullopt : std::optional<std::string>(text(c));
    }
    Digest128 digest(int c) const
    {
        Digest128 d;
        const auto* p = static_cast<const std::uint8_t*>(sqlite3_column_blob(st_, c));
        if (p && sqlite3_column_bytes(st_, c) == static_cast<int>(d.bytes.size()))
            std::memcpy(d.bytes.data(), p, d.bytes.size());
        return d;
    }

private:
    sqlite3* db_;
    sqlite3_stmt* st_ = nullptr;
};

class Transaction {
public:
    explicit Transaction(sqlite3* db) : db_(db)
    {
        if (sqlite3_exec(db_, "BEGIN IMMEDIATE", nullptr, nullptr, nullptr) != SQLITE_OK)
            throw StoreError(StoreErrorKind::WriteFailure, fmt::format("begin: {}", sqlite3_errmsg(db_)));
    }
    ~Transaction()
    {
        if (!done_)
            sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
    }
    void commit()
    {
        if (sqlite3_exec(db_, "COMMIT", nullptr, nullptr, nullptr) != SQLITE_OK)
            throw StoreError(StoreErrorKind::WriteFailure, fmt::format("commit: {}", sqlite3_errmsg(db_)));
        done_ = true;
    }

private:
    sqlite3* db_;
    bool done_ = false;
};

std::string gzip(std::string_view data)
{
    z_stream zs{};
    if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw StoreError(StoreErrorKind::WriteFailure, "deflateInit2 failed");
    std::string out(deflateBound(&zs, data.size()) + 32, '\0');
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END)
        throw StoreError(StoreErrorKind::WriteFailure, "deflate failed");
    out.resize(zs.total_out);
    return out;
}

std::string gunzip(std::string_view data)
{
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 32) != Z_OK)
        throw StoreError(StoreErrorKind::ReadFailure, "inflateInit2 failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    std::string out;
    char buf[16384];
    int rc;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw StoreError(StoreErrorKind::ReadFailure, "corrupt log file");
        }
        out.append(buf, sizeof buf - zs.avail_out);
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

std::string encode_tags(const TagPairs& tags)
{
    std::string out;
    for (const auto& [k, v] : tags) {
        out += k;
        out += '\t';
        for (const char c : v)
            out += (c == '\n' || c == '\t') ? ' ' : c;
        out += '\n';
    }
    return out;
}

TagPairs decode_tags(std::string_view text)
{
    TagPairs tags;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (tab != std::string::npos)
            tags.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return tags;
}

std::vector<std::string> split_words(std::string_view s)
{
    std::vector<std::string> out;
    for (const auto w : split_whitespace(s))
        out.emplace_back(w);
    return out;
}

std::string csv(std::string_view v)
{
    if (v.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(v);
    std::string out = "\"";
    for (const char c : v) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

Color side_of(const FenKey& fen)
{
    const auto sp = fen.str().find(' ');
    return sp != std::string::npos && sp + 1 < fen.str().size() && fen.str()[sp + 1] == 'b' ? Color::Black
                                                                                           : Color::White;
}

StoredGame game_from_row(const Stmt& s)
{
    // column order matches kGameColumns
    StoredGame g;
    auto& r = g.record;
    r.game_id = s.text(0);
    g.dedup_key = s.digest(1);
    r.white_name = s.text(2);
    r.black_name = s.text(3);
    r.event = s.opt_text(4);
    r.site = s.opt_text(5);
    r.round = s.opt_text(6);
    if (!s.is_null(7))
        r.date = PgnDate{s.i32(7), s.opt_int(8), s.opt_int(9)};
    r.white_elo = s.opt_int(10);
    r.black_elo = s.opt_int(11);
    r.eco_code = s.opt_text(12);
    r.result = result_from_token(s.text(13)).value_or(GameResult::Unknown);
    r.san_moves = split_words(s.text(14));
    r.raw_tags = decode_tags(s.text(15));
    r.source_file = s.text(16);
    r.byte_offset = static_cast<std::uint64_t>(s.i64(17));
    g.corrupt = s.i32(18) != 0;
    g.corrupt_detail = s.text(19);
    return g;
}

constexpr const char* kGameColumns =
    "game_id, dedup_key, white_name, black_name, event, site, round, date_year, date_month, date_day, white_elo, "
    "black_elo, eco, result, moves, raw_tags, source_file, byte_offset, corrupt, corrupt_detail";

} // namespace

StoreError::StoreError(StoreErrorKind kind, const std::string& detail) : std::runtime_error(detail), kind_(kind) {}

CorpusStore::CorpusStore(const fs::path& dir, bool create_if_missing) : dir_(dir)
{
    std::error_code ec;
    if (!fs::exists(dir_ / "corpus.sqlite", ec)) {
        if (!create_if_missing)
            throw StoreError(StoreErrorKind::Unreachable, fmt::format("no store at {}", dir_.string()));
        fs::create_directories(dir_ / "logs", ec);
        if (ec)
            throw StoreError(StoreErrorKind::Unreachable, fmt::format("cannot create {}: {}", dir_.string(), ec.message()));
    }
    const auto db_path = (dir_ / "corpus.sqlite").string();
    const int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_FULLMUTEX | (create_if_missing ? SQLITE_OPEN_CREATE : 0);
    if (sqlite3_open_v2(db_path.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
        const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        db_ = nullptr;
        throw StoreError(StoreErrorKind::Unreachable, fmt::format("cannot open {}: {}", db_path, msg));
    }
    sqlite3_busy_timeout(db_, 10000);
    try {
        exec("PRAGMA journal_mode=WAL");
        exec("PRAGMA synchronous=FULL");
        exec("PRAGMA foreign_keys=ON");
        auto user_version = [this] {
            Stmt v(db_, "PRAGMA user_version");
            v.step();
            return v.i32(0);
        };
        int version = user_version();
        if (version == 0 && create_if_missing) {
            // the write lock is taken before the version is re-read, so two
            // processes opening a fresh store cannot both initialise it
            exec("BEGIN IMMEDIATE");
            try {
                version = user_version();
                if (version == 0) {
                    exec(kSchema);
                    exec(fmt::format("PRAGMA user_version={}", kLayoutVersion).c_str());
                    Stmt m(db_,
                           "INSERT OR REPLACE INTO meta(key, value) VALUES ('layout_version', ?1), ('created_at', ?2)");
                    m.bind(1, std::to_string(kLayoutVersion)).bind(2, utc_timestamp_now()).run();
                    version = kLayoutVersion;
                }
                exec("COMMIT");
            } catch (...) {
                sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
                throw;
            }
        }
        if (version == 0) {
            throw StoreError(StoreErrorKind::Unreachable, fmt::format("store at {} is not initialised", dir_.string()));
        } else if (version != kLayoutVersion) {
            throw StoreError(StoreErrorKind::LayoutMismatch,
                             fmt::format("store layout version {} (expected {})", version, kLayoutVersion));
        }
        fs::create_directories(dir_ / "logs");
    } catch (const StoreError& e) {
        sqlite3_close(db_);
        db_ = nullptr;
        if (e.kind() == StoreErrorKind::LayoutMismatch)
            throw;
        throw StoreError(StoreErrorKind::Unreachable, e.what());
    } catch (const fs::filesystem_error& e) {
        sqlite3_close(db_);
        db_ = nullptr;
        throw StoreError(StoreErrorKind::Unreachable, e.what());
    }
}

CorpusStore::~CorpusStore()
{
    if (db_)
        sqlite3_close(db_);
}

void CorpusStore::exec(const char* sql) const
{
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw StoreError(StoreErrorKind::WriteFailure, msg);
    }
}

std::vector<Digest128> CorpusStore::game_keys() const
{
    std::lock_guard lock(mu_);
    std::vector<Digest128> out;
    Stmt s(db_, "SELECT dedup_key FROM games ORDER BY id");
    while (s.step())
        out.push_back(s.digest(0));
    return out;
}

PutResult CorpusStore::put_game(const GameRecord& game, const Digest128& dedup_key, const std::vector<FenKey>& ply_fens,
                                const std::optional<stats::GameSummary>& summary, const std::string& corrupt_detail)
{
    std::lock_guard lock(mu_);
    Transaction tx(db_);
    {
        Stmt q(db_, "SELECT 1 FROM games WHERE dedup_key = ?1 OR game_id = ?2");
        q.bind(1, dedup_key).bind(2, game.game_id);
        if (q.step())
            return PutResult::AlreadyPresent;
    }
    auto player = [&](const std::string& name) {
        const auto norm = pgn::normalize_player_name(name);
        Stmt ins(db_, "INSERT OR IGNORE INTO players(normalized_name, display_name) VALUES (?1, ?2)");
        ins.bind(1, norm).bind(2, name).run();
        Stmt sel(db_, "SELECT id FROM players WHERE normalized_name = ?1");
        sel.bind(1, norm);
        sel.step();
        return sel.i64(0);
    };
    const auto white_id = player(game.white_name);
    const auto black_id = player(game.black_name);

    Stmt ins(db_, R"sql(INSERT INTO games(game_id, dedup_key, white_id, black_id, white_name, black_name, event, site,
        round, date_year, date_month, date_day, white_elo, black_elo, eco, result, moves, raw_tags, source_file,
        byte_offset, corrupt, corrupt_detail, plies, first_move, final_mate, captures, promotions, castles_k,
        castles_q, piece_moves)
        VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11, ?12, ?13, ?14, ?15, ?16, ?17, ?18, ?19, ?20, ?21, ?22,
        ?23, ?24, ?25, ?26, ?27, ?28, ?29, ?30))sql");
    ins.bind(1, game.game_id).bind(2, dedup_key).bind(3, white_id).bind(4, black_id);
    ins.bind(5, game.white_name).bind(6, game.black_name).bind(7, game.event).bind(8, game.site).bind(9, game.round);
    if (game.date) {
        ins.bind(10, game.date->year).bind(11, game.date->month).bind(12, game.date->day);
    }
    ins.bind(13, game.white_elo).bind(14, game.black_elo).bind(15, game.eco_code);
    ins.bind(16, to_pgn_token(game.result)).bind(17, join(game.san_moves, " ")).bind(18, encode_tags(game.raw_tags));
    ins.bind(19, game.source_file).bind(20, static_cast<long long>(game.byte_offset));
    ins.bind(21, summary ? 0 : 1).bind(22, corrupt_detail);
    ins.bind(23, static_cast<int>(game.ply_count()));
    if (summary) {
        std::vector<std::string> pieces;
        for (const int n : summary->piece_moves)
            pieces.push_back(std::to_string(n));
        ins.bind(24, summary->first_move).bind(25, summary->final_checkmate ? 1 : 0).bind(26, summary->captures);
        ins.bind(27, summary->promotions).bind(28, summary->castles_kingside).bind(29, summary->castles_queenside);
        ins.bind(30, join(pieces, " "));
    }
    ins.run();
    const auto ref = sqlite3_last_insert_rowid(db_);
    Stmt pos(db_, "INSERT INTO game_positions(game_ref, ply_index, fen, theory) VALUES (?1, ?2, ?3, 0)");
    for (std::size_t i = 0; i < ply_fens.size(); ++i) {
        pos.reset();
        pos.bind(1, static_cast<long long>(ref)).bind(2, static_cast<int>(i + 1)).bind(3, ply_fens[i].str()).run();
    }
    tx.commit();
    return PutResult::Inserted;
}

std::optional<StoredGame> CorpusStore::get_game(const std::string& game_id) const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, fmt::format("SELECT {} FROM games WHERE game_id = ?1", kGameColumns).c_str());
    s.bind(1, game_id);
    if (!s.step())
        return std::nullopt;
    return game_from_row(s);
}

std::uint64_t CorpusStore::game_count() const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, "SELECT COUNT(*) FROM games");
    s.step();
    return static_cast<std::uint64_t>(s.i64(0));
}

std::uint64_t CorpusStore::player_count() const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, "SELECT COUNT(*) FROM players");
    s.step();
    return static_cast<std::uint64_t>(s.i64(0));
}

void CorpusStore::for_each_game(const std::function<void(const StoredGame&)>& fn) const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, fmt::format("SELECT {} FROM games ORDER BY id", kGameColumns).c_str());
    while (s.step())
        fn(game_from_row(s));
}

void CorpusStore::for_each_game_positions(
    const std::function<void(const std::string&, const std::vector<GamePosition>&)>& fn) const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, R"sql(SELECT g.game_id, p.ply_index, p.fen, p.theory FROM games g
        LEFT JOIN game_positions p ON p.game_ref = g.id WHERE g.corrupt = 0 ORDER BY g.id, p.ply_index)sql");
    std::string current;
    bool have = false;
    std::vector<GamePosition> plies;
    while (s.step()) {
        auto id = s.text(0);
        if (have && id != current) {
            fn(current, plies);
            plies.clear();
        }
        current = std::move(id);
        have = true;
        if (!s.is_null(1))
            plies.push_back({s.i32(1), FenKey(s.text(2)), s.i32(3) != 0});
    }
    if (have)
        fn(current, plies);
}

std::vector<GamePosition> CorpusStore::game_positions(const std::string& game_id) const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, R"sql(SELECT p.ply_index, p.fen, p.theory FROM game_positions p JOIN games g ON g.id = p.game_ref
        WHERE g.game_id = ?1 ORDER BY p.ply_index)sql");
    s.bind(1, game_id);
    std::vector<GamePosition> out;
    while (s.step())
        out.push_back({s.i32(0), FenKey(s.text(1)), s.i32(2) != 0});
    return out;
}

void CorpusStore::set_theory_flags(const std::string& game_id, const std::vector<bool>& flags)
{
    set_theory_flags_bulk({{game_id, flags}});
}

void CorpusStore::set_theory_flags_bulk(const std::vector<std::pair<std::string, std::vector<bool>>>& batch)
{
    std::lock_guard lock(mu_);
    Transaction tx(db_);
    Stmt up(db_, R"sql(UPDATE game_positions SET theory = ?3
        WHERE game_ref = (SELECT id FROM games WHERE game_id = ?1) AND ply_index = ?2 AND theory != ?3)sql");
    for (const auto& [game_id, flags] : batch) {
        for (std::size_t i = 0; i < flags.size(); ++i) {
            up.reset();
            up.bind(1, game_id).bind(2, static_cast<int>(i + 1)).bind(3, flags[i] ? 1 : 0).run();
        }
    }
    tx.commit();
}

std::vector<stats::GameSummary> CorpusStore::summaries() const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, R"sql(SELECT game_id, date_year, white_elo, black_elo, result, plies, first_move, final_mate, captures,
        promotions, castles_k, castles_q, piece_moves FROM games WHERE corrupt = 0 ORDER BY id)sql");
    std::vector<stats::GameSummary> out;
    while (s.step()) {
        stats::GameSummary g;
        g.game_id = s.text(0);
        g.year = s.opt_int(1);
        g.white_elo = s.opt_int(2);
        g.black_elo = s.opt_int(3);
        g.result = result_from_token(s.text(4)).value_or(GameResult::Unknown);
        g.plies = s.i32(5);
        g.first_move = s.text(6);
        g.final_checkmate = s.i32(7) != 0;
        g.captures = s.i32(8);
        g.promotions = s.i32(9);
        g.castles_kingside = s.i32(10);
        g.castles_queenside = s.i32(11);
        const auto pieces = split_words(s.text(12));
        for (std::size_t i = 0; i < pieces.size() && i < g.piece_moves.size(); ++i)
            g.piece_moves[i] = static_cast<int>(parse_integer(pieces[i]).value_or(0));
        out.push_back(std::move(g));
    }
    return out;
}

fs::path CorpusStore::log_path(const FenKey& fen, const std::string& engine, int depth) const
{
    ContentHasher h;
    h.field(fen.str()).field(engine).field(std::to_string(depth));
    const auto hex = h.finish().hex();
    return fs::path("logs") / hex.substr(0, 2) / (hex + ".log.gz");
}

std::string CorpusStore::read_log(const std::string& relative) const
{
    if (relative.empty())
        return {};
    try {
        return gunzip(read_file(dir_ / relative));
    } catch (const std::runtime_error& e) {
        throw StoreError(StoreErrorKind::ReadFailure, e.what());
    }
}

PutResult CorpusStore::put_evaluation(const engine::EvaluationRecord& rec) { return put_evaluations({rec}).front(); }

std::vector<PutResult> CorpusStore::put_evaluations(const std::vector<engine::EvaluationRecord>& recs)
{
    std::lock_guard lock(mu_);
    std::vector<PutResult> results;
    if (recs.empty())
        return results;

    std::vector<bool> present;
    {
        Stmt q(db_, "SELECT 1 FROM evaluations WHERE fen = ?1 AND engine = ?2 AND depth = ?3 AND rank = ?4");
        for (const auto& r : recs) {
            q.reset();
            q.bind(1, r.fen.str()).bind(2, r.engine_identity()).bind(3, r.depth).bind(4, r.multipv_rank);
            present.push_back(q.step());
        }
    }
    bool any_new = false;
    for (const bool p : present)
        any_new = any_new || !p;
    if (!any_new)
        return std::vector<PutResult>(recs.size(), PutResult::AlreadyPresent);

    const auto& first = recs.front();
    const auto rel = log_path(first.fen, first.engine_identity(), first.depth);
    try {
        fs::create_directories((dir_ / rel).parent_path());
        const auto full = dir_ / rel;
        if (!fs::exists(full) || gunzip(read_file(full)) != first.raw_log)
            write_file_atomically(full, gzip(first.raw_log));
    } catch (const std::exception& e) {
        throw StoreError(StoreErrorKind::WriteFailure, fmt::format("log write failed: {}", e.what()));
    }

    Transaction tx(db_);
    Stmt ins(db_, R"sql(INSERT OR IGNORE INTO evaluations(fen, engine, depth, rank, engine_name, engine_version,
        score_kind, score_value, pv, nodes, terminal, wall_ms, produced_at, log_path)
        VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11, ?12, ?13, ?14))sql");
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        ins.reset();
        ins.bind(1, r.fen.str()).bind(2, r.engine_identity()).bind(3, r.depth).bind(4, r.multipv_rank);
        ins.bind(5, r.engine_name).bind(6, r.engine_version).bind(7, engine::to_string(r.score.kind));
        ins.bind(8, r.score.value).bind(9, join(r.pv, " "));
        if (r.nodes)
            ins.bind(10, static_cast<long long>(*r.nodes));
        ins.bind(11, r.terminal ? 1 : 0).bind(12, static_cast<long long>(r.wall_time.count()));
        ins.bind(13, r.produced_at).bind(14, rel.string());
        ins.run();
        results.push_back(sqlite3_changes(db_) > 0 ? PutResult::Inserted : PutResult::AlreadyPresent);
    }
    tx.commit();
    return results;
}

std::optional<engine::EvaluationRecord> CorpusStore::get_evaluation(const FenKey& fen, const std::string& engine,
                                                                    int depth, int rank, bool with_log) const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, R"sql(SELECT engine_name, engine_version, score_kind, score_value, pv, nodes, terminal, wall_ms,
        produced_at, log_path FROM evaluations WHERE fen = ?1 AND engine = ?2 AND depth = ?3 AND rank = ?4)sql");
    s.bind(1, fen.str()).bind(2, engine).bind(3, depth).bind(4, rank);
    if (!s.step())
        return std::nullopt;
    engine::EvaluationRecord r;
    r.fen = fen;
    r.engine_name = s.text(0);
    r.engine_version = s.text(1);
    r.depth = depth;
    r.multipv_rank = rank;
    r.score.kind = engine::score_kind_from_string(s.text(2)).value_or(engine::ScoreKind::Centipawns);
    r.score.value = s.i32(3);
    r.pv = split_words(s.text(4));
    if (!s.is_null(5))
        r.nodes = static_cast<std::uint64_t>(s.i64(5));
    r.terminal = s.i32(6) != 0;
    r.wall_time = std::chrono::milliseconds(s.i64(7));
    r.produced_at = s.text(8);
    if (with_log)
        r.raw_log = read_log(s.text(9));
    return r;
}

std::pair<int, bool> CorpusStore::evaluation_coverage(const FenKey& fen, const std::string& engine, int depth,
                                                      int max_rank) const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, R"sql(SELECT COUNT(*), COALESCE(MAX(terminal), 0) FROM evaluations
        WHERE fen = ?1 AND engine = ?2 AND depth = ?3 AND rank BETWEEN 1 AND ?4)sql");
    s.bind(1, fen.str()).bind(2, engine).bind(3, depth).bind(4, max_rank);
    s.step();
    return {s.i32(0), s.i32(1) != 0};
}

std::uint64_t CorpusStore::evaluation_count() const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, "SELECT COUNT(*) FROM evaluations");
    s.step();
    return static_cast<std::uint64_t>(s.i64(0));
}

std::vector<std::tuple<std::string, std::string, int, int>> CorpusStore::evaluation_keys() const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, "SELECT fen, engine, depth, rank FROM evaluations ORDER BY fen, engine, depth, rank");
    std::vector<std::tuple<std::string, std::string, int, int>> out;
    while (s.step())
        out.emplace_back(s.text(0), s.text(1), s.i32(2), s.i32(3));
    return out;
}

std::vector<std::pair<std::string, int>> CorpusStore::engine_depths() const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, "SELECT DISTINCT engine, depth FROM evaluations ORDER BY engine, depth");
    std::vector<std::pair<std::string, int>> out;
    while (s.step())
        out.emplace_back(s.text(0), s.i32(1));
    return out;
}

void CorpusStore::record_failure(const FailureRecord& f)
{
    std::lock_guard lock(mu_);
    std::string rel;
    if (!f.raw_log.empty()) {
        ContentHasher h;
        h.field("failure").field(f.fen.str()).field(f.engine).field(std::to_string(f.depth));
        const auto hex = h.finish().hex();
        rel = (fs::path("logs") / "failed" / (hex + ".log.gz")).string();
        try {
            fs::create_directories(dir_ / "logs" / "failed");
            write_file_atomically(dir_ / rel, gzip(f.raw_log));
        } catch (const std::exception& e) {
            throw StoreError(StoreErrorKind::WriteFailure, fmt::format("log write failed: {}", e.what()));
        }
    }
    Stmt s(db_, R"sql(INSERT OR REPLACE INTO failures(fen, engine, depth, attempts, kind, detail, log_path, recorded_at)
        VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8))sql");
    s.bind(1, f.fen.str()).bind(2, f.engine).bind(3, f.depth).bind(4, f.attempts).bind(5, f.kind).bind(6, f.detail);
    s.bind(7, rel).bind(8, utc_timestamp_now()).run();
}

std::vector<FailureRecord> CorpusStore::failures() const
{
    std::lock_guard lock(mu_);
    Stmt s(db_, "SELECT fen, engine, depth, attempts, kind, detail, log_path FROM failures ORDER BY fen, engine, depth");
    std::vector<FailureRecord> out;
    while (s.step()) {
        FailureRecord f{FenKey(s.text(0)), s.text(1), s.i32(2), s.i32(3), s.text(4), s.text(5), {}};
        f.raw_log = read_log(s.text(6));
        out.push_back(std::move(f));
    }
    return out;
}

ScoreTrajectory CorpusStore::score_trajectory(const std::string& game_id, const std::string& engine, int depth) const
{
    std::lock_guard lock(mu_);
    const auto game = get_game(game_id);
    if (!game)
        throw StoreError(StoreErrorKind::UnknownGame, fmt::format("unknown game '{}'", game_id));
    ScoreTrajectory t;
    t.game_id = game_id;
    for (const auto& p : game_positions(game_id)) {
        TrajectoryPoint pt{p.ply_index, p.fen, std::nullopt, p.theory};
        if (const auto rec = get_evaluation(p.fen, engine, depth, 1, false))
            pt.score = rec->score.to_white(side_of(p.fen));
        t.points.push_back(std::move(pt));
    }
    return t;
}

void CorpusStore::export_evaluations_csv(std::ostream& out) const
{
    std::lock_guard lock(mu_);
    out << "fen,engine,depth,rank,score_kind,score_value,pv,nodes,wall_ms\n";
    Stmt s(db_, R"sql(SELECT fen, engine, depth, rank, score_kind, score_value, pv, nodes, wall_ms FROM evaluations
        ORDER BY fen, engine, depth, rank)sql");
    while (s.step()) {
        out << csv(s.text(0)) << ',' << csv(s.text(1)) << ',' << s.i32(2) << ',' << s.i32(3) << ',' << s.text(4) << ','
            << s.i32(5) << ',' << csv(s.text(6)) << ',' << (s.is_null(7) ? std::string{} : std::to_string(s.i64(7)))
            << ',' << s.i64(8) << '\n';
    }
}

} // namespace chessan::store
