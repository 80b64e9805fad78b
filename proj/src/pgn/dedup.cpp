#include "chessan/pgn/dedup.hpp"

#include "chessan/pgn/headers.hpp"
#include "chessan/util/text.hpp"

#include <fmt/format.h>

#include <array>

namespace chessan::pgn {

namespace {

constexpr std::size_t kMaxDiagnostics = 10000;

constexpr std::array<std::string_view, 9> kTitles = {"gm", "im", "fm", "cm", "nm", "wgm", "wim", "wfm", "wcm"};

bool is_title(std::string_view w)
{
    for (const auto t : kTitles)
        if (w == t)
            return true;
    return false;
}

std::string_view strip_trailing_punct(std::string_view s)
{
    while (!s.empty() && (s.back() == '.' || s.back() == ',' || s.back() == ';' || s.back() == ' '))
        s.remove_suffix(1);
    return s;
}

std::string csv_field(std::string_view v)
{
    if (v.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(v);
    std::string out = "\"";
    for (const char c : v) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string normalize_player_name(std::string_view name)
{
    std::string lowered = ascii_lower(name);
    std::string collapsed;
    for (const auto w : split_whitespace(lowered)) {
        if (!collapsed.empty() && collapsed.back() != ',')
            collapsed += ' ';
        collapsed += w;
    }
    std::string_view s = collapsed;
    while (true) {
        const auto before = s.size();
        s = strip_trailing_punct(s);
        if (!s.empty() && s.back() == ')') {
            const auto open = s.rfind('(');
            if (open != std::string_view::npos)
                s = s.substr(0, open);
        }
        s = strip_trailing_punct(s);
        const auto sp = s.find_last_of(" ,");
        if (sp != std::string_view::npos && is_title(s.substr(sp + 1)))
            s = s.substr(0, sp);
        if (s.size() == before)
            break;
    }
    return std::string(s);
}

Digest128 moves_digest(const std::vector<std::string>& san_moves)
{
    ContentHasher h;
    for (const auto& m : san_moves) {
        std::string_view v = m;
        while (!v.empty() && (v.back() == '+' || v.back() == '#'))
            v.remove_suffix(1);
        h.field(v);
    }
    return h.finish();
}

Digest128 dedup_key(const GameRecord& game)
{
    ContentHasher h;
    h.field(normalize_player_name(game.white_name))
        .field(normalize_player_name(game.black_name))
        .field(to_pgn_token(game.result));
    const auto moves = moves_digest(game.san_moves);
    h.field(std::string_view(reinterpret_cast<const char*>(moves.bytes.data()), moves.bytes.size()));
    return h.finish();
}

void IngestReport::merge(const IngestReport& other)
{
    games_read += other.games_read;
    games_kept += other.games_kept;
    duplicates_removed += other.duplicates_removed;
    parse_failures += other.parse_failures;
    illegal_replay_failures += other.illegal_replay_failures;
    for (const auto& d : other.diagnostics)
        if (diagnostics.size() < kMaxDiagnostics)
            diagnostics.push_back(d);
}

std::string IngestReport::summary_line() const
{
    return fmt::format("games_read={} games_kept={} duplicates_removed={} parse_failures={} illegal_replay_failures={}",
                       games_read, games_kept, duplicates_removed, parse_failures, illegal_replay_failures);
}

std::string IngestReport::to_text() const
{
    std::string out;
    out += fmt::format("games_read              {}\n", games_read);
    out += fmt::format("games_kept              {}\n", games_kept);
    out += fmt::format("duplicates_removed      {}\n", duplicates_removed);
    out += fmt::format("parse_failures          {}\n", parse_failures);
    out += fmt::format("illegal_replay_failures {}\n", illegal_replay_failures);
    out += "note: duplicate key = normalized white, normalized black, result, mainline digest;\n"
           "      this approximates game identity and ignores date, event and annotations.\n";
    if (!diagnostics.empty()) {
        out += "diagnostics:\n";
        for (const auto& d : diagnostics)
            out += "  " + d + "\n";
    }
    return out;
}

std::string IngestReport::to_csv() const
{
    std::string out = "# duplicate key approximates game identity: normalized names, result, mainline digest\n";
    out += "metric,value\n";
    out += fmt::format("games_read,{}\ngames_kept,{}\nduplicates_removed,{}\nparse_failures,{}\nillegal_replay_failures,{}\n",
                       games_read, games_kept, duplicates_removed, parse_failures, illegal_replay_failures);
    for (const auto& d : diagnostics)
        out += "diagnostic," + csv_field(d) + "\n";
    return out;
}

bool GameDeduplicator::insert_if_absent(const Digest128& key)
{
    std::lock_guard lock(mu_);
    return keys_.insert(key).second;
}

bool GameDeduplicator::contains(const Digest128& key) const
{
    std::lock_guard lock(mu_);
    return keys_.contains(key);
}

std::size_t GameDeduplicator::size() const
{
    std::lock_guard lock(mu_);
    return keys_.size();
}

DedupResult dedup_games(const std::vector<GameRecord>& games)
{
    DedupResult r;
    GameDeduplicator seen;
    for (const auto& g : games) {
        ++r.report.games_read;
        if (seen.insert_if_absent(dedup_key(g))) {
            ++r.report.games_kept;
            r.kept.push_back(g);
        } else {
            ++r.report.duplicates_removed;
        }
    }
    return r;
}

IngestPipeline::IngestPipeline(GameDeduplicator& dedup, Sink sink) : dedup_(dedup), sink_(std::move(sink)) {}

void IngestPipeline::note(std::string diagnostic)
{
    if (report_.diagnostics.size() < kMaxDiagnostics)
        report_.diagnostics.push_back(std::move(diagnostic));
}

void IngestPipeline::consume(std::istream& in, const std::string& source_name)
{
    PgnReader reader(in, source_name);
    while (auto item = reader.next()) {
        if (auto* err = std::get_if<GameError>(&*item)) {
            ++report_.games_read;
            ++report_.parse_failures;
            note(fmt::format("{}:{}: {}: {}", err->source_file, err->line_number, to_string(err->kind), err->message));
            continue;
        }
        consume_record(std::move(std::get<GameRecord>(*item)));
    }
}

void IngestPipeline::consume_record(GameRecord&& game)
{
    ++report_.games_read;
    for (const auto& d : normalize_headers(game.raw_tags).diagnostics)
        note(fmt::format("{}@{}: {}", game.source_file, game.byte_offset, d));
    IngestedGame out;
    out.key = dedup_key(game);
    if (!dedup_.insert_if_absent(out.key)) {
        ++report_.duplicates_removed;
        return;
    }
    ++report_.games_kept;
    try {
        out.plies = replay_game(game);
    } catch (const ReplayError& e) {
        ++report_.illegal_replay_failures;
        out.corrupt_at_ply = e.ply_index();
        out.corrupt_detail = e.what();
        note(fmt::format("{}@{}: {}", game.source_file, game.byte_offset, e.what()));
    }
    out.game = std::move(game);
    sink_(std::move(out));
}

} // namespace chessan::pgn
