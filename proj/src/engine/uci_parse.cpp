#include "chessan/engine/uci_parse.hpp"

#include "chessan/core/movegen.hpp"
#include "chessan/util/text.hpp"

#include <fmt/format.h>

#include <map>

namespace chessan::engine {

namespace {

constexpr std::string_view kSentPrefix = "> ";
constexpr std::string_view kRecvPrefix = "< ";

bool starts_with_word(std::string_view line, std::string_view word)
{
    return line.substr(0, word.size()) == word && (line.size() == word.size() || line[word.size()] == ' ');
}

template <class T>
std::optional<T> int_token(std::string_view t)
{
    const auto v = parse_integer(t);
    if (!v)
        return std::nullopt;
    return static_cast<T>(*v);
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.push_back(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    }
    return lines;
}

} // namespace

bool looks_like_uci_move(std::string_view t) noexcept
{
    if (t == "0000")
        return true;
    if (t.size() != 4 && t.size() != 5)
        return false;
    auto file = [](char c) { return c >= 'a' && c <= 'h'; };
    auto rank = [](char c) { return c >= '1' && c <= '8'; };
    if (!file(t[0]) || !rank(t[1]) || !file(t[2]) || !rank(t[3]))
        return false;
    return t.size() == 4 || t[4] == 'q' || t[4] == 'r' || t[4] == 'b' || t[4] == 'n';
}

InfoFields parse_info_line(std::string_view line)
{
    InfoFields f;
    const auto tok = split_whitespace(line);
    if (tok.empty() || tok[0] != "info")
        return f;
    for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto t = tok[i];
        const bool has_next = i + 1 < tok.size();
        if (t == "string") {
            break;
        } else if (t == "depth" && has_next) {
            f.depth = int_token<int>(tok[++i]);
        } else if (t == "seldepth" && has_next) {
            f.seldepth = int_token<int>(tok[++i]);
        } else if (t == "multipv" && has_next) {
            f.multipv = int_token<int>(tok[++i]);
        } else if (t == "nodes" && has_next) {
            f.nodes = int_token<std::uint64_t>(tok[++i]);
        } else if (t == "score" && i + 2 < tok.size()) {
            const auto kind = tok[i + 1];
            const auto v = int_token<int>(tok[i + 2]);
            i += 2;
            if (!v)
                continue;
            if (kind == "cp")
                f.score = Score::centipawns(*v);
            else if (kind == "mate")
                f.score = *v == 0 ? Score::checkmated() : Score::mate_in(*v);
            while (i + 1 < tok.size() && (tok[i + 1] == "lowerbound" || tok[i + 1] == "upperbound")) {
                f.bound = tok[i + 1] == "lowerbound" ? Bound::Lower : Bound::Upper;
                ++i;
            }
        } else if (t == "pv") {
            std::vector<std::string> pv;
            while (i + 1 < tok.size() && looks_like_uci_move(tok[i + 1]))
                pv.emplace_back(tok[++i]);
            f.pv = std::move(pv);
        }
    }
    return f;
}

std::optional<IdLine> parse_id_name(std::string_view line)
{
    const auto tok = split_whitespace(line);
    if (tok.size() < 3 || tok[0] != "id" || tok[1] != "name")
        return std::nullopt;
    IdLine id;
    std::size_t i = 2;
    std::vector<std::string> name, version;
    for (; i < tok.size() && (name.empty() || !(tok[i][0] >= '0' && tok[i][0] <= '9')); ++i)
        name.emplace_back(tok[i]);
    for (; i < tok.size(); ++i)
        version.emplace_back(tok[i]);
    id.name = join(name, " ");
    id.version = join(version, " ");
    return id;
}

std::optional<std::string> parse_bestmove(std::string_view line)
{
    const auto tok = split_whitespace(line);
    if (tok.size() < 2 || tok[0] != "bestmove")
        return std::nullopt;
    return std::string(tok[1]);
}

SearchOutcome select_search_result(const FenKey& fen, std::string_view engine_name, std::string_view engine_version,
                                   int target_depth, int multipv, const std::vector<std::string>& received)
{
    SearchOutcome out;
    const Position pos = decode_fen(fen.str());
    const auto legal = legal_moves(pos);

    auto base = [&] {
        EvaluationRecord r;
        r.fen = fen;
        r.engine_name = std::string(engine_name);
        r.engine_version = std::string(engine_version);
        r.depth = target_depth;
        return r;
    };

    if (legal.empty()) {
        EvaluationRecord r = base();
        r.terminal = true;
        r.score = in_check(pos) ? Score::checkmated() : Score::centipawns(0);
        out.records.push_back(std::move(r));
        return out;
    }

    std::map<int, InfoFields> last;
    for (const auto& line : received) {
        if (!starts_with_word(line, "info"))
            continue;
        auto f = parse_info_line(line);
        if (!f.depth || *f.depth != target_depth || !f.score || f.bound != Bound::Exact || !f.pv || f.pv->empty())
            continue;
        const int rank = f.multipv.value_or(1);
        if (rank < 1 || rank > multipv)
            continue;
        last[rank] = std::move(f);
    }
    const int expected = std::min<int>(multipv, static_cast<int>(legal.size()));
    for (int rank = 1; rank <= expected; ++rank) {
        const auto it = last.find(rank);
        if (it == last.end()) {
            out.records.clear();
            out.error = SelectError::NoInfoAtTargetDepth;
            out.detail = fmt::format("no complete info line at depth {} for multipv {}", target_depth, rank);
            return out;
        }
        EvaluationRecord r = base();
        r.multipv_rank = rank;
        r.score = *it->second.score;
        r.pv = *it->second.pv;
        r.nodes = it->second.nodes;
        out.records.push_back(std::move(r));
    }
    return out;
}

SearchOutcome records_from_log(const std::string& raw_log)
{
    std::string name, version, fen_text;
    int depth = 0;
    int multipv = 1;
    std::vector<std::string> received;
    bool searching = false;
    for (const auto line_view : split_lines(raw_log)) {
        const bool sent = line_view.substr(0, 2) == kSentPrefix;
        const bool recv = line_view.substr(0, 2) == kRecvPrefix;
        if (!sent && !recv)
            continue;
        const std::string_view body = line_view.substr(2);
        if (sent) {
            const auto tok = split_whitespace(body);
            if (tok.size() >= 3 && tok[0] == "position" && tok[1] == "fen") {
                fen_text = std::string(body.substr(body.find("fen") + 4));
                received.clear();
            } else if (tok.size() == 3 && tok[0] == "go" && tok[1] == "depth") {
                depth = static_cast<int>(parse_integer(tok[2]).value_or(0));
                searching = true;
            } else if (tok.size() == 5 && tok[0] == "setoption" && tok[2] == "MultiPV") {
                multipv = static_cast<int>(parse_integer(tok[4]).value_or(1));
            }
            continue;
        }
        if (auto id = parse_id_name(body)) {
            name = id->name;
            version = id->version;
        } else if (searching) {
            received.emplace_back(body);
            if (starts_with_word(body, "bestmove"))
                searching = false;
        }
    }
    SearchOutcome out = select_search_result(FenKey(fen_text), name, version, depth, multipv, received);
    for (auto& r : out.records)
        r.raw_log = raw_log;
    return out;
}

} // namespace chessan::engine
