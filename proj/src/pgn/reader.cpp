#include "chessan/pgn/reader.hpp"

#include "chessan/core/san.hpp"
#include "chessan/pgn/headers.hpp"
#include "chessan/util/hash.hpp"

#include <fmt/format.h>

#include <cctype>
#include <sstream>

namespace chessan::pgn {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

bool is_blank(std::string_view s)
{
    for (const char c : s)
        if (!is_space(c))
            return false;
    return true;
}

bool starts_tag(std::string_view line) { return !line.empty() && line.front() == '['; }

bool is_glyph_only(std::string_view t)
{
    for (const char c : t)
        if (c != '!' && c != '?')
            return false;
    return !t.empty();
}

bool plausible_san(std::string_view t)
{
    const auto core = strip_annotation_glyphs(t);
    std::string_view s = core;
    while (!s.empty() && (s.back() == '+' || s.back() == '#'))
        s.remove_suffix(1);
    if (s == "O-O" || s == "O-O-O" || s == "0-0" || s == "0-0-0")
        return true;
    constexpr std::string_view kAllowed = "KQRBNabcdefgh12345678x=:";
    bool has_square = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (kAllowed.find(s[i]) == std::string_view::npos)
            return false;
        if (i + 1 < s.size() && s[i] >= 'a' && s[i] <= 'h' && s[i + 1] >= '1' && s[i + 1] <= '8')
            has_square = true;
    }
    return has_square;
}

enum class TokenClass { Skip, Move, Result, Bad };

struct Classified {
    TokenClass cls;
    std::string_view text;
};

Classified classify(std::string_view token)
{
    if (result_from_token(token))
        return {TokenClass::Result, token};
    if (token == "e.p." || token == "ep")
        return {TokenClass::Skip, token};
    std::string_view rest = token;
    if (!rest.empty() && rest.front() >= '0' && rest.front() <= '9' && token.substr(0, 3) != "0-0") {
        std::size_t i = 0;
        while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9')
            ++i;
        if (i == rest.size())
            return {TokenClass::Skip, token};
        if (rest[i] != '.')
            return {TokenClass::Bad, token};
        while (i < rest.size() && rest[i] == '.')
            ++i;
        rest = rest.substr(i);
    }
    while (!rest.empty() && rest.front() == '.')
        rest.remove_prefix(1);
    if (rest.empty() || is_glyph_only(rest))
        return {TokenClass::Skip, token};
    if (!plausible_san(rest))
        return {TokenClass::Bad, token};
    return {TokenClass::Move, strip_annotation_glyphs(rest)};
}

} // namespace

std::string_view to_string(GameErrorKind k) noexcept
{
    switch (k) {
    case GameErrorKind::BadTagPair: return "bad-tag-pair";
    case GameErrorKind::UnterminatedComment: return "unterminated-comment";
    case GameErrorKind::BadMovetextToken: return "bad-movetext-token";
    case GameErrorKind::MissingResult: return "missing-result";
    }
    return "game-error";
}

std::string compute_game_id(const TagPairs& tags, const std::vector<std::string>& san_moves)
{
    ContentHasher h;
    for (const auto& [k, v] : tags)
        h.field(k).field(v);
    h.field("\x01movetext");
    for (const auto& m : san_moves)
        h.field(m);
    return h.finish().hex();
}

PgnReader::PgnReader(std::istream& in, std::string source_name) : in_(in), source_(std::move(source_name)) {}

bool PgnReader::read_line(std::string& line)
{
    if (pending_) {
        line = std::move(*pending_);
        pending_.reset();
        line_start_ = pending_offset_;
        offset_ = pending_end_;
    } else {
        line_start_ = offset_;
        if (!std::getline(in_, line))
            return false;
        offset_ += line.size() + (in_.eof() ? 0 : 1);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
    }
    ++line_no_;
    return true;
}

void PgnReader::unread(std::string line)
{
    pending_ = std::move(line);
    pending_offset_ = line_start_;
    pending_end_ = offset_;
    offset_ = line_start_;
    --line_no_;
}

GameError PgnReader::make_error(GameErrorKind kind, std::string message) const
{
    return GameError{kind, std::move(message), source_, game_offset_, game_line_};
}

bool PgnReader::parse_tag_line(std::string_view line, TagPairs& out) const
{
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < line.size() && is_space(line[i]))
            ++i;
    };
    bool any = false;
    skip_ws();
    while (i < line.size()) {
        if (line[i] != '[')
            return false;
        ++i;
        skip_ws();
        const std::size_t key_start = i;
        while (i < line.size() && (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
            ++i;
        if (i == key_start)
            return false;
        std::string key(line.substr(key_start, i - key_start));
        skip_ws();
        if (i >= line.size() || line[i] != '"')
            return false;
        ++i;
        std::string value;
        bool closed = false;
        while (i < line.size()) {
            const char c = line[i++];
            if (c == '\\' && i < line.size() && (line[i] == '"' || line[i] == '\\')) {
                value.push_back(line[i++]);
            } else if (c == '"') {
                closed = true;
                break;
            } else {
                value.push_back(c);
            }
        }
        if (!closed)
            return false;
        skip_ws();
        if (i >= line.size() || line[i] != ']')
            return false;
        ++i;
        skip_ws();
        out.emplace_back(std::move(key), std::move(value));
        any = true;
    }
    return any;
}

std::optional<PgnItem> PgnReader::next()
{
    std::string line;

    // Recover from a previous error: drop lines up to the next tag section.
    while (skipping_) {
        if (!read_line(line)) {
            skipping_ = false;
            return std::nullopt;
        }
        if (starts_tag(line) && skip_saw_non_tag_) {
            unread(std::move(line));
            skipping_ = false;
        } else if (!starts_tag(line)) {
            skip_saw_non_tag_ = true;
        }
    }

    do {
        if (!read_line(line))
            return std::nullopt;
    } while (is_blank(line) || line.front() == '%');

    game_offset_ = line_start_;
    game_line_ = line_no_;
    TagPairs tags;
    if (starts_tag(line)) {
        while (true) {
            if (!parse_tag_line(line, tags)) {
                skipping_ = true;
                skip_saw_non_tag_ = false;
                return make_error(GameErrorKind::BadTagPair, fmt::format("bad tag pair at line {}: {}", line_no_, line));
            }
            if (!read_line(line))
                return make_error(GameErrorKind::MissingResult, "end of input inside tag section");
            if (!starts_tag(line))
                break;
        }
    }

    std::vector<std::string> moves;
    bool in_comment = false;
    int variation_depth = 0;
    std::optional<GameResult> result;

    auto bad_token = [&](std::string_view token) {
        skipping_ = true;
        skip_saw_non_tag_ = true;
        return make_error(GameErrorKind::BadMovetextToken,
                          fmt::format("bad movetext token '{}' at line {}", token, line_no_));
    };

    bool have_line = true;
    while (!result) {
        if (!have_line && !read_line(line)) {
            if (in_comment)
                return make_error(GameErrorKind::UnterminatedComment, "end of input inside a comment");
            return make_error(GameErrorKind::MissingResult, "end of input before a result token");
        }
        have_line = false;

        if (starts_tag(line)) {
            TagPairs probe;
            if (!in_comment) {
                unread(std::move(line));
                return make_error(GameErrorKind::MissingResult, "new tag section before a result token");
            }
            if (parse_tag_line(line, probe)) {
                unread(std::move(line));
                return make_error(GameErrorKind::UnterminatedComment, "comment runs into the next tag section");
            }
        }
        if (!in_comment && !line.empty() && line.front() == '%')
            continue;

        const std::string_view s = line;
        std::size_t i = 0;
        while (i < s.size() && !result) {
            const char c = s[i];
            if (in_comment) {
                const auto close = s.find('}', i);
                if (close == std::string_view::npos) {
                    i = s.size();
                } else {
                    in_comment = false;
                    i = close + 1;
                }
                continue;
            }
            if (is_space(c)) {
                ++i;
            } else if (c == '{') {
                in_comment = true;
                ++i;
            } else if (c == ';') {
                break;
            } else if (c == '(') {
                ++variation_depth;
                ++i;
            } else if (c == ')') {
                if (variation_depth == 0)
                    return bad_token(")");
                --variation_depth;
                ++i;
            } else if (c == '}') {
                return bad_token("}");
            } else if (c == '$') {
                std::size_t j = i + 1;
                while (j < s.size() && s[j] >= '0' && s[j] <= '9')
                    ++j;
                if (j == i + 1)
                    return bad_token("$");
                i = j;
            } else {
                std::size_t j = i;
                while (j < s.size() && !is_space(s[j]) && s[j] != '{' && s[j] != '}' && s[j] != '(' && s[j] != ')'
                       && s[j] != ';' && s[j] != '$')
                    ++j;
                const std::string_view token = s.substr(i, j - i);
                i = j;
                for (const char b : token)
                    if (static_cast<unsigned char>(b) >= 0x80)
                        return bad_token(token);
                const auto cls = classify(token);
                if (cls.cls == TokenClass::Bad)
                    return bad_token(token);
                if (variation_depth > 0)
                    continue;
                if (cls.cls == TokenClass::Result)
                    result = result_from_token(cls.text);
                else if (cls.cls == TokenClass::Move)
                    moves.emplace_back(cls.text);
            }
        }
    }

    NormalizedHeaders h = normalize_headers(tags);
    GameRecord g;
    g.game_id = compute_game_id(tags, moves);
    g.event = std::move(h.event);
    g.site = std::move(h.site);
    g.round = std::move(h.round);
    g.date = h.date;
    g.white_name = std::move(h.white_name);
    g.black_name = std::move(h.black_name);
    g.white_elo = h.white_elo;
    g.black_elo = h.black_elo;
    g.eco_code = std::move(h.eco_code);
    g.result = *result;
    g.san_moves = std::move(moves);
    g.source_file = source_;
    g.byte_offset = game_offset_;
    g.raw_tags = std::move(tags);
    return g;
}

std::vector<PgnItem> parse_pgn_text(const std::string& text, const std::string& source_name)
{
    std::istringstream in(text);
    PgnReader reader(in, source_name);
    std::vector<PgnItem> out;
    while (auto item = reader.next())
        out.push_back(std::move(*item));
    return out;
}

} // namespace chessan::pgn
