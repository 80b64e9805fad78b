#include "chessan/pgn/headers.hpp"

#include "chessan/util/text.hpp"

#include <fmt/format.h>

namespace chessan {

std::string_view to_pgn_token(GameResult r) noexcept
{
    switch (r) {
    case GameResult::WhiteWin: return "1-0";
    case GameResult::BlackWin: return "0-1";
    case GameResult::Draw: return "1/2-1/2";
    case GameResult::Unknown: return "*";
    }
    return "*";
}

std::optional<GameResult> result_from_token(std::string_view token) noexcept
{
    if (token == "1-0") return GameResult::WhiteWin;
    if (token == "0-1") return GameResult::BlackWin;
    if (token == "1/2-1/2") return GameResult::Draw;
    if (token == "*") return GameResult::Unknown;
    return std::nullopt;
}

} // namespace chessan

namespace chessan::pgn {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (const char c : s)
        if (c < '0' || c > '9')
            return false;
    return true;
}

bool is_wildcard(std::string_view s)
{
    if (s.empty())
        return true;
    for (const char c : s)
        if (c != '?')
            return false;
    return true;
}

std::optional<std::string> optional_text(std::string_view v)
{
    v = trim(v);
    if (v.empty() || v == "?" || v == "-")
        return std::nullopt;
    return std::string(v);
}

} // namespace

std::optional<PgnDate> parse_pgn_date(std::string_view text)
{
    text = trim(text);
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = text.find('.', start);
        parts.push_back(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    if (parts.size() > 3 || parts[0].size() != 4 || !all_digits(parts[0]))
        return std::nullopt;
    PgnDate d;
    d.year = static_cast<int>(*parse_integer(parts[0]));
    if (d.year == 0)
        return std::nullopt;
    auto component = [&](std::size_t i, int max) -> std::optional<int> {
        if (i >= parts.size() || is_wildcard(parts[i]) || !all_digits(parts[i]) || parts[i].size() > 2)
            return std::nullopt;
        const int v = static_cast<int>(*parse_integer(parts[i]));
        if (v < 1 || v > max)
            return std::nullopt;
        return v;
    };
    d.month = component(1, 12);
    if (d.month)
        d.day = component(2, 31);
    return d;
}

std::optional<int> parse_elo(std::string_view text)
{
    text = trim(text);
    if (!all_digits(text) || text.size() > 5)
        return std::nullopt;
    const auto v = parse_integer(text);
    if (!v || *v < 1 || *v > 3500)
        return std::nullopt;
    return static_cast<int>(*v);
}

bool is_eco_code(std::string_view text) noexcept
{
    return text.size() == 3 && text[0] >= 'A' && text[0] <= 'E' && text[1] >= '0' && text[1] <= '9' && text[2] >= '0'
        && text[2] <= '9';
}

NormalizedHeaders normalize_headers(const TagPairs& tags)
{
    NormalizedHeaders h;
    h.white_name = "?";
    h.black_name = "?";
    for (const auto& [key, raw] : tags) {
        const std::string_view value = trim(raw);
        if (key == "Event") {
            h.event = optional_text(value);
        } else if (key == "Site") {
            h.site = optional_text(value);
        } else if (key == "Round") {
            h.round = optional_text(value);
        } else if (key == "Date") {
            h.date = parse_pgn_date(value);
            if (!h.date && !is_wildcard(value) && value != "????.??.??")
                h.diagnostics.push_back(fmt::format("unparseable Date '{}'", value));
        } else if (key == "White") {
            h.white_name = std::string(value);
        } else if (key == "Black") {
            h.black_name = std::string(value);
        } else if (key == "WhiteElo" || key == "BlackElo") {
            auto elo = parse_elo(value);
            if (!elo && !value.empty() && value != "-" && value != "?")
                h.diagnostics.push_back(fmt::format("unparseable {} '{}'", key, value));
            (key == "WhiteElo" ? h.white_elo : h.black_elo) = elo;
        } else if (key == "ECO") {
            if (is_eco_code(value))
                h.eco_code = std::string(value);
            else if (!value.empty() && value != "?")
                h.diagnostics.push_back(fmt::format("unparseable ECO '{}'", value));
        } else if (key == "Result") {
            h.result_tag = result_from_token(value);
        }
    }
    return h;
}

} // namespace chessan::pgn
