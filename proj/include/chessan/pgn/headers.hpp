#pragma once

#include "chessan/game_record.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chessan::pgn {

struct NormalizedHeaders {
    std::optional<std::string> event;
    std::optional<std::string> site;
    std::optional<std::string> round;
    std::optional<PgnDate> date;
    std::string white_name;
    std::string black_name;
    std::optional<int> white_elo;
    std::optional<int> black_elo;
    std::optional<std::string> eco_code;
    std::optional<GameResult> result_tag;
    /// Values that were present but could not be interpreted.
    std::vector<std::string> diagnostics;
};

std::optional<PgnDate> parse_pgn_date(std::string_view text);
std::optional<int> parse_elo(std::string_view text);
bool is_eco_code(std::string_view text) noexcept;

NormalizedHeaders normalize_headers(const TagPairs& tags);

} // namespace chessan::pgn
