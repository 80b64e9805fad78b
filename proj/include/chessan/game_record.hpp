#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chessan {

enum class GameResult { WhiteWin, BlackWin, Draw, Unknown };

std::string_view to_pgn_token(GameResult r) noexcept;
std::optional<GameResult> result_from_token(std::string_view token) noexcept;

struct PgnDate {
    int year = 0;
    std::optional<int> month;
    std::optional<int> day;

    friend bool operator==(const PgnDate&, const PgnDate&) = default;
};

using TagPairs = std::vector<std::pair<std::string, std::string>>;

/// One parsed game: normalized headers, mainline SAN and provenance.
struct GameRecord {
    std::string game_id;
    std::optional<std::string> event;
    std::optional<std::string> site;
    std::optional<std::string> round;
    std::optional<PgnDate> date;
    std::string white_name;
    std::string black_name;
    std::optional<int> white_elo;
    std::optional<int> black_elo;
    std::optional<std::string> eco_code;
    GameResult result = GameResult::Unknown;
    std::vector<std::string> san_moves;
    std::string source_file;
    std::uint64_t byte_offset = 0;
    TagPairs raw_tags;

    std::size_t ply_count() const noexcept { return san_moves.size(); }

    friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

} // namespace chessan
