#pragma once

#include "chessan/game_record.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chessan::pgn {

enum class GameErrorKind { BadTagPair, UnterminatedComment, BadMovetextToken, MissingResult };

std::string_view to_string(GameErrorKind k) noexcept;

struct GameError {
    GameErrorKind kind;
    std::string message;
    std::string source_file;
    std::uint64_t byte_offset = 0;
    std::uint64_t line_number = 0;
};

using PgnItem = std::variant<GameRecord, GameError>;

/// Streaming PGN reader. Holds at most one game in memory; a malformed game
/// yields a GameError and reading resumes at the next tag-pair section.
///
/// Recursive annotation variations are parsed and discarded, so san_moves
/// is always the mainline. Non-ASCII bytes are accepted only inside tag
/// values and comments.
class PgnReader {
public:
    PgnReader(std::istream& in, std::string source_name);

    std::optional<PgnItem> next();

private:
    bool read_line(std::string& line);
    void unread(std::string line);
    bool parse_tag_line(std::string_view line, TagPairs& out) const;
    GameError make_error(GameErrorKind kind, std::string message) const;

    std::istream& in_;
    std::string source_;
    std::uint64_t offset_ = 0;      // byte offset of the next unread line
    std::uint64_t line_no_ = 0;
    std::uint64_t game_offset_ = 0; // where the current game began
    std::uint64_t game_line_ = 0;
    std::optional<std::string> pending_;
    std::uint64_t line_start_ = 0;  // byte offset of the line last read
    std::uint64_t pending_offset_ = 0;
    std::uint64_t pending_end_ = 0;
    bool skipping_ = false;
    bool skip_saw_non_tag_ = false;
};

/// Convenience: parses every game of an in-memory PGN text.
std::vector<PgnItem> parse_pgn_text(const std::string& text, const std::string& source_name = "<memory>");

/// Game identity: digest of tag pairs and mainline.
std::string compute_game_id(const TagPairs& tags, const std::vector<std::string>& san_moves);

} // namespace chessan::pgn
