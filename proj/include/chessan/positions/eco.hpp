#pragma once

#include "chessan/core/position.hpp"

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace chessan::positions {

struct EcoEntry {
    std::string code;
    std::string name;
    int depth = 0;         // ply depth of the position within its line
    bool terminal = false; // the line ends here
};

struct EcoLoadFailure {
    int line_number = 0;
    std::string text;
    std::string reason;
};

/// Opening-book positions. Lookups compare placement, side, castling and
/// en-passant only, so move-order transpositions into a book line match.
class EcoIndex {
public:
    /// Inserts every position along `san_line`. Throws ReplayError or
    /// std::invalid_argument when the line is unusable.
    void insert_line(const std::string& code, const std::string& name, const std::vector<std::string>& san_line);

    const EcoEntry* find(const FenKey& fen) const;
    bool contains(const FenKey& fen) const { return find(fen) != nullptr; }

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    int max_line_depth() const noexcept { return max_depth_; }

    /// Canonical 6-field key of each book position, ordered.
    const std::map<FenKey, EcoEntry>& entries() const noexcept { return entries_; }

private:
    std::map<FenKey, EcoEntry> entries_;
    std::unordered_map<std::string, FenKey> by_prefix_;
    int max_depth_ = 0;
};

struct EcoLoadResult {
    EcoIndex index;
    std::vector<EcoLoadFailure> failures;
    int lines_loaded = 0;
};

/// Reads "code<TAB>name<TAB>SAN line" rows. Blank lines and lines starting
/// with '#' are ignored; a malformed row is reported and skipped.
EcoLoadResult load_eco(std::istream& in);
EcoLoadResult load_eco_file(const std::filesystem::path& path);

/// Splits a movetext fragment such as "1. e4 e5 2.Nf3" into SAN tokens.
std::vector<std::string> san_tokens(std::string_view movetext);

} // namespace chessan::positions
