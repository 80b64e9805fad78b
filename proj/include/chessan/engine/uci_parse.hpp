#pragma once

#include "chessan/core/position.hpp"
#include "chessan/engine/evaluation.hpp"
#include "chessan/engine/score.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chessan::engine {

enum class Bound { Exact, Lower, Upper };

struct InfoFields {
    std::optional<int> depth;
    std::optional<int> seldepth;
    std::optional<int> multipv;
    std::optional<Score> score;
    Bound bound = Bound::Exact;
    std::optional<std::uint64_t> nodes;
    std::optional<std::vector<std::string>> pv;

    bool empty() const noexcept { return !depth && !seldepth && !multipv && !score && !nodes && !pv; }
};

/// Parses one "info ..." line. Unknown tokens are skipped; "info string"
/// and non-info lines yield an empty result. pv collects the consecutive
/// move tokens after "pv".
InfoFields parse_info_line(std::string_view line);

bool looks_like_uci_move(std::string_view token) noexcept;

struct IdLine {
    std::string name;
    std::string version;
};

/// Splits "id name Stockfish 11 64" into name "Stockfish" and version "11 64".
std::optional<IdLine> parse_id_name(std::string_view line);

/// "bestmove e2e4 ponder e7e5" -> "e2e4"; "(none)" kept verbatim.
std::optional<std::string> parse_bestmove(std::string_view line);

enum class SelectError { None, NoInfoAtTargetDepth };

struct SearchOutcome {
    std::vector<EvaluationRecord> records; // raw_log, timing unset
    SelectError error = SelectError::None;
    std::string detail;
};

/// Builds the per-rank records of one search from the engine's output
/// lines (everything received after "go", up to and including bestmove).
/// For each rank the last exact info line at target_depth carrying a score
/// wins. A position with no legal move yields a single terminal record.
SearchOutcome select_search_result(const FenKey& fen, std::string_view engine_name, std::string_view engine_version,
                                   int target_depth, int multipv, const std::vector<std::string>& received);

/// Rebuilds the records of a raw position log ("> " sent, "< " received).
/// raw_log of each record is set to `raw_log`.
SearchOutcome records_from_log(const std::string& raw_log);

} // namespace chessan::engine
