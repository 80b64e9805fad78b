#pragma once

#include "chessan/core/position.hpp"
#include "chessan/engine/score.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chessan::engine {

struct EvaluationRecord {
    FenKey fen;
    std::string engine_name;
    std::string engine_version;
    int depth = 0;
    int multipv_rank = 1;
    Score score;
    std::vector<std::string> pv;
    std::optional<std::uint64_t> nodes;
    bool terminal = false; // mate or stalemate on the board; pv is empty
    std::string raw_log;
    std::chrono::milliseconds wall_time{0};
    std::string produced_at;

    std::string engine_identity() const { return engine_version.empty() ? engine_name : engine_name + " " + engine_version; }

    friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

/// Canonical JSON text. With include_timing = false, wall time and
/// timestamp are omitted so records from identical transcripts compare equal.
std::string serialize_record(const EvaluationRecord& rec, bool include_timing = true);

} // namespace chessan::engine
