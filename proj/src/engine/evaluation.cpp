#include "chessan/engine/evaluation.hpp"

#include <json.hpp>

namespace chessan::engine {

std::string serialize_record(const EvaluationRecord& rec, bool include_timing)
{
    nlohmann::ordered_json j;
    j["fen"] = rec.fen.str();
    j["engine_name"] = rec.engine_name;
    j["engine_version"] = rec.engine_version;
    j["depth"] = rec.depth;
    j["multipv_rank"] = rec.multipv_rank;
    j["score_kind"] = std::string(to_string(rec.score.kind));
    j["score_value"] = rec.score.value;
    j["pv"] = rec.pv;
    if (rec.nodes)
        j["nodes"] = *rec.nodes;
    else
        j["nodes"] = nullptr;
    j["terminal"] = rec.terminal;
    j["raw_log"] = rec.raw_log;
    if (include_timing) {
        j["wall_ms"] = rec.wall_time.count();
        j["produced_at"] = rec.produced_at;
    }
    return j.dump();
}

} // namespace chessan::engine
