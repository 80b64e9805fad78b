#include "chessan/engine/score.hpp"

#include <fmt/format.h>

namespace chessan::engine {

std::string_view to_string(ScoreKind k) noexcept
{
    switch (k) {
    case ScoreKind::Centipawns: return "cp";
    case ScoreKind::MateIn: return "mate";
    case ScoreKind::Checkmated: return "mated";
    }
    return "cp";
}

std::optional<ScoreKind> score_kind_from_string(std::string_view s) noexcept
{
    if (s == "cp") return ScoreKind::Centipawns;
    if (s == "mate") return ScoreKind::MateIn;
    if (s == "mated") return ScoreKind::Checkmated;
    return std::nullopt;
}

Score Score::to_white(Color side_to_move) const noexcept
{
    if (perspective == Perspective::White)
        return *this;
    Score s = *this;
    s.perspective = Perspective::White;
    if (side_to_move == Color::Black)
        s.value = -s.value;
    return s;
}

std::string Score::to_uci_text() const
{
    switch (kind) {
    case ScoreKind::Centipawns: return fmt::format("cp {}", value);
    case ScoreKind::MateIn: return fmt::format("mate {}", value);
    case ScoreKind::Checkmated: return "mated";
    }
    return {};
}

} // namespace chessan::engine
