#include "chessan/orchestrator/cost.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace chessan::orchestrator {

CostEstimate estimate_cost(double n_positions, double secs_per_position, int n_cores)
{
    if (n_positions < 0 || secs_per_position < 0)
        throw std::invalid_argument("cost inputs must be non-negative");
    if (n_cores < 1)
        throw std::invalid_argument("n_cores must be at least 1");
    CostEstimate c;
    c.n_positions = n_positions;
    c.secs_per_position = secs_per_position;
    c.n_cores = n_cores;
    c.total_core_seconds = n_positions * secs_per_position;
    c.wall_seconds = c.total_core_seconds / n_cores;
    return c;
}

std::string CostEstimate::human_wall() const
{
    if (wall_years() >= 1.0)
        return fmt::format("{:.1f} years", wall_years());
    if (wall_days() >= 1.0)
        return fmt::format("{:.1f} days", wall_days());
    if (wall_hours() >= 1.0)
        return fmt::format("{:.1f} hours", wall_hours());
    return fmt::format("{:.0f} seconds", wall_seconds);
}

std::string CostEstimate::summary_line() const
{
    return fmt::format("n_positions={:.0f} secs_per_position={} n_cores={} total_core_seconds={:.6g} "
                       "wall_seconds={:.6g} wall_hours={:.6g} wall_days={:.6g} wall_years={:.4g} human=\"≈{}\"",
                       n_positions, secs_per_position, n_cores, total_core_seconds, wall_seconds, wall_hours(),
                       wall_days(), wall_years(), human_wall());
}

} // namespace chessan::orchestrator
