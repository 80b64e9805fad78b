#pragma once

#include <cstdint>
#include <string>

namespace chessan::orchestrator {

inline constexpr double kSecondsPerYear = 365.25 * 86400.0;

struct CostEstimate {
    double n_positions = 0;
    double secs_per_position = 0;
    int n_cores = 1;
    double total_core_seconds = 0;
    double wall_seconds = 0;

    double wall_hours() const noexcept { return wall_seconds / 3600.0; }
    double wall_days() const noexcept { return wall_seconds / 86400.0; }
    double wall_years() const noexcept { return wall_seconds / kSecondsPerYear; }
    double core_years() const noexcept { return total_core_seconds / kSecondsPerYear; }

    /// e.g. "51.3 years", "93.8 days", "2.5 hours"
    std::string human_wall() const;
    /// key=value summary line
    std::string summary_line() const;
};

/// Throws std::invalid_argument for negative inputs or n_cores < 1.
CostEstimate estimate_cost(double n_positions, double secs_per_position, int n_cores);

} // namespace chessan::orchestrator
