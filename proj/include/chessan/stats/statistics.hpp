#pragma once

#include "chessan/stats/game_summary.hpp"
#include "chessan/stats/stat_table.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chessan::stats {

/// Optional predicates; each one can only remove games.
struct CorpusFilter {
    bool require_both_elos = false;
    std::optional<int> year_min;
    std::optional<int> year_max;
    std::optional<int> min_ply;
    bool require_known_result = false;

    bool accepts(const GameSummary& g) const noexcept;
    std::string describe() const;
};

struct StatsContext {
    std::string corpus_id = "corpus";
    CorpusFilter filter;
};

using Corpus = std::span<const GameSummary>;

/// Elo of both colours pooled, and |white - black| for games rating both.
std::pair<StatTable, StatTable> elo_distributions(Corpus corpus, const StatsContext& ctx, int bin_width = 25);

/// Mean plies per |Elo difference| bin.
StatTable ply_vs_elodiff(Corpus corpus, const StatsContext& ctx, int bin_width = 25);

/// Per |Elo difference| bin: how often the higher-rated side wins. With equal
/// ratings white counts as the higher side. p_higher excludes draws unless
/// include_draws is set.
StatTable winrate_vs_elodiff(Corpus corpus, const StatsContext& ctx, int bin_width = 25, bool include_draws = false);

/// Table A: white result shares per white-Elo bin. Table B: result shares
/// by colour per mean-Elo band.
std::pair<StatTable, StatTable> white_performance(Corpus corpus, const StatsContext& ctx, int bin_width = 25,
                                                  int band_width = 100);

/// Per year, share of each of the corpus-wide top_k first moves; the rest
/// pooled as "other".
StatTable first_move_shares_by_year(Corpus corpus, const StatsContext& ctx, int top_k = 4);

/// Per-year series: games and mean ply, result shares, checkmate rate,
/// capture ratio, promotion / castling rates and per-piece move shares.
std::vector<StatTable> time_series(Corpus corpus, const StatsContext& ctx);

struct TableOptions {
    int elo_bin_width = 25;
    int band_width = 100;
    int top_k = 4;
    bool include_draws = false;
};

/// Everything above, in a fixed order.
std::vector<StatTable> all_tables(Corpus corpus, const StatsContext& ctx, const TableOptions& opt = {});

/// Lower edge of the bin holding v.
int bin_floor(int v, int width) noexcept;

} // namespace chessan::stats
