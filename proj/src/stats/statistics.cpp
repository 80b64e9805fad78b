#include "chessan/stats/statistics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <map>

namespace chessan::stats {

namespace {

constexpr std::array<std::string_view, kPieceKindCount> kPieceNames = {"pawn", "knight", "bishop",
                                                                        "rook", "queen", "king"};

double ratio(std::int64_t num, std::int64_t den) { return static_cast<double>(num) / static_cast<double>(den); }

Cell share_or_empty(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        return std::monostate{};
    return ratio(num, den);
}

StatTable make_table(std::string name, TableKind kind, std::vector<Column> cols, const StatsContext& ctx)
{
    StatTable t;
    t.name = std::move(name);
    t.kind = kind;
    t.columns = std::move(cols);
    t.note("corpus", ctx.corpus_id);
    t.note("filter", ctx.filter.describe());
    return t;
}

struct Tally {
    std::int64_t considered = 0; // passed the corpus filter
    std::int64_t excluded = 0;   // lacked a field this table needs
};

void note_tally(StatTable& t, const Tally& tally, std::string_view why)
{
    t.note("games_considered", std::to_string(tally.considered));
    t.note("games_excluded", fmt::format("{} ({})", tally.excluded, why));
}

bool white_is_higher(const GameSummary& g) { return *g.white_elo >= *g.black_elo; }

} // namespace

int bin_floor(int v, int width) noexcept
{
    const int q = v / width;
    return (v % width != 0 && v < 0) ? (q - 1) * width : q * width;
}

bool CorpusFilter::accepts(const GameSummary& g) const noexcept
{
    if (require_both_elos && (!g.white_elo || !g.black_elo))
        return false;
    if ((year_min || year_max) && !g.year)
        return false;
    if (year_min && *g.year < *year_min)
        return false;
    if (year_max && *g.year > *year_max)
        return false;
    if (min_ply && g.plies < *min_ply)
        return false;
    if (require_known_result && g.result == GameResult::Unknown)
        return false;
    return true;
}

std::string CorpusFilter::describe() const
{
    std::vector<std::string> parts;
    if (require_both_elos)
        parts.emplace_back("both-elos");
    if (year_min)
        parts.push_back(fmt::format("year>={}", *year_min));
    if (year_max)
        parts.push_back(fmt::format("year<={}", *year_max));
    if (min_ply)
        parts.push_back(fmt::format("plies>={}", *min_ply));
    if (require_known_result)
        parts.emplace_back("known-result");
    if (parts.empty())
        return "none";
    std::string out;
    for (const auto& p : parts)
        out += (out.empty() ? "" : " ") + p;
    return out;
}

std::pair<StatTable, StatTable> elo_distributions(Corpus corpus, const StatsContext& ctx, int bin_width)
{
    auto elo = make_table("elo_distribution", TableKind::Histogram,
                          {{"bin_lo", "Elo"}, {"bin_hi", "Elo"}, {"count", "ratings"}}, ctx);
    auto diff = make_table("elo_difference_distribution", TableKind::Histogram,
                           {{"bin_lo", "Elo"}, {"bin_hi", "Elo"}, {"count", "games"}}, ctx);
    std::map<int, std::int64_t> elo_bins, diff_bins;
    Tally te, td;
    for (const auto& g : corpus) {
        if (!ctx.filter.accepts(g))
            continue;
        ++te.considered;
        ++td.considered;
        if (!g.white_elo && !g.black_elo)
            ++te.excluded;
        for (const auto& e : {g.white_elo, g.black_elo})
            if (e)
                ++elo_bins[bin_floor(*e, bin_width)];
        if (g.white_elo && g.black_elo)
            ++diff_bins[bin_floor(std::abs(*g.white_elo - *g.black_elo), bin_width)];
        else
            ++td.excluded;
    }
    auto fill = [&](StatTable& t, const std::map<int, std::int64_t>& bins) {
        if (bins.empty())
            return;
        for (int lo = bins.begin()->first; lo <= bins.rbegin()->first; lo += bin_width) {
            const auto it = bins.find(lo);
            t.add_row({std::int64_t{lo}, std::int64_t{lo + bin_width}, it == bins.end() ? 0 : it->second});
        }
    };
    fill(elo, elo_bins);
    fill(diff, diff_bins);
    for (auto* t : {&elo, &diff})
        t->note("bin_width", std::to_string(bin_width));
    note_tally(elo, te, "no rating");
    note_tally(diff, td, "missing an Elo");
    return {std::move(elo), std::move(diff)};
}

StatTable ply_vs_elodiff(Corpus corpus, const StatsContext& ctx, int bin_width)
{
    auto t = make_table("ply_vs_elo_difference", TableKind::BinnedMean,
                        {{"bin_lo", "Elo"}, {"bin_hi", "Elo"}, {"games", "games"}, {"mean_ply", "plies"}}, ctx);
    std::map<int, std::pair<std::int64_t, std::int64_t>> bins; // games, plies
    Tally tally;
    for (const auto& g : corpus) {
        if (!ctx.filter.accepts(g))
            continue;
        ++tally.considered;
        if (!g.white_elo || !g.black_elo) {
            ++tally.excluded;
            continue;
        }
        auto& b = bins[bin_floor(std::abs(*g.white_elo - *g.black_elo), bin_width)];
        ++b.first;
        b.second += g.plies;
    }
    for (const auto& [lo, b] : bins)
        t.add_row({std::int64_t{lo}, std::int64_t{lo + bin_width}, b.first, ratio(b.second, b.first)});
    t.note("bin_width", std::to_string(bin_width));
    note_tally(t, tally, "missing an Elo");
    return t;
}

StatTable winrate_vs_elodiff(Corpus corpus, const StatsContext& ctx, int bin_width, bool include_draws)
{
    auto t = make_table("winrate_vs_elo_difference", TableKind::Shares,
                        {{"bin_lo", "Elo"},
                         {"bin_hi", "Elo"},
                         {"games", "games"},
                         {"higher_wins", "games"},
                         {"lower_wins", "games"},
                         {"draws", "games"},
                         {"p_higher", "probability"},
                         {"higher_share", "share"},
                         {"lower_share", "share"},
                         {"draw_share", "share"}},
                        ctx);
    struct Bin {
        std::int64_t games = 0, higher = 0, lower = 0, draws = 0;
    };
    std::map<int, Bin> bins;
    Tally tally;
    for (const auto& g : corpus) {
        if (!ctx.filter.accepts(g))
            continue;
        ++tally.considered;
        if (!g.white_elo || !g.black_elo || g.result == GameResult::Unknown) {
            ++tally.excluded;
            continue;
        }
        auto& b = bins[bin_floor(std::abs(*g.white_elo - *g.black_elo), bin_width)];
        ++b.games;
        if (g.result == GameResult::Draw)
            ++b.draws;
        else if ((g.result == GameResult::WhiteWin) == white_is_higher(g))
            ++b.higher;
        else
            ++b.lower;
    }
    for (const auto& [lo, b] : bins) {
        const auto den = include_draws ? b.games : b.higher + b.lower;
        t.add_row({std::int64_t{lo}, std::int64_t{lo + bin_width}, b.games, b.higher, b.lower, b.draws,
                   share_or_empty(b.higher, den), ratio(b.higher, b.games), ratio(b.lower, b.games),
                   ratio(b.draws, b.games)});
    }
    t.note("bin_width", std::to_string(bin_width));
    t.note("p_higher_denominator", include_draws ? "all games" : "decisive games (draws not counted)");
    t.note("tie_rule", "equal ratings count white as the higher-rated side");
    note_tally(t, tally, "missing an Elo or unknown result");
    return t;
}

std::pair<StatTable, StatTable> white_performance(Corpus corpus, const StatsContext& ctx, int bin_width,
                                                  int band_width)
{
    auto a = make_table("white_performance_by_elo", TableKind::Shares,
                        {{"bin_lo", "Elo"},
                         {"bin_hi", "Elo"},
                         {"games", "games"},
                         {"white_wins", "games"},
                         {"draws", "games"},
                         {"white_losses", "games"},
                         {"win_share", "share"},
                         {"draw_share", "share"},
                         {"loss_share", "share"}},
                        ctx);
    auto b = make_table("results_by_elo_band", TableKind::Shares,
                        {{"band_lo", "Elo"},
                         {"band_hi", "Elo"},
                         {"games", "games"},
                         {"white_win_share", "share"},
                         {"black_win_share", "share"},
                         {"draw_share", "share"}},
                        ctx);
    struct Bin {
        std::int64_t games = 0, white = 0, draws = 0, black = 0;
        void add(GameResult r)
        {
            ++games;
            white += r == GameResult::WhiteWin;
            black += r == GameResult::BlackWin;
            draws += r == GameResult::Draw;
        }
    };
    std::map<int, Bin> by_white, by_band;
    Tally ta, tb;
    for (const auto& g : corpus) {
        if (!ctx.filter.accepts(g))
            continue;
        ++ta.considered;
        ++tb.considered;
        const bool known = g.result != GameResult::Unknown;
        if (known && g.white_elo)
            by_white[bin_floor(*g.white_elo, bin_width)].add(g.result);
        else
            ++ta.excluded;
        if (known && g.white_elo && g.black_elo)
            by_band[bin_floor((*g.white_elo + *g.black_elo) / 2, band_width)].add(g.result);
        else
            ++tb.excluded;
    }
    for (const auto& [lo, x] : by_white)
        a.add_row({std::int64_t{lo}, std::int64_t{lo + bin_width}, x.games, x.white, x.draws, x.black,
                   ratio(x.white, x.games), ratio(x.draws, x.games), ratio(x.black, x.games)});
    for (const auto& [lo, x] : by_band)
        b.add_row({std::int64_t{lo}, std::int64_t{lo + band_width}, x.games, ratio(x.white, x.games),
                   ratio(x.black, x.games), ratio(x.draws, x.games)});
    a.note("bin_width", std::to_string(bin_width));
    b.note("band_width", std::to_string(band_width));
    b.note("band_of", "floor((white_elo + black_elo) / 2)");
    note_tally(a, ta, "no white Elo or unknown result");
    note_tally(b, tb, "missing an Elo or unknown result");
    return {std::move(a), std::move(b)};
}

StatTable first_move_shares_by_year(Corpus corpus, const StatsContext& ctx, int top_k)
{
    std::map<std::string, std::int64_t> overall;
    std::map<int, std::map<std::string, std::int64_t>> per_year;
    Tally tally;
    for (const auto& g : corpus) {
        if (!ctx.filter.accepts(g))
            continue;
        ++tally.considered;
        if (!g.year || g.plies == 0 || g.first_move.empty()) {
            ++tally.excluded;
            continue;
        }
        ++overall[g.first_move];
        ++per_year[*g.year][g.first_move];
    }
    std::vector<std::pair<std::string, std::int64_t>> ranked(overall.begin(), overall.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
    });
    if (static_cast<int>(ranked.size()) > top_k)
        ranked.resize(static_cast<std::size_t>(std::max(0, top_k)));

    std::vector<Column> cols{{"year", "year"}, {"games", "games"}};
    for (const auto& [m, n] : ranked)
        cols.push_back({"share_" + m, "share"});
    cols.push_back({"share_other", "share"});
    auto t = make_table("first_move_shares_by_year", TableKind::Series, std::move(cols), ctx);
    for (const auto& [year, moves] : per_year) {
        std::int64_t games = 0;
        for (const auto& [m, n] : moves)
            games += n;
        std::vector<Cell> row{std::int64_t{year}, games};
        std::int64_t top = 0;
        for (const auto& [m, n] : ranked) {
            const auto it = moves.find(m);
            const std::int64_t c = it == moves.end() ? 0 : it->second;
            top += c;
            row.emplace_back(ratio(c, games));
        }
        row.emplace_back(ratio(games - top, games));
        t.add_row(std::move(row));
    }
    std::string top_list;
    for (const auto& [m, n] : ranked)
        top_list += (top_list.empty() ? "" : " ") + fmt::format("{}={}", m, n);
    t.note("top_k", std::to_string(top_k));
    t.note("top_moves", top_list.empty() ? "none" : top_list);
    note_tally(t, tally, "no date or no moves");
    return t;
}

std::vector<StatTable> time_series(Corpus corpus, const StatsContext& ctx)
{
    struct Year {
        std::int64_t games = 0, plies = 0;
        std::int64_t known = 0, white = 0, black = 0, draws = 0;
        std::int64_t mates = 0;
        std::int64_t with_moves = 0;
        std::vector<double> capture_ratios;
        std::int64_t promo_games = 0, castle_k_games = 0, castle_q_games = 0;
        std::array<std::int64_t, kPieceKindCount> pieces{};
    };
    std::map<int, Year> years;
    Tally tally;
    for (const auto& g : corpus) {
        if (!ctx.filter.accepts(g))
            continue;
        ++tally.considered;
        if (!g.year) {
            ++tally.excluded;
            continue;
        }
        auto& y = years[*g.year];
        ++y.games;
        y.plies += g.plies;
        if (g.result != GameResult::Unknown) {
            ++y.known;
            y.white += g.result == GameResult::WhiteWin;
            y.black += g.result == GameResult::BlackWin;
            y.draws += g.result == GameResult::Draw;
        }
        y.mates += g.final_checkmate;
        if (g.plies > 0) {
            ++y.with_moves;
            y.capture_ratios.push_back(static_cast<double>(g.captures) / g.plies);
            y.promo_games += g.promotions > 0;
            y.castle_k_games += g.castles_kingside > 0;
            y.castle_q_games += g.castles_queenside > 0;
            for (std::size_t k = 0; k < y.pieces.size(); ++k)
                y.pieces[k] += g.piece_moves[k];
        }
    }

    auto games = make_table("games_per_year", TableKind::Series,
                            {{"year", "year"}, {"games", "games"}, {"mean_ply", "plies"}}, ctx);
    auto results = make_table("results_by_year", TableKind::Shares,
                              {{"year", "year"},
                               {"games", "games"},
                               {"white_win_share", "share"},
                               {"black_win_share", "share"},
                               {"draw_share", "share"}},
                              ctx);
    auto mates = make_table("checkmate_rate_by_year", TableKind::Series,
                            {{"year", "year"}, {"games", "games"}, {"checkmates", "games"}, {"checkmate_rate", "share"}},
                            ctx);
    auto captures = make_table("capture_ratio_by_year", TableKind::Series,
                               {{"year", "year"}, {"games", "games"}, {"mean_capture_ratio", "captures/ply"}}, ctx);
    std::vector<Column> kind_cols{{"year", "year"},
                                  {"games", "games"},
                                  {"plies", "plies"},
                                  {"promotion_rate", "share of games"},
                                  {"castle_kingside_rate", "share of games"},
                                  {"castle_queenside_rate", "share of games"}};
    for (const auto n : kPieceNames)
        kind_cols.push_back({std::string(n) + "_move_share", "share of plies"});
    auto kinds = make_table("move_kinds_by_year", TableKind::Series, std::move(kind_cols), ctx);

    for (const auto& [year, y] : years) {
        const std::int64_t yr = year;
        games.add_row({yr, y.games, ratio(y.plies, y.games)});
        if (y.known > 0)
            results.add_row({yr, y.known, ratio(y.white, y.known), ratio(y.black, y.known), ratio(y.draws, y.known)});
        mates.add_row({yr, y.games, y.mates, ratio(y.mates, y.games)});
        if (y.with_moves > 0) {
            auto ratios = y.capture_ratios;
            std::sort(ratios.begin(), ratios.end());
            double sum = 0;
            for (const double r : ratios)
                sum += r;
            captures.add_row({yr, y.with_moves, sum / static_cast<double>(y.with_moves)});
            std::vector<Cell> row{yr,
                                  y.with_moves,
                                  y.plies,
                                  ratio(y.promo_games, y.with_moves),
                                  ratio(y.castle_k_games, y.with_moves),
                                  ratio(y.castle_q_games, y.with_moves)};
            for (const auto n : y.pieces)
                row.emplace_back(ratio(n, y.plies));
            kinds.add_row(std::move(row));
        }
    }
    results.note("denominator", "games with a known result");
    mates.note("definition", "final replayed position is checkmate, regardless of the result tag");
    captures.note("definition", "per game capture plies / plies, averaged over games with moves");
    kinds.note("definition", "rates are the share of games with at least one such move; move shares are per ply");
    for (auto* t : {&games, &results, &mates, &captures, &kinds})
        note_tally(*t, tally, "no date");
    return {std::move(games), std::move(results), std::move(mates), std::move(captures), std::move(kinds)};
}

std::vector<StatTable> all_tables(Corpus corpus, const StatsContext& ctx, const TableOptions& opt)
{
    std::vector<StatTable> out;
    auto [elo, diff] = elo_distributions(corpus, ctx, opt.elo_bin_width);
    out.push_back(std::move(elo));
    out.push_back(std::move(diff));
    out.push_back(ply_vs_elodiff(corpus, ctx, opt.elo_bin_width));
    out.push_back(winrate_vs_elodiff(corpus, ctx, opt.elo_bin_width, opt.include_draws));
    auto [white, bands] = white_performance(corpus, ctx, opt.elo_bin_width, opt.band_width);
    out.push_back(std::move(white));
    out.push_back(std::move(bands));
    out.push_back(first_move_shares_by_year(corpus, ctx, opt.top_k));
    for (auto& t : time_series(corpus, ctx))
        out.push_back(std::move(t));
    return out;
}

} // namespace chessan::stats
