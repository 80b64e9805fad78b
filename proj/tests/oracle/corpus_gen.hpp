#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

// Synthetic PGN corpora with a known duplicate plan.
namespace oracle {

struct GenOptions {
    int games = 100;
    std::uint64_t seed = 1;
    int max_plies = 120;
    double p_missing_elo = 0.08;
    double p_missing_date = 0.05;
    double p_unknown_result = 0.03;
    int year_min = 1950;
    int year_max = 2020;
};

struct GenGame {
    int class_id = 0; // games sharing a class are duplicates of each other
    std::string white, black;
    std::string white_elo, black_elo; // tag text, "" when absent
    std::string date;                 // tag text, "" when absent
    std::string event = "Synthetic";
    std::string result;
    std::vector<std::string> san;

    std::string pgn() const;
};

/// Distinct games: no two share (players, result, mainline).
std::vector<GenGame> generate_games(const GenOptions& opt);

enum class DupVariant { Exact, OtherEvent, NameSpelling, NoCheckSuffix };

/// Copy of `g` that the dedup key must still match.
GenGame duplicate_of(const GenGame& g, DupVariant v, std::mt19937_64& rng);

struct DupPlan {
    std::vector<GenGame> games; // emitted order
    int originals = 0;
    int injected = 0;
};

/// `originals` distinct games plus `injected` duplicates at random positions.
DupPlan corpus_with_duplicates(int originals, int injected, std::uint64_t seed);

std::string to_pgn(const std::vector<GenGame>& games);

} // namespace oracle
