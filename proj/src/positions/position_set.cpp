#include "chessan/positions/position_set.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <sstream>
#include <vector>

namespace chessan::positions {

std::string_view to_string(KeyMode m) noexcept
{
    return m == KeyMode::SixField ? "6-field" : "4-field";
}

KeyMode key_mode_from_string(std::string_view s)
{
    if (s == "6-field" || s == "6" || s == "six")
        return KeyMode::SixField;
    if (s == "4-field" || s == "4" || s == "four")
        return KeyMode::FourField;
    throw std::invalid_argument(fmt::format("unknown key mode '{}'", s));
}

PositionSet::PositionSet(KeyMode mode) : mode_(mode) {}

std::string PositionSet::key_of(const FenKey& fen) const
{
    return mode_ == KeyMode::SixField ? fen.str() : fen.four_field_prefix();
}

bool PositionSet::insert_if_absent(const FenKey& fen)
{
    auto key = key_of(fen);
    auto& shard = shards_[std::hash<std::string>{}(key) % kShards];
    ++seen_;
    bool fresh;
    {
        std::lock_guard lock(shard.mu);
        fresh = shard.keys.insert(std::move(key)).second;
    }
    if (fresh)
        ++unique_;
    return fresh;
}

bool PositionSet::contains(const FenKey& fen) const
{
    const auto key = key_of(fen);
    const auto& shard = shards_[std::hash<std::string>{}(key) % kShards];
    std::lock_guard lock(shard.mu);
    return shard.keys.contains(key);
}

void PositionSet::write_snapshot(std::ostream& out) const
{
    std::vector<std::string> keys;
    for (const auto& shard : shards_) {
        std::lock_guard lock(shard.mu);
        keys.insert(keys.end(), shard.keys.begin(), shard.keys.end());
    }
    std::sort(keys.begin(), keys.end());
    out << "chessan-position-set " << kSnapshotVersion << ' ' << to_string(mode_) << ' ' << keys.size() << '\n';
    for (const auto& k : keys)
        out << k << '\n';
}

std::unique_ptr<PositionSet> PositionSet::read_snapshot(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("empty position-set snapshot");
    std::istringstream h(header);
    std::string magic, mode;
    int version = 0;
    std::uint64_t count = 0;
    if (!(h >> magic >> version >> mode >> count) || magic != "chessan-position-set")
        throw std::runtime_error("not a position-set snapshot");
    if (version != kSnapshotVersion)
        throw std::runtime_error(fmt::format("unsupported snapshot version {}", version));
    auto set = std::make_unique<PositionSet>(key_mode_from_string(mode));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto& shard = set->shards_[std::hash<std::string>{}(line) % kShards];
        if (shard.keys.insert(line).second)
            ++set->unique_;
    }
    if (set->unique_ != count)
        throw std::runtime_error(fmt::format("snapshot holds {} keys, header says {}", set->unique_.load(), count));
    return set;
}

WorkloadWriteError::WorkloadWriteError(std::uint64_t durable_offset, const std::string& detail)
    : std::runtime_error(fmt::format("workload write failed ({}); last durable offset {}", detail, durable_offset)),
      offset_(durable_offset)
{
}

std::string PositionDedupReport::summary_line() const
{
    return fmt::format("games={} plies_seen={} theory_plies={} non_theory_plies={} duplicate_plies={} unique_positions={}",
                       games, plies_seen, theory_plies, non_theory_plies, duplicate_plies, unique_positions);
}

PositionDeduper::PositionDeduper(PositionSet& set, std::ostream& workload) : set_(set), out_(workload) {}

void PositionDeduper::add(const GamePositionTrace& trace)
{
    ++report_.games;
    for (const auto& p : trace.plies) {
        ++report_.plies_seen;
        if (p.theory) {
            ++report_.theory_plies;
            continue;
        }
        ++report_.non_theory_plies;
        if (!set_.insert_if_absent(p.fen)) {
            ++report_.duplicate_plies;
            continue;
        }
        ++report_.unique_positions;
        out_ << p.fen.str() << '\n';
        written_ += p.fen.str().size() + 1;
        if (!out_)
            throw WorkloadWriteError(durable_, "stream error");
        if (++since_flush_ >= 4096)
            flush_or_throw();
    }
}

void PositionDeduper::finish() { flush_or_throw(); }

void PositionDeduper::flush_or_throw()
{
    out_.flush();
    if (!out_)
        throw WorkloadWriteError(durable_, "flush failed");
    durable_ = written_;
    since_flush_ = 0;
}

} // namespace chessan::positions
