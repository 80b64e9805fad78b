#include "chessan/orchestrator/runner.hpp"

#include "chessan/core/movegen.hpp"
#include "chessan/util/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <mutex>
#include <thread>

namespace chessan::orchestrator {

namespace {

using Clock = std::chrono::steady_clock;

class ShardRun {
public:
    ShardRun(ShardManifest& m, const RunOptions& opt, store::CorpusStore& store, const engine::EngineConfig& cfg)
        : m_(m), opt_(opt), store_(store), cfg_(cfg)
    {
    }

    RunResult run();

private:
    struct Worker {
        std::unique_ptr<engine::Session> session;
        int consecutive_failures = 0;
    };

    void event(const std::string& msg)
    {
        if (opt_.on_event)
            opt_.on_event(msg);
    }

    std::optional<std::uint64_t> claim();
    void give_back(std::uint64_t index);
    void worker_loop(Worker w);
    /// False when the worker should stop (budget exhausted or abort).
    bool process(Worker& w, std::uint64_t index);
    bool restart(Worker& w);
    void finish_line(std::uint64_t index);
    int expected_ranks(const Position& pos) const;

    ShardManifest& m_;
    const RunOptions& opt_;
    store::CorpusStore& store_;
    const engine::EngineConfig& cfg_;
    std::vector<std::string> lines_;
    std::string identity_;

    std::mutex queue_mu_;
    std::uint64_t next_ = 0;
    std::deque<std::uint64_t> returned_;

    std::mutex ckpt_mu_;
    Checkpoint ckpt_;
    std::map<std::uint64_t, int> run_attempts_;

    std::atomic<std::uint64_t> evaluated_{0};
    std::atomic<std::uint64_t> skipped_{0};
    std::atomic<std::uint64_t> failed_{0};
    std::mutex busy_mu_;
    double busy_seconds_ = 0;

    std::atomic<bool> abort_{false};
    std::mutex err_mu_;
    std::string store_error_;
};

std::optional<std::uint64_t> ShardRun::claim()
{
    std::lock_guard lock(queue_mu_);
    if (!returned_.empty()) {
        const auto i = returned_.front();
        returned_.pop_front();
        return i;
    }
    if (next_ >= lines_.size())
        return std::nullopt;
    return next_++;
}

void ShardRun::give_back(std::uint64_t index)
{
    std::lock_guard lock(queue_mu_);
    returned_.push_back(index);
}

int ShardRun::expected_ranks(const Position& pos) const
{
    const auto n = static_cast<int>(legal_moves(pos).size());
    return n == 0 ? 1 : std::min(cfg_.multipv, n);
}

void ShardRun::finish_line(std::uint64_t index)
{
    std::lock_guard lock(ckpt_mu_);
    ckpt_.mark_done(m_.start + index);
    if (!opt_.checkpoint_file.empty())
        save_checkpoint(opt_.checkpoint_file, ckpt_);
}

bool ShardRun::restart(Worker& w)
{
    if (w.session && w.session->alive())
        return true;
    w.session.reset();
    try {
        w.session = engine::Session::start(cfg_);
        if (w.session->engine_identity() != identity_) {
            event(fmt::format("restarted engine reports '{}' instead of '{}'", w.session->engine_identity(), identity_));
            w.session.reset();
            return false;
        }
        return true;
    } catch (const engine::EngineError& e) {
        event(fmt::format("engine restart failed: {}", e.what()));
        return false;
    }
}

bool ShardRun::process(Worker& w, std::uint64_t index)
{
    const auto& text = lines_[index];
    const std::uint64_t line = m_.start + index;
    FenKey fen;
    std::optional<Position> pos;
    try {
        fen = FenKey::parse(text);
        pos = decode_fen(fen.str());
    } catch (const std::exception& e) {
        store_.record_failure({FenKey(text), identity_, cfg_.target_depth, 0, "bad-fen", e.what(), {}});
        ++failed_;
        finish_line(index);
        return true;
    }

    const auto [have, terminal] = store_.evaluation_coverage(fen, identity_, cfg_.target_depth, cfg_.multipv);
    if (terminal || have >= expected_ranks(*pos)) {
        ++skipped_;
        finish_line(index);
        return true;
    }

    while (!abort_) {
        if (!restart(w)) {
            if (++w.consecutive_failures >= opt_.worker_failure_budget) {
                give_back(index);
                return false;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
            continue;
        }
        try {
            auto records = w.session->evaluate(fen);
            store_.put_evaluations(records);
            ++evaluated_;
            {
                std::lock_guard lock(busy_mu_);
                busy_seconds_ += std::chrono::duration<double>(records.front().wall_time).count();
            }
            w.consecutive_failures = 0;
            finish_line(index);
            return true;
        } catch (const store::StoreError& e) {
            std::lock_guard lock(err_mu_);
            store_error_ = e.what();
            abort_ = true;
            return false;
        } catch (const engine::EngineError& e) {
            ++w.consecutive_failures;
            int attempts;
            {
                std::lock_guard lock(ckpt_mu_);
                attempts = ++run_attempts_[index];
                ckpt_.attempts[line] = ckpt_.attempts[line] + 1;
                if (!opt_.checkpoint_file.empty())
                    save_checkpoint(opt_.checkpoint_file, ckpt_);
            }
            event(fmt::format("line {} attempt {} failed: {}", line, attempts, e.what()));
            if (!w.session || !w.session->alive())
                w.session.reset();
            if (attempts > opt_.retry_limit) {
                try {
                    store_.record_failure({fen, identity_, cfg_.target_depth, attempts, std::string(to_string(e.kind())),
                                           e.what(), e.raw_log()});
                } catch (const store::StoreError& se) {
                    std::lock_guard lock(err_mu_);
                    store_error_ = se.what();
                    abort_ = true;
                    return false;
                }
                ++failed_;
                finish_line(index);
                return w.consecutive_failures < opt_.worker_failure_budget;
            }
            if (w.consecutive_failures >= opt_.worker_failure_budget) {
                give_back(index);
                return false;
            }
        }
    }
    give_back(index);
    return false;
}

void ShardRun::worker_loop(Worker w)
{
    while (!abort_) {
        const auto index = claim();
        if (!index)
            break;
        if (!process(w, *index))
            break;
    }
    if (w.session)
        w.session->stop();
}

RunResult ShardRun::run()
{
    RunResult result;
    const auto started = Clock::now();
    lines_ = read_workload_range(m_.workload, m_.start, m_.end);
    if (lines_.size() != m_.size())
        throw std::runtime_error(fmt::format("workload {} has {} lines in [{}, {}), expected {}", m_.workload,
                                             lines_.size(), m_.start, m_.end, m_.size()));
    ckpt_ = load_checkpoint(opt_.checkpoint_file, m_);

    m_.status = ShardStatus::Running;
    m_.evaluated = m_.skipped_existing = m_.failed_positions = 0;
    m_.busy_seconds = 0;
    m_.pool_size = opt_.pool_size;
    m_.updated_at = utc_timestamp_now();
    if (!opt_.manifest_file.empty())
        save_manifest(opt_.manifest_file, m_);

    std::vector<Worker> workers;
    for (int i = 0; i < std::max(1, opt_.pool_size); ++i) {
        Worker w;
        try {
            w.session = engine::Session::start(cfg_);
        } catch (const engine::EngineError& e) {
            event(fmt::format("session {} failed to start: {}", i, e.what()));
            if (workers.empty() && (e.kind() == engine::EngineErrorKind::SpawnFailure
                                    || e.kind() == engine::EngineErrorKind::OptionRejected)) {
                m_.status = ShardStatus::Failed;
                m_.updated_at = utc_timestamp_now();
                if (!opt_.manifest_file.empty())
                    save_manifest(opt_.manifest_file, m_);
                result.manifest = m_;
                result.exit_code = kExitShardFailed;
                result.message = e.what();
                return result;
            }
        }
        if (w.session && identity_.empty())
            identity_ = w.session->engine_identity();
        workers.push_back(std::move(w));
    }
    if (identity_.empty()) {
        m_.status = ShardStatus::Failed;
        result.manifest = m_;
        result.exit_code = kExitShardFailed;
        result.message = "no engine session could be started";
        if (!opt_.manifest_file.empty())
            save_manifest(opt_.manifest_file, m_);
        return result;
    }

    std::vector<std::thread> threads;
    for (auto& w : workers)
        threads.emplace_back([this, w = std::move(w)]() mutable { worker_loop(std::move(w)); });
    for (auto& t : threads)
        t.join();

    m_.evaluated = evaluated_;
    m_.skipped_existing = skipped_;
    m_.failed_positions = failed_;
    m_.busy_seconds = busy_seconds_;
    m_.elapsed_seconds = std::chrono::duration<double>(Clock::now() - started).count();
    m_.updated_at = utc_timestamp_now();
    if (abort_) {
        m_.status = ShardStatus::Failed;
        result.exit_code = kExitStoreUnreachable;
        result.message = "store unreachable: " + store_error_;
    } else if (m_.accounted() == m_.size()) {
        m_.status = ShardStatus::Done;
        result.exit_code = kExitDone;
    } else {
        m_.status = ShardStatus::Failed;
        result.exit_code = kExitShardFailed;
        result.message = fmt::format("engine pool exhausted with {} of {} lines unprocessed", m_.size() - m_.accounted(),
                                     m_.size());
    }
    if (!opt_.manifest_file.empty())
        save_manifest(opt_.manifest_file, m_);
    result.manifest = m_;
    return result;
}

} // namespace

RunResult run_shard(ShardManifest manifest, const RunOptions& opt, store::CorpusStore& store,
                    const engine::EngineConfig& cfg)
{
    ShardRun run(manifest, opt, store, cfg);
    return run.run();
}

ProgressSummary run_status(const std::vector<ShardManifest>& manifests, std::optional<int> sessions)
{
    ProgressSummary p;
    double busy = 0;
    double elapsed = 0;
    int pool = 1;
    for (const auto& m : manifests) {
        ++p.shards;
        switch (m.status) {
        case ShardStatus::Pending: ++p.pending; break;
        case ShardStatus::Running: ++p.running; break;
        case ShardStatus::Done: ++p.done; break;
        case ShardStatus::Failed: ++p.failed; break;
        }
        p.positions += m.size();
        p.evaluated += m.evaluated;
        p.skipped_existing += m.skipped_existing;
        p.failed_positions += m.failed_positions;
        busy += m.busy_seconds;
        elapsed += m.elapsed_seconds;
        pool = std::max(pool, m.pool_size);
    }
    p.sessions = sessions.value_or(pool);
    const auto accounted = p.evaluated + p.skipped_existing + p.failed_positions;
    const auto completed = std::min(accounted, p.positions);
    p.percent_complete = p.positions == 0 ? 100.0 : 100.0 * static_cast<double>(completed) / p.positions;
    if (elapsed > 0 && p.evaluated > 0)
        p.throughput = static_cast<double>(p.evaluated) / elapsed;
    if (p.evaluated > 0)
        p.mean_secs_per_position = busy / static_cast<double>(p.evaluated);
    const auto remaining = p.positions - completed;
    if (remaining == 0)
        p.eta_seconds = 0.0;
    else if (p.mean_secs_per_position)
        p.eta_seconds = estimate_cost(static_cast<double>(remaining), *p.mean_secs_per_position, p.sessions).wall_seconds;
    return p;
}

std::string ProgressSummary::summary_line() const
{
    auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.6g}", *v) : std::string("unknown"); };
    return fmt::format("shards={} pending={} running={} done={} failed={} positions={} evaluated={} "
                       "skipped_existing={} failed_positions={} percent={:.2f} throughput={} mean_secs={} "
                       "sessions={} eta_seconds={}",
                       shards, pending, running, done, failed, positions, evaluated, skipped_existing,
                       failed_positions, percent_complete, opt(throughput), opt(mean_secs_per_position), sessions,
                       opt(eta_seconds));
}

std::string ProgressSummary::to_text() const
{
    std::string out = fmt::format("shards     {} ({} done, {} running, {} pending, {} failed)\n", shards, done, running,
                                  pending, failed);
    out += fmt::format("positions  {} ({:.2f}% accounted)\n", positions, percent_complete);
    out += fmt::format("evaluated  {}\nskipped    {}\nfailed     {}\n", evaluated, skipped_existing, failed_positions);
    out += fmt::format("eta        {}\n", eta_seconds ? estimate_cost(*eta_seconds, 1, 1).human_wall() : "unknown");
    return out;
}

std::string ProgressSummary::to_csv() const
{
    auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.6g}", *v) : std::string(); };
    return fmt::format("shards,pending,running,done,failed,positions,evaluated,skipped_existing,failed_positions,"
                       "percent_complete,throughput,mean_secs_per_position,sessions,eta_seconds\n"
                       "{},{},{},{},{},{},{},{},{},{:.4f},{},{},{},{}\n",
                       shards, pending, running, done, failed, positions, evaluated, skipped_existing,
                       failed_positions, percent_complete, opt(throughput), opt(mean_secs_per_position), sessions,
                       opt(eta_seconds));
}

} // namespace chessan::orchestrator
