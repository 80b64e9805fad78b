#include "chessan/engine/session.hpp"

#include "chessan/engine/uci_parse.hpp"
#include "chessan/util/text.hpp"

#include <fmt/format.h>

#include <filesystem>

namespace chessan::engine {

using Clock = std::chrono::steady_clock;

void EngineConfig::validate() const
{
    if (target_depth < 1)
        throw std::invalid_argument("target depth must be at least 1");
    if (multipv < 1)
        throw std::invalid_argument("multipv must be at least 1");
}

std::string_view to_string(EngineErrorKind k) noexcept
{
    switch (k) {
    case EngineErrorKind::SpawnFailure: return "spawn-failure";
    case EngineErrorKind::HandshakeTimeout: return "handshake-timeout";
    case EngineErrorKind::OptionRejected: return "option-rejected";
    case EngineErrorKind::EngineCrash: return "engine-crash";
    case EngineErrorKind::PositionTimeout: return "position-timeout";
    case EngineErrorKind::ProtocolViolation: return "protocol-violation";
    }
    return "engine-error";
}

EngineError::EngineError(EngineErrorKind kind, const std::string& detail, std::string raw_log)
    : std::runtime_error(fmt::format("{}: {}", to_string(kind), detail)), kind_(kind), raw_log_(std::move(raw_log))
{
}

bool EngineError::retryable() const noexcept
{
    return kind_ == EngineErrorKind::EngineCrash || kind_ == EngineErrorKind::PositionTimeout
        || kind_ == EngineErrorKind::ProtocolViolation;
}

Session::Session(EngineConfig cfg) : cfg_(std::move(cfg)) {}

Session::~Session() { stop(); }

std::unique_ptr<Session> Session::start(const EngineConfig& cfg)
{
    cfg.validate();
    std::unique_ptr<Session> s(new Session(cfg));
    if (cfg.binary.find('/') != std::string::npos && !std::filesystem::exists(cfg.binary))
        throw EngineError(EngineErrorKind::SpawnFailure, fmt::format("no such engine binary '{}'", cfg.binary));
    try {
        s->proc_ = std::make_unique<Subprocess>(cfg.binary, cfg.args);
    } catch (const SpawnError& e) {
        throw EngineError(EngineErrorKind::SpawnFailure, e.what());
    }
    s->handshake();
    return s;
}

void Session::send(const std::string& line, std::string& log)
{
    log += "> " + line + "\n";
    proc_->write_line(line);
}

void Session::handshake()
{
    const auto deadline = Clock::now() + cfg_.handshake_timeout;
    std::string line;
    auto read_until = [&](std::string_view terminator, auto&& on_line) {
        while (true) {
            const auto st = proc_->read_line(line, deadline);
            if (st == Subprocess::ReadStatus::Timeout) {
                proc_->kill();
                throw EngineError(EngineErrorKind::HandshakeTimeout,
                                  fmt::format("no '{}' within {} ms", terminator, cfg_.handshake_timeout.count()),
                                  handshake_log_);
            }
            if (st == Subprocess::ReadStatus::Eof) {
                proc_->kill();
                const bool spawn_failed = proc_->exit_status() == 127;
                throw EngineError(spawn_failed ? EngineErrorKind::SpawnFailure : EngineErrorKind::HandshakeTimeout,
                                  fmt::format("engine exited before '{}'", terminator), handshake_log_);
            }
            handshake_log_ += "< " + line + "\n";
            if (trim(line) == terminator)
                return;
            on_line(line);
        }
    };

    send("uci", handshake_log_);
    read_until("uciok", [&](const std::string& l) {
        if (auto id = parse_id_name(l)) {
            name_ = id->name;
            version_ = id->version;
        }
    });

    send(fmt::format("setoption name MultiPV value {}", cfg_.multipv), handshake_log_);
    for (const auto& [k, v] : cfg_.options)
        send(fmt::format("setoption name {} value {}", k, v), handshake_log_);
    send("isready", handshake_log_);
    std::string rejected;
    read_until("readyok", [&](const std::string& l) {
        const auto lower = ascii_lower(l);
        if (lower.find("no such option") != std::string::npos || lower.rfind("error", 0) == 0)
            rejected = l;
    });
    if (!rejected.empty()) {
        stop();
        throw EngineError(EngineErrorKind::OptionRejected, rejected, handshake_log_);
    }
}

bool Session::alive() const noexcept { return proc_ && !stopped_ && proc_->running(); }

std::vector<EvaluationRecord> Session::evaluate(const FenKey& fen)
{
    if (!alive())
        throw EngineError(EngineErrorKind::EngineCrash, "session is not running");
    const auto started = Clock::now();
    const auto deadline = started + cfg_.position_timeout;
    std::string log = handshake_log_;
    send("position fen " + fen.str(), log);
    send(fmt::format("go depth {}", cfg_.target_depth), log);

    std::vector<std::string> received;
    std::string line;
    while (true) {
        const auto st = proc_->read_line(line, deadline);
        if (st == Subprocess::ReadStatus::Timeout) {
            proc_->kill();
            events_.push_back(fmt::format("killed engine after {} ms on {}", cfg_.position_timeout.count(), fen.str()));
            throw EngineError(EngineErrorKind::PositionTimeout, "no bestmove before the per-position timeout", log);
        }
        if (st == Subprocess::ReadStatus::Eof) {
            proc_->kill();
            throw EngineError(EngineErrorKind::EngineCrash,
                              fmt::format("engine exited mid-search (status {})", proc_->exit_status().value_or(-1)),
                              log);
        }
        log += "< " + line + "\n";
        received.push_back(line);
        if (parse_bestmove(line))
            break;
    }

    auto outcome = select_search_result(fen, name_, version_, cfg_.target_depth, cfg_.multipv, received);
    if (outcome.error != SelectError::None)
        throw EngineError(EngineErrorKind::ProtocolViolation, outcome.detail, log);
    const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started);
    const auto stamp = utc_timestamp_now();
    for (auto& r : outcome.records) {
        r.raw_log = log;
        r.wall_time = wall;
        r.produced_at = stamp;
    }
    return std::move(outcome.records);
}

void Session::stop()
{
    if (stopped_ || !proc_)
        return;
    stopped_ = true;
    if (proc_->running()) {
        proc_->write_line("quit");
        if (!proc_->wait_for_exit(cfg_.quit_grace)) {
            events_.push_back(fmt::format("engine did not exit within {} ms of quit; killed", cfg_.quit_grace.count()));
            fmt::print(stderr, "warning: engine pid {} ignored quit; force-killed\n", proc_->pid());
            proc_->kill();
        }
    }
}

} // namespace chessan::engine
