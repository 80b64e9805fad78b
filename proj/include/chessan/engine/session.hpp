#pragma once

#include "chessan/core/position.hpp"
#include "chessan/engine/evaluation.hpp"
#include "chessan/engine/subprocess.hpp"

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chessan::engine {

struct EngineConfig {
    std::string binary;
    std::vector<std::string> args;
    std::vector<std::pair<std::string, std::string>> options; // sent in order, after MultiPV
    int multipv = 1;
    int target_depth = 20;
    std::chrono::milliseconds handshake_timeout{10'000};
    std::chrono::milliseconds position_timeout{120'000};
    std::chrono::milliseconds quit_grace{2'000};

    /// Throws std::invalid_argument when depth or multipv is below 1.
    void validate() const;
};

enum class EngineErrorKind { SpawnFailure, HandshakeTimeout, OptionRejected, EngineCrash, PositionTimeout, ProtocolViolation };

std::string_view to_string(EngineErrorKind k) noexcept;

class EngineError : public std::runtime_error {
public:
    EngineError(EngineErrorKind kind, const std::string& detail, std::string raw_log = {});

    EngineErrorKind kind() const noexcept { return kind_; }
    /// Timeouts and crashes fail only the in-flight position.
    bool retryable() const noexcept;
    const std::string& raw_log() const noexcept { return raw_log_; }

private:
    EngineErrorKind kind_;
    std::string raw_log_;
};

/// One UCI engine process. Not thread-safe; one caller at a time.
class Session {
public:
    /// Spawns the engine and completes uci / setoption / isready.
    static std::unique_ptr<Session> start(const EngineConfig& cfg);
    ~Session();

    /// One record per multipv rank. On timeout or crash the process is
    /// gone and the session must be replaced.
    std::vector<EvaluationRecord> evaluate(const FenKey& fen);

    /// Sends quit, reaps, force-kills after the grace period. Idempotent.
    void stop();

    bool alive() const noexcept;
    const std::string& engine_name() const noexcept { return name_; }
    const std::string& engine_version() const noexcept { return version_; }
    std::string engine_identity() const { return version_.empty() ? name_ : name_ + " " + version_; }
    const std::string& handshake_log() const noexcept { return handshake_log_; }
    const EngineConfig& config() const noexcept { return cfg_; }
    /// Lines describing kill escalations and similar events.
    const std::vector<std::string>& events() const noexcept { return events_; }

private:
    explicit Session(EngineConfig cfg);
    void send(const std::string& line, std::string& log);
    void handshake();

    EngineConfig cfg_;
    std::unique_ptr<Subprocess> proc_;
    std::string name_;
    std::string version_;
    std::string handshake_log_;
    std::vector<std::string> events_;
    bool stopped_ = false;
};

} // namespace chessan::engine
