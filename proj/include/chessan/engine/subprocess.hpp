#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <sys/types.h>
#include <vector>

namespace chessan::engine {

class SpawnError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Child process with line-oriented pipes on stdin and stdout.
class Subprocess {
public:
    enum class ReadStatus { Line, Timeout, Eof };

    Subprocess(const std::string& binary, const std::vector<std::string>& args);
    ~Subprocess();
    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    /// False if the pipe is closed.
    bool write_line(const std::string& line);
    ReadStatus read_line(std::string& line, std::chrono::steady_clock::time_point deadline);

    /// Waits up to `grace` for exit; returns the exit status if reaped.
    std::optional<int> wait_for_exit(std::chrono::milliseconds grace);
    void kill();
    bool running() const noexcept { return pid_ > 0 && !exit_status_; }
    std::optional<int> exit_status() const noexcept { return exit_status_; }
    pid_t pid() const noexcept { return pid_; }

private:
    bool try_reap(bool block);

    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    bool eof_ = false;
    std::optional<int> exit_status_;
};

} // namespace chessan::engine
