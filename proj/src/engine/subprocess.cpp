#include "chessan/engine/subprocess.hpp"

#include <fmt/format.h>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace chessan::engine {

namespace {

void ignore_sigpipe_once()
{
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

} // namespace

Subprocess::Subprocess(const std::string& binary, const std::vector<std::string>& args)
{
    ignore_sigpipe_once();
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0)
        throw SpawnError(fmt::format("pipe: {}", std::strerror(errno)));
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw SpawnError(fmt::format("pipe: {}", std::strerror(errno)));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(binary.c_str()));
    for (const auto& a : args)
        argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);

    const int rc = ::posix_spawnp(&pid_, binary.c_str(), &actions, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    if (rc != 0) {
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        pid_ = -1;
        throw SpawnError(fmt::format("cannot spawn '{}': {}", binary, std::strerror(rc)));
    }
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

Subprocess::~Subprocess()
{
    if (running()) {
        kill();
    }
    if (to_child_ >= 0)
        ::close(to_child_);
    if (from_child_ >= 0)
        ::close(from_child_);
}

bool Subprocess::write_line(const std::string& line)
{
    if (to_child_ < 0)
        return false;
    const std::string data = line + "\n";
    std::size_t done = 0;
    while (done < data.size()) {
        const auto n = ::write(to_child_, data.data() + done, data.size() - done);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            return false;
        }
        done += static_cast<std::size_t>(n);
    }
    return true;
}

Subprocess::ReadStatus Subprocess::read_line(std::string& line, std::chrono::steady_clock::time_point deadline)
{
    while (true) {
        const auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            return ReadStatus::Line;
        }
        if (eof_) {
            if (buffer_.empty())
                return ReadStatus::Eof;
            line = std::move(buffer_);
            buffer_.clear();
            return ReadStatus::Line;
        }
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline)
            return ReadStatus::Timeout;
        const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd pfd{from_child_, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(wait + 1, 1 << 30)));
        if (pr < 0) {
            if (errno == EINTR)
                continue;
            eof_ = true;
            continue;
        }
        if (pr == 0)
            continue;
        char chunk[4096];
        const auto n = ::read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR || errno == EAGAIN)
                continue;
            eof_ = true;
        } else if (n == 0) {
            eof_ = true;
        } else {
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }
}

bool Subprocess::try_reap(bool block)
{
    if (pid_ <= 0 || exit_status_)
        return true;
    int status = 0;
    const pid_t r = ::waitpid(pid_, &status, block ? 0 : WNOHANG);
    if (r == pid_) {
        exit_status_ = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
        return true;
    }
    if (r < 0 && errno == ECHILD) {
        exit_status_ = -1;
        return true;
    }
    return false;
}

std::optional<int> Subprocess::wait_for_exit(std::chrono::milliseconds grace)
{
    const auto deadline = std::chrono::steady_clock::now() + grace;
    while (!try_reap(false)) {
        if (std::chrono::steady_clock::now() >= deadline)
            return std::nullopt;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return exit_status_;
}

void Subprocess::kill()
{
    if (pid_ > 0 && !exit_status_) {
        ::kill(pid_, SIGKILL);
        try_reap(true);
    }
    if (to_child_ >= 0) {
        ::close(to_child_);
        to_child_ = -1;
    }
}

} // namespace chessan::engine
