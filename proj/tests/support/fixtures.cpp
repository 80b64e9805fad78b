#include "fixtures.hpp"

#include "chessan/cli/dispatch.hpp"
#include "chessan/core/movegen.hpp"
#include "chessan/pgn/reader.hpp"

#include <atomic>
#include <cerrno>
#include <fcntl.h>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>
#include <unistd.h>

namespace testsupport {

TempDir::TempDir(const std::string& tag)
{
    static std::atomic<int> counter{0};
    std::random_device rd;
    for (;;) {
        path_ = fs::temp_directory_path() /
                ("chessan-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
                 std::to_string(rd() % 100000));
        if (fs::create_directories(path_))
            break;
    }
}

TempDir::~TempDir()
{
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_text(const fs::path& p, const std::string& text)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out.flush())
        throw std::runtime_error("cannot write " + p.string());
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<chessan::GameRecord> parse_games(const std::string& pgn)
{
    std::vector<chessan::GameRecord> out;
    for (auto& item : chessan::pgn::parse_pgn_text(pgn))
        if (auto* g = std::get_if<chessan::GameRecord>(&item))
            out.push_back(std::move(*g));
    return out;
}

int cli(const std::vector<std::string>& args, std::string* out, std::string* err)
{
    std::ostringstream o, e;
    const int rc = chessan::cli::dispatch(args, o, e);
    if (out)
        *out = o.str();
    if (err)
        *err = e.str();
    return rc;
}

namespace {

[[noreturn]] void exec_child(const std::vector<std::string>& argv, int out_fd, const fs::path& cwd)
{
    ::dup2(out_fd, STDOUT_FILENO);
    ::dup2(out_fd, STDERR_FILENO);
    ::close(out_fd);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0)
        ::_exit(126);
    std::vector<char*> args;
    for (const auto& a : argv)
        args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execv(args[0], args.data());
    ::_exit(127);
}

int decode_status(int status)
{
    if (WIFEXITED(status))
        return WEXITSTATUS(status);
    if (WIFSIGNALED(status))
        return -WTERMSIG(status);
    return -1;
}

} // namespace

ProcResult run_process(const std::vector<std::string>& argv, const fs::path& cwd)
{
    int fds[2];
    if (::pipe(fds) != 0)
        throw std::runtime_error("pipe failed");
    const pid_t pid = ::fork();
    if (pid < 0)
        throw std::runtime_error("fork failed");
    if (pid == 0) {
        ::close(fds[0]);
        exec_child(argv, fds[1], cwd);
    }
    ::close(fds[1]);
    ProcResult r;
    char buf[4096];
    for (;;) {
        const ssize_t n = ::read(fds[0], buf, sizeof buf);
        if (n > 0)
            r.output.append(buf, static_cast<std::size_t>(n));
        else if (n == 0 || errno != EINTR)
            break;
    }
    ::close(fds[0]);
    r.exit_code = wait_process(pid);
    return r;
}

pid_t spawn_process(const std::vector<std::string>& argv, const fs::path& log)
{
    const int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0)
        throw std::runtime_error("cannot open " + log.string());
    const pid_t pid = ::fork();
    if (pid < 0)
        throw std::runtime_error("fork failed");
    if (pid == 0)
        exec_child(argv, fd, {});
    ::close(fd);
    return pid;
}

int wait_process(pid_t pid)
{
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0)
        if (errno != EINTR)
            return -1;
    return decode_status(status);
}

std::optional<int> poll_process(pid_t pid)
{
    int status = 0;
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == 0 || (r < 0 && errno == EINTR))
        return std::nullopt;
    return r < 0 ? -1 : decode_status(status);
}

std::vector<std::string> unique_positions(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::set<std::string> seen;
    std::vector<std::string> out;
    while (out.size() < n) {
        chessan::Position p = chessan::initial_position();
        for (int ply = 0; ply < 80 && out.size() < n; ++ply) {
            const auto moves = chessan::legal_moves(p);
            if (moves.empty())
                break;
            p = chessan::apply_move(p, moves[rng() % moves.size()]).first;
            auto fen = chessan::encode_fen(p).str();
            if (seen.insert(fen).second)
                out.push_back(std::move(fen));
        }
    }
    return out;
}

fs::path write_workload(const fs::path& path, const std::vector<std::string>& fens)
{
    std::string text;
    for (const auto& f : fens)
        text += f + "\n";
    write_text(path, text);
    return path;
}

std::string small_eco_tsv()
{
    return "# code\tname\tline\n"
           "B00\tKing's pawn\t1. e4\n"
           "C20\tKing's pawn game\t1. e4 e5\n"
           "D06\tQueen's Gambit\t1. d4 d5 2. c4\n";
}

} // namespace testsupport
