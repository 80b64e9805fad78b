#pragma once

#include "chessan/game_record.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <sys/types.h>
#include <vector>

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path data_dir() { return CHESSAN_TEST_DATA; }
inline fs::path eco_table() { return CHESSAN_ECO_TABLE; }
inline std::string mock_engine() { return CHESSAN_MOCK_ENGINE; }
inline std::string cli_binary() { return CHESSAN_CLI; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "t");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const noexcept { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

void write_text(const fs::path& p, const std::string& text);
std::string slurp(const fs::path& p);

/// Games of a PGN text, parse errors dropped.
std::vector<chessan::GameRecord> parse_games(const std::string& pgn);

/// In-process CLI call; argv[0] is supplied.
int cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr);

struct ProcResult {
    int exit_code = -1; // -signal when killed
    std::string output; // stdout and stderr interleaved
};

/// Runs argv to completion in `cwd` (current directory when empty).
ProcResult run_process(const std::vector<std::string>& argv, const fs::path& cwd = {});

/// Starts argv with output sent to `log`; returns the pid.
pid_t spawn_process(const std::vector<std::string>& argv, const fs::path& log);
/// Blocks until pid exits; same encoding as ProcResult::exit_code.
int wait_process(pid_t pid);
/// Exit code once the child has exited, nullopt while it runs.
std::optional<int> poll_process(pid_t pid);

/// `n` distinct non-initial positions from random playouts, canonical FEN.
std::vector<std::string> unique_positions(std::size_t n, std::uint64_t seed);
/// Writes them one per line and returns the path.
fs::path write_workload(const fs::path& path, const std::vector<std::string>& fens);

/// Two-level ECO fixture: "1. e4" (B00) and "1. e4 e5" (C20), plus
/// "1. d4 d5 2. c4" (D06).
std::string small_eco_tsv();

} // namespace testsupport
