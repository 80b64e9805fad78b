// Scripted UCI engine used as a test double. Scores are a deterministic
// function of the position; behaviour knobs are exposed as UCI options.
//
//   DelayMs            sleep before answering each go
//   ScoreMode          hash (default) | white50 | zero
//   ScriptFile         replay blocks of this file ('---' separated), one per go
//   CrashOnFen         exit mid-search when the FEN contains this text
//   CrashOnceDir       crash on the first search of each FEN, leaving a marker here
//   CrashAlways        exit mid-search on every go
//   HangOnFen          stop answering when the FEN contains this text
//   ProtocolViolation  answer bestmove without reaching the target depth
//   IgnoreQuit         keep running after quit

#include "chessan/core/movegen.hpp"
#include "chessan/core/position.hpp"
#include "chessan/util/hash.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace chessan;

namespace {

struct Options {
    int multipv = 1;
    int delay_ms = 0;
    std::string score_mode = "hash";
    std::string script_file;
    std::string crash_on_fen;
    std::string crash_once_dir;
    bool crash_always = false;
    std::string hang_on_fen;
    bool protocol_violation = false;
    bool ignore_quit = false;
};

bool truthy(const std::string& v) { return v == "true" || v == "1" || v == "on"; }

void say(const std::string& line) { std::cout << line << '\n' << std::flush; }

int hash_score(const std::string& fen, int salt)
{
    ContentHasher h;
    h.field(fen).field(std::to_string(salt));
    const auto d = h.finish();
    const int raw = (d.bytes[0] << 8) | d.bytes[1];
    return raw % 601 - 300;
}

std::vector<std::string> script_blocks(const std::string& path)
{
    std::ifstream in(path);
    std::vector<std::string> blocks(1);
    std::string line;
    while (std::getline(in, line)) {
        if (line == "---") {
            blocks.emplace_back();
            continue;
        }
        blocks.back() += line + "\n";
    }
    return blocks;
}

std::vector<std::string> principal_variation(Position pos, Move first, int length)
{
    std::vector<std::string> pv{to_uci(first)};
    pos = apply_move(pos, first).first;
    for (int i = 1; i < length; ++i) {
        auto moves = legal_moves(pos);
        if (moves.empty())
            break;
        std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) { return to_uci(a) < to_uci(b); });
        const Move m = moves[static_cast<std::size_t>(hash_score(encode_fen(pos).str(), i) + 300) % moves.size()];
        pv.push_back(to_uci(m));
        pos = apply_move(pos, m).first;
    }
    return pv;
}

void crash_mid_search()
{
    say("info depth 1 score cp 0 pv 0000");
    std::_Exit(3);
}

void search(const Options& opt, const Position& pos, int depth, std::size_t& script_cursor)
{
    const std::string fen = encode_fen(pos).str();
    if (opt.delay_ms > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(opt.delay_ms));
    if (!opt.hang_on_fen.empty() && fen.find(opt.hang_on_fen) != std::string::npos) {
        std::this_thread::sleep_for(std::chrono::hours(24));
        return;
    }
    if (opt.crash_always || (!opt.crash_on_fen.empty() && fen.find(opt.crash_on_fen) != std::string::npos))
        crash_mid_search();
    if (!opt.crash_once_dir.empty()) {
        const auto marker = std::filesystem::path(opt.crash_once_dir) / digest_of(fen).hex();
        if (!std::filesystem::exists(marker)) {
            std::ofstream(marker) << fen << '\n';
            crash_mid_search();
        }
    }
    if (!opt.script_file.empty()) {
        const auto blocks = script_blocks(opt.script_file);
        std::cout << blocks[script_cursor++ % blocks.size()] << std::flush;
        return;
    }

    auto moves = legal_moves(pos);
    if (moves.empty()) {
        say(in_check(pos) ? "info depth 0 score mate 0" : "info depth 0 score cp 0");
        say("bestmove (none)");
        return;
    }
    std::sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) { return to_uci(a) < to_uci(b); });
    const int ranks = std::min<int>(opt.multipv, static_cast<int>(moves.size()));
    const int last_depth = opt.protocol_violation ? std::max(1, depth - 1) : depth;
    const bool white_to_move = pos.side_to_move() == Color::White;

    for (int d = 1; d <= last_depth; ++d) {
        for (int r = 1; r <= ranks; ++r) {
            int cp = 0;
            if (opt.score_mode == "white50")
                cp = white_to_move ? 50 : -50;
            else if (opt.score_mode == "hash")
                cp = hash_score(fen, 0) - 10 * (r - 1);
            const Move& first = moves[static_cast<std::size_t>(r - 1)];
            const auto pv = principal_variation(pos, first, 3);
            std::string pv_text;
            for (const auto& m : pv)
                pv_text += " " + m;
            const std::uint64_t nodes = 1000ull * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(r);
            if (d == last_depth) {
                // a refining line and a bound line precede the final verdict
                say("info depth " + std::to_string(d) + " multipv " + std::to_string(r) + " score cp "
                    + std::to_string(cp + 7) + " nodes " + std::to_string(nodes - 1) + " pv" + pv_text);
                say("info depth " + std::to_string(d) + " multipv " + std::to_string(r) + " score cp "
                    + std::to_string(cp + 25) + " lowerbound nodes " + std::to_string(nodes) + " pv " + pv.front());
            }
            say("info depth " + std::to_string(d) + " seldepth " + std::to_string(d + 2) + " multipv "
                + std::to_string(r) + " score cp " + std::to_string(cp) + " nodes " + std::to_string(nodes)
                + " nps 100000 time 1 pv" + pv_text);
        }
    }
    say("info string mock search done");
    say("bestmove " + to_uci(moves.front()));
}

bool set_option(Options& opt, const std::string& name, const std::string& value)
{
    if (name == "MultiPV")
        opt.multipv = std::max(1, std::atoi(value.c_str()));
    else if (name == "Hash" || name == "Threads")
        ;
    else if (name == "DelayMs")
        opt.delay_ms = std::atoi(value.c_str());
    else if (name == "ScoreMode")
        opt.score_mode = value;
    else if (name == "ScriptFile")
        opt.script_file = value;
    else if (name == "CrashOnFen")
        opt.crash_on_fen = value;
    else if (name == "CrashOnceDir")
        opt.crash_once_dir = value;
    else if (name == "CrashAlways")
        opt.crash_always = truthy(value);
    else if (name == "HangOnFen")
        opt.hang_on_fen = value;
    else if (name == "ProtocolViolation")
        opt.protocol_violation = truthy(value);
    else if (name == "IgnoreQuit")
        opt.ignore_quit = truthy(value);
    else
        return false;
    return true;
}

} // namespace

int main()
{
    Options opt;
    Position pos = initial_position();
    std::size_t script_cursor = 0;
    std::string line;
    while (std::getline(std::cin, line)) {
        std::istringstream ss(line);
        std::string cmd;
        ss >> cmd;
        if (cmd == "uci") {
            say("id name MockFish 1.0");
            say("id author chessan tests");
            say("option name MultiPV type spin default 1 min 1 max 500");
            say("option name Hash type spin default 16 min 1 max 1024");
            say("option name Threads type spin default 1 min 1 max 1");
            say("option name DelayMs type spin default 0 min 0 max 100000");
            say("option name ScoreMode type string default hash");
            say("uciok");
        } else if (cmd == "isready") {
            say("readyok");
        } else if (cmd == "setoption") {
            std::string word, name, value;
            bool in_value = false;
            ss >> word; // "name"
            while (ss >> word) {
                if (!in_value && word == "value") {
                    in_value = true;
                    continue;
                }
                std::string& target = in_value ? value : name;
                target += (target.empty() ? "" : " ") + word;
            }
            if (!set_option(opt, name, value))
                say("No such option: " + name);
        } else if (cmd == "ucinewgame" || cmd == "stop") {
        } else if (cmd == "position") {
            std::string kind;
            ss >> kind;
            std::string rest;
            std::getline(ss, rest);
            try {
                std::string fen_text = rest;
                std::string moves_text;
                const auto mpos = rest.find(" moves ");
                if (mpos != std::string::npos) {
                    fen_text = rest.substr(0, mpos);
                    moves_text = rest.substr(mpos + 7);
                }
                while (!fen_text.empty() && fen_text.front() == ' ')
                    fen_text.erase(0, 1);
                pos = kind == "startpos" ? initial_position() : decode_fen(fen_text);
                std::istringstream ms(moves_text);
                std::string mv;
                while (ms >> mv) {
                    const auto m = parse_uci(mv);
                    if (!m)
                        throw std::invalid_argument("bad move " + mv);
                    pos = apply_move(pos, *m).first;
                }
            } catch (const std::exception& e) {
                say(std::string("info string bad position: ") + e.what());
            }
        } else if (cmd == "go") {
            std::string word;
            int depth = 1;
            while (ss >> word)
                if (word == "depth")
                    ss >> depth;
            search(opt, pos, depth, script_cursor);
        } else if (cmd == "quit") {
            if (opt.ignore_quit) {
                std::this_thread::sleep_for(std::chrono::hours(24));
            }
            return 0;
        }
    }
    return 0;
}
