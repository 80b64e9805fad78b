#include "chessan/positions/eco.hpp"

#include "chessan/core/replay.hpp"
#include "chessan/pgn/headers.hpp"
#include "chessan/util/text.hpp"

#include <fmt/format.h>

#include <fstream>
#include <stdexcept>

namespace chessan::positions {

std::vector<std::string> san_tokens(std::string_view movetext)
{
    std::vector<std::string> out;
    for (auto tok : split_whitespace(movetext)) {
        std::size_t i = 0;
        while (i < tok.size() && tok[i] >= '0' && tok[i] <= '9')
            ++i;
        if (i > 0 && i < tok.size() && tok[i] == '.') {
            while (i < tok.size() && tok[i] == '.')
                ++i;
            tok.remove_prefix(i);
        }
        if (tok.empty() || tok == "*" || tok == "1-0" || tok == "0-1" || tok == "1/2-1/2")
            continue;
        out.emplace_back(tok);
    }
    return out;
}

void EcoIndex::insert_line(const std::string& code, const std::string& name, const std::vector<std::string>& san_line)
{
    if (!pgn::is_eco_code(code))
        throw std::invalid_argument(fmt::format("bad ECO code '{}'", code));
    if (san_line.empty())
        throw std::invalid_argument("empty move sequence");
    const auto plies = replay_moves(san_line);
    for (const auto& p : plies) {
        const bool terminal = p.ply_index == static_cast<int>(plies.size());
        EcoEntry e{code, name, p.ply_index, terminal};
        const auto prefix = p.fen.four_field_prefix();
        const auto [it, fresh] = by_prefix_.try_emplace(prefix, p.fen);
        if (fresh) {
            entries_.emplace(p.fen, std::move(e));
        } else {
            auto& existing = entries_.at(it->second);
            if (terminal && !existing.terminal)
                existing = std::move(e);
        }
        max_depth_ = std::max(max_depth_, p.ply_index);
    }
}

const EcoEntry* EcoIndex::find(const FenKey& fen) const
{
    const auto it = by_prefix_.find(fen.four_field_prefix());
    if (it == by_prefix_.end())
        return nullptr;
    return &entries_.at(it->second);
}

EcoLoadResult load_eco(std::istream& in)
{
    EcoLoadResult r;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty() || line.front() == '#')
            continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            r.failures.push_back({line_no, line, "expected three tab-separated fields"});
            continue;
        }
        const std::string code(trim(std::string_view(line).substr(0, t1)));
        const std::string name(trim(std::string_view(line).substr(t1 + 1, t2 - t1 - 1)));
        try {
            r.index.insert_line(code, name, san_tokens(std::string_view(line).substr(t2 + 1)));
            ++r.lines_loaded;
        } catch (const std::exception& e) {
            r.failures.push_back({line_no, line, e.what()});
        }
    }
    return r;
}

EcoLoadResult load_eco_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open ECO table " + path.string());
    return load_eco(in);
}

} // namespace chessan::positions
