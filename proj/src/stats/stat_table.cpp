#include "chessan/stats/stat_table.hpp"

#include "chessan/util/text.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace chessan::stats {

namespace {

std::string quote(std::string_view v)
{
    if (v.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(v);
    std::string out = "\"";
    for (const char c : v) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string cell_text(const Cell& c)
{
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

std::string_view to_string(TableKind k) noexcept
{
    switch (k) {
    case TableKind::Histogram: return "histogram";
    case TableKind::BinnedMean: return "binned-mean";
    case TableKind::Shares: return "shares";
    case TableKind::Series: return "series";
    }
    return "series";
}

void StatTable::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw std::invalid_argument(
            fmt::format("table {}: row has {} cells, expected {}", name, row.size(), columns.size()));
    rows.push_back(std::move(row));
}

bool StatTable::rectangular() const noexcept
{
    for (const auto& r : rows)
        if (r.size() != columns.size())
            return false;
    return true;
}

int StatTable::column_index(std::string_view n) const noexcept
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == n)
            return static_cast<int>(i);
    return -1;
}

double StatTable::number(std::size_t row, std::string_view column) const
{
    const int c = column_index(column);
    if (c < 0 || row >= rows.size())
        return std::nan("");
    const auto& cell = rows[row][static_cast<std::size_t>(c)];
    if (const auto* i = std::get_if<std::int64_t>(&cell))
        return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&cell))
        return *d;
    return std::nan("");
}

std::string to_csv(const StatTable& t)
{
    std::string out;
    out += "# table: " + t.name + "\n";
    out += "# kind: " + std::string(to_string(t.kind)) + "\n";
    for (const auto& [k, v] : t.provenance) {
        std::string flat = v;
        for (auto& c : flat)
            if (c == '\n' || c == '\r')
                c = ' ';
        out += "# " + k + ": " + flat + "\n";
    }
    std::vector<std::string> units;
    for (const auto& c : t.columns)
        units.push_back(quote(c.unit));
    out += "# units: " + join(units, ",") + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out += (i ? "," : "") + quote(t.columns[i].name);
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out += (i ? "," : "") + quote(cell_text(r[i]));
        out += "\n";
    }
    return out;
}

ParsedCsv parse_csv(std::string_view text)
{
    ParsedCsv p;
    std::size_t i = 0;
    bool header_done = false;
    while (i < text.size()) {
        if (text[i] == '#') {
            const auto nl = text.find('\n', i);
            const auto line = text.substr(i + 2, (nl == std::string_view::npos ? text.size() : nl) - i - 2);
            const auto colon = line.find(": ");
            if (colon != std::string_view::npos)
                p.provenance.emplace_back(std::string(line.substr(0, colon)), std::string(line.substr(colon + 2)));
            i = nl == std::string_view::npos ? text.size() : nl + 1;
            continue;
        }
        std::vector<std::string> record;
        std::string field;
        bool quoted = false;
        while (i < text.size()) {
            const char c = text[i];
            if (quoted) {
                if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    i += 2;
                } else if (c == '"') {
                    quoted = false;
                    ++i;
                } else {
                    field += c;
                    ++i;
                }
            } else if (c == '"') {
                quoted = true;
                ++i;
            } else if (c == ',') {
                record.push_back(std::move(field));
                field.clear();
                ++i;
            } else if (c == '\n' || c == '\r') {
                i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
                break;
            } else {
                field += c;
                ++i;
            }
        }
        record.push_back(std::move(field));
        if (!header_done) {
            p.header = std::move(record);
            header_done = true;
        } else {
            p.rows.push_back(std::move(record));
        }
    }
    return p;
}

} // namespace chessan::stats
