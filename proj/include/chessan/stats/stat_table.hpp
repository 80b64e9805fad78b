#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace chessan::stats {

/// Empty, integer count, real number or text.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

std::string cell_text(const Cell& c);

struct Column {
    std::string name;
    std::string unit;
    friend bool operator==(const Column&, const Column&) = default;
};

enum class TableKind { Histogram, BinnedMean, Shares, Series };

std::string_view to_string(TableKind k) noexcept;

struct StatTable {
    std::string name;
    TableKind kind = TableKind::Series;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    /// Rendered as "# key: value" lines ahead of the CSV header.
    std::vector<std::pair<std::string, std::string>> provenance;

    /// Throws std::invalid_argument when the arity differs from the columns.
    void add_row(std::vector<Cell> row);
    void note(std::string key, std::string value) { provenance.emplace_back(std::move(key), std::move(value)); }
    bool rectangular() const noexcept;
    int column_index(std::string_view name) const noexcept;
    /// Numeric value of a cell (count or real), NaN otherwise.
    double number(std::size_t row, std::string_view column) const;

    friend bool operator==(const StatTable&, const StatTable&) = default;
};

/// RFC 4180 quoting, header row, '\n' line ends, provenance as '#' lines.
std::string to_csv(const StatTable& t);

struct ParsedCsv {
    std::vector<std::pair<std::string, std::string>> provenance;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Inverse of to_csv at the text level.
ParsedCsv parse_csv(std::string_view text);

} // namespace chessan::stats
