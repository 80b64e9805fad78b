#include "chessan/stats/render.hpp"

#include "chessan/util/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace chessan::stats {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
constexpr std::array<std::string_view, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape_xml(std::string_view s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string label_of(const Column& c) { return c.unit.empty() ? c.name : c.name + " (" + c.unit + ")"; }

bool is_share_unit(std::string_view unit)
{
    return unit.starts_with("share") || unit == "probability" || unit == "captures/ply";
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v)
    {
        if (std::isnan(v))
            return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void settle()
    {
        if (!std::isfinite(lo)) {
            lo = 0;
            hi = 1;
        }
        if (hi <= lo)
            hi = lo + 1;
    }
};

std::string num(double v) { return fmt::format("{:.2f}", v); }

class Canvas {
public:
    Canvas(Range x, Range y) : x_(x), y_(y) {}
    double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight); }
    double py(double v) const { return kHeight - kBottom - (v - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom); }
    const Range& x() const { return x_; }
    const Range& y() const { return y_; }

private:
    Range x_, y_;
};

void axes(std::string& svg, const Canvas& cv, const std::string& title, const std::string& xlabel,
          const std::string& ylabel)
{
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    svg += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                       num((x0 + x1) / 2), escape_xml(title));
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", num(x0), num(y0),
                       num(x1));
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(x0), num(y0),
                       num(y1));
    for (int i = 0; i <= 4; ++i) {
        const double xv = cv.x().lo + (cv.x().hi - cv.x().lo) * i / 4;
        const double yv = cv.y().lo + (cv.y().hi - cv.y().lo) * i / 4;
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                           num(cv.px(xv)), num(y0 + 16), escape_xml(format_double(std::round(xv * 100) / 100)));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n", num(x0 - 6),
                           num(cv.py(yv) + 4), escape_xml(format_double(std::round(yv * 1000) / 1000)));
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                       num((x0 + x1) / 2), num(kHeight - 18), escape_xml(xlabel));
    svg += fmt::format(
        "<text x=\"16\" y=\"{0}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
        num((y0 + y1) / 2), escape_xml(ylabel));
}

std::string histogram_svg(const StatTable& t)
{
    const auto n = t.rows.size();
    Range x, y;
    y.add(0);
    for (std::size_t r = 0; r < n; ++r) {
        x.add(t.number(r, t.columns[0].name));
        x.add(t.number(r, t.columns[1].name));
        y.add(t.number(r, t.columns.back().name));
    }
    x.settle();
    y.settle();
    Canvas cv(x, y);
    std::string body;
    axes(body, cv, t.name, label_of(t.columns[0]), label_of(t.columns.back()));
    for (std::size_t r = 0; r < n; ++r) {
        const double lo = cv.px(t.number(r, t.columns[0].name));
        const double hi = cv.px(t.number(r, t.columns[1].name));
        const double top = cv.py(t.number(r, t.columns.back().name));
        body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n", num(lo), num(top),
                            num(std::max(hi - lo - 1, 0.5)), num(cv.py(0) - top), kPalette[0]);
    }
    return body;
}

std::string lines_svg(const StatTable& t)
{
    const bool binned = t.columns.size() > 1 && t.columns[1].name == "bin_hi";
    const bool banded = t.columns.size() > 1 && t.columns[1].name == "band_hi";
    const std::size_t first_y = (binned || banded) ? 2 : 1;
    std::vector<std::size_t> ys;
    for (std::size_t c = first_y; c < t.columns.size(); ++c)
        if (is_share_unit(t.columns[c].unit))
            ys.push_back(c);
    if (ys.empty() && t.columns.size() > first_y)
        ys.push_back(t.columns.size() - 1);

    auto xval = [&](std::size_t r) {
        const double lo = t.number(r, t.columns[0].name);
        return (binned || banded) ? (lo + t.number(r, t.columns[1].name)) / 2 : lo;
    };
    Range x, y;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        x.add(xval(r));
        for (const auto c : ys)
            y.add(t.number(r, t.columns[c].name));
    }
    if (!ys.empty() && is_share_unit(t.columns[ys.front()].unit)) {
        y.add(0);
        y.add(1);
    }
    x.settle();
    y.settle();
    Canvas cv(x, y);
    std::string body;
    axes(body, cv, t.name, label_of(t.columns[0]),
         ys.size() == 1 ? label_of(t.columns[ys.front()]) : (ys.empty() ? "" : t.columns[ys.front()].unit));
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const auto colour = kPalette[i % kPalette.size()];
        std::string points;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const double v = t.number(r, t.columns[ys[i]].name);
            if (std::isnan(v))
                continue;
            points += fmt::format("{}{},{}", points.empty() ? "" : " ", num(cv.px(xval(r))), num(cv.py(v)));
            body += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{}\"/>\n", num(cv.px(xval(r))),
                                num(cv.py(v)), colour);
        }
        if (!points.empty())
            body += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", points,
                                colour);
        const double ly = kTop + 14.0 * static_cast<double>(i);
        body += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n",
                            num(kWidth - kRight + 12), num(ly), colour);
        body += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n", num(kWidth - kRight + 26),
                            num(ly + 9), escape_xml(t.columns[ys[i]].name));
    }
    return body;
}

} // namespace

std::string to_svg(const StatTable& t)
{
    std::string svg = fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                                  "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n",
                                  kWidth, kHeight);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (t.columns.size() >= 2)
        svg += t.kind == TableKind::Histogram ? histogram_svg(t) : lines_svg(t);
    svg += "</svg>\n";
    return svg;
}

RenderedFiles render(const StatTable& t, const std::filesystem::path& out_dir, bool want_svg)
{
    std::filesystem::create_directories(out_dir);
    RenderedFiles out;
    out.csv = out_dir / (t.name + ".csv");
    write_file_atomically(out.csv, to_csv(t));
    if (want_svg) {
        out.svg = out_dir / (t.name + ".svg");
        write_file_atomically(*out.svg, to_svg(t));
    }
    return out;
}

} // namespace chessan::stats
