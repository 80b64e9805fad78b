#pragma once

#include "chessan/core/move.hpp"
#include "chessan/core/position.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace chessan {

enum class SanErrorKind { IllegalMove, AmbiguousMove, MalformedSan };

class SanError : public std::runtime_error {
public:
    SanError(SanErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    SanErrorKind kind() const noexcept { return kind_; }

private:
    SanErrorKind kind_;
};

/// Resolves a SAN token against the legal moves of `pos`. Check/mate
/// suffixes and !/? annotation glyphs are accepted and ignored; both
/// "O-O" and "0-0" castling spellings are recognised.
Move parse_san(const Position& pos, std::string_view san);

/// Canonical SAN with minimal disambiguation and a +/# suffix.
std::string to_san(const Position& pos, const Move& m);

/// Removes trailing annotation glyphs (!, ?, !!, ??, !?, ?!) but keeps +/#.
std::string_view strip_annotation_glyphs(std::string_view san) noexcept;

} // namespace chessan
