#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace chessan {

/// First 128 bits of a SHA-256 digest. Stable across platforms and runs.
struct Digest128 {
    std::array<std::uint8_t, 16> bytes{};

    std::string hex() const;
    friend auto operator<=>(const Digest128&, const Digest128&) = default;
};

/// Incremental hasher; fields are length-prefixed so ("ab","c") != ("a","bc").
class ContentHasher {
public:
    ContentHasher();
    ~ContentHasher();
    ContentHasher(const ContentHasher&) = delete;
    ContentHasher& operator=(const ContentHasher&) = delete;

    ContentHasher& field(std::string_view data);
    Digest128 finish();

private:
    void* ctx_;
};

Digest128 digest_of(std::string_view data);

} // namespace chessan

template <>
struct std::hash<chessan::Digest128> {
    std::size_t operator()(const chessan::Digest128& d) const noexcept
    {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i)
            h = (h << 8) | d.bytes[i];
        return h;
    }
};
