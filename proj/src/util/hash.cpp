#include "chessan/util/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace chessan {

std::string Digest128::hex() const
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(32);
    for (const auto b : bytes) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 15]);
    }
    return out;
}

ContentHasher::ContentHasher() : ctx_(EVP_MD_CTX_new())
{
    if (!ctx_ || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
}

ContentHasher::~ContentHasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

ContentHasher& ContentHasher::field(std::string_view data)
{
    auto* ctx = static_cast<EVP_MD_CTX*>(ctx_);
    std::uint8_t len[8];
    std::uint64_t n = data.size();
    for (auto& b : len) {
        b = static_cast<std::uint8_t>(n & 0xff);
        n >>= 8;
    }
    EVP_DigestUpdate(ctx, len, sizeof len);
    EVP_DigestUpdate(ctx, data.data(), data.size());
    return *this;
}

Digest128 ContentHasher::finish()
{
    unsigned char full[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), full, &len);
    Digest128 d;
    for (std::size_t i = 0; i < d.bytes.size(); ++i)
        d.bytes[i] = full[i];
    EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr);
    return d;
}

Digest128 digest_of(std::string_view data) { return ContentHasher().field(data).finish(); }

} // namespace chessan
