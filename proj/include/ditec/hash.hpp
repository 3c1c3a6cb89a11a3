#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace ditec {

/// 64-bit FNV-1a. Stable across platforms; used for cache keys only.
class Fnv1a {
public:
    void update(const void* bytes, std::size_t n) noexcept {
        auto* p = static_cast<const unsigned char*>(bytes);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void update(std::string_view s) noexcept { update(s.data(), s.size()); }
    std::uint64_t digest() const noexcept { return state_; }

    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
        return buf;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace ditec
