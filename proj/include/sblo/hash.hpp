#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace sblo {

// 64-bit FNV-1a. Stable across platforms and standard libraries, which
// std::hash is not; used for config hashes and network fingerprints.
class Fnv1a {
public:
    void update(std::span<const std::byte> bytes) noexcept {
        for (auto b : bytes) {
            state_ ^= static_cast<std::uint64_t>(b);
            state_ *= kPrime;
        }
    }

    void update(std::string_view text) noexcept {
        update(std::as_bytes(std::span(text.data(), text.size())));
    }

    // Little-endian byte order regardless of host.
    void update(std::uint64_t value) noexcept {
        for (int shift = 0; shift < 64; shift += 8) {
            state_ ^= (value >> shift) & 0xffu;
            state_ *= kPrime;
        }
    }

    std::uint64_t digest() const noexcept { return state_; }

private:
    static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ull;
    static constexpr std::uint64_t kPrime = 0x100000001b3ull;
    std::uint64_t state_ = kOffset;
};

} // namespace sblo
