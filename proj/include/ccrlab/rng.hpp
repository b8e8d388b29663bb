#pragma once

#include <array>
#include <cstdint>

namespace ccrlab::rng {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
/// A block is a pure function of (counter, key), so any draw of any
/// replica can be reproduced without replaying the others.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

/// Sequential view of one Philox substream.
///
/// The key is the 64-bit master seed; the counter words are
/// (block index, lane, stream low, stream high). A replica uses one
/// stream id and separate lanes for independent quantities.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream, std::uint32_t lane = 0);

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    /// Standard normal via Box-Muller; pairs are consumed in order.
    double normal();
    /// +1 or -1 with equal probability.
    int sign();

private:
    PhiloxKey key_;
    std::uint32_t lane_;
    std::uint64_t stream_;
    std::uint32_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
    std::uint64_t sign_bits_ = 0;
    int sign_left_ = 0;

    std::uint32_t next_u32();
};

} // namespace ccrlab::rng
