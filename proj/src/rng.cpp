#include "ccrlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace ccrlab::rng {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

} // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key)
{
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMulA, ctr[0], hi0, lo0);
        mulhilo(kMulB, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeylA;
        key[1] += kWeylB;
    }
    return ctr;
}

Stream::Stream(std::uint64_t seed, std::uint64_t stream, std::uint32_t lane)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      lane_(lane), stream_(stream)
{
}

std::uint32_t Stream::next_u32()
{
    if (used_ == 4) {
        buffer_ = philox4x32({block_, lane_, static_cast<std::uint32_t>(stream_),
                              static_cast<std::uint32_t>(stream_ >> 32)},
                             key_);
        ++block_;
        used_ = 0;
    }
    return buffer_[used_++];
}

std::uint64_t Stream::next_u64()
{
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
}

double Stream::uniform()
{
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

int Stream::sign()
{
    if (sign_left_ == 0) {
        sign_bits_ = next_u64();
        sign_left_ = 64;
    }
    const int bit = static_cast<int>(sign_bits_ & 1u);
    sign_bits_ >>= 1;
    --sign_left_;
    return bit ? 1 : -1;
}

} // namespace ccrlab::rng
