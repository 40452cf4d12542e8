#include "emhd/rng.hpp"

#include <cmath>

namespace emhd {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 10; ++r) {
        round_once(ctr, key);
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

namespace {
inline std::array<std::uint32_t, 4> draw(const RngStream& s, std::uint32_t a, std::uint32_t b) {
    std::array<std::uint32_t, 4> ctr = {a, b, s.path_id, s.domain};
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(s.seed),
                                        static_cast<std::uint32_t>(s.seed >> 32)};
    return philox4x32(ctr, key);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t v = (static_cast<std::uint64_t>(hi) << 32) | lo;
    // (0, 1]: never 0, so log(u) is finite.
    return (static_cast<double>(v) + 1.0) * 0x1p-64;
}
}  // namespace

double RngStream::uniform(std::uint32_t a, std::uint32_t b) const {
    auto x = draw(*this, a, b);
    return to_unit(x[0], x[1]);
}

double RngStream::normal(std::uint32_t a, std::uint32_t b) const {
    auto x = draw(*this, a, b);
    double u1 = to_unit(x[0], x[1]);
    double u2 = to_unit(x[2], x[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace emhd
