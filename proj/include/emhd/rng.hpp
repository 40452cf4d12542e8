#pragma once
// Counter-based random streams (Philox4x32-10). A draw is a pure function of
// (seed, path_id, domain, a, b): no state, no order dependence, identical
// across platforms and thread layouts. Domains separate independent uses of
// the same seed (Wiener increments, initial data, test fields, ...).

#include <array>
#include <cstdint>

namespace emhd {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

enum class RngDomain : std::uint32_t {
    increments = 0,
    initial_data = 1,
    test_fields = 2,
    perturbation = 3,
};

struct RngStream {
    std::uint64_t seed = 0;
    std::uint32_t path_id = 0;
    std::uint32_t domain = 0;

    RngStream() = default;
    RngStream(std::uint64_t seed_, std::uint32_t path_id_, RngDomain d)
        : seed(seed_), path_id(path_id_), domain(static_cast<std::uint32_t>(d)) {}

    // Uniform on (0, 1], indexed by the counter pair (a, b).
    double uniform(std::uint32_t a, std::uint32_t b) const;
    // Standard normal (Box-Muller), indexed by (a, b).
    double normal(std::uint32_t a, std::uint32_t b) const;
};

}  // namespace emhd
