#pragma once
// Binary checkpoint format, little-endian throughout:
//   magic "EMHD" | version u32 | n u32 | K u32 | alpha mu r s t f64 |
//   seed u64 | path_id u64 | payload_len u64 | payload
// payload = Hermitian-reduced coefficients (canonical modes of the cube
// [-n,n]^3 in lexicographic order, three components, re/im f64 pairs),
// then the serialized noise basis (per field: m as 3 x i32, polarization as
// 3 x f64, theta f64, is_sine u8; then gamma, basis s as f64, basis seed u64).
// Round-tripping is exact: raw IEEE-754 bit patterns, no reformatting.

#include <cstdint>
#include <string>

#include "emhd/noise.hpp"

namespace emhd {

inline constexpr std::uint32_t checkpoint_version = 1;

struct CheckpointData {
    double alpha = 1.5, mu = 1.0, r = 1.0, s = 3.1;
    double t = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t path_id = 0;
    SpectralField B;
    NoiseBasis basis;  // may be empty (K = 0)
};

void write_checkpoint(const CheckpointData& data, const std::string& path);
// Throws std::runtime_error on bad magic, version mismatch, or truncation.
CheckpointData read_checkpoint(const std::string& path);

}  // namespace emhd
