#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace tailasym {

/// Identifies one random stream: the master seed keys the generator and the
/// stream id selects a disjoint counter range.
///
/// Stream-id layout used throughout the library:
///   - `r` (< 2^31)                    : Monte-Carlo replication r, or a CLI
///                                       `sample` call with --stream r
///   - `kBootstrapBit | r << 32 | b`   : bootstrap resample b inside replication
///                                       r (r = 0 for a stand-alone bootstrap)
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

inline constexpr std::uint64_t kBootstrapBit = std::uint64_t{1} << 63;

constexpr SeedSpec bootstrap_stream(std::uint64_t master, std::uint64_t replication,
                                    std::uint64_t resample) {
  return {master, kBootstrapBit | (replication << 32) | (resample & 0xffffffffu)};
}

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Key = master seed; counter = (block index : 64 bits, stream id : 64 bits).
/// Distinct stream ids therefore never share a counter value, and a stream
/// yields 2^66 32-bit words before its block index wraps.
class Philox4x32 {
public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(SeedSpec seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  // The raw bijection, exposed for known-answer tests.
  static Block encrypt(Block counter, Key key);

private:
  void refill();

  Key key_{};
  std::uint64_t block_ = 0;
  std::uint64_t stream_ = 0;
  Block buffer_{};
  int next_ = 4;
};

/// Uniform double in the open interval (0, 1) with 53 bits of resolution.
inline double uniform_open(Philox4x32& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Unbiased integer in [0, n) (Lemire's multiply-and-reject).
std::size_t uniform_index(Philox4x32& eng, std::size_t n);

/// Standard exponential variate by inversion.
double exponential(Philox4x32& eng);

/// Standard normal variate by inversion of the normal CDF.
double standard_normal(Philox4x32& eng);

/// log of a Gamma(shape, 1) variate; stays finite for tiny shapes where the
/// variate itself underflows.
double log_gamma_variate(Philox4x32& eng, double shape);

} // namespace tailasym
