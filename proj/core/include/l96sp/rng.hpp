#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace l96sp {

/// Name of the uniform engine and Gaussian transform, recorded in run
/// metadata. Bit-reproducibility holds per method.
inline constexpr const char* kRngMethod = "mt19937_64+seed_seq(seed,stream_id)/box-muller";

/// Seeded random stream. Each (seed, stream_id) pair selects an independent
/// substream; ensembles use stream_id = member * K + k.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal draw (Box–Muller; the second variate of each pair is
  /// cached).
  double gaussian();

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace l96sp
