#pragma once

// Counter-based random streams (Philox4x32-10).
//
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.
// Each (seed, stream) pair is an independent stream addressed purely by its
// counter, so replication r can always be handed stream r and produce the
// same draws no matter which thread runs it or in which order.

#include <cstdint>
#include <cmath>

namespace hwq {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace detail

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) {
    const std::uint64_t k = detail::splitmix64(seed);
    key0_ = static_cast<std::uint32_t>(k);
    key1_ = static_cast<std::uint32_t>(k >> 32);
    ctr2_ = static_cast<std::uint32_t>(stream);
    ctr3_ = static_cast<std::uint32_t>(stream >> 32);
    block_ = 0;
    have_ = 0;
  }

  std::uint64_t next_u64() {
    if (have_ == 0) refill();
    --have_;
    const std::uint64_t v = out_[have_];
    return v;
  }

  // Strictly inside (0,1); safe to pass to log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(block_);
    std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
    std::uint32_t c2 = ctr2_, c3 = ctr3_;
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t lo0, hi0, lo1, hi1;
      detail::mul_hilo(0xD2511F53u, c0, lo0, hi0);
      detail::mul_hilo(0xCD9E8D57u, c2, lo1, hi1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out_[0] = (static_cast<std::uint64_t>(c1) << 32) | c0;
    out_[1] = (static_cast<std::uint64_t>(c3) << 32) | c2;
    have_ = 2;
    ++block_;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t ctr2_, ctr3_;   // stream id
  std::uint64_t block_;         // running block counter
  std::uint64_t out_[2];
  int have_;
};

// Stream-id scheme: replication index in the high bits, a small component tag
// in the low bits, so one replication can own several independent substreams
// (e.g. arrivals vs. services) without colliding with its neighbours.
inline std::uint64_t substream_id(std::uint64_t replication, std::uint64_t component = 0) {
  return (replication << 8) | (component & 0xFF);
}

}  // namespace hwq
