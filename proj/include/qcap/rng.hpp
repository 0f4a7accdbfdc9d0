#pragma once

#include <cstdint>
#include <random>

namespace qcap {

// SplitMix64 finalizer; used to derive independent stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Reserved stream domains so that channel construction, sample loops and
// auxiliary draws never share a key for the same master seed.
enum class StreamDomain : std::uint64_t {
  kSamples = 1,
  kChannel = 2,
  kBattery = 3,
  kAuxiliary = 4,
};

/// A random stream keyed by (master seed, domain, index).
///
/// Streams are counter-based in the sense that the state of stream `i` is a
/// pure function of the key, so sample `i` of a Monte Carlo loop draws the
/// same numbers no matter which worker evaluates it or in which order.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t index,
            StreamDomain domain = StreamDomain::kSamples)
      : engine_(derive_key(master_seed, index, domain)) {}

  static constexpr std::uint64_t derive_key(std::uint64_t master_seed,
                                            std::uint64_t index,
                                            StreamDomain domain) {
    const std::uint64_t d = static_cast<std::uint64_t>(domain);
    return splitmix64(splitmix64(master_seed) ^
                      splitmix64(index * 0xd1b54a32d192ed03ULL + d));
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace qcap
