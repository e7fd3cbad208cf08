#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace synthrec {

// Deterministic RNG with platform-stable draws. mt19937_64 output is fixed by
// the standard; the bounded/uniform helpers below avoid the
// implementation-defined std::*_distribution classes so every platform draws
// the same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n), rejection-sampled.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Sample k distinct indices from [0, n), order by draw.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

// FNV-1a over a sequence of labeled parts; used to derive independent
// per-(seed, doc, variant, position, ...) streams.
class StreamKey {
 public:
  StreamKey() = default;

  StreamKey& mix(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (v >> (8 * i)) & 0xff;
      hash_ *= 0x100000001b3ull;
    }
    return *this;
  }

  StreamKey& mix(std::string_view s) {
    for (unsigned char c : s) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ull;
    }
    hash_ ^= 0x1f;  // separator so ("ab","c") != ("a","bc")
    hash_ *= 0x100000001b3ull;
    return *this;
  }

  std::uint64_t value() const { return hash_; }
  Rng rng() const { return Rng(hash_); }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

inline std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n,
                                                                std::size_t k) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  shuffle(idx);
  if (k < n) idx.resize(k);
  return idx;
}

// round-half-up on a non-negative value; used for all exact-count masking.
inline std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(x + 0.5);
}

}  // namespace synthrec
