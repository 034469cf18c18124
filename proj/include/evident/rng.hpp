#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace evident {

// Deterministic random source. std::mt19937_64 is bit-exact across
// platforms, but the standard distributions are not, so the mappings to
// doubles live here. The gaussian draw is stateless (no cached spare),
// which keeps the serialized state equal to the engine state alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; consumes exactly two engine draws per call.
  double gaussian(double mean, double stddev);

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::string save_state() const;
  void restore_state(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

}  // namespace evident
