#pragma once

#include <cstdint>
#include <random>

namespace prhpg {

// Derives an independent stream seed from a master seed (splitmix64 step).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

// Deterministic random source. std::mt19937_64 is fully specified by the
// standard; the uniform and normal mappings below avoid the
// implementation-defined std::*_distribution adaptors, so identical seeds
// give identical streams on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in (0, 1).
  double uniform01();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller.
  double normal();
  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace prhpg
