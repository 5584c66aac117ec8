#ifndef CHEAPTALK_RNG_HPP_
#define CHEAPTALK_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "cheaptalk/real.hpp"

namespace cheaptalk {

// Seeded generator with platform-independent helpers. std::mt19937_64's output
// sequence is fixed by the standard; the distribution helpers here replace the
// implementation-defined std:: distributions so runs reproduce across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);
  // Uniform on [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  // Uniform fixed-point value in [0, 1) with `precision` random bits.
  ExactReal unit(int precision = kDefaultPrecision);
  // Uniform fixed-point value in (0, 1).
  ExactReal open_unit(int precision = kDefaultPrecision);
  double uniform_double();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a parent seed and a tag.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag,
                          std::uint64_t index = 0);

}  // namespace cheaptalk

#endif  // CHEAPTALK_RNG_HPP_
