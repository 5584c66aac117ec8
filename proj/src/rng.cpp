#include "cheaptalk/rng.hpp"

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw UsageError("Rng::below: zero bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw UsageError("Rng::between: empty range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

ExactReal Rng::unit(int precision) {
  BigInt m = 0;
  int bits = 0;
  while (bits < precision) {
    m = (m << 64) | BigInt(engine_());
    bits += 64;
  }
  m >>= (bits - precision);
  return ExactReal::from_mantissa(std::move(m), precision);
}

ExactReal Rng::open_unit(int precision) {
  while (true) {
    ExactReal u = unit(precision);
    if (!u.is_zero()) return u;
  }
}

double Rng::uniform_double() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag, std::uint64_t index) {
  // FNV-1a over the tag, then splitmix64 finalisation.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = parent ^ h ^ (index * 0x9e3779b97f4a7c15ULL);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cheaptalk
