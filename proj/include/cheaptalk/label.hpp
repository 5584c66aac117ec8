#ifndef CHEAPTALK_LABEL_HPP_
#define CHEAPTALK_LABEL_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>

#include "cheaptalk/rng.hpp"

namespace cheaptalk {

// 128-bit opaque identifier used for interval labels, ciphertext strategy
// labels and encrypted type labels.
struct Label {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  std::string hex() const;  // 32 lowercase hex digits
  static Label parse(const std::string& hex);

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;
};

struct LabelHash {
  std::size_t operator()(const Label& l) const noexcept {
    return std::hash<std::uint64_t>()(l.hi ^ (l.lo * 0x9e3779b97f4a7c15ULL));
  }
};

// Draws labels from a seeded stream, rejecting any label already issued by this
// generator.
class LabelGenerator {
 public:
  explicit LabelGenerator(std::uint64_t seed) : rng_(seed) {}
  Label next();
  std::size_t issued() const { return issued_.size(); }

 private:
  Rng rng_;
  std::unordered_set<Label, LabelHash> issued_;
};

}  // namespace cheaptalk

#endif  // CHEAPTALK_LABEL_HPP_
