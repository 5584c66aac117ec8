#include "cheaptalk/label.hpp"

#include <cstdio>

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

std::string Label::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

Label Label::parse(const std::string& hex) {
  if (hex.size() != 32) throw ParseError("label must have 32 hex digits: '" + hex + "'");
  try {
    std::size_t used_hi = 0, used_lo = 0;
    Label l{std::stoull(hex.substr(0, 16), &used_hi, 16),
            std::stoull(hex.substr(16), &used_lo, 16)};
    if (used_hi != 16 || used_lo != 16) throw ParseError("bad label '" + hex + "'");
    return l;
  } catch (const std::logic_error&) {
    throw ParseError("bad label '" + hex + "'");
  }
}

Label LabelGenerator::next() {
  while (true) {
    Label l{rng_.next(), rng_.next()};
    if (issued_.insert(l).second) return l;
  }
}

}  // namespace cheaptalk
