#include "cheaptalk/partition.hpp"

#include <algorithm>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

namespace {

// Index of the last cell whose lo is <= d.
template <typename Cells>
std::size_t locate_in(const Cells& cells, const ExactReal& d) {
  if (cells.empty()) throw UsageError("locate: empty partition");
  if (d.sign() <= 0 || d >= ExactReal::from_int(1, d.precision())) {
    throw UsageError("locate: point " + d.to_decimal(20) + " is outside (0,1)");
  }
  auto it = std::upper_bound(cells.begin(), cells.end(), d,
                             [](const ExactReal& x, const Cell& c) { return x < c.lo; });
  return static_cast<std::size_t>(it - cells.begin()) - 1;
}

}  // namespace

std::size_t LabeledPartition::locate_index(const ExactReal& d) const {
  return locate_in(cells, d);
}

std::vector<ExactReal> LabeledPartition::target_measures(std::size_t targets) const {
  const int precision = cells.empty() ? kDefaultPrecision : cells.front().lo.precision();
  std::vector<ExactReal> out(targets, ExactReal::from_int(0, precision));
  for (const auto& c : cells) out.at(c.target) += c.measure();
  return out;
}

LabeledPartition build_partition(const std::vector<ExactReal>& alphas, int fragmentation,
                                 std::uint64_t seed) {
  if (fragmentation < 1) throw UsageError("fragmentation must be at least 1");
  if (alphas.empty()) throw UsageError("build_partition: no components");
  const int precision = alphas.front().precision();
  for (const auto& a : alphas) {
    if (a.sign() <= 0) throw UsageError("build_partition: weights must be positive");
  }
  Rng rng(derive_seed(seed, "fragments"));

  struct Fragment {
    ExactReal length;
    int target;
  };
  std::vector<Fragment> fragments;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    // Stick breaking: each cut keeps a uniform share in [1/4, 3/4] of what is
    // left; the last piece takes the exact remainder.
    ExactReal left = alphas[j];
    for (int k = 0; k + 1 < fragmentation; ++k) {
      ExactReal share = ExactReal::from_rational(ExactRational(1, 4), precision) +
                        rng.unit(precision) * ExactReal::from_rational(ExactRational(1, 2), precision);
      ExactReal piece = left * share;
      if (piece.sign() <= 0 || piece >= left) continue;
      fragments.push_back({piece, static_cast<int>(j)});
      left -= piece;
    }
    fragments.push_back({left, static_cast<int>(j)});
  }
  rng.shuffle(fragments);

  LabelGenerator labels(derive_seed(seed, "cell-labels"));
  LabeledPartition out;
  ExactReal cursor = ExactReal::from_int(0, precision);
  for (std::size_t k = 0; k < fragments.size(); ++k) {
    Cell c;
    c.label = labels.next();
    c.lo = cursor;
    c.hi = k + 1 == fragments.size() ? ExactReal::from_int(1, precision)
                                     : cursor + fragments[k].length;
    c.target = fragments[k].target;
    if (c.hi <= c.lo) throw NumericError("build_partition: weights do not sum to 1");
    cursor = c.hi;
    out.cells.push_back(std::move(c));
  }
  return out;
}

std::size_t CommonRefinement::locate_index(const ExactReal& d) const {
  return locate_in(cells, d);
}

CommonRefinement build_common_refinement(const std::vector<LabeledPartition>& partitions,
                                         std::uint64_t seed) {
  if (partitions.empty()) throw UsageError("common refinement of no partitions");
  std::vector<ExactReal> bounds;
  for (const auto& part : partitions) {
    if (part.cells.empty()) throw UsageError("common refinement: empty partition");
    for (const auto& c : part.cells) bounds.push_back(c.lo);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
  const int precision = partitions.front().cells.front().lo.precision();

  LabelGenerator labels(derive_seed(seed, "refined-labels"));
  CommonRefinement out;
  std::vector<std::size_t> cursor(partitions.size(), 0);
  for (std::size_t m = 0; m < bounds.size(); ++m) {
    Cell c;
    c.label = labels.next();
    c.lo = bounds[m];
    c.hi = m + 1 < bounds.size() ? bounds[m + 1] : ExactReal::from_int(1, precision);
    c.target = -1;
    std::vector<int> targets(partitions.size());
    std::vector<std::size_t> sources(partitions.size());
    for (std::size_t s = 0; s < partitions.size(); ++s) {
      const auto& cells = partitions[s].cells;
      while (cursor[s] + 1 < cells.size() && cells[cursor[s] + 1].lo <= c.lo) ++cursor[s];
      targets[s] = cells[cursor[s]].target;
      sources[s] = cursor[s];
    }
    out.cells.push_back(std::move(c));
    out.target.push_back(std::move(targets));
    out.source.push_back(std::move(sources));
  }
  return out;
}

}  // namespace cheaptalk
