#ifndef CHEAPTALK_PARTITION_HPP_
#define CHEAPTALK_PARTITION_HPP_

#include <cstdint>
#include <vector>

#include "cheaptalk/label.hpp"
#include "cheaptalk/real.hpp"

namespace cheaptalk {

// Half-open cell [lo, hi) of (0, 1) with an opaque label and the
// decomposition component it maps to.
struct Cell {
  Label label;
  ExactReal lo;
  ExactReal hi;
  int target = 0;

  ExactReal measure() const { return hi - lo; }
};

// Cells in left-to-right order; they tile (0, 1) with shared endpoints.
struct LabeledPartition {
  std::vector<Cell> cells;

  std::size_t size() const { return cells.size(); }
  // Position of the cell containing d (lo <= d < hi). Throws UsageError when
  // d is outside (0, 1).
  std::size_t locate_index(const ExactReal& d) const;
  const Cell& locate(const ExactReal& d) const { return cells[locate_index(d)]; }
  // Sum of cell measures per target.
  std::vector<ExactReal> target_measures(std::size_t targets) const;
};

// Splits every alpha_j into `fragmentation` random positive pieces, shuffles all
// pieces and lays them out over (0, 1). The last endpoint is pinned to 1, so
// the final cell absorbs the rounding gap between sum(alpha) and 1.
LabeledPartition build_partition(const std::vector<ExactReal>& alphas, int fragmentation,
                                 std::uint64_t seed);

// Refinement of several partitions of (0, 1) over the union of their
// boundaries. target[m][s] is the target of the cell of partition s that
// contains refined cell m, and source[m][s] that cell's position.
struct CommonRefinement {
  std::vector<Cell> cells;  // Cell::target unused (-1)
  std::vector<std::vector<int>> target;
  std::vector<std::vector<std::size_t>> source;

  std::size_t size() const { return cells.size(); }
  std::size_t locate_index(const ExactReal& d) const;
};

CommonRefinement build_common_refinement(const std::vector<LabeledPartition>& partitions,
                                         std::uint64_t seed);

}  // namespace cheaptalk

#endif  // CHEAPTALK_PARTITION_HPP_
