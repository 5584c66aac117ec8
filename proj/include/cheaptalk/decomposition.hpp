#ifndef CHEAPTALK_DECOMPOSITION_HPP_
#define CHEAPTALK_DECOMPOSITION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "cheaptalk/rational.hpp"
#include "cheaptalk/real.hpp"

namespace cheaptalk {

// One rational piece p~ of a hull vertex, weighted by gamma.
struct RefinementPiece {
  ExactRational gamma;
  RationalVector dist;
  bool basis = false;        // dist is a standard basis vector e_q
  bool meets_bound = false;  // gamma <= min_q dist_q
};

// Flattened component j <-> (vertex, piece), alpha_j = gamma * beta.
struct FlatComponent {
  ExactReal alpha;
  RationalVector dist;
  int vertex = 0;
  int piece = 0;
};

struct Decomposition {
  std::vector<RationalVector> vertices;
  std::vector<ExactReal> beta;
  std::vector<std::vector<RefinementPiece>> refinements;
  std::vector<FlatComponent> flat;
  int vertex_attempts = 0;    // 0 when vertices were pinned or p is rational
  BigInt max_denominator = 0; // bound in effect for the accepted vertices
  bool exact_target = false;  // p was rational and used as its own vertex
};

struct DecompositionOptions {
  BigInt max_denominator = 64;
  ExactRational epsilon = ExactRational(3, 4);
  int max_attempts = 16;
  int refinements = 0;  // pieces per vertex; 0 selects Q + 1
  std::optional<std::vector<RationalVector>> vertices;  // pinned p^h
  std::uint64_t seed = 0;
};

struct HullVertices {
  std::vector<RationalVector> vertices;
  std::vector<ExactReal> beta;
  int attempts = 0;
  BigInt max_denominator = 0;
  ExactRational epsilon;
};

// Q rational, strictly positive, linearly independent distributions with p
// strictly inside their hull. Each vertex is p pulled toward a distinct corner
// by a jittered step, rounded to denominators <= D. Failed attempts shrink the
// step by 7/8 and double D. Throws NumericError when every attempt fails and
// UsageError unless p is a full-support distribution with Q >= 2.
HullVertices construct_hull_vertices(const std::vector<ExactReal>& p,
                                     const BigInt& max_denominator, std::uint64_t seed,
                                     const ExactRational& epsilon = ExactRational(3, 4),
                                     int max_attempts = 16);

// beta = P^-1 p, with the vertices as the columns of P. Singular vertex sets
// raise NumericError.
std::vector<ExactReal> solve_beta(const std::vector<RationalVector>& vertices,
                                  const std::vector<ExactReal>& p);

// Splits a strictly positive rational distribution into `pieces` weighted
// rational distributions that recompose to it exactly.
//
//   pieces == 1       the vertex itself
//   pieces >= Q + 1   Q basis vectors plus pieces - Q interior distributions
//                     that all satisfy gamma <= min entry
//   2 <= pieces <= Q  pieces - 1 basis vectors plus one residual distribution
std::vector<RefinementPiece> refine_vertex(const RationalVector& vertex, int pieces,
                                           std::uint64_t seed);

// alpha_j = gamma_{h,u} * beta_h in lexicographic (h, u) order.
std::vector<FlatComponent> flatten(const std::vector<ExactReal>& beta,
                                   const std::vector<std::vector<RefinementPiece>>& refinements);

// Full pipeline over the support probabilities p. When `exact` is given (the
// target is rational) p serves as its own single vertex with beta = (1).
Decomposition decompose(const std::vector<ExactReal>& p,
                        const std::optional<RationalVector>& exact,
                        const DecompositionOptions& options);

// max_q |sum_j alpha_j p^j_q - p_q|
ExactReal recomposition_error(const Decomposition& d, const std::vector<ExactReal>& p);

// |sum_j alpha_j - 1|
ExactReal alpha_sum_error(const Decomposition& d);

}  // namespace cheaptalk

#endif  // CHEAPTALK_DECOMPOSITION_HPP_
