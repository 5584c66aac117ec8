#include "cheaptalk/decomposition.hpp"

#include <algorithm>
#include <string>

#include "cheaptalk/errors.hpp"
#include "cheaptalk/numerics.hpp"
#include "cheaptalk/rng.hpp"

namespace cheaptalk {

namespace {

int precision_of(const std::vector<ExactReal>& values) {
  return values.empty() ? kDefaultPrecision : values.front().precision();
}

bool is_basis_vector(const RationalVector& dist) {
  int ones = 0;
  for (const auto& v : dist) {
    if (v == ExactRational(1)) {
      ++ones;
    } else if (!v.is_zero()) {
      return false;
    }
  }
  return ones == 1;
}

RefinementPiece make_piece(ExactRational gamma, RationalVector dist) {
  RefinementPiece piece;
  piece.basis = is_basis_vector(dist);
  piece.meets_bound = gamma <= *std::min_element(dist.begin(), dist.end());
  piece.gamma = std::move(gamma);
  piece.dist = std::move(dist);
  return piece;
}

// Integer weights in [2, 6] summing to 4 * count.
std::vector<int> bounded_composition(int count, Rng& rng) {
  std::vector<int> k(count, 4);
  if (count < 2) return k;
  for (int step = 0; step < 2 * count; ++step) {
    auto from = static_cast<std::size_t>(rng.below(count));
    auto to = static_cast<std::size_t>(rng.below(count));
    if (from != to && k[from] > 2 && k[to] < 6) {
      --k[from];
      ++k[to];
    }
  }
  return k;
}

void check_distribution(const RationalVector& dist, const char* what) {
  if (dist.empty()) throw UsageError(std::string(what) + " is empty");
  ExactRational total = 0;
  for (const auto& v : dist) {
    if (v.sign() <= 0) throw UsageError(std::string(what) + " must be strictly positive");
    total += v;
  }
  if (total != ExactRational(1)) {
    throw UsageError(std::string(what) + " must sum to exactly 1, got " + total.to_string());
  }
}

}  // namespace

std::vector<ExactReal> solve_beta(const std::vector<RationalVector>& vertices,
                                  const std::vector<ExactReal>& p) {
  const std::size_t q_count = p.size();
  if (vertices.size() != q_count) {
    throw UsageError("solve_beta: need exactly one vertex per support profile");
  }
  const int precision = precision_of(p);
  RealMatrix matrix(q_count, std::vector<ExactReal>(q_count));
  for (std::size_t h = 0; h < q_count; ++h) {
    if (vertices[h].size() != q_count) throw UsageError("solve_beta: vertex dimension mismatch");
    for (std::size_t q = 0; q < q_count; ++q) {
      matrix[q][h] = ExactReal::from_rational(vertices[h][q], precision);
    }
  }
  return solve_linear(matrix, p);
}

HullVertices construct_hull_vertices(const std::vector<ExactReal>& p,
                                     const BigInt& max_denominator, std::uint64_t seed,
                                     const ExactRational& epsilon, int max_attempts) {
  const std::size_t q_count = p.size();
  if (q_count < 2) throw UsageError("hull vertices need at least two support profiles");
  for (const auto& v : p) {
    if (v.sign() <= 0) throw UsageError("hull vertices need a full-support target");
  }
  if (max_denominator < 1 || max_attempts < 1 || epsilon.sign() <= 0 ||
      epsilon >= ExactRational(1)) {
    throw UsageError("hull vertices: invalid step or denominator bound");
  }
  const int precision = precision_of(p);
  Rng rng(derive_seed(seed, "hull"));
  ExactRational eps = epsilon;
  BigInt bound = max_denominator;
  std::string reason;

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::vector<RationalVector> vertices(q_count, RationalVector(q_count));
    bool positive = true;
    for (std::size_t h = 0; h < q_count && positive; ++h) {
      const ExactRational step = eps * ExactRational(64 - static_cast<long long>(rng.below(16)), 64);
      const ExactReal step_real = ExactReal::from_rational(step, precision);
      ExactRational rest = 0;
      for (std::size_t q = 0; q < q_count; ++q) {
        if (q == h) continue;
        vertices[h][q] = rationalize(p[q] - step_real * p[q], bound);
        rest += vertices[h][q];
      }
      vertices[h][h] = ExactRational(1) - rest;
      for (const auto& v : vertices[h]) positive = positive && v.sign() > 0;
    }
    if (!positive) {
      reason = "a rounded vertex entry was not positive";
    } else {
      try {
        std::vector<ExactReal> beta = solve_beta(vertices, p);
        if (std::all_of(beta.begin(), beta.end(), [](const ExactReal& b) { return b.sign() > 0; })) {
          return HullVertices{std::move(vertices), std::move(beta), attempt, bound, eps};
        }
        reason = "target outside the hull (non-positive beta)";
      } catch (const NumericError& e) {
        reason = std::string("vertex matrix singular: ") + e.what();
      }
    }
    eps *= ExactRational(7, 8);
    bound *= 2;
  }
  throw NumericError("hull vertex construction failed after " + std::to_string(max_attempts) +
                     " attempts (last step " + eps.to_string() + ", last bound " +
                     bound.str() + "): " + reason);
}

std::vector<RefinementPiece> refine_vertex(const RationalVector& vertex, int pieces,
                                           std::uint64_t seed) {
  check_distribution(vertex, "vertex");
  if (pieces < 1) throw UsageError("refinement count must be at least 1");
  const int q_count = static_cast<int>(vertex.size());
  Rng rng(derive_seed(seed, "refine"));
  std::vector<RefinementPiece> out;

  if (pieces == 1) {
    out.push_back(make_piece(ExactRational(1), vertex));
    return out;
  }

  if (q_count == 1) {
    std::vector<int> k = bounded_composition(pieces, rng);
    for (int u = 0; u < pieces; ++u) {
      out.push_back(make_piece(ExactRational(k[u], 4 * pieces), vertex));
    }
    return out;
  }

  const ExactRational min_entry = *std::min_element(vertex.begin(), vertex.end());

  if (pieces <= q_count) {
    // pieces - 1 basis vectors carrying half of their coordinate, plus the
    // normalized remainder.
    std::vector<int> coords(q_count);
    for (int q = 0; q < q_count; ++q) coords[q] = q;
    rng.shuffle(coords);
    coords.resize(pieces - 1);
    RationalVector residual = vertex;
    ExactRational residual_weight = 1;
    for (int q : coords) {
      ExactRational c = vertex[q] / ExactRational(2);
      residual[q] -= c;
      residual_weight -= c;
      RationalVector e(q_count, ExactRational(0));
      e[q] = 1;
      out.push_back(make_piece(c, std::move(e)));
    }
    for (auto& v : residual) v /= residual_weight;
    out.push_back(make_piece(residual_weight, std::move(residual)));
    rng.shuffle(out);
    return out;
  }

  // Interior pieces on the 1/M grid, M = 4Q, each entry at least 1/(2Q); their
  // total weight is half the smallest vertex entry, which keeps every interior
  // gamma below its piece's smallest entry and leaves positive basis weights.
  const int interior = pieces - q_count;
  const int grid = 4 * q_count;
  const ExactRational interior_weight = min_entry / ExactRational(2);
  std::vector<int> k = bounded_composition(interior, rng);
  RationalVector basis_weight = vertex;
  for (int u = 0; u < interior; ++u) {
    std::vector<int> units(q_count, 2);
    for (int extra = 0; extra < 2 * q_count; ++extra) ++units[rng.below(q_count)];
    RationalVector dist(q_count);
    for (int q = 0; q < q_count; ++q) dist[q] = ExactRational(units[q], grid);
    ExactRational gamma = interior_weight * ExactRational(k[u], 4 * interior);
    for (int q = 0; q < q_count; ++q) basis_weight[q] -= gamma * dist[q];
    out.push_back(make_piece(std::move(gamma), std::move(dist)));
  }
  for (int q = 0; q < q_count; ++q) {
    RationalVector e(q_count, ExactRational(0));
    e[q] = 1;
    out.push_back(make_piece(basis_weight[q], std::move(e)));
  }
  rng.shuffle(out);
  return out;
}

std::vector<FlatComponent> flatten(const std::vector<ExactReal>& beta,
                                   const std::vector<std::vector<RefinementPiece>>& refinements) {
  if (beta.size() != refinements.size()) {
    throw UsageError("flatten: beta and refinements disagree in length");
  }
  std::vector<FlatComponent> flat;
  for (std::size_t h = 0; h < beta.size(); ++h) {
    for (std::size_t u = 0; u < refinements[h].size(); ++u) {
      const auto& piece = refinements[h][u];
      FlatComponent c;
      c.alpha = ExactReal::from_rational(piece.gamma, beta[h].precision()) * beta[h];
      c.dist = piece.dist;
      c.vertex = static_cast<int>(h);
      c.piece = static_cast<int>(u);
      flat.push_back(std::move(c));
    }
  }
  return flat;
}

Decomposition decompose(const std::vector<ExactReal>& p,
                        const std::optional<RationalVector>& exact,
                        const DecompositionOptions& options) {
  if (p.empty()) throw UsageError("decompose: empty target");
  const std::size_t q_count = p.size();
  const int precision = precision_of(p);
  Decomposition d;

  if (options.vertices) {
    d.vertices = *options.vertices;
    for (const auto& v : d.vertices) {
      if (v.size() != q_count) throw UsageError("pinned vertex dimension mismatch");
      check_distribution(v, "pinned vertex");
    }
    d.beta = solve_beta(d.vertices, p);
    for (const auto& b : d.beta) {
      if (b.sign() <= 0) throw NumericError("target is not strictly inside the pinned vertices' hull");
    }
    d.max_denominator = 0;
  } else if (exact || q_count == 1) {
    RationalVector target = exact ? *exact : RationalVector{ExactRational(1)};
    if (target.size() != q_count) throw UsageError("exact target dimension mismatch");
    check_distribution(target, "target");
    d.vertices = {std::move(target)};
    d.beta = {ExactReal::from_int(1, precision)};
    d.exact_target = true;
  } else {
    HullVertices hull = construct_hull_vertices(p, options.max_denominator, options.seed,
                                                options.epsilon, options.max_attempts);
    d.vertices = std::move(hull.vertices);
    d.beta = std::move(hull.beta);
    d.vertex_attempts = hull.attempts;
    d.max_denominator = hull.max_denominator;
  }

  const int pieces = options.refinements > 0 ? options.refinements
                                             : static_cast<int>(q_count) + 1;
  for (std::size_t h = 0; h < d.vertices.size(); ++h) {
    d.refinements.push_back(
        refine_vertex(d.vertices[h], pieces, derive_seed(options.seed, "vertex", h)));
  }
  d.flat = flatten(d.beta, d.refinements);
  return d;
}

ExactReal recomposition_error(const Decomposition& d, const std::vector<ExactReal>& p) {
  const int precision = precision_of(p);
  ExactReal worst = ExactReal::from_int(0, precision);
  for (std::size_t q = 0; q < p.size(); ++q) {
    ExactReal acc = ExactReal::from_int(0, precision);
    for (const auto& c : d.flat) acc += c.alpha * ExactReal::from_rational(c.dist.at(q), precision);
    ExactReal err = (acc - p[q]).abs();
    if (err > worst) worst = err;
  }
  return worst;
}

ExactReal alpha_sum_error(const Decomposition& d) {
  const int precision = d.flat.empty() ? kDefaultPrecision : d.flat.front().alpha.precision();
  ExactReal total = ExactReal::from_int(0, precision);
  for (const auto& c : d.flat) total += c.alpha;
  return (total - ExactReal::from_int(1, precision)).abs();
}

}  // namespace cheaptalk
