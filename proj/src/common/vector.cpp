#include "medaide/common/vector.hpp"

#include <cmath>

#include "medaide/common/error.hpp"

namespace medaide {

double dot(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(u.dimension()) + " vs " + std::to_string(v.dimension()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) acc += u.values[i] * v.values[i];
  return acc;
}

double norm(const EmbeddingVector& v) {
  double acc = 0.0;
  for (const double x : v.values) acc += x * x;
  return std::sqrt(acc);
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
  const double d = dot(u, v);
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorCode::kZeroNorm, "cosine of a zero-norm vector");
  const double c = d / (nu * nv);
  if (c > 1.0) return 1.0;
  if (c < -1.0) return -1.0;
  return c;
}

}  // namespace medaide
