#pragma once

#include <string>
#include <vector>

namespace medaide {

// Dense embedding. Values are held in double; file-backed vectors are f32 on
// disk and widen exactly.
struct EmbeddingVector {
  std::vector<double> values;
  std::string source;

  std::size_t dimension() const { return values.size(); }
};

double dot(const EmbeddingVector& u, const EmbeddingVector& v);
double norm(const EmbeddingVector& v);

// u.v / (|u||v|). Throws ZeroNorm or DimensionMismatch.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

}  // namespace medaide
