#include "cluster_sense/scale.hpp"

#include <cmath>
#include <vector>

#include "cluster_sense/error.hpp"

namespace cluster_sense {

std::string_view to_token(ScalingKind kind) {
  switch (kind) {
    case ScalingKind::none: return "none";
    case ScalingKind::centered: return "centered";
    case ScalingKind::standardized: return "standardized";
  }
  return "none";
}

std::optional<ScalingKind> parse_scaling_kind(std::string_view token) {
  if (token == "none") return ScalingKind::none;
  if (token == "centered") return ScalingKind::centered;
  if (token == "standardized") return ScalingKind::standardized;
  return std::nullopt;
}

Matrix apply_scaling(const Matrix& matrix, ScalingKind kind) {
  if (matrix.rows() < 2) {
    throw Error(ErrorCode::invalid_argument, "apply_scaling: need at least 2 rows");
  }
  if (!matrix.all_finite()) {
    throw Error(ErrorCode::non_finite, "apply_scaling: matrix has non-finite entries");
  }
  Matrix out = matrix;
  if (kind == ScalingKind::none) return out;

  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.cols();
  std::vector<double> mean(d, 0.0);
  // Exactly constant columns are set to zero rather than centered, so that
  // rounding in the mean cannot leave a residue that standardizing blows up.
  std::vector<bool> constant(d, true);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = matrix.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      mean[c] += row[c];
      if (row[c] != matrix(0, c)) constant[c] = false;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    mean[c] = constant[c] ? matrix(0, c) : mean[c] / static_cast<double>(n);
  }

  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < d; ++c) row[c] -= mean[c];
  }
  // Second pass removes what rounding in the first mean left behind; it
  // matters when a column's offset dwarfs its spread.
  std::vector<double> residual(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < d; ++c) residual[c] += row[c];
  }
  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      if (!constant[c]) row[c] -= residual[c] / static_cast<double>(n);
    }
  }
  if (kind == ScalingKind::centered) return out;

  std::vector<double> scale(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < d; ++c) scale[c] += row[c] * row[c];
  }
  for (std::size_t c = 0; c < d; ++c) {
    scale[c] = constant[c] ? 1.0 : std::sqrt(scale[c] / static_cast<double>(n));
    if (scale[c] == 0.0) scale[c] = 1.0;
  }
  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < d; ++c) row[c] /= scale[c];
  }
  return out;
}

}  // namespace cluster_sense
