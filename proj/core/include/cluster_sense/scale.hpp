#pragma once

#include <optional>
#include <string_view>

#include "cluster_sense/matrix.hpp"

namespace cluster_sense {

enum class ScalingKind { none, centered, standardized };

std::string_view to_token(ScalingKind kind);
std::optional<ScalingKind> parse_scaling_kind(std::string_view token);

/// None copies; Centered subtracts column means; Standardized also divides
/// by the population std, leaving zero-variance columns centered only.
/// Requires >= 2 rows and finite entries.
Matrix apply_scaling(const Matrix& matrix, ScalingKind kind);

}  // namespace cluster_sense
