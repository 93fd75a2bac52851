#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cluster_sense/dataset.hpp"
#include "cluster_sense/matrix.hpp"
#include "cluster_sense/random.hpp"

namespace cluster_sense {

enum class NoiseKind { gaussian, uniform };

std::string_view to_token(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view token);

struct NoiseSpec {
  NoiseKind kind = NoiseKind::gaussian;
  double mu = 0.0;     // baseline mean
  double sigma = 0.0;  // baseline std, >= 0
  std::uint64_t seed = 0;
};

/// Per-column parameters of a Gaussian noise feature:
///   mu_r    = sign * (mu + sigma) * eta
///   sigma_r = sigma * (1 + sign_2 * eta_2)
/// with eta, eta_2 ~ U[0,1) and independent signs (+1 iff a U[0,1) draw >= 0.5).
struct GaussianFeatureParams {
  double eta = 0.0;
  int sign = 1;
  double eta_2 = 0.0;
  int sign_2 = 1;
  double mu_r = 0.0;
  double sigma_r = 0.0;
};

/// Evaluates the mu_r / sigma_r formulas for explicit draws.
GaussianFeatureParams gaussian_params_from_draws(double mu, double sigma, double eta, int sign,
                                                 double eta_2, int sign_2);

/// Draws eta, sign, eta_2, sign_2 (in that order) from rng.
GaussianFeatureParams draw_gaussian_params(const NoiseSpec& spec, Rng& rng);

/// One column: fresh parameters, then n samples from Normal(mu_r, sigma_r^2).
std::vector<double> gaussian_feature(const NoiseSpec& spec, std::size_t n, Rng& rng);

/// Half-width of the uniform noise interval, mu + 2 sigma. Throws
/// Error(inverted_noise_range) when it is not positive.
double uniform_half_width(const NoiseSpec& spec);

/// One column of n samples from Uniform[-(mu + 2 sigma), +(mu + 2 sigma)].
std::vector<double> uniform_feature(const NoiseSpec& spec, std::size_t n, Rng& rng);

/// Baseline features plus appended noise columns; ratio is appended : D.
struct AugmentedDataset {
  LabeledDataset base;
  Matrix appended;

  std::size_t ratio_numerator() const noexcept { return appended.cols(); }
  std::size_t ratio_denominator() const noexcept { return base.dims(); }
  double ratio() const noexcept {
    return static_cast<double>(ratio_numerator()) / static_cast<double>(ratio_denominator());
  }
  /// [base | appended]
  Matrix combined() const;
};

/// Seed of the generator for noise column `column` of the stream `spec.seed`.
std::uint64_t noise_column_seed(std::uint64_t stream_seed, std::size_t column) noexcept;

/// Appends `count` noise columns. Column j is drawn from its own stream
/// derived from (spec.seed, j), so the first m columns do not depend on count
/// (prefix property). Labels are never read.
AugmentedDataset append_noise(const LabeledDataset& base, const NoiseSpec& spec,
                              std::size_t count);

/// Same columns as append_noise, written directly next to `points`.
Matrix append_noise_columns(const Matrix& points, const NoiseSpec& spec, std::size_t count);

}  // namespace cluster_sense
