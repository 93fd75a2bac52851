#include "cluster_sense/perturb.hpp"

#include <algorithm>
#include <sstream>

#include "cluster_sense/error.hpp"

namespace cluster_sense {

std::string_view to_token(NoiseKind kind) {
  return kind == NoiseKind::gaussian ? "gaussian" : "uniform";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view token) {
  if (token == "gaussian") return NoiseKind::gaussian;
  if (token == "uniform") return NoiseKind::uniform;
  return std::nullopt;
}

GaussianFeatureParams gaussian_params_from_draws(double mu, double sigma, double eta, int sign,
                                                 double eta_2, int sign_2) {
  GaussianFeatureParams p;
  p.eta = eta;
  p.sign = sign;
  p.eta_2 = eta_2;
  p.sign_2 = sign_2;
  p.mu_r = static_cast<double>(sign) * (mu + sigma) * eta;
  p.sigma_r = sigma * (1.0 + static_cast<double>(sign_2) * eta_2);
  return p;
}

namespace {

int draw_sign(Rng& rng) { return rng.uniform() >= 0.5 ? 1 : -1; }

void require_kind(const NoiseSpec& spec, NoiseKind kind, const char* op) {
  if (spec.kind != kind) {
    throw Error(ErrorCode::invalid_argument,
                std::string(op) + ": noise kind is " + std::string(to_token(spec.kind)));
  }
}

void require_rows(std::size_t n, const char* op) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, std::string(op) + ": n must be positive");
}

}  // namespace

GaussianFeatureParams draw_gaussian_params(const NoiseSpec& spec, Rng& rng) {
  require_kind(spec, NoiseKind::gaussian, "draw_gaussian_params");
  const double eta = rng.uniform();
  const int sign = draw_sign(rng);
  const double eta_2 = rng.uniform();
  const int sign_2 = draw_sign(rng);
  return gaussian_params_from_draws(spec.mu, spec.sigma, eta, sign, eta_2, sign_2);
}

std::vector<double> gaussian_feature(const NoiseSpec& spec, std::size_t n, Rng& rng) {
  require_rows(n, "gaussian_feature");
  const auto params = draw_gaussian_params(spec, rng);
  std::vector<double> out(n);
  for (double& v : out) v = rng.normal(params.mu_r, params.sigma_r);
  return out;
}

double uniform_half_width(const NoiseSpec& spec) {
  const double half = spec.mu + 2.0 * spec.sigma;
  if (!(half > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "uniform noise range is inverted or empty: mu + 2 sigma = " << half << " (mu = "
        << spec.mu << ", sigma = " << spec.sigma << ")";
    throw Error(ErrorCode::inverted_noise_range, msg.str());
  }
  return half;
}

std::vector<double> uniform_feature(const NoiseSpec& spec, std::size_t n, Rng& rng) {
  require_kind(spec, NoiseKind::uniform, "uniform_feature");
  require_rows(n, "uniform_feature");
  const double half = uniform_half_width(spec);
  std::vector<double> out(n);
  for (double& v : out) v = rng.uniform(-half, half);
  return out;
}

Matrix AugmentedDataset::combined() const { return Matrix::hconcat(base.points(), appended); }

std::uint64_t noise_column_seed(std::uint64_t stream_seed, std::size_t column) noexcept {
  return derive_seed({stream_seed, 0x6e6f697365ULL, column});
}

namespace {

// Writes noise column j of the stream into dst starting at column offset.
void fill_noise(Matrix& dst, std::size_t offset, const NoiseSpec& spec, std::size_t count) {
  const std::size_t n = dst.rows();
  if (spec.sigma < 0.0) {
    throw Error(ErrorCode::invalid_argument, "noise sigma must be nonnegative");
  }
  if (count > 0 && spec.kind == NoiseKind::uniform) uniform_half_width(spec);
  for (std::size_t j = 0; j < count; ++j) {
    Rng rng(noise_column_seed(spec.seed, j));
    const auto col = spec.kind == NoiseKind::gaussian ? gaussian_feature(spec, n, rng)
                                                      : uniform_feature(spec, n, rng);
    for (std::size_t r = 0; r < n; ++r) dst(r, offset + j) = col[r];
  }
}

}  // namespace

AugmentedDataset append_noise(const LabeledDataset& base, const NoiseSpec& spec,
                              std::size_t count) {
  Matrix appended(base.size(), count);
  fill_noise(appended, 0, spec, count);
  return AugmentedDataset{base, std::move(appended)};
}

Matrix append_noise_columns(const Matrix& points, const NoiseSpec& spec, std::size_t count) {
  Matrix out(points.rows(), points.cols() + count);
  for (std::size_t r = 0; r < points.rows(); ++r) {
    auto src = points.row(r);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  fill_noise(out, points.cols(), spec, count);
  return out;
}

}  // namespace cluster_sense
