#include "skewvar/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "skewvar/errors.hpp"

namespace skewvar {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t s = derive_seed(seed, stream);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(seed)};
  return Rng(seq);
}

double std_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

double uniform01(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const Eigen::MatrixXd& chol_lower,
                           Rng& rng) {
  if (chol_lower.rows() != mean.size() || chol_lower.cols() != mean.size()) {
    throw std::invalid_argument("mvn_sample: factor/mean size mismatch");
  }
  if (!mean.allFinite() || !chol_lower.allFinite()) {
    throw std::invalid_argument("mvn_sample: non-finite input");
  }
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = std_normal(rng);
  return mean + chol_lower.triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd mvn_sample_precision(const Eigen::VectorXd& mean,
                                     const Eigen::MatrixXd& precision_chol_lower, Rng& rng) {
  if (!mean.allFinite() || !precision_chol_lower.allFinite()) {
    throw std::invalid_argument("mvn_sample_precision: non-finite input");
  }
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = std_normal(rng);
  // L L' = P  =>  L'^{-1} z ~ N(0, P^{-1})
  precision_chol_lower.triangularView<Eigen::Lower>().transpose().solveInPlace(z);
  return mean + z;
}

double gamma_sample(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw std::invalid_argument("gamma_sample: shape and rate must be positive");
  }
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(rng);
}

double invgamma_sample(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw std::invalid_argument("invgamma_sample: shape and rate must be positive");
  }
  std::gamma_distribution<double> dist(shape, 1.0);
  double g = dist(rng);
  // guard the underflow to zero for tiny shapes
  if (g <= 0.0) g = std::numeric_limits<double>::min();
  return rate / g;
}

}  // namespace skewvar
