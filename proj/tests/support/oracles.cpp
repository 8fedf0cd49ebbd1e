#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/binomial.hpp>

namespace oracle {

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf,
                     double* statistic) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  if (statistic) *statistic = d;
  const double sn = std::sqrt(n);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b, double n_eff_b,
                     double* statistic) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  if (statistic) *statistic = d;
  const double m = n_eff_b > 0.0 ? std::min(n_eff_b, nb) : nb;
  const double ne = std::sqrt(na * m / (na + m));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

double effective_size(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) return static_cast<double>(n);
  const std::size_t batches = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  const std::size_t len = n / batches;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= (n - 1);
  if (var <= 0.0) return static_cast<double>(n);
  double bvar = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    double m = 0.0;
    for (std::size_t t = b * len; t < (b + 1) * len; ++t) m += x[t];
    m /= len;
    bvar += (m - mean) * (m - mean);
  }
  bvar = bvar / (batches - 1) * len;
  return std::min(static_cast<double>(n), n * var / bvar);
}

double binomial_upper_tail(int x, int n, double p) {
  if (x <= 0) return 1.0;
  boost::math::binomial dist(n, p);
  return boost::math::cdf(boost::math::complement(dist, x - 1));
}

GridMoments grid_moments(const std::function<double(double)>& logf, double lo, double hi, int n) {
  std::vector<double> x(n), lf(n);
  double mx = -std::numeric_limits<double>::infinity();
  const double dx = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    x[i] = lo + i * dx;
    lf[i] = logf(x[i]);
    mx = std::max(mx, lf[i]);
  }
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = std::exp(lf[i] - mx) * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
    s0 += w;
    s1 += w * x[i];
    s2 += w * x[i] * x[i];
  }
  GridMoments g;
  g.log_norm = mx + std::log(s0 * dx);
  g.mean = s1 / s0;
  g.var = s2 / s0 - g.mean * g.mean;
  return g;
}

GridMoments2 grid_moments2(const std::function<double(double, double)>& logf, Eigen::Vector2d lo,
                           Eigen::Vector2d hi, int n) {
  Eigen::MatrixXd lf(n, n);
  const Eigen::Vector2d dx = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lf(i, j) = logf(lo(0) + i * dx(0), lo(1) + j * dx(1));
  }
  const double mx = lf.maxCoeff();
  double s0 = 0.0;
  Eigen::Vector2d s1 = Eigen::Vector2d::Zero();
  Eigen::Matrix2d s2 = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
      const double w = wi * wj * std::exp(lf(i, j) - mx);
      const Eigen::Vector2d v(lo(0) + i * dx(0), lo(1) + j * dx(1));
      s0 += w;
      s1 += w * v;
      s2 += w * v * v.transpose();
    }
  }
  GridMoments2 g;
  g.mean = s1 / s0;
  g.cov = s2 / s0 - g.mean * g.mean.transpose();
  return g;
}

double log_integral_grid(const std::function<double(const Eigen::VectorXd&)>& logf,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int n) {
  const int d = static_cast<int>(lo.size());
  const Eigen::VectorXd dx = (hi - lo) / (n - 1);
  long total = 1;
  for (int a = 0; a < d; ++a) total *= n;
  std::vector<double> lf(total);
  std::vector<double> wt(total);
  Eigen::VectorXd z(d);
  double mx = -std::numeric_limits<double>::infinity();
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      const int i = static_cast<int>(r % n);
      r /= n;
      z(a) = lo(a) + i * dx(a);
      if (i == 0 || i == n - 1) w *= 0.5;
    }
    lf[idx] = logf(z);
    wt[idx] = w;
    mx = std::max(mx, lf[idx]);
  }
  double s = 0.0;
  for (long idx = 0; idx < total; ++idx) s += wt[idx] * std::exp(lf[idx] - mx);
  return mx + std::log(s * dx.prod());
}

}  // namespace oracle
