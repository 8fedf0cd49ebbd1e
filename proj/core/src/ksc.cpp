#include "skewvar/ksc.hpp"

namespace skewvar {

namespace {
// seven-component normal approximation to log chi2(1), means shifted by -1.2704
constexpr double kShift = -1.2704;
const KscMixture kTable{
    {0.00730, 0.10556, 0.00002, 0.04395, 0.34001, 0.24566, 0.25750},
    {-10.12999 + kShift, -3.97281 + kShift, -8.56686 + kShift, 2.77786 + kShift,
     0.61942 + kShift, 1.79518 + kShift, -1.08819 + kShift},
    {5.79596, 2.61369, 5.17950, 0.16735, 0.64009, 0.34023, 1.26261}};
}  // namespace

double KscMixture::mixture_mean() const {
  double m = 0.0;
  for (int j = 0; j < 7; ++j) m += prob[j] * mean[j];
  return m;
}

double KscMixture::mixture_variance() const {
  const double mu = mixture_mean();
  double v = 0.0;
  for (int j = 0; j < 7; ++j) v += prob[j] * (var[j] + (mean[j] - mu) * (mean[j] - mu));
  return v;
}

const KscMixture& ksc_table() { return kTable; }

}  // namespace skewvar
