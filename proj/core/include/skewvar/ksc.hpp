#pragma once

#include <array>

namespace skewvar {

/// Seven-component normal mixture approximating log chi^2_1, with the
/// -1.2704 mean shift already folded into `mean`.
struct KscMixture {
  std::array<double, 7> prob;
  std::array<double, 7> mean;
  std::array<double, 7> var;

  double mixture_mean() const;
  double mixture_variance() const;
};

const KscMixture& ksc_table();

/// Offset inside log(e^2 + c) for the volatility linearization.
inline constexpr double kLogSquareOffset = 1e-4;

}  // namespace skewvar
