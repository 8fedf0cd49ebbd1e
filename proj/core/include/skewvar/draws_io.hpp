#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "skewvar/chain.hpp"
#include "skewvar/model.hpp"

namespace skewvar {

inline constexpr std::uint32_t kDrawFormatVersion = 1;

/// Everything persisted for a posterior sample.
struct PosteriorFile {
  ChainOutput posterior;
  PriorSpec prior;
  std::uint64_t seed = 0;
  int T = 0;  // modeled periods
};

// Binary layout, all integers and IEEE doubles little-endian:
//   "SKVDRAW\0" | u32 version | u8 family | u8 sv | u32 p | u32 k | u64 seed
//   | u64 draws | u64 T | prior block | u8 flags
//   | acceptance section | parameter section | last log-volatility section
//   | [latent summary section] | [full latent section]
// flags bit 0: latent summary present; bit 1: full latent paths present.
void save_draws(const std::string& path, const PosteriorFile& file);
void save_draws(std::ostream& out, const PosteriorFile& file);

/// Throws DataError on a bad magic, version mismatch or truncation, and
/// ConfigError when `expected` disagrees with the stored model spec.
PosteriorFile load_draws(const std::string& path,
                         const std::optional<ModelSpec>& expected = std::nullopt);
PosteriorFile load_draws(std::istream& in,
                         const std::optional<ModelSpec>& expected = std::nullopt);

/// One row per draw with named columns (B_i_j, a_n, gamma_i, nu_i, sigma2_i, h0_i).
void export_draws_csv(const PosteriorFile& file, std::ostream& out);

}  // namespace skewvar
