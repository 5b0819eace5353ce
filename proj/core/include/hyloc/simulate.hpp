#pragma once

#include <cstdint>
#include <vector>

#include "hyloc/geometry.hpp"
#include "hyloc/types.hpp"

namespace hyloc {

/// NLOS contamination: `n_paths` anchors chosen without replacement get an
/// independent Uniform(0, beta) positive bias added to each of their active
/// measurements.
struct NlosConfig {
  double beta = 0.0;       // bias upper bound, units of the biased measurement
  int n_paths = 0;         // number of contaminated anchors
  std::uint64_t rng_seed = 0;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a) noexcept;

/// L_i = L0 + 10*gamma*log10(d_i) + Normal(0, sigma_i^2). Emits a one-line
/// warning on stderr when a distance is below the 1 m reference distance
/// (the log term turns negative there); simulation still proceeds.
std::vector<double> simulate_rss(const NetworkGeometry& g, const RssParams& p,
                                 const std::vector<double>& sigma_rss,
                                 std::uint64_t rng_seed);

/// tau_i = d_i + Normal(0, sigma_i^2), meters.
std::vector<double> simulate_toa(const NetworkGeometry& g,
                                 const std::vector<double>& sigma_toa,
                                 std::uint64_t rng_seed);

/// tau_1i = d_i - d_1 + Normal(0, sigma_i^2) for i = 2..N (length N-1).
/// The noise is drawn independently of any TOA noise.
std::vector<double> simulate_tdoa(const NetworkGeometry& g,
                                  const std::vector<double>& sigma_tdoa,
                                  std::uint64_t rng_seed);

/// Azimuth (full-quadrant, wrapped to (-pi, pi]) and elevation (clamped to
/// [0, pi]) of s - m_i, each plus Normal(0, sigma_i^2) noise. When the
/// horizontal offset vanishes the azimuth is undefined; the sample is
/// flagged `pole` and reported with azimuth 0. For dim == 2 networks the
/// elevation is fixed at pi/2 and carries no noise.
std::vector<AoaSample> simulate_aoa(const NetworkGeometry& g,
                                    const std::vector<double>& sigma_aoa,
                                    std::uint64_t rng_seed);

/// Bundles all four simulations (independent seeded streams per type) for
/// the given mask into a validated MeasurementSet.
MeasurementSet simulate_measurements(const NetworkGeometry& g, const RssParams& p,
                                     const Sigmas& sigma, TypeMask mask,
                                     std::uint64_t rng_seed);

/// Applies NLOS bias to a copy of `m`. A contaminated anchor's TOA, RSS and
/// AOA entries each get their own Uniform(0, beta) draw; TDOA is biased
/// directly at the TDOA level, attributed to the non-reference anchor of
/// each pair. Angles are re-wrapped/clamped after biasing. beta == 0 or
/// n_paths == 0 returns the input unchanged (bitwise).
MeasurementSet inject_nlos(const MeasurementSet& m, const NlosConfig& cfg,
                           int n_anchors);

}  // namespace hyloc
