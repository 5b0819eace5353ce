#include "hyloc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "hyloc/rng.hpp"

namespace hyloc {

double wrap_angle(double a) noexcept {
  double r = std::fmod(a + M_PI, 2.0 * M_PI);
  if (r <= 0.0) r += 2.0 * M_PI;
  return r - M_PI;
}

namespace {

void require_sigma_len(const std::vector<double>& sigma, std::size_t want,
                       const char* what) {
  if (sigma.size() != want)
    throw std::invalid_argument(std::string("simulate: sigma length mismatch for ") + what);
  for (double s : sigma)
    if (!(s >= 0.0))
      throw std::invalid_argument(std::string("simulate: negative sigma for ") + what);
}

}  // namespace

std::vector<double> simulate_rss(const NetworkGeometry& g, const RssParams& p,
                                 const std::vector<double>& sigma_rss,
                                 std::uint64_t rng_seed) {
  const auto d = pairwise_distances(g);
  require_sigma_len(sigma_rss, d.size(), "rss");
  bool warned = false;
  Rng rng(rng_seed);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 1.0 && !warned) {
      std::cerr << "hyloc: warning: anchor " << i << " is closer than the 1 m "
                << "RSS reference distance (d = " << d[i] << " m)\n";
      warned = true;
    }
    out[i] = p.l0 + 10.0 * p.gamma * std::log10(d[i]) + sigma_rss[i] * rng.normal();
  }
  return out;
}

std::vector<double> simulate_toa(const NetworkGeometry& g,
                                 const std::vector<double>& sigma_toa,
                                 std::uint64_t rng_seed) {
  const auto d = pairwise_distances(g);
  require_sigma_len(sigma_toa, d.size(), "toa");
  Rng rng(rng_seed);
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    out[i] = d[i] + sigma_toa[i] * rng.normal();
  return out;
}

std::vector<double> simulate_tdoa(const NetworkGeometry& g,
                                  const std::vector<double>& sigma_tdoa,
                                  std::uint64_t rng_seed) {
  if (g.n() < 2) throw std::invalid_argument("simulate_tdoa: need at least 2 anchors");
  const auto d = pairwise_distances(g);
  require_sigma_len(sigma_tdoa, d.size() - 1, "tdoa");
  Rng rng(rng_seed);
  std::vector<double> out(d.size() - 1);
  for (std::size_t i = 1; i < d.size(); ++i)
    out[i - 1] = d[i] - d[0] + sigma_tdoa[i - 1] * rng.normal();
  return out;
}

std::vector<AoaSample> simulate_aoa(const NetworkGeometry& g,
                                    const std::vector<double>& sigma_aoa,
                                    std::uint64_t rng_seed) {
  require_sigma_len(sigma_aoa, g.anchors.size(), "aoa");
  Rng rng(rng_seed);
  std::vector<AoaSample> out(g.anchors.size());
  for (std::size_t i = 0; i < g.anchors.size(); ++i) {
    const Vec3 diff = g.source - g.anchors[i];
    const double dist = diff.norm();
    if (dist <= kCoincidenceTol)
      throw std::invalid_argument("simulate_aoa: source coincides with anchor " +
                                  std::to_string(i));
    AoaSample& a = out[i];
    const double d_xy = std::hypot(diff.x(), diff.y());
    if (d_xy <= kCoincidenceTol * std::max(1.0, dist)) {
      a.pole = true;  // azimuth undefined on the vertical axis
      a.azimuth = wrap_angle(0.0 + sigma_aoa[i] * rng.normal());
    } else {
      a.azimuth = wrap_angle(std::atan2(diff.y(), diff.x()) + sigma_aoa[i] * rng.normal());
    }
    if (g.dim == 2) {
      a.elevation = M_PI / 2.0;
    } else {
      const double theta = std::acos(std::clamp(diff.z() / dist, -1.0, 1.0));
      a.elevation = std::clamp(theta + sigma_aoa[i] * rng.normal(), 0.0, M_PI);
    }
  }
  return out;
}

MeasurementSet simulate_measurements(const NetworkGeometry& g, const RssParams& p,
                                     const Sigmas& sigma, TypeMask mask,
                                     std::uint64_t rng_seed) {
  MeasurementSet m;
  m.mask = mask;
  m.sigma = sigma;
  if (mask.toa) m.toa = simulate_toa(g, sigma.toa, derive_seed(rng_seed, 1));
  if (mask.tdoa) m.tdoa = simulate_tdoa(g, sigma.tdoa, derive_seed(rng_seed, 2));
  if (mask.rss) m.rss = simulate_rss(g, p, sigma.rss, derive_seed(rng_seed, 3));
  if (mask.aoa) m.aoa = simulate_aoa(g, sigma.aoa, derive_seed(rng_seed, 4));
  m.validate(g.n());
  return m;
}

MeasurementSet inject_nlos(const MeasurementSet& m, const NlosConfig& cfg,
                           int n_anchors) {
  if (cfg.n_paths < 0 || cfg.n_paths > n_anchors)
    throw std::invalid_argument("inject_nlos: n_paths out of [0, N]");
  if (!(cfg.beta >= 0.0)) throw std::invalid_argument("inject_nlos: beta must be >= 0");
  if (cfg.beta == 0.0 || cfg.n_paths == 0) return m;

  Rng rng(cfg.rng_seed);
  // Partial Fisher-Yates pick of n_paths distinct anchors, then a sorted
  // walk so the draw order is independent of the shuffle.
  std::vector<int> idx(n_anchors);
  for (int i = 0; i < n_anchors; ++i) idx[i] = i;
  for (int i = 0; i < cfg.n_paths; ++i) {
    const int j = i + static_cast<int>(rng.below(n_anchors - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<int> chosen(idx.begin(), idx.begin() + cfg.n_paths);
  std::sort(chosen.begin(), chosen.end());

  MeasurementSet out = m;
  for (int a : chosen) {
    if (out.toa) (*out.toa)[a] += rng.uniform(0.0, cfg.beta);
    if (out.tdoa && a >= 1) (*out.tdoa)[a - 1] += rng.uniform(0.0, cfg.beta);
    if (out.rss) (*out.rss)[a] += rng.uniform(0.0, cfg.beta);
    if (out.aoa) {
      AoaSample& s = (*out.aoa)[a];
      s.azimuth = wrap_angle(s.azimuth + rng.uniform(0.0, cfg.beta));
      s.elevation = std::clamp(s.elevation + rng.uniform(0.0, cfg.beta), 0.0, M_PI);
    }
  }
  return out;
}

}  // namespace hyloc
