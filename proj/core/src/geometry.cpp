#include "hyloc/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hyloc/rng.hpp"

namespace hyloc {

void NetworkGeometry::validate() const {
  if (n() < 2)
    throw std::invalid_argument("NetworkGeometry: need at least 2 anchors");
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("NetworkGeometry: dim must be 2 or 3");
  for (const Vec3& m : anchors)
    if (!m.allFinite())
      throw std::invalid_argument("NetworkGeometry: non-finite anchor position");
  if (!source.allFinite())
    throw std::invalid_argument("NetworkGeometry: non-finite source position");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      if ((anchors[i] - anchors[j]).norm() <= kCoincidenceTol)
        throw std::invalid_argument("NetworkGeometry: anchors " + std::to_string(i) +
                                    " and " + std::to_string(j) + " coincide");
    }
    if ((source - anchors[i]).norm() <= kCoincidenceTol)
      throw std::invalid_argument("NetworkGeometry: source coincides with anchor " +
                                  std::to_string(i));
  }
}

namespace {

Vec3 sample_on_sphere(Rng& rng, double radius, int dim) {
  if (dim == 2) {
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    return {radius * std::cos(phi), radius * std::sin(phi), 0.0};
  }
  // Area-uniform: z uniform in [-1, 1], azimuth uniform.
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * M_PI);
  const double r_xy = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {radius * r_xy * std::cos(phi), radius * r_xy * std::sin(phi), radius * z};
}

}  // namespace

NetworkGeometry generate_network(int n_anchors, double radius,
                                 std::uint64_t rng_seed, int dim) {
  if (n_anchors < 2)
    throw std::invalid_argument("generate_network: n_anchors must be >= 2");
  if (!(radius > 0.0))
    throw std::invalid_argument("generate_network: radius must be > 0");
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("generate_network: dim must be 2 or 3");

  Rng rng(rng_seed);
  NetworkGeometry g;
  g.dim = dim;
  g.anchors.reserve(n_anchors);
  // Resample on (vanishingly rare) coincidences so the invariants always
  // hold for the returned geometry.
  auto distinct_from_anchors = [&](const Vec3& p) {
    for (const Vec3& m : g.anchors)
      if ((p - m).norm() <= kCoincidenceTol) return false;
    return true;
  };
  while (g.n() < n_anchors) {
    Vec3 p = sample_on_sphere(rng, radius, dim);
    if (distinct_from_anchors(p)) g.anchors.push_back(p);
  }
  do {
    g.source = sample_on_sphere(rng, radius, dim);
  } while (!distinct_from_anchors(g.source));
  g.validate();
  return g;
}

std::vector<double> pairwise_distances(const NetworkGeometry& g) {
  std::vector<double> d(g.anchors.size());
  for (std::size_t i = 0; i < g.anchors.size(); ++i)
    d[i] = (g.source - g.anchors[i]).norm();
  return d;
}

}  // namespace hyloc
