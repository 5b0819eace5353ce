#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace hyloc {

using Vec3 = Eigen::Vector3d;

/// Anchor constellation plus the true source position. 2D networks are
/// stored with z = 0 and dim = 2; all derivations run in 3D coordinates.
///
/// Invariants (checked by validate()):
///  - at least 2 anchors, all coordinates finite;
///  - no two anchors closer than 1e-9 m;
///  - the source at least 1e-9 m away from every anchor.
struct NetworkGeometry {
  std::vector<Vec3> anchors;
  Vec3 source = Vec3::Zero();
  int dim = 3;

  int n() const noexcept { return static_cast<int>(anchors.size()); }

  void validate() const;
};

/// Minimum allowed anchor/anchor and source/anchor separation, guarding
/// the divisions by ||s - m_i|| downstream.
inline constexpr double kCoincidenceTol = 1e-9;

/// Samples `n_anchors` anchors and the source uniformly on the sphere
/// (dim == 2: circle) of the given radius centered at the origin.
/// Deterministic for a given seed; rejects n_anchors < 2 and radius <= 0.
NetworkGeometry generate_network(int n_anchors, double radius,
                                 std::uint64_t rng_seed, int dim = 3);

/// d_i = ||s - m_i|| for every anchor.
std::vector<double> pairwise_distances(const NetworkGeometry& g);

}  // namespace hyloc
