#pragma once

#include <Eigen/Dense>
#include <map>

#include "hyloc/geometry.hpp"
#include "hyloc/types.hpp"

namespace hyloc {

/// Rows of the measurement Jacobians are the gradients of the exact
/// (un-approximated) noiseless measurement functions at the true source.
/// AOA azimuth and elevation contribute separate Jacobians that share the
/// AOA noise covariance.
enum class JacobianKind { Toa, Tdoa, Rss, AoaAzimuth, AoaElevation };

/// N x dim (TDOA: (N-1) x dim) Jacobian evaluated at the true source from
/// noiseless geometry. For dim == 2 the z column is dropped and the
/// elevation Jacobian is empty. Throws on degenerate geometry (for the
/// azimuth rows, a vanishing horizontal distance).
Eigen::MatrixXd jacobian(JacobianKind kind, const NetworkGeometry& g,
                         const RssParams& p);

/// FIM_X = J_X^T Sigma_X^{-1} J_X with diagonal Sigma from the per-anchor
/// standard deviations. AOA combines the azimuth and elevation parts.
/// Rejects sigma = 0.
Eigen::MatrixXd fim(MeasType type, const NetworkGeometry& g, const Sigmas& sigma,
                    const RssParams& p);

/// Hybrid FIM, its inverse, and summary scalars for one mask.
struct CrlbReport {
  std::map<MeasType, Eigen::MatrixXd> fim_by_type;
  Eigen::MatrixXd fim_hybrid;
  Eigen::MatrixXd crlb;    // defined only when identifiable
  double trace_crlb = 0.0; // m^2
  double rmse_bound = 0.0; // sqrt(trace), meters
  double condition = 0.0;  // condition number of the hybrid FIM
  bool identifiable = false;
};

/// Condition-number threshold above which the hybrid FIM is reported as
/// unidentifiable instead of being inverted.
inline constexpr double kCrlbConditionLimit = 1e12;

/// Sums the per-type FIMs over the mask and inverts. A singular or
/// near-singular hybrid FIM (e.g. azimuth-only in 3D) yields an explicit
/// identifiable == false report rather than an exception.
CrlbReport hybrid_crlb(TypeMask mask, const NetworkGeometry& g,
                       const Sigmas& sigma, const RssParams& p);

}  // namespace hyloc
