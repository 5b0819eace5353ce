#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hyloc/objective.hpp"

namespace hyloc {

/// One-shot pseudo-linear system. Unknowns are [s, r, r1] where r = ||s||^2
/// (present when TOA or RSS rows exist) and r1 = ||s - m_1|| (present when
/// TDOA rows exist); the coupling between s and the auxiliaries is dropped,
/// which is what makes the system linear.
struct LinearSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd row_weights;
  bool has_range_aux = false;  // column for r
  bool has_tdoa_aux = false;   // column for r1
};

struct WlsResult {
  bool ok = false;
  Vec3 estimate = Vec3::Zero();
  std::string message;
};

/// Builds the weighted pseudo-linear system for the measurement set:
///  - TOA and RSS contribute squared-range rows (RSS ranges are the
///    inverted path-loss ratios 1/lambda_i);
///  - TDOA contributes squared-range-difference rows against anchor 1 with
///    the auxiliary r1;
///  - AOA contributes the pseudo-linear azimuth rows and, when a range
///    estimate exists (TOA first, else RSS), elevation rows with
///    ||s - m_i|| replaced by that estimate.
/// Each row carries the weight of its source measurement.
LinearSystem build_linear_system(const MeasurementSet& m,
                                 const std::vector<Vec3>& anchors,
                                 const WeightSet& w, const RssParams& p,
                                 int dim = 3);

/// Weighted normal-equations minimizer of `sys`. Rank-deficient systems
/// produce an explicit failure result.
Eigen::VectorXd solve_linear_system(const LinearSystem& sys, bool* ok);

/// The one-shot weighted least-squares comparison estimator. Requires
/// enough informative rows for identifiability; failures are reported in
/// the result, never silently.
WlsResult wls_solve(const MeasurementSet& m, const std::vector<Vec3>& anchors,
                    const WeightSet& w, const RssParams& p, int dim = 3);

}  // namespace hyloc
