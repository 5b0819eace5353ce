#pragma once

#include <vector>

#include "hyloc/geometry.hpp"
#include "hyloc/types.hpp"

namespace hyloc {

/// Per-anchor, per-type weights (inverse-variance scaled, with the
/// range-dependent normalization applied). Types outside the mask carry
/// all-zero vectors. `tdoa` has length N-1.
struct WeightSet {
  std::vector<double> toa;
  std::vector<double> tdoa;
  std::vector<double> rss;
  std::vector<double> aoa;
};

/// lambda_i = 10^((L0 - L_i) / (10 gamma)), the inverted path-loss ratio.
/// Equals 1/d_i for a noiseless measurement.
double lambda_of(double rss_db, const RssParams& p);

/// f_RSS_i(s) = (eta - eta*lambda_i*||s - m_i||)^2 per anchor.
std::vector<double> residual_rss(const Vec3& s, const std::vector<Vec3>& anchors,
                                 const std::vector<double>& lambda,
                                 const RssParams& p);

/// f_TOA_i(s) = (tau_i - ||s - m_i||)^2 per anchor.
std::vector<double> residual_toa(const Vec3& s, const std::vector<Vec3>& anchors,
                                 const std::vector<double>& tau);

/// f_TDOA_i(s) = (tau_1i - ||s - m_i|| + ||s - m_1||)^2 for i = 2..N.
std::vector<double> residual_tdoa(const Vec3& s, const std::vector<Vec3>& anchors,
                                  const std::vector<double>& tau_1i);

/// f_AOA_i(s) = (c_i^T (s - m_i))^2 + (k^T (s - m_i) - ||s - m_i|| cos
/// theta_i)^2 with c_i = [-sin phi_i, cos phi_i, 0] and k = [0, 0, 1].
/// For dim == 2 only the azimuth term is evaluated.
std::vector<double> residual_aoa(const Vec3& s, const std::vector<Vec3>& anchors,
                                 const std::vector<AoaSample>& angles, int dim = 3);

/// Which distances feed the range-dependent weight terms e_RSS_i and
/// e_AOA_i. A real estimator does not know the true distances; the
/// estimated mode derives ranges from the data (TOA first, then inverted
/// RSS, then uniform when only angles are available). The oracle mode
/// uses the true geometry and exists for bound-adjacent studies.
enum class WeightRanges { FromMeasurements, TrueDistances };

/// Range estimates for the weighting scheme under the estimated policy.
std::vector<double> weight_range_basis(const MeasurementSet& m, const RssParams& p,
                                       int n_anchors);

/// Weights w_X_i = (1/sigma_X_i^2) (1 - e_X_i^2 / sum_j e_X_j^2), with
/// e_RSS_i = sigma_RSS_i d_i, e_TOA_i = sigma_TOA_i, e_TDOA_i =
/// sigma_TDOA_i, e_AOA_i = sigma_AOA_i d_i (the TDOA sum runs over
/// i = 2..N). `ranges` supplies the d_i.
///
/// Active types with sigma = 0 are rejected (infinite weight). The single
/// N = 2 TDOA term would be normalized to zero; it falls back to
/// 1/sigma^2 so the only TDOA measurement is not silently deleted.
WeightSet compute_weights(const std::vector<double>& ranges, const Sigmas& sigma,
                          TypeMask mask, int n_anchors);

/// compute_weights with the range policy resolved from a measurement set
/// or the true geometry.
WeightSet compute_weights(const NetworkGeometry& g, const MeasurementSet& m,
                          const RssParams& p, WeightRanges policy);

/// Unit weights for every active type. The Eq-style weighting is
/// undefined at sigma = 0; zero-noise studies use this instead (any
/// positive weights give exact recovery on exact data).
WeightSet unit_weights(TypeMask mask, int n_anchors);

/// A localization instance with every array the solver and objective
/// need, bound together: anchors, active data, weights, model constants.
/// `lambda` holds the inverted RSS ratios (precomputed from the dB list).
struct Problem {
  std::vector<Vec3> anchors;
  TypeMask mask;
  int dim = 3;
  std::vector<double> toa;
  std::vector<double> tdoa;
  std::vector<double> lambda;
  std::vector<AoaSample> aoa;
  RssParams rss_params;
  WeightSet weights;

  int n() const noexcept { return static_cast<int>(anchors.size()); }
};

/// Binds geometry anchors + measurements + weights into a Problem.
Problem make_problem(const std::vector<Vec3>& anchors, const MeasurementSet& m,
                     const WeightSet& w, const RssParams& p, int dim = 3);

/// The weighted objective: sum over anchors and active types of
/// w_X_i * f_X_i(s). Nonnegative; zero at the true source on exact data.
double objective_value(const Problem& prob, const Vec3& s);

/// Central finite-difference gradient of objective_value, used by the
/// stationarity checks.
Vec3 objective_gradient_fd(const Problem& prob, const Vec3& s, double step = 1e-5);

}  // namespace hyloc
