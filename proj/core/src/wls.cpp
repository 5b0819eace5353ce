#include "hyloc/wls.hpp"

#include <cmath>

namespace hyloc {

LinearSystem build_linear_system(const MeasurementSet& m,
                                 const std::vector<Vec3>& anchors,
                                 const WeightSet& w, const RssParams& p,
                                 int dim) {
  const int n = static_cast<int>(anchors.size());
  m.validate(n);

  LinearSystem sys;
  const bool has_ranges = m.mask.toa || m.mask.rss;
  sys.has_range_aux = has_ranges;
  sys.has_tdoa_aux = m.mask.tdoa;
  const int cols = dim + (sys.has_range_aux ? 1 : 0) + (sys.has_tdoa_aux ? 1 : 0);
  const int r_col = dim;
  const int r1_col = dim + (sys.has_range_aux ? 1 : 0);

  // Range estimate per anchor for the elevation rows: TOA if present,
  // else inverted RSS.
  std::vector<double> range_est;
  if (m.mask.toa)
    range_est = *m.toa;
  else if (m.mask.rss) {
    range_est.resize(n);
    for (int i = 0; i < n; ++i) range_est[i] = 1.0 / lambda_of((*m.rss)[i], p);
  }

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs, wts;
  auto push = [&](const Eigen::VectorXd& a, double b, double weight) {
    rows.push_back(a);
    rhs.push_back(b);
    wts.push_back(weight);
  };
  auto squared_range_row = [&](int i, double range, double weight) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(cols);
    a.head(dim) = -2.0 * anchors[i].head(dim);
    a[r_col] = 1.0;
    push(a, range * range - anchors[i].head(dim).squaredNorm(), weight);
  };

  if (m.mask.toa)
    for (int i = 0; i < n; ++i) squared_range_row(i, (*m.toa)[i], w.toa[i]);
  if (m.mask.rss)
    for (int i = 0; i < n; ++i)
      squared_range_row(i, 1.0 / lambda_of((*m.rss)[i], p), w.rss[i]);
  if (m.mask.tdoa) {
    for (int i = 1; i < n; ++i) {
      const double tau = (*m.tdoa)[i - 1];
      Eigen::VectorXd a = Eigen::VectorXd::Zero(cols);
      a.head(dim) = 2.0 * (anchors[0].head(dim) - anchors[i].head(dim));
      a[r1_col] = -2.0 * tau;
      const double b = tau * tau - anchors[i].head(dim).squaredNorm() +
                       anchors[0].head(dim).squaredNorm();
      push(a, b, w.tdoa[i - 1]);
    }
  }
  if (m.mask.aoa) {
    for (int i = 0; i < n; ++i) {
      const AoaSample& ang = (*m.aoa)[i];
      Eigen::VectorXd a = Eigen::VectorXd::Zero(cols);
      a[0] = -std::sin(ang.azimuth);
      a[1] = std::cos(ang.azimuth);
      push(a, a[0] * anchors[i].x() + a[1] * anchors[i].y(), w.aoa[i]);
      if (dim == 3 && has_ranges) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(cols);
        e[2] = 1.0;
        push(e, anchors[i].z() + range_est[i] * std::cos(ang.elevation), w.aoa[i]);
      }
    }
  }

  sys.a.resize(static_cast<int>(rows.size()), cols);
  sys.b.resize(static_cast<int>(rows.size()));
  sys.row_weights.resize(static_cast<int>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sys.a.row(static_cast<int>(r)) = rows[r].transpose();
    sys.b[static_cast<int>(r)] = rhs[r];
    sys.row_weights[static_cast<int>(r)] = wts[r];
  }
  return sys;
}

Eigen::VectorXd solve_linear_system(const LinearSystem& sys, bool* ok) {
  const Eigen::VectorXd sqrt_w = sys.row_weights.cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd a_scaled = sqrt_w.asDiagonal() * sys.a;
  const Eigen::VectorXd b_scaled = sqrt_w.asDiagonal() * sys.b;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a_scaled);
  if (ok) *ok = sys.a.rows() >= sys.a.cols() && qr.rank() == sys.a.cols();
  return qr.solve(b_scaled);
}

WlsResult wls_solve(const MeasurementSet& m, const std::vector<Vec3>& anchors,
                    const WeightSet& w, const RssParams& p, int dim) {
  WlsResult res;
  const LinearSystem sys = build_linear_system(m, anchors, w, p, dim);
  if (sys.a.rows() < sys.a.cols()) {
    res.message = "wls: underdetermined system (" + std::to_string(sys.a.rows()) +
                  " rows, " + std::to_string(sys.a.cols()) + " unknowns)";
    return res;
  }
  bool full_rank = false;
  const Eigen::VectorXd x = solve_linear_system(sys, &full_rank);
  if (!full_rank) {
    res.message = "wls: rank-deficient system";
    return res;
  }
  res.ok = true;
  res.estimate = Vec3::Zero();
  res.estimate.head(dim) = x.head(dim);
  return res;
}

}  // namespace hyloc
