#include "hyloc/crlb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hyloc {

namespace {

Eigen::MatrixXd shrink_columns(const Eigen::MatrixXd& full, int dim) {
  if (dim == 3) return full;
  return full.leftCols(2);
}

void require_positive(const std::vector<double>& sigma, const char* what) {
  for (double s : sigma)
    if (!(s > 0.0))
      throw std::invalid_argument(std::string("crlb: sigma must be > 0 for ") + what);
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& j,
                              const std::vector<double>& sigma) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(j.cols(), j.cols());
  for (int r = 0; r < j.rows(); ++r)
    f += j.row(r).transpose() * j.row(r) / (sigma[r] * sigma[r]);
  return f;
}

}  // namespace

Eigen::MatrixXd jacobian(JacobianKind kind, const NetworkGeometry& g,
                         const RssParams& p) {
  const int n = g.n();
  Eigen::MatrixXd j;
  switch (kind) {
    case JacobianKind::Toa: {
      j.resize(n, 3);
      for (int i = 0; i < n; ++i) {
        const Vec3 diff = g.source - g.anchors[i];
        j.row(i) = diff.transpose() / diff.norm();
      }
      break;
    }
    case JacobianKind::Rss: {
      const double eta = p.eta();
      j.resize(n, 3);
      for (int i = 0; i < n; ++i) {
        const Vec3 diff = g.source - g.anchors[i];
        j.row(i) = eta * diff.transpose() / diff.squaredNorm();
      }
      break;
    }
    case JacobianKind::Tdoa: {
      j.resize(n - 1, 3);
      const Vec3 diff1 = g.source - g.anchors[0];
      const Eigen::RowVector3d row1 = diff1.transpose() / diff1.norm();
      for (int i = 1; i < n; ++i) {
        const Vec3 diff = g.source - g.anchors[i];
        j.row(i - 1) = diff.transpose() / diff.norm() - row1;
      }
      break;
    }
    case JacobianKind::AoaAzimuth: {
      j.resize(n, 3);
      for (int i = 0; i < n; ++i) {
        const Vec3 diff = g.source - g.anchors[i];
        const double d_xy = std::hypot(diff.x(), diff.y());
        if (d_xy <= kCoincidenceTol)
          throw std::invalid_argument(
              "jacobian: azimuth undefined, source above/below anchor " +
              std::to_string(i));
        const double az = std::atan2(diff.y(), diff.x());
        j.row(i) << -std::sin(az) / d_xy, std::cos(az) / d_xy, 0.0;
      }
      break;
    }
    case JacobianKind::AoaElevation: {
      if (g.dim == 2) return Eigen::MatrixXd::Zero(0, 2);
      j.resize(n, 3);
      for (int i = 0; i < n; ++i) {
        const Vec3 diff = g.source - g.anchors[i];
        const double dist = diff.norm();
        const double d_xy = std::hypot(diff.x(), diff.y());
        const double az = std::atan2(diff.y(), diff.x());
        const double el = std::acos(std::clamp(diff.z() / dist, -1.0, 1.0));
        j.row(i) << std::cos(az) * std::cos(el) / dist,
            std::sin(az) * std::cos(el) / dist, -std::sin(el) / dist;
      }
      break;
    }
  }
  return shrink_columns(j, g.dim);
}

Eigen::MatrixXd fim(MeasType type, const NetworkGeometry& g, const Sigmas& sigma,
                    const RssParams& p) {
  switch (type) {
    case MeasType::Toa:
      require_positive(sigma.toa, "toa");
      return weighted_gram(jacobian(JacobianKind::Toa, g, p), sigma.toa);
    case MeasType::Tdoa:
      require_positive(sigma.tdoa, "tdoa");
      return weighted_gram(jacobian(JacobianKind::Tdoa, g, p), sigma.tdoa);
    case MeasType::Rss:
      require_positive(sigma.rss, "rss");
      return weighted_gram(jacobian(JacobianKind::Rss, g, p), sigma.rss);
    case MeasType::Aoa: {
      require_positive(sigma.aoa, "aoa");
      Eigen::MatrixXd f =
          weighted_gram(jacobian(JacobianKind::AoaAzimuth, g, p), sigma.aoa);
      if (g.dim == 3)
        f += weighted_gram(jacobian(JacobianKind::AoaElevation, g, p), sigma.aoa);
      return f;
    }
  }
  throw std::logic_error("fim: unreachable");
}

CrlbReport hybrid_crlb(TypeMask mask, const NetworkGeometry& g,
                       const Sigmas& sigma, const RssParams& p) {
  if (mask.empty()) throw std::invalid_argument("hybrid_crlb: empty mask");
  const int d = g.dim;
  CrlbReport report;
  report.fim_hybrid = Eigen::MatrixXd::Zero(d, d);
  for (MeasType t : kAllMeasTypes) {
    if (!mask.has(t)) continue;
    Eigen::MatrixXd f = fim(t, g, sigma, p);
    report.fim_hybrid += f;
    report.fim_by_type.emplace(t, std::move(f));
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(report.fim_hybrid);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  report.condition = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0.0) || report.condition > kCrlbConditionLimit) {
    report.identifiable = false;
    report.trace_crlb = std::numeric_limits<double>::quiet_NaN();
    report.rmse_bound = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  report.identifiable = true;
  report.crlb = report.fim_hybrid.inverse();
  report.trace_crlb = report.crlb.trace();
  report.rmse_bound = std::sqrt(report.trace_crlb);
  return report;
}

}  // namespace hyloc
