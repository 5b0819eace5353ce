#include "hyloc/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hyloc {

namespace {

void require_separation(const Vec3& s, const std::vector<Vec3>& anchors) {
  for (std::size_t i = 0; i < anchors.size(); ++i)
    if ((s - anchors[i]).norm() <= kCoincidenceTol)
      throw std::invalid_argument("objective: candidate coincides with anchor " +
                                  std::to_string(i));
}

}  // namespace

double lambda_of(double rss_db, const RssParams& p) {
  if (!std::isfinite(rss_db))
    throw std::invalid_argument("lambda_of: non-finite RSS value");
  return std::pow(10.0, (p.l0 - rss_db) / (10.0 * p.gamma));
}

std::vector<double> residual_rss(const Vec3& s, const std::vector<Vec3>& anchors,
                                 const std::vector<double>& lambda,
                                 const RssParams& p) {
  require_separation(s, anchors);
  const double eta = p.eta();
  std::vector<double> f(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double r = eta - eta * lambda[i] * (s - anchors[i]).norm();
    f[i] = r * r;
  }
  return f;
}

std::vector<double> residual_toa(const Vec3& s, const std::vector<Vec3>& anchors,
                                 const std::vector<double>& tau) {
  std::vector<double> f(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double r = tau[i] - (s - anchors[i]).norm();
    f[i] = r * r;
  }
  return f;
}

std::vector<double> residual_tdoa(const Vec3& s, const std::vector<Vec3>& anchors,
                                  const std::vector<double>& tau_1i) {
  if (anchors.size() < 2)
    throw std::invalid_argument("residual_tdoa: need at least 2 anchors");
  std::vector<double> f(anchors.size() - 1);
  const double d1 = (s - anchors[0]).norm();
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const double r = tau_1i[i - 1] - (s - anchors[i]).norm() + d1;
    f[i - 1] = r * r;
  }
  return f;
}

std::vector<double> residual_aoa(const Vec3& s, const std::vector<Vec3>& anchors,
                                 const std::vector<AoaSample>& angles, int dim) {
  require_separation(s, anchors);
  std::vector<double> f(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Vec3 diff = s - anchors[i];
    const double az = angles[i].azimuth;
    const double r_az = -std::sin(az) * diff.x() + std::cos(az) * diff.y();
    double val = r_az * r_az;
    if (dim == 3) {
      const double r_el = diff.z() - diff.norm() * std::cos(angles[i].elevation);
      val += r_el * r_el;
    }
    f[i] = val;
  }
  return f;
}

std::vector<double> weight_range_basis(const MeasurementSet& m, const RssParams& p,
                                       int n_anchors) {
  std::vector<double> d(n_anchors, 1.0);
  if (m.mask.toa && m.toa) {
    for (int i = 0; i < n_anchors; ++i) d[i] = std::abs((*m.toa)[i]);
  } else if (m.mask.rss && m.rss) {
    for (int i = 0; i < n_anchors; ++i) d[i] = 1.0 / lambda_of((*m.rss)[i], p);
  }
  // Angle-only masks keep the uniform basis: every e_i equal, so the
  // normalization reduces to (1 - 1/N) regardless of the value used.
  return d;
}

namespace {

std::vector<double> normalized_weights(const std::vector<double>& e,
                                       const std::vector<double>& sigma,
                                       const char* what) {
  double sum_sq = 0.0;
  for (double v : e) sum_sq += v * v;
  if (!(sum_sq > 0.0))
    throw std::invalid_argument(std::string("compute_weights: degenerate e terms for ") + what);
  std::vector<double> w(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(sigma[i] > 0.0))
      throw std::invalid_argument(std::string("compute_weights: sigma must be > 0 for active ") + what);
    w[i] = (1.0 - e[i] * e[i] / sum_sq) / (sigma[i] * sigma[i]);
  }
  return w;
}

}  // namespace

WeightSet compute_weights(const std::vector<double>& ranges, const Sigmas& sigma,
                          TypeMask mask, int n_anchors) {
  if (mask.empty()) throw std::invalid_argument("compute_weights: empty mask");
  if (static_cast<int>(ranges.size()) != n_anchors)
    throw std::invalid_argument("compute_weights: ranges length mismatch");

  WeightSet w;
  w.toa.assign(n_anchors, 0.0);
  w.tdoa.assign(n_anchors > 1 ? n_anchors - 1 : 0, 0.0);
  w.rss.assign(n_anchors, 0.0);
  w.aoa.assign(n_anchors, 0.0);

  if (mask.toa) {
    std::vector<double> e(sigma.toa.begin(), sigma.toa.end());
    w.toa = normalized_weights(e, sigma.toa, "toa");
  }
  if (mask.tdoa) {
    if (n_anchors < 2)
      throw std::invalid_argument("compute_weights: TDOA requires N >= 2");
    if (n_anchors == 2) {
      // Single TDOA pair: the normalized factor collapses to zero, which
      // would delete the only measurement. Fall back to plain 1/sigma^2.
      if (!(sigma.tdoa[0] > 0.0))
        throw std::invalid_argument("compute_weights: sigma must be > 0 for active tdoa");
      w.tdoa[0] = 1.0 / (sigma.tdoa[0] * sigma.tdoa[0]);
    } else {
      std::vector<double> e(sigma.tdoa.begin(), sigma.tdoa.end());
      w.tdoa = normalized_weights(e, sigma.tdoa, "tdoa");
    }
  }
  if (mask.rss) {
    std::vector<double> e(n_anchors);
    for (int i = 0; i < n_anchors; ++i) e[i] = sigma.rss[i] * ranges[i];
    w.rss = normalized_weights(e, sigma.rss, "rss");
  }
  if (mask.aoa) {
    std::vector<double> e(n_anchors);
    for (int i = 0; i < n_anchors; ++i) e[i] = sigma.aoa[i] * ranges[i];
    w.aoa = normalized_weights(e, sigma.aoa, "aoa");
  }
  return w;
}

WeightSet compute_weights(const NetworkGeometry& g, const MeasurementSet& m,
                          const RssParams& p, WeightRanges policy) {
  const std::vector<double> ranges = policy == WeightRanges::TrueDistances
                                         ? pairwise_distances(g)
                                         : weight_range_basis(m, p, g.n());
  return compute_weights(ranges, m.sigma, m.mask, g.n());
}

WeightSet unit_weights(TypeMask mask, int n_anchors) {
  WeightSet w;
  w.toa.assign(n_anchors, mask.toa ? 1.0 : 0.0);
  w.tdoa.assign(n_anchors > 1 ? n_anchors - 1 : 0, mask.tdoa ? 1.0 : 0.0);
  w.rss.assign(n_anchors, mask.rss ? 1.0 : 0.0);
  w.aoa.assign(n_anchors, mask.aoa ? 1.0 : 0.0);
  return w;
}

Problem make_problem(const std::vector<Vec3>& anchors, const MeasurementSet& m,
                     const WeightSet& w, const RssParams& p, int dim) {
  m.validate(static_cast<int>(anchors.size()));
  Problem prob;
  prob.anchors = anchors;
  prob.mask = m.mask;
  prob.dim = dim;
  prob.rss_params = p;
  prob.weights = w;
  if (m.mask.toa) prob.toa = *m.toa;
  if (m.mask.tdoa) prob.tdoa = *m.tdoa;
  if (m.mask.rss) {
    prob.lambda.resize(m.rss->size());
    for (std::size_t i = 0; i < m.rss->size(); ++i)
      prob.lambda[i] = lambda_of((*m.rss)[i], p);
  }
  if (m.mask.aoa) prob.aoa = *m.aoa;
  return prob;
}

double objective_value(const Problem& prob, const Vec3& s) {
  double total = 0.0;
  const int n = prob.n();
  const double eta = prob.rss_params.eta();
  const Vec3 diff1 = s - prob.anchors[0];
  const double d1 = diff1.norm();
  for (int i = 0; i < n; ++i) {
    const Vec3 diff = s - prob.anchors[i];
    const double d = diff.norm();
    if (prob.mask.rss) {
      const double r = eta - eta * prob.lambda[i] * d;
      total += prob.weights.rss[i] * r * r;
    }
    if (prob.mask.toa) {
      const double r = prob.toa[i] - d;
      total += prob.weights.toa[i] * r * r;
    }
    if (prob.mask.tdoa && i >= 1) {
      const double r = prob.tdoa[i - 1] - d + d1;
      total += prob.weights.tdoa[i - 1] * r * r;
    }
    if (prob.mask.aoa) {
      const double az = prob.aoa[i].azimuth;
      const double r_az = -std::sin(az) * diff.x() + std::cos(az) * diff.y();
      double f = r_az * r_az;
      if (prob.dim == 3) {
        const double r_el = diff.z() - d * std::cos(prob.aoa[i].elevation);
        f += r_el * r_el;
      }
      total += prob.weights.aoa[i] * f;
    }
  }
  return total;
}

Vec3 objective_gradient_fd(const Problem& prob, const Vec3& s, double step) {
  Vec3 grad = Vec3::Zero();
  const int dims = prob.dim;
  for (int k = 0; k < dims; ++k) {
    const double h = step * (1.0 + std::abs(s[k]));
    Vec3 hi = s, lo = s;
    hi[k] += h;
    lo[k] -= h;
    grad[k] = (objective_value(prob, hi) - objective_value(prob, lo)) / (2.0 * h);
  }
  return grad;
}

}  // namespace hyloc
