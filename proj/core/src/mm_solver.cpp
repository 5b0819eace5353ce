#include "hyloc/mm_solver.hpp"

#include <cmath>

#include "hyloc/rng.hpp"

namespace hyloc {

double bound_neg_norm(const Vec3& s, const Vec3& m, const Vec3& s_t,
                      double guard_eps) {
  const Vec3 diff_t = s_t - m;
  const double dist_t = diff_t.norm();
  if (dist_t <= guard_eps) throw DegeneracyError(-1, dist_t);
  return -(s - m).dot(diff_t) / dist_t;
}

double bound_norm_quadratic(const Vec3& s, const Vec3& s_t, double guard_eps) {
  const double nt = s_t.norm();
  if (nt <= guard_eps) throw DegeneracyError(-1, nt);
  return nt + (s.squaredNorm() - nt * nt) / (2.0 * nt);
}

double bound_square_diff(double u, double v, double u_t, double v_t) {
  const double mid = 0.5 * (u_t + v_t);
  return 2.0 * (u - mid) * (u - mid) + 2.0 * (v - mid) * (v - mid);
}

void add_scaled_norm_bound(QuadTerm& q, double coeff, const AnchorExpansion& a) {
  if (coeff <= 0.0) {
    // coeff * (s - m)^T unit, a linear function of s.
    q.add_linear(coeff * a.unit, -coeff * a.unit.dot(a.m));
  } else {
    const double scale = coeff / (2.0 * a.dist);
    q.add_norm2(scale, a.m);
    q.add_const(0.5 * coeff * a.dist);
  }
}

QuadTerm rss_surrogate_term(const AnchorExpansion& a, double lambda, double eta) {
  const double lt = eta * lambda;
  QuadTerm q;
  q.add_const(eta * eta);
  add_scaled_norm_bound(q, -2.0 * eta * lt, a);
  q.add_norm2(lt * lt, a.m);
  return q;
}

QuadTerm toa_surrogate_term(const AnchorExpansion& a, double tau) {
  QuadTerm q;
  q.add_const(tau * tau);
  add_scaled_norm_bound(q, -2.0 * tau, a);
  q.add_norm2(1.0, a.m);
  return q;
}

QuadTerm tdoa_surrogate_term(const AnchorExpansion& ref, const AnchorExpansion& a,
                             double tau_1i) {
  // Midpoint of the two Lemma-3 arguments at the expansion point.
  const double q_mid = 0.5 * (tau_1i + ref.dist + a.dist);
  QuadTerm q;
  q.add_norm2(2.0, ref.m);
  q.add_norm2(2.0, a.m);
  add_scaled_norm_bound(q, 4.0 * tau_1i, ref);
  add_scaled_norm_bound(q, -4.0 * q_mid, ref);
  add_scaled_norm_bound(q, -4.0 * q_mid, a);
  q.add_const(2.0 * (tau_1i - q_mid) * (tau_1i - q_mid) + 2.0 * q_mid * q_mid);
  return q;
}

AoaSignSplit aoa_sign_split(double u, double cos_el, double dist) noexcept {
  AoaSignSplit split;
  const double prod = u * cos_el;
  if (prod > 0.0) {
    split.omega_coeff = -2.0 * prod;
  } else if (prod < 0.0) {
    split.rho = -prod / dist;
  }
  return split;
}

QuadTerm aoa_surrogate_term(const AnchorExpansion& a, const Vec3& s_t,
                            const AoaSample& angles, int dim) {
  QuadTerm q;
  const Vec3 c{-std::sin(angles.azimuth), std::cos(angles.azimuth), 0.0};

  // Azimuth square (c^T (s - m))^2: split into ||s||^2 plus the concave
  // part s^T (c c^T - I) s, which is linearized at s_t.
  const double c_st = c.dot(s_t);
  const double c_m = c.dot(a.m);
  const Vec3 omega = c_st * c - s_t - c_m * c;
  q.add_linear(2.0 * omega, c_m * c_m - (c_st * c_st - s_t.squaredNorm()));
  q.add_norm2(1.0, Vec3::Zero());

  if (dim == 3) {
    // Elevation square via the midpoint split, then the norm term bounded
    // by the branch matching the sign of u*cos(theta).
    const double cos_el = std::cos(angles.elevation);
    const double a_t = s_t.z() - a.m.z();
    const double b_t = a.dist * cos_el;
    const double u = 0.5 * (a_t + b_t);
    q.add_zsq(2.0, a.m.z());
    q.add_linear(Vec3{0.0, 0.0, -4.0 * u}, 4.0 * u * a.m.z());
    q.add_norm2(2.0 * cos_el * cos_el, a.m);
    add_scaled_norm_bound(q, -4.0 * u * cos_el, a);
    q.add_const(4.0 * u * u);
  }
  return q;
}

double surrogate_rss(const Vec3& s, const Vec3& s_t, const Vec3& m, double lambda,
                     const RssParams& p, double guard_eps) {
  const AnchorExpansion a(s_t, m, 0, guard_eps);
  return rss_surrogate_term(a, lambda, p.eta()).value(s);
}

double surrogate_toa(const Vec3& s, const Vec3& s_t, const Vec3& m, double tau,
                     double guard_eps) {
  const AnchorExpansion a(s_t, m, 0, guard_eps);
  return toa_surrogate_term(a, tau).value(s);
}

double surrogate_tdoa(const Vec3& s, const Vec3& s_t, const Vec3& m_ref,
                      const Vec3& m, double tau_1i, double guard_eps) {
  const AnchorExpansion ref(s_t, m_ref, 0, guard_eps);
  const AnchorExpansion a(s_t, m, 1, guard_eps);
  return tdoa_surrogate_term(ref, a, tau_1i).value(s);
}

double surrogate_aoa(const Vec3& s, const Vec3& s_t, const Vec3& m,
                     const AoaSample& angles, int dim, double guard_eps) {
  const AnchorExpansion a(s_t, m, 0, guard_eps);
  return aoa_surrogate_term(a, s_t, angles, dim).value(s);
}

void accumulate_type(UpdateTerms& out, MeasType type, const Problem& p,
                     const Vec3& s_t, double guard_eps) {
  QuadTerm total;
  const int n = p.n();
  switch (type) {
    case MeasType::Toa:
      for (int i = 0; i < n; ++i) {
        const double w = p.weights.toa[i];
        if (w == 0.0) continue;
        const AnchorExpansion a(s_t, p.anchors[i], i, guard_eps);
        total.add_scaled(w, toa_surrogate_term(a, p.toa[i]));
      }
      break;
    case MeasType::Rss: {
      const double eta = p.rss_params.eta();
      for (int i = 0; i < n; ++i) {
        const double w = p.weights.rss[i];
        if (w == 0.0) continue;
        const AnchorExpansion a(s_t, p.anchors[i], i, guard_eps);
        total.add_scaled(w, rss_surrogate_term(a, p.lambda[i], eta));
      }
      break;
    }
    case MeasType::Tdoa: {
      const AnchorExpansion ref(s_t, p.anchors[0], 0, guard_eps);
      for (int i = 1; i < n; ++i) {
        const double w = p.weights.tdoa[i - 1];
        if (w == 0.0) continue;
        const AnchorExpansion a(s_t, p.anchors[i], i, guard_eps);
        total.add_scaled(w, tdoa_surrogate_term(ref, a, p.tdoa[i - 1]));
      }
      break;
    }
    case MeasType::Aoa:
      for (int i = 0; i < n; ++i) {
        const double w = p.weights.aoa[i];
        if (w == 0.0) continue;
        const AnchorExpansion a(s_t, p.anchors[i], i, guard_eps);
        total.add_scaled(w, aoa_surrogate_term(a, s_t, p.aoa[i], p.dim));
      }
      break;
  }
  out.z += total.iso;
  out.z_tilde += total.zz;
  out.y += total.y;
  out.constant += total.c;
}

UpdateTerms assemble_terms(const Problem& p, const Vec3& s_t, double guard_eps) {
  UpdateTerms terms;
  for (MeasType t : kAllMeasTypes)
    if (p.mask.has(t)) accumulate_type(terms, t, p, s_t, guard_eps);
  if (!(terms.z > 0.0) || !(terms.z + terms.z_tilde > 0.0))
    throw std::invalid_argument(
        "assemble_terms: non-positive quadratic coefficient; mask or weights empty");
  return terms;
}

Vec3 assemble_update(const Problem& p, const Vec3& s_t, double guard_eps) {
  return assemble_terms(p, s_t, guard_eps).next_iterate();
}

MmState compute_mm_state(const Problem& p, const Vec3& s_t, int iter,
                         double guard_eps) {
  MmState st;
  st.iterate = s_t;
  st.iter = iter;
  const int n = p.n();
  st.p.reserve(n);
  std::vector<double> dist(n);
  for (int i = 0; i < n; ++i) {
    const AnchorExpansion a(s_t, p.anchors[i], i, guard_eps);
    dist[i] = a.dist;
    st.p.push_back(a.unit);
  }
  if (p.mask.tdoa) {
    st.q.resize(n - 1);
    st.h.resize(n - 1);
    for (int i = 1; i < n; ++i) {
      st.q[i - 1] = 0.5 * (p.tdoa[i - 1] + dist[0] + dist[i]);
      st.h[i - 1] = p.tdoa[i - 1] / dist[0];
    }
  }
  if (p.mask.aoa && p.dim == 3) {
    st.u.resize(n);
    st.omega.resize(n);
    st.omega_coeff.resize(n);
    st.rho.resize(n);
    for (int i = 0; i < n; ++i) {
      const AoaSample& ang = p.aoa[i];
      const Vec3 c{-std::sin(ang.azimuth), std::cos(ang.azimuth), 0.0};
      st.omega[i] = c.dot(s_t) * c - s_t - c.dot(p.anchors[i]) * c;
      const double cos_el = std::cos(ang.elevation);
      st.u[i] = 0.5 * ((s_t.z() - p.anchors[i].z()) + dist[i] * cos_el);
      const AoaSignSplit split = aoa_sign_split(st.u[i], cos_el, dist[i]);
      st.omega_coeff[i] = split.omega_coeff;
      st.rho[i] = split.rho;
    }
  }
  const UpdateTerms terms = assemble_terms(p, s_t, guard_eps);
  st.z = terms.z;
  st.z_tilde = terms.z_tilde;
  st.y = terms.y;
  return st;
}

const char* termination_name(Termination t) noexcept {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max-iterations";
    case Termination::Degenerate: return "degenerate";
  }
  return "unknown";
}

namespace {

Vec3 draw_init(Rng& rng, double upper, int dim) {
  Vec3 s{rng.uniform(0.0, upper), rng.uniform(0.0, upper), rng.uniform(0.0, upper)};
  if (dim == 2) s.z() = 0.0;
  return s;
}

}  // namespace

SolveResult solve(const Problem& p, const SolverConfig& cfg) {
  cfg.validate();
  if (p.mask.empty())
    throw std::invalid_argument("solve: mask must be nonempty");

  Rng rng(derive_seed(cfg.seed, 0xA11C));
  Vec3 s = cfg.init ? *cfg.init : draw_init(rng, cfg.init_upper, p.dim);
  if (p.dim == 2) s.z() = 0.0;

  SolveResult res;
  int restarts = 0;
  res.objective_trace.push_back(objective_value(p, s));
  for (int t = 1; t <= cfg.t_max; ++t) {
    Vec3 s_next;
    try {
      s_next = assemble_update(p, s, cfg.guard_eps);
    } catch (const DegeneracyError& e) {
      if (restarts == 0) {
        restarts = 1;
        res.reinitialized = true;
        s = draw_init(rng, cfg.init_upper, p.dim);
        res.objective_trace.assign(1, objective_value(p, s));
        t = 0;
        continue;
      }
      res.termination = Termination::Degenerate;
      res.estimate = s;
      res.iterations = t - 1;
      res.message = std::string(e.what()) + " after re-initialization";
      return res;
    }
    res.objective_trace.push_back(objective_value(p, s_next));
    const double rel_step = (s_next - s).norm() / std::max(s.norm(), 1e-12);
    s = s_next;
    res.iterations = t;
    if (rel_step < cfg.eps_c) {
      res.termination = Termination::Converged;
      res.estimate = s;
      return res;
    }
  }
  res.termination = Termination::MaxIterations;
  res.estimate = s;
  return res;
}

}  // namespace hyloc
