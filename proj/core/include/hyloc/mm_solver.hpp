#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyloc/objective.hpp"

namespace hyloc {

/// Thrown when an expansion point sits within guard_eps of an anchor, where
/// the bounding directions p_i = (s_t - m_i)/||s_t - m_i|| are undefined.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(int anchor, double dist)
      : std::runtime_error("mm: iterate within guard distance of anchor " +
                           std::to_string(anchor) + " (||s_t - m|| = " +
                           std::to_string(dist) + ")"),
        anchor_index(anchor) {}
  int anchor_index;
};

// ---------------------------------------------------------------------------
// Bounding primitives. Each upper bound is tight at the expansion point,
// which is what makes the MM descent argument go through.
// ---------------------------------------------------------------------------

/// Cauchy-Schwarz bound: -||s - m|| <= -(s - m)^T (s_t - m)/||s_t - m||.
double bound_neg_norm(const Vec3& s, const Vec3& m, const Vec3& s_t,
                      double guard_eps = 1e-6);

/// Concavity of sqrt: ||s|| <= ||s_t|| + (||s||^2 - ||s_t||^2)/(2||s_t||).
double bound_norm_quadratic(const Vec3& s, const Vec3& s_t,
                            double guard_eps = 1e-6);

/// Midpoint split: (u - v)^2 <= 2(u - mid)^2 + 2(v - mid)^2 with
/// mid = (u_t + v_t)/2; equality at (u, v) = (u_t, v_t).
double bound_square_diff(double u, double v, double u_t, double v_t);

// ---------------------------------------------------------------------------
// Surrogate machinery. Every per-anchor surrogate is a diagonal quadratic
//
//   q(s) = iso*||s||^2 + zz*s_z^2 - 2*y^T s + c,
//
// assembled from the bounding primitives with all constants retained, so
// tangency g(s_t | s_t) = f(s_t) is an executable assertion rather than an
// "up to constants" statement. Minimizing the weighted sum of these terms
// gives the closed-form iterate.
// ---------------------------------------------------------------------------

struct QuadTerm {
  double iso = 0.0;       // coefficient of ||s||^2
  double zz = 0.0;        // extra coefficient of s_z^2
  Vec3 y = Vec3::Zero();  // q contains -2*y^T s
  double c = 0.0;

  void add_norm2(double a, const Vec3& m) {
    iso += a;
    y += a * m;
    c += a * m.squaredNorm();
  }
  void add_zsq(double a, double mz) {
    zz += a;
    y.z() += a * mz;
    c += a * mz * mz;
  }
  void add_linear(const Vec3& b, double c0) {
    y -= 0.5 * b;
    c += c0;
  }
  void add_const(double c0) { c += c0; }
  void add_scaled(double w, const QuadTerm& o) {
    iso += w * o.iso;
    zz += w * o.zz;
    y += w * o.y;
    c += w * o.c;
  }

  double value(const Vec3& s) const {
    return iso * s.squaredNorm() + zz * s.z() * s.z() - 2.0 * y.dot(s) + c;
  }
};

/// Geometry of one anchor relative to the expansion point.
struct AnchorExpansion {
  Vec3 m;     // anchor position
  double dist;  // ||s_t - m||
  Vec3 unit;  // (s_t - m)/dist

  AnchorExpansion(const Vec3& s_t, const Vec3& anchor, int index,
                  double guard_eps) {
    m = anchor;
    const Vec3 diff = s_t - anchor;
    dist = diff.norm();
    if (dist <= guard_eps) throw DegeneracyError(index, dist);
    unit = diff / dist;
  }
};

/// Upper bound of coeff*||s - m||, tight at s_t, appended to `q`.
/// Nonpositive coefficients take the Cauchy-Schwarz (linear) bound;
/// positive coefficients take the concavity (quadratic) bound. The split
/// keeps the majorization valid for either sign of the data-dependent
/// coefficient, which the printed per-type forms assume positive.
void add_scaled_norm_bound(QuadTerm& q, double coeff, const AnchorExpansion& a);

/// Per-anchor surrogate terms at expansion point s_t (constants retained).
QuadTerm rss_surrogate_term(const AnchorExpansion& a, double lambda, double eta);
QuadTerm toa_surrogate_term(const AnchorExpansion& a, double tau);
QuadTerm tdoa_surrogate_term(const AnchorExpansion& ref, const AnchorExpansion& a,
                             double tau_1i);
QuadTerm aoa_surrogate_term(const AnchorExpansion& a, const Vec3& s_t,
                            const AoaSample& angles, int dim);

/// Scalar surrogate evaluations (test-facing convenience wrappers).
double surrogate_rss(const Vec3& s, const Vec3& s_t, const Vec3& m, double lambda,
                     const RssParams& p, double guard_eps = 1e-6);
double surrogate_toa(const Vec3& s, const Vec3& s_t, const Vec3& m, double tau,
                     double guard_eps = 1e-6);
double surrogate_tdoa(const Vec3& s, const Vec3& s_t, const Vec3& m_ref,
                      const Vec3& m, double tau_1i, double guard_eps = 1e-6);
double surrogate_aoa(const Vec3& s, const Vec3& s_t, const Vec3& m,
                     const AoaSample& angles, int dim = 3, double guard_eps = 1e-6);

/// The branch scalars of the AOA norm term -2*u*cos(theta)*||s - m||:
/// Omega (linear branch, active when u*cos(theta) > 0) and rho (quadratic
/// branch, active when u*cos(theta) < 0). At most one is nonzero; both are
/// zero when u*cos(theta) == 0.
struct AoaSignSplit {
  double omega_coeff = 0.0;  // Omega
  double rho = 0.0;
};
AoaSignSplit aoa_sign_split(double u, double cos_el, double dist) noexcept;

/// The assembled quadratic g(s | s_t) = s^T diag(z, z, z + z_tilde) s
/// - 2 y^T s + constant, summed over anchors and active types with their
/// weights. Its unconstrained minimizer is the next iterate.
struct UpdateTerms {
  double z = 0.0;
  double z_tilde = 0.0;
  Vec3 y = Vec3::Zero();
  double constant = 0.0;

  Vec3 next_iterate() const {
    return {y.x() / z, y.y() / z, y.z() / (z + z_tilde)};
  }
  double surrogate_value(const Vec3& s) const {
    return z * s.squaredNorm() + z_tilde * s.z() * s.z() - 2.0 * y.dot(s) + constant;
  }
};

/// Accumulates one measurement type's weighted surrogate terms into `out`.
/// Exposed separately so mask additivity is directly testable.
void accumulate_type(UpdateTerms& out, MeasType type, const Problem& p,
                     const Vec3& s_t, double guard_eps);

/// Builds the full update for the problem's mask. Throws DegeneracyError
/// when s_t is within guard_eps of an anchor, std::invalid_argument when
/// the assembled z is not positive (empty/weightless mask).
UpdateTerms assemble_terms(const Problem& p, const Vec3& s_t,
                           double guard_eps = 1e-6);

/// One MM step: minimizer of the assembled surrogate at s_t.
Vec3 assemble_update(const Problem& p, const Vec3& s_t, double guard_eps = 1e-6);

/// Per-iteration auxiliaries, exposed for diagnostics and tests. Vectors
/// are indexed by anchor (q/h by anchor index minus one). p_i is the unit
/// direction (s_t - m_i)/||s_t - m_i|| used by the Cauchy-Schwarz bound.
struct MmState {
  Vec3 iterate = Vec3::Zero();
  int iter = 0;
  std::vector<Vec3> p;
  std::vector<double> q;      // TDOA midpoints, length N-1
  std::vector<double> h;      // TDOA ratio tau_1i/||s_t - m_1||, length N-1
  std::vector<double> u;      // AOA midpoints
  std::vector<Vec3> omega;    // AOA linearization vectors
  std::vector<double> omega_coeff;  // AOA Omega_i
  std::vector<double> rho;          // AOA rho_i
  double z = 0.0;
  double z_tilde = 0.0;
  Vec3 y = Vec3::Zero();
};

MmState compute_mm_state(const Problem& p, const Vec3& s_t, int iter = 0,
                         double guard_eps = 1e-6);

// ---------------------------------------------------------------------------
// Full iteration loop.
// ---------------------------------------------------------------------------

struct SolverConfig {
  int t_max = 1000;
  double eps_c = 1e-3;     // relative-step convergence threshold
  double guard_eps = 1e-6; // minimum allowed ||s_t - m_i||
  std::optional<Vec3> init;  // explicit start; otherwise a seeded draw
  double init_upper = 12.5;  // component-wise Uniform(0, init_upper) draw
  std::uint64_t seed = 0;

  void validate() const {
    if (t_max < 1) throw std::invalid_argument("SolverConfig: t_max must be >= 1");
    if (!(eps_c > 0.0)) throw std::invalid_argument("SolverConfig: eps_c must be > 0");
    if (!(guard_eps > 0.0)) throw std::invalid_argument("SolverConfig: guard_eps must be > 0");
  }
};

enum class Termination { Converged, MaxIterations, Degenerate };

const char* termination_name(Termination t) noexcept;

struct SolveResult {
  Vec3 estimate = Vec3::Zero();
  int iterations = 0;
  Termination termination = Termination::Converged;
  std::vector<double> objective_trace;  // f(s_0), f(s_1), ...
  bool reinitialized = false;
  std::string message;

  bool ok() const noexcept { return termination != Termination::Degenerate; }
};

/// Runs the MM loop: iterate the closed-form update until the relative
/// step falls below eps_c or t_max is reached. On a degeneracy the solver
/// re-initializes once from a fresh seeded draw; a second degeneracy is
/// reported as a failed result with a diagnostic message.
SolveResult solve(const Problem& p, const SolverConfig& cfg);

}  // namespace hyloc
