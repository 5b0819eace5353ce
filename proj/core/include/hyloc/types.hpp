#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyloc {

/// Measurement families the toolkit can fuse. Method names use the
/// initials T (TOA), D (TDOA), R (RSS), A (AOA), always in that order,
/// e.g. "TDRA" fuses all four and "TA" fuses TOA with AOA.
enum class MeasType : std::uint8_t { Toa = 0, Tdoa = 1, Rss = 2, Aoa = 3 };

inline constexpr MeasType kAllMeasTypes[] = {MeasType::Toa, MeasType::Tdoa,
                                             MeasType::Rss, MeasType::Aoa};

constexpr char meas_initial(MeasType t) noexcept {
  switch (t) {
    case MeasType::Toa: return 'T';
    case MeasType::Tdoa: return 'D';
    case MeasType::Rss: return 'R';
    case MeasType::Aoa: return 'A';
  }
  return '?';
}

/// Which measurement types a method fuses. Nonempty for a valid method.
struct TypeMask {
  bool toa = false;
  bool tdoa = false;
  bool rss = false;
  bool aoa = false;

  constexpr bool has(MeasType t) const noexcept {
    switch (t) {
      case MeasType::Toa: return toa;
      case MeasType::Tdoa: return tdoa;
      case MeasType::Rss: return rss;
      case MeasType::Aoa: return aoa;
    }
    return false;
  }

  constexpr bool empty() const noexcept { return !(toa || tdoa || rss || aoa); }

  constexpr int count() const noexcept {
    return int(toa) + int(tdoa) + int(rss) + int(aoa);
  }

  constexpr bool operator==(const TypeMask&) const noexcept = default;

  /// Canonical method name, letters in T, D, R, A order.
  std::string name() const {
    std::string s;
    if (toa) s += 'T';
    if (tdoa) s += 'D';
    if (rss) s += 'R';
    if (aoa) s += 'A';
    return s;
  }
};

/// Parses a method name such as "TDRA" or "ta" (letters accepted in any
/// order, case-insensitive). Throws std::invalid_argument on unknown
/// letters or an empty result.
TypeMask parse_mask(const std::string& name);

/// The 15 nonempty masks in a fixed enumeration order (by subset size
/// descending, then canonical name), matching the method lists used in
/// the experiment reports.
std::vector<TypeMask> all_masks();

/// Log-distance path-loss model constants. `eta` is derived from gamma
/// and is recomputed on construction so it can never drift out of sync.
struct RssParams {
  double l0 = 20.0;    // reference path loss at d0 = 1 m, dB
  double gamma = 2.5;  // path-loss exponent

  RssParams() = default;
  RssParams(double l0_, double gamma_) : l0(l0_), gamma(gamma_) {
    if (!(gamma > 0.0)) throw std::invalid_argument("RssParams: gamma must be > 0");
  }

  /// eta = 10*gamma/ln(10), the constant of the first-order RSS model.
  double eta() const noexcept { return 10.0 * gamma / std::log(10.0); }
};

/// Per-anchor noise standard deviations. Units: toa/tdoa meters
/// (range-scaled times), rss dB, aoa radians. `tdoa` has length N-1
/// (entries for anchors 2..N against the reference anchor 1).
struct Sigmas {
  std::vector<double> toa;
  std::vector<double> tdoa;
  std::vector<double> rss;
  std::vector<double> aoa;

  /// Equal noise across anchors and types, the setting used throughout
  /// the simulation studies.
  static Sigmas equal(int n_anchors, double sigma) {
    Sigmas s;
    s.toa.assign(n_anchors, sigma);
    s.tdoa.assign(n_anchors > 0 ? n_anchors - 1 : 0, sigma);
    s.rss.assign(n_anchors, sigma);
    s.aoa.assign(n_anchors, sigma);
    return s;
  }

  bool operator==(const Sigmas&) const = default;
};

/// One azimuth/elevation observation. `pole` marks the degenerate case
/// where the source sits on the anchor's vertical axis and the azimuth
/// is undefined (reported as 0 by convention).
struct AoaSample {
  double azimuth = 0.0;    // radians, in (-pi, pi]
  double elevation = 0.0;  // radians, in [0, pi]
  bool pole = false;

  bool operator==(const AoaSample&) const = default;
};

/// A bundle of per-anchor observations for the active measurement types.
/// Lists are indexed by anchor (tdoa by anchor index minus one) and must
/// be present with the correct length for every type in `mask`.
struct MeasurementSet {
  std::optional<std::vector<double>> toa;    // tau_i = c*t_i, meters
  std::optional<std::vector<double>> tdoa;   // tau_1i = c*(t_i - t_1), meters
  std::optional<std::vector<double>> rss;    // L_i, dB
  std::optional<std::vector<AoaSample>> aoa;
  Sigmas sigma;
  TypeMask mask;

  /// Checks presence/length of active lists and the angle/sigma ranges.
  /// Throws std::invalid_argument with the offending field on failure.
  void validate(int n_anchors) const;

  bool operator==(const MeasurementSet&) const = default;
};

}  // namespace hyloc
