#include "hyloc/types.hpp"

#include <algorithm>
#include <cctype>

namespace hyloc {

TypeMask parse_mask(const std::string& name) {
  TypeMask m;
  for (char raw : name) {
    switch (std::toupper(static_cast<unsigned char>(raw))) {
      case 'T': m.toa = true; break;
      case 'D': m.tdoa = true; break;
      case 'R': m.rss = true; break;
      case 'A': m.aoa = true; break;
      default:
        throw std::invalid_argument("parse_mask: unknown measurement initial '" +
                                    std::string(1, raw) + "' in \"" + name + "\"");
    }
  }
  if (m.empty()) throw std::invalid_argument("parse_mask: empty method name");
  return m;
}

std::vector<TypeMask> all_masks() {
  std::vector<TypeMask> out;
  for (int bits = 1; bits < 16; ++bits) {
    TypeMask m;
    m.toa = bits & 1;
    m.tdoa = bits & 2;
    m.rss = bits & 4;
    m.aoa = bits & 8;
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const TypeMask& a, const TypeMask& b) {
    if (a.count() != b.count()) return a.count() > b.count();
    return a.name() < b.name();
  });
  return out;
}

void MeasurementSet::validate(int n_anchors) const {
  if (mask.empty()) throw std::invalid_argument("MeasurementSet: empty mask");
  auto check_len = [&](bool active, const auto& opt, std::size_t want,
                       const char* what) {
    if (!active) return;
    if (!opt.has_value())
      throw std::invalid_argument(std::string("MeasurementSet: mask requires ") +
                                  what + " but it is absent");
    if (opt->size() != want)
      throw std::invalid_argument(std::string("MeasurementSet: ") + what +
                                  " has wrong length");
  };
  check_len(mask.toa, toa, n_anchors, "toa");
  check_len(mask.tdoa, tdoa, n_anchors > 0 ? n_anchors - 1 : 0, "tdoa");
  check_len(mask.rss, rss, n_anchors, "rss");
  check_len(mask.aoa, aoa, n_anchors, "aoa");

  if (mask.tdoa && n_anchors < 2)
    throw std::invalid_argument("MeasurementSet: TDOA requires at least 2 anchors");

  if (mask.aoa) {
    for (const AoaSample& a : *aoa) {
      if (!(a.azimuth > -M_PI - 1e-12 && a.azimuth <= M_PI + 1e-12))
        throw std::invalid_argument("MeasurementSet: azimuth out of (-pi, pi]");
      if (!(a.elevation >= -1e-12 && a.elevation <= M_PI + 1e-12))
        throw std::invalid_argument("MeasurementSet: elevation out of [0, pi]");
    }
  }

  auto check_sigma = [](const std::vector<double>& s, const char* what) {
    for (double v : s)
      if (!(v >= 0.0))
        throw std::invalid_argument(std::string("MeasurementSet: negative sigma for ") + what);
  };
  check_sigma(sigma.toa, "toa");
  check_sigma(sigma.tdoa, "tdoa");
  check_sigma(sigma.rss, "rss");
  check_sigma(sigma.aoa, "aoa");
}

}  // namespace hyloc
