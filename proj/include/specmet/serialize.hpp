/*
 * serialize.hpp — JSON codecs for points and metric functionals.  Points are
 * arrays (vectors), [re, im] pairs (disk, torus modulus), or nested arrays
 * (matrices); functionals serialize as {tag, parameters}.
 */

#pragma once

#include "specmet/io.hpp"
#include "specmet/maps.hpp"

namespace specmet {

inline Json point_to_json(const EuclideanPSpace&, const Vec& p) { return Json(p); }
inline Json point_to_json(const PositiveCone&, const Vec& p) { return Json(p); }
inline Json point_to_json(const PoincareDisk&, const Cx& z) {
  return Json::array({z.real(), z.imag()});
}
inline Json point_to_json(const TorusTeich&, const Cx& tau) {
  return Json::array({tau.real(), tau.imag()});
}
inline Json point_to_json(const OperatorSpace&, const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

template <class S>
Json functional_to_json(const S& space, const MetricFunctional<S>& h) {
  using MF = MetricFunctional<S>;
  Json out{{"tag", h.family_name()}};
  std::visit(
      [&](const auto& tag) {
        using T = std::decay_t<decltype(tag)>;
        if constexpr (std::is_same_v<T, typename MF::Internal>) {
          out["parameters"] = Json{{"anchor", point_to_json(space, tag.anchor)}};
        } else if constexpr (std::is_same_v<T, typename MF::HilbertParam>) {
          out["parameters"] =
              Json{{"r", tag.r == kInf ? Json("inf") : Json(tag.r)}, {"v", tag.v}};
        } else if constexpr (std::is_same_v<T, typename MF::DiskBusemann>) {
          out["parameters"] =
              Json{{"zeta", Json::array({tag.zeta.real(), tag.zeta.imag()})}};
        } else if constexpr (std::is_same_v<T, typename MF::LinearDual>) {
          out["parameters"] = Json{{"v", tag.v}};
        } else {
          out["parameters"] = Json{{"anchor", point_to_json(space, tag.anchor)},
                                   {"record_index", tag.record_index}};
        }
      },
      h.tag);
  return out;
}

}  // namespace specmet
