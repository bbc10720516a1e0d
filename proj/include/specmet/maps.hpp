/*
 * maps.hpp — stock semicontractions of the model spaces, with whatever exact
 * structure each map class affords:
 *
 *   euclidean   translations (any p), affine isometries Ux + v (p = 2),
 *               contractions x -> c x
 *   disk        Möbius automorphisms (group-form orbits), Blaschke products,
 *               z -> z^2
 *   cone        diagonal scalings (Funk/Thompson isometries), positive linear
 *               maps, coordinatewise powers x -> x^theta
 *   operator    left multiplications X -> C X (isometries of the hemi-metric)
 *   torus       mapping classes (isometries of the Thurston metric)
 *
 * Oracles attached by the factories are closed-form invariants (drift,
 * displacement, fixed/attracting points) used as test oracles, never by the
 * estimation paths themselves.
 */

#pragma once

#include "specmet/cone.hpp"
#include "specmet/disk.hpp"
#include "specmet/euclidean.hpp"
#include "specmet/opspace.hpp"
#include "specmet/semicontraction.hpp"
#include "specmet/torus.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <utility>

namespace specmet {

inline Eigen::VectorXd to_eigen(const Vec& v) {
  Eigen::VectorXd e(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
  return e;
}

inline Vec from_eigen(const Eigen::VectorXd& e) {
  Vec v(static_cast<std::size_t>(e.size()));
  for (Eigen::Index i = 0; i < e.size(); ++i) v[static_cast<std::size_t>(i)] = e(i);
  return v;
}

// ---------------------------------------------------------------------------
// Euclidean maps.

class TranslationCore final : public MapCore<EuclideanPSpace> {
 public:
  explicit TranslationCore(Vec c) : c_(std::move(c)) {}
  Vec apply(const Vec& x) const override { return add(x, c_); }
  bool is_isometry() const override { return true; }
  std::shared_ptr<const MapCore<EuclideanPSpace>> inverse_core() const override {
    return std::make_shared<TranslationCore>(scaled(c_, -1.0));
  }
  std::shared_ptr<const MapCore<EuclideanPSpace>> compose_core(
      const std::shared_ptr<const MapCore<EuclideanPSpace>>& inner) const override {
    if (auto t = std::dynamic_pointer_cast<const TranslationCore>(inner))
      return std::make_shared<TranslationCore>(add(c_, t->c_));
    return nullptr;
  }
  const Vec& shift() const { return c_; }

 private:
  Vec c_;
};

inline Semicontraction<EuclideanPSpace> translation_map(const EuclideanPSpace& s, Vec c) {
  if (c.size() != s.dim()) throw parameter_error("translation_map: dimension mismatch");
  MapOracle<EuclideanPSpace> oracle;
  oracle.tau = s.norm(c);
  oracle.displacement = s.norm(c);
  oracle.provenance = "translation shift norm";
  return Semicontraction<EuclideanPSpace>("translate", std::make_shared<TranslationCore>(std::move(c)),
                                          std::move(oracle));
}

class AffineIsometryCore final : public MapCore<EuclideanPSpace> {
 public:
  AffineIsometryCore(Eigen::MatrixXd u, Eigen::VectorXd v) : u_(std::move(u)), v_(std::move(v)) {}
  Vec apply(const Vec& x) const override { return from_eigen(u_ * to_eigen(x) + v_); }
  bool is_isometry() const override { return true; }
  std::shared_ptr<const MapCore<EuclideanPSpace>> inverse_core() const override {
    Eigen::MatrixXd ut = u_.transpose();
    return std::make_shared<AffineIsometryCore>(ut, Eigen::VectorXd(-(ut * v_)));
  }
  std::shared_ptr<const MapCore<EuclideanPSpace>> compose_core(
      const std::shared_ptr<const MapCore<EuclideanPSpace>>& inner) const override {
    if (auto a = std::dynamic_pointer_cast<const AffineIsometryCore>(inner))
      return std::make_shared<AffineIsometryCore>(Eigen::MatrixXd(u_ * a->u_),
                                                  Eigen::VectorXd(u_ * a->v_ + v_));
    return nullptr;
  }
  const Eigen::MatrixXd& linear_part() const { return u_; }
  const Eigen::VectorXd& shift() const { return v_; }

 private:
  Eigen::MatrixXd u_;
  Eigen::VectorXd v_;
};

inline Semicontraction<EuclideanPSpace> affine_isometry_map(const EuclideanPSpace& s,
                                                            Eigen::MatrixXd u, Vec v,
                                                            std::string label = "affine-isometry") {
  if (s.p() != 2.0)
    throw unsupported_space_error("affine_isometry_map: requires p = 2");
  const auto d = static_cast<Eigen::Index>(s.dim());
  if (u.rows() != d || u.cols() != d || v.size() != s.dim())
    throw parameter_error("affine_isometry_map: dimension mismatch");
  if ((u.transpose() * u - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw precondition_error("affine_isometry_map: U is not orthogonal");
  return Semicontraction<EuclideanPSpace>(
      std::move(label), std::make_shared<AffineIsometryCore>(std::move(u), to_eigen(v)));
}

inline Semicontraction<EuclideanPSpace> rotation_map(const EuclideanPSpace& s, double theta) {
  if (s.dim() != 2) throw parameter_error("rotation_map: needs dim 2");
  Eigen::MatrixXd u(2, 2);
  u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  auto f = affine_isometry_map(s, u, Vec{0.0, 0.0}, "rotate");
  f.oracle().tau = 0.0;
  f.oracle().displacement = 0.0;
  f.oracle().fixed_point = Vec{0.0, 0.0};
  f.oracle().provenance = "elliptic rotation";
  return f;
}

inline Semicontraction<EuclideanPSpace> scale_map(const EuclideanPSpace& s, double c) {
  if (!(std::abs(c) <= 1.0)) throw parameter_error("scale_map: |c| must be <= 1");
  MapOracle<EuclideanPSpace> oracle;
  oracle.tau = 0.0;
  if (std::abs(c) < 1.0) {
    oracle.displacement = 0.0;
    oracle.fixed_point = s.base_point();
  }
  oracle.provenance = "linear contraction toward 0";
  return Semicontraction<EuclideanPSpace>::from_function(
      "scale", [c](const Vec& x) { return scaled(x, c); }, std::abs(c) == 1.0,
      std::move(oracle));
}

// ---------------------------------------------------------------------------
// Disk maps.

class MobiusOrbitEngine final : public OrbitEngine<PoincareDisk> {
 public:
  MobiusOrbitEngine(MobiusTransform m, Cx x0, std::size_t horizon) {
    t_ = MobiusTransform::translation_to(x0);
    tinv_ = t_.inverse();
    cums_.reserve(horizon + 1);
    cums_.emplace_back();  // identity
    a_.push_back(0.0);
    points_.push_back(x0);
    for (std::size_t k = 1; k <= horizon; ++k) {
      cums_.push_back(cums_.back().compose(m));
      a_.push_back(tinv_.compose(cums_.back()).compose(t_).dist_from_origin());
      points_.push_back(clamp_into_disk(cums_.back().apply(x0)));
    }
  }

  std::size_t horizon() const override { return cums_.size() - 1; }
  const Cx& point(std::size_t k) const override { return points_.at(k); }
  double base_dist(std::size_t k) const override { return a_.at(k); }
  double pair_dist(std::size_t k, std::size_t m) const override {
    return a_.at(k > m ? k - m : m - k);  // isometry orbit, symmetric metric
  }
  double dist_to(std::size_t k, const Cx& y) const override {
    return MobiusTransform::translation_to(y)
        .inverse()
        .compose(cums_.at(k))
        .compose(t_)
        .dist_from_origin();
  }

 private:
  static Cx clamp_into_disk(Cx z) {
    const double r = std::abs(z);
    return (r < 1.0) ? z : z * ((1.0 - 1e-16) / r);
  }

  MobiusTransform t_, tinv_;
  std::vector<MobiusTransform> cums_;
  std::vector<double> a_;
  std::vector<Cx> points_;
};

class MobiusMapCore final : public MapCore<PoincareDisk> {
 public:
  explicit MobiusMapCore(MobiusTransform m) : m_(m) {}
  Cx apply(const Cx& z) const override { return m_.apply(z); }
  bool is_isometry() const override { return true; }
  std::shared_ptr<const MapCore<PoincareDisk>> inverse_core() const override {
    return std::make_shared<MobiusMapCore>(m_.inverse());
  }
  std::shared_ptr<const MapCore<PoincareDisk>> compose_core(
      const std::shared_ptr<const MapCore<PoincareDisk>>& inner) const override {
    if (auto mm = std::dynamic_pointer_cast<const MobiusMapCore>(inner))
      return std::make_shared<MobiusMapCore>(m_.compose(mm->m_));
    return nullptr;
  }
  std::shared_ptr<OrbitEngine<PoincareDisk>> make_engine(const PoincareDisk&, const Cx& x0,
                                                         std::size_t horizon) const override {
    return std::make_shared<MobiusOrbitEngine>(m_, x0, horizon);
  }
  const MobiusTransform& transform() const { return m_; }

 private:
  MobiusTransform m_;
};

inline Semicontraction<PoincareDisk> mobius_map(MobiusTransform m,
                                                std::string label = "mobius") {
  MapOracle<PoincareDisk> oracle;
  switch (m.classify()) {
    case MobiusKind::hyperbolic:
      oracle.tau = m.translation_length();
      oracle.displacement = m.translation_length();  // attained on the axis
      oracle.boundary_point = m.attracting_boundary_point();
      oracle.provenance = "eigenvalue ratio of the su(1,1) matrix";
      break;
    case MobiusKind::parabolic:
      oracle.tau = 0.0;
      oracle.displacement = 0.0;  // infimum, not attained
      oracle.boundary_point = m.attracting_boundary_point();
      oracle.provenance = "parabolic normal form";
      break;
    default:
      oracle.tau = 0.0;
      oracle.displacement = 0.0;
      oracle.fixed_point = m.interior_fixed_point();
      oracle.provenance = "elliptic fixed point";
  }
  return Semicontraction<PoincareDisk>(std::move(label),
                                       std::make_shared<MobiusMapCore>(m), std::move(oracle));
}

// Möbius map from a real or complex SU(1,1)-shaped matrix [[a, b], [b*, a*]].
inline Semicontraction<PoincareDisk> mobius_map_from_matrix(Cx a, Cx b,
                                                            std::string label = "mobius") {
  return mobius_map(MobiusTransform::from_su11(a, b), std::move(label));
}

inline Semicontraction<PoincareDisk> blaschke_map(double a, bool mirrored = false) {
  MapOracle<PoincareDisk> oracle;
  // Denjoy-Wolff point with angular derivative 2(1-a)/(1+a) < 1.
  oracle.tau = -std::log(2.0 * (1.0 - a) / (1.0 + a));
  oracle.boundary_point = Cx(mirrored ? -1.0 : 1.0, 0.0);
  oracle.provenance = "boundary derivative of the Blaschke product";
  return Semicontraction<PoincareDisk>::from_function(
      mirrored ? "blaschke-" : "blaschke+", blaschke_squared(a, mirrored), false,
      std::move(oracle));
}

inline Semicontraction<PoincareDisk> squaring_map() {
  MapOracle<PoincareDisk> oracle;
  oracle.tau = 0.0;
  oracle.displacement = 0.0;
  oracle.fixed_point = Cx(0.0, 0.0);
  oracle.provenance = "z^2 fixes 0";
  return Semicontraction<PoincareDisk>::from_function(
      "square", [](const Cx& z) { return z * z; }, false, std::move(oracle));
}

// ---------------------------------------------------------------------------
// Cone maps.  Degree-1 homogeneous maps (diagonal scalings, positive linear
// maps) keep orbits as normalized rays with a log-scale carry: the Funk and
// Thompson metrics split as d(e^s z, e^t w) = funk(z, w) + (t - s) up to the
// max with the reverse, so distances stay exact long after raw coordinates
// would have overflowed.

// Funk distance straight from log-coordinates: max_i (Lx_i - Ly_i).
inline double log_funk(const Vec& lx, const Vec& ly) {
  double m = -kInf;
  for (std::size_t i = 0; i < lx.size(); ++i) m = std::max(m, lx[i] - ly[i]);
  return m;
}

class ConeOrbitEngine final : public OrbitEngine<PositiveCone> {
 public:
  ConeOrbitEngine(const PositiveCone& s,
                  const std::function<Vec(const Vec&)>& log_step, Vec x0,
                  std::size_t horizon)
      : space_(&s) {
    Vec lx(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) lx[i] = std::log(x0[i]);
    logs_.reserve(horizon + 1);
    logs_.push_back(std::move(lx));
    points_.push_back(std::move(x0));
    for (std::size_t k = 0; k < horizon; ++k) {
      logs_.push_back(log_step(logs_.back()));
      points_.push_back(clamped_exp(logs_.back()));
    }
  }

  std::size_t horizon() const override { return logs_.size() - 1; }
  const Vec& point(std::size_t k) const override { return points_.at(k); }

  double base_dist(std::size_t k) const override { return log_dist(logs_[0], logs_[k]); }
  double pair_dist(std::size_t k, std::size_t m) const override {
    return log_dist(logs_.at(k), logs_.at(m));
  }
  double dist_to(std::size_t k, const Vec& y) const override {
    Vec ly(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) ly[i] = std::log(y[i]);
    return log_dist(ly, logs_.at(k));
  }

 private:
  double log_dist(const Vec& lx, const Vec& ly) const {
    const double fwd = log_funk(lx, ly);
    if (space_->variant() == ConeVariant::funk) return fwd;
    return std::max(fwd, log_funk(ly, lx));
  }

  // Representative point only; distances come from the log coordinates.
  static Vec clamped_exp(const Vec& l) {
    Vec v(l.size());
    for (std::size_t i = 0; i < l.size(); ++i)
      v[i] = std::exp(std::clamp(l[i], -700.0, 700.0));
    return v;
  }

  const PositiveCone* space_;
  std::vector<Vec> logs_;
  std::vector<Vec> points_;
};

// Degree-1 homogeneous cone self-map given by its action on log-coordinates;
// orbits run through the log-space engine and never overflow.
class HomogeneousConeCore final : public MapCore<PositiveCone> {
 public:
  HomogeneousConeCore(std::function<Vec(const Vec&)> log_fn, bool isometry,
                      std::function<Vec(const Vec&)> log_inverse = {})
      : log_fn_(std::move(log_fn)),
        log_inverse_(std::move(log_inverse)),
        isometry_(isometry) {}

  Vec apply(const Vec& x) const override {
    Vec lx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) lx[i] = std::log(x[i]);
    const Vec ly = log_fn_(lx);
    Vec y(ly.size());
    for (std::size_t i = 0; i < ly.size(); ++i) y[i] = std::exp(ly[i]);
    return y;
  }
  bool is_isometry() const override { return isometry_; }
  std::shared_ptr<const MapCore<PositiveCone>> inverse_core() const override {
    if (!log_inverse_) return nullptr;
    return std::make_shared<HomogeneousConeCore>(log_inverse_, isometry_, log_fn_);
  }
  std::shared_ptr<const MapCore<PositiveCone>> compose_core(
      const std::shared_ptr<const MapCore<PositiveCone>>& inner) const override {
    auto h = std::dynamic_pointer_cast<const HomogeneousConeCore>(inner);
    if (!h) return nullptr;
    auto outer = log_fn_;
    auto inner_fn = h->log_fn_;
    return std::make_shared<HomogeneousConeCore>(
        [outer, inner_fn](const Vec& lx) { return outer(inner_fn(lx)); },
        isometry_ && h->isometry_);
  }
  std::shared_ptr<OrbitEngine<PositiveCone>> make_engine(const PositiveCone& s,
                                                         const Vec& x0,
                                                         std::size_t horizon) const override {
    return std::make_shared<ConeOrbitEngine>(s, log_fn_, x0, horizon);
  }

 private:
  std::function<Vec(const Vec&)> log_fn_;
  std::function<Vec(const Vec&)> log_inverse_;
  bool isometry_;
};

inline Semicontraction<PositiveCone> diag_scale_map(const PositiveCone& s, Vec lambda) {
  if (lambda.size() != s.dim()) throw parameter_error("diag_scale_map: dimension mismatch");
  for (double l : lambda)
    if (!(l > 0.0)) throw parameter_error("diag_scale_map: factors must be positive");
  MapOracle<PositiveCone> oracle;
  double funk_rate = -kInf, thompson_rate = 0.0;
  for (double l : lambda) {
    funk_rate = std::max(funk_rate, -std::log(l));
    thompson_rate = std::max(thompson_rate, std::abs(std::log(l)));
  }
  const double rate = (s.variant() == ConeVariant::funk) ? funk_rate : thompson_rate;
  oracle.tau = rate;
  oracle.displacement = rate;  // constant displacement
  oracle.provenance = "extreme log scaling factor";
  Vec log_lambda(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) log_lambda[i] = std::log(lambda[i]);
  auto shift_by = [](Vec offsets) {
    return [offsets = std::move(offsets)](const Vec& lx) {
      Vec r(lx.size());
      for (std::size_t i = 0; i < lx.size(); ++i) r[i] = lx[i] + offsets[i];
      return r;
    };
  };
  Vec neg = scaled(log_lambda, -1.0);
  return Semicontraction<PositiveCone>(
      "diag-scale",
      std::make_shared<HomogeneousConeCore>(shift_by(std::move(log_lambda)), true,
                                            shift_by(std::move(neg))),
      std::move(oracle));
}

// Positive linear map; nonexpansive for Funk and Thompson alike.  The factory
// attaches the Perron-root drift oracle, which is the Thompson-metric rate.
inline Semicontraction<PositiveCone> positive_linear_map(const PositiveCone& s,
                                                         Eigen::MatrixXd m,
                                                         bool with_oracle = true) {
  const auto d = static_cast<Eigen::Index>(s.dim());
  if (m.rows() != d || m.cols() != d) throw parameter_error("positive_linear_map: bad shape");
  if (!(m.minCoeff() > 0.0))
    throw parameter_error("positive_linear_map: entries must be strictly positive");
  MapOracle<PositiveCone> oracle;
  if (with_oracle && s.variant() == ConeVariant::thompson) {
    const double perron = m.eigenvalues().cwiseAbs().maxCoeff();
    oracle.tau = std::log(perron);
    oracle.provenance = "Perron root";
  }
  // log (A x)_i = logsumexp_j (log a_ij + lx_j); exact under any spread.
  Mat log_m = m.array().log().matrix();
  auto log_apply = [log_m](const Vec& lx) {
    const auto d = log_m.rows();
    Vec out(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
      double peak = -kInf;
      for (Eigen::Index j = 0; j < d; ++j)
        peak = std::max(peak, log_m(i, j) + lx[static_cast<std::size_t>(j)]);
      double sum = 0.0;
      for (Eigen::Index j = 0; j < d; ++j)
        sum += std::exp(log_m(i, j) + lx[static_cast<std::size_t>(j)] - peak);
      out[static_cast<std::size_t>(i)] = peak + std::log(sum);
    }
    return out;
  };
  return Semicontraction<PositiveCone>(
      "positive-linear", std::make_shared<HomogeneousConeCore>(std::move(log_apply), false),
      std::move(oracle));
}

// x -> x^theta coordinatewise; scales both cone metrics by theta.
inline Semicontraction<PositiveCone> coord_pow_map(const PositiveCone& s, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw parameter_error("coord_pow_map: theta in (0, 1]");
  MapOracle<PositiveCone> oracle;
  oracle.tau = 0.0;
  if (theta < 1.0) {
    oracle.displacement = 0.0;
    oracle.fixed_point = s.base_point();
  }
  oracle.provenance = "theta-Lipschitz reparametrization";
  return Semicontraction<PositiveCone>::from_function(
      "coord-pow",
      [theta](const Vec& x) {
        Vec r(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::pow(x[i], theta);
        return r;
      },
      false, std::move(oracle));
}

// ---------------------------------------------------------------------------
// Operator-space maps: left multiplication X -> C X.

class MatrixOrbitEngine final : public OrbitEngine<OperatorSpace> {
 public:
  MatrixOrbitEngine(const Mat& c, Mat x0, std::size_t horizon) : x0_(std::move(x0)) {
    x0_inv_t_ = Eigen::FullPivLU<Mat>(x0_.transpose()).inverse();
    phat_.reserve(horizon + 1);
    phat_.push_back(Mat::Identity(x0_.rows(), x0_.cols()));
    carry_.push_back(0.0);
    a_.push_back(0.0);
    rev_.push_back(0.0);
    points_.push_back(x0_);
    for (std::size_t k = 1; k <= horizon; ++k) {
      Mat next = c * phat_.back();
      double s = carry_.back();
      const double m = next.cwiseAbs().maxCoeff();
      if (m > 1e8 || (m > 0.0 && m < 1e-8)) {
        next /= m;
        s += std::log(m);
      }
      phat_.push_back(next);
      carry_.push_back(s);
      const Mat img_t = (next * x0_).transpose();
      a_.push_back(s + std::log(operator_norm(img_t * x0_inv_t_)));
      rev_.push_back(-s + std::log(operator_norm(
                              x0_.transpose() * Eigen::FullPivLU<Mat>(img_t).inverse())));
      // Representative point; the true one carries e^{carry}, which can leave
      // the double range long before the distances above do.
      points_.push_back(phat_.back() * x0_ * std::exp(std::min(s, 650.0)));
    }
  }

  std::size_t horizon() const override { return phat_.size() - 1; }
  const Mat& point(std::size_t k) const override { return points_.at(k); }
  double base_dist(std::size_t k) const override { return a_.at(k); }
  double pair_dist(std::size_t k, std::size_t m) const override {
    return m >= k ? a_.at(m - k) : rev_.at(k - m);  // isometry orbit, hemi-metric
  }
  double dist_to(std::size_t k, const Mat& y) const override {
    const Mat y_inv_t = Eigen::FullPivLU<Mat>(y.transpose()).inverse();
    return carry_.at(k) +
           std::log(operator_norm((phat_.at(k) * x0_).transpose() * y_inv_t));
  }

 private:
  Mat x0_, x0_inv_t_;
  std::vector<Mat> phat_;
  std::vector<Mat> points_;
  std::vector<double> carry_;
  std::vector<double> a_, rev_;
};

class LeftMultCore final : public MapCore<OperatorSpace> {
 public:
  explicit LeftMultCore(Mat c) : c_(std::move(c)) {}
  Mat apply(const Mat& x) const override { return c_ * x; }
  bool is_isometry() const override { return true; }
  std::shared_ptr<const MapCore<OperatorSpace>> inverse_core() const override {
    return std::make_shared<LeftMultCore>(Eigen::FullPivLU<Mat>(c_).inverse());
  }
  std::shared_ptr<const MapCore<OperatorSpace>> compose_core(
      const std::shared_ptr<const MapCore<OperatorSpace>>& inner) const override {
    if (auto l = std::dynamic_pointer_cast<const LeftMultCore>(inner))
      return std::make_shared<LeftMultCore>(Mat(c_ * l->c_));
    return nullptr;
  }
  std::shared_ptr<OrbitEngine<OperatorSpace>> make_engine(const OperatorSpace&, const Mat& x0,
                                                          std::size_t horizon) const override {
    return std::make_shared<MatrixOrbitEngine>(c_, x0, horizon);
  }
  const Mat& factor() const { return c_; }

 private:
  Mat c_;
};

inline Semicontraction<OperatorSpace> left_mult_map(const OperatorSpace& s, Mat c,
                                                    std::string label = "left-mult") {
  if (!s.contains(c)) throw parameter_error("left_mult_map: factor must be invertible");
  MapOracle<OperatorSpace> oracle;
  oracle.tau = std::log(c.eigenvalues().cwiseAbs().maxCoeff());
  oracle.provenance = "log spectral radius";
  return Semicontraction<OperatorSpace>(std::move(label), std::make_shared<LeftMultCore>(std::move(c)),
                                        std::move(oracle));
}

// ---------------------------------------------------------------------------
// Torus mapping classes.

class TorusOrbitEngine final : public OrbitEngine<TorusTeich> {
 public:
  TorusOrbitEngine(const MapClass& m, Cx x0, std::size_t horizon) : tracker_(x0) {
    points_.push_back(x0);
    for (std::size_t k = 1; k <= horizon; ++k) {
      tracker_.push(m);
      points_.push_back(tracker_.modulus(k));
    }
  }

  std::size_t horizon() const override { return points_.size() - 1; }
  const Cx& point(std::size_t k) const override { return points_.at(k); }
  double base_dist(std::size_t k) const override { return tracker_.base_dist(k); }
  double pair_dist(std::size_t k, std::size_t m) const override {
    return tracker_.base_dist(k > m ? k - m : m - k);  // isometry, L symmetric here
  }
  double dist_to(std::size_t k, const Cx& y) const override {
    return tracker_.dist_from(q_form(y), k);
  }

 private:
  TorusProductTracker tracker_;
  std::vector<Cx> points_;
};

class TorusClassCore final : public MapCore<TorusTeich> {
 public:
  explicit TorusClassCore(MapClass m) : m_(m) {
    if (std::llabs(m_.det()) != 1) throw parameter_error("torus map: |det| must be 1");
  }
  Cx apply(const Cx& tau) const override { return act_on_modulus(m_, tau); }
  bool is_isometry() const override { return true; }
  std::shared_ptr<const MapCore<TorusTeich>> inverse_core() const override {
    const std::int64_t det = m_.det();
    MapClass inv;
    inv.m[0][0] = det * m_.m[1][1];
    inv.m[0][1] = -det * m_.m[0][1];
    inv.m[1][0] = -det * m_.m[1][0];
    inv.m[1][1] = det * m_.m[0][0];
    return std::make_shared<TorusClassCore>(inv);
  }
  std::shared_ptr<const MapCore<TorusTeich>> compose_core(
      const std::shared_ptr<const MapCore<TorusTeich>>& inner) const override {
    if (auto t = std::dynamic_pointer_cast<const TorusClassCore>(inner))
      return std::make_shared<TorusClassCore>(m_.times(t->m_));
    return nullptr;
  }
  std::shared_ptr<OrbitEngine<TorusTeich>> make_engine(const TorusTeich&, const Cx& x0,
                                                       std::size_t horizon) const override {
    return std::make_shared<TorusOrbitEngine>(m_, x0, horizon);
  }
  const MapClass& map_class() const { return m_; }

 private:
  MapClass m_;
};

inline Semicontraction<TorusTeich> torus_class_map(MapClass m, std::string label = "mapclass") {
  MapOracle<TorusTeich> oracle;
  const double tr = static_cast<double>(m.m[0][0] + m.m[1][1]);
  const double det = static_cast<double>(m.det());
  const double disc = tr * tr - 4.0 * det;
  if (disc > 0.0) {
    const double spr = 0.5 * (std::abs(tr) + std::sqrt(disc));
    oracle.tau = (spr > 1.0) ? std::log(spr) : 0.0;
  } else {
    oracle.tau = 0.0;  // elliptic / finite order
  }
  oracle.provenance = "log spectral radius of the class matrix";
  return Semicontraction<TorusTeich>(std::move(label), std::make_shared<TorusClassCore>(m),
                                     std::move(oracle));
}

}  // namespace specmet
