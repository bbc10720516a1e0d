/*
 * spectral.hpp — spectral invariants of a single semicontraction.
 *
 * The estimation chain is: iterate an orbit, read the drift from a_n / n with
 * the Fekete running infimum as a certified upper bound on the limit, scan
 * for record times of b(n) = a_n - (tau - eps) n, and anchor a metric
 * functional at the last record.  The record property makes the descent
 *
 *     h(f^k x0) <= -(tau - eps) k        for k up to the record index
 *
 * an identity (up to roundoff), not an asymptotic hope, which is what
 * verify_descent certifies.  Displacement search, the elliptic / hyperbolic /
 * parabolic classification, the tracial comparison, the inverse-isometry
 * bound, and the affine mean-ergodic pipeline sit on top of the same pieces.
 */

#pragma once

#include "specmet/maps.hpp"
#include "specmet/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace specmet {

// ---------------------------------------------------------------------------

template <class Space>
struct OrbitTrace {
  using Point = typename Space::point_type;

  Point x0;
  std::size_t requested_horizon = 0;
  std::size_t horizon = 0;  // valid length; < requested only when truncated
  bool truncated = false;
  std::vector<double> a;     // a[k] = d(x0, f^k x0), k = 0..horizon
  std::vector<double> step;  // step[k] = d(f^k x0, f^{k+1} x0)
  std::shared_ptr<OrbitEngine<Space>> engine;

  // Sampled-law diagnostics, filled by orbit().
  double max_subadd_violation = 0.0;   // a_{i+j} - a_i - a_j over samples
  double max_step_increase = 0.0;      // step_{k+1} - step_k over all k

  double ratio(std::size_t k) const { return a.at(k) / static_cast<double>(k); }
};

struct OrbitPolicy {
  bool allow_truncation = false;
  std::size_t subadd_samples = 256;
  std::uint64_t seed = 17;
};

template <class Space>
OrbitTrace<Space> orbit(const Space& s, const Semicontraction<Space>& f,
                        typename Space::point_type x0, std::size_t horizon,
                        OrbitPolicy policy = {}) {
  if (horizon < 1) throw parameter_error("orbit: horizon must be >= 1");
  OrbitTrace<Space> tr;
  tr.x0 = x0;
  tr.requested_horizon = horizon;
  tr.engine = make_orbit_engine(s, f, std::move(x0), horizon);
  tr.horizon = tr.engine->horizon();
  tr.truncated = tr.engine->truncated();
  if (tr.truncated && !policy.allow_truncation)
    throw horizon_error("orbit of '" + f.label() + "' lost resolution at step " +
                        std::to_string(tr.horizon + 1));
  if (tr.horizon < 1)
    throw horizon_error("orbit of '" + f.label() + "' has no valid step");

  tr.a.resize(tr.horizon + 1);
  for (std::size_t k = 0; k <= tr.horizon; ++k) tr.a[k] = tr.engine->base_dist(k);
  tr.step.resize(tr.horizon);
  for (std::size_t k = 0; k < tr.horizon; ++k)
    tr.step[k] = tr.engine->pair_dist(k, k + 1);

  for (std::size_t k = 0; k + 1 < tr.horizon; ++k)
    tr.max_step_increase = std::max(tr.max_step_increase, tr.step[k + 1] - tr.step[k]);
  Rng rng(policy.seed);
  for (std::size_t t = 0; t < policy.subadd_samples; ++t) {
    const std::size_t i = 1 + rng.index(tr.horizon);
    const std::size_t j = 1 + rng.index(tr.horizon);
    if (i + j > tr.horizon) continue;
    tr.max_subadd_violation =
        std::max(tr.max_subadd_violation, tr.a[i + j] - tr.a[i] - tr.a[j]);
  }
  return tr;
}

// ---------------------------------------------------------------------------

struct DriftEstimate {
  double tau_hat = 0.0;     // a_n / n at the horizon
  double fekete_inf = 0.0;  // min_k a_k / k; upper bound on the limit
  std::size_t horizon = 0;
  std::optional<double> oracle_tau;
  std::optional<double> oracle_gap_scaled;  // |tau_hat - tau| * n
};

template <class Space>
DriftEstimate drift(const OrbitTrace<Space>& tr,
                    std::optional<double> oracle_tau = std::nullopt) {
  if (tr.horizon < 1) throw parameter_error("drift: trace too short");
  DriftEstimate d;
  d.horizon = tr.horizon;
  d.tau_hat = tr.a[tr.horizon] / static_cast<double>(tr.horizon);
  d.fekete_inf = kInf;
  for (std::size_t k = 1; k <= tr.horizon; ++k)
    d.fekete_inf = std::min(d.fekete_inf, tr.a[k] / static_cast<double>(k));
  if (oracle_tau) {
    d.oracle_tau = oracle_tau;
    d.oracle_gap_scaled = std::abs(d.tau_hat - *oracle_tau) * static_cast<double>(tr.horizon);
  }
  return d;
}

// Record times of b(n) = a_n - (tau - eps) n: indices where b strictly
// exceeds every earlier value (b(0) = 0 included).
template <class Space>
std::vector<std::size_t> record_times(const OrbitTrace<Space>& tr, double eps,
                                      double tau_hat) {
  if (!(eps > 0.0)) throw parameter_error("record_times: eps must be positive");
  const double rate = tau_hat - eps;
  std::vector<std::size_t> records;
  double running_max = 0.0;  // b(0)
  for (std::size_t n = 1; n <= tr.horizon; ++n) {
    const double b = tr.a[n] - rate * static_cast<double>(n);
    if (b > running_max) {
      records.push_back(n);
      running_max = b;
    }
  }
  return records;
}

inline std::vector<double> default_eps_schedule() {
  std::vector<double> eps;
  for (int i = 1; i <= 10; ++i) eps.push_back(std::ldexp(1.0, -i));
  return eps;
}

// ---------------------------------------------------------------------------
// Functional extraction at record times.

template <class Space>
struct Extraction {
  MetricFunctional<Space> h;
  std::function<double(std::size_t)> h_on_orbit;  // exact h(f^k x0)
  std::size_t record_index = 0;
  double eps_used = 0.0;
  DriftEstimate drift;
  OrbitTrace<Space> trace;
  double max_descent_excess = 0.0;  // max_k h(f^k x0) + (tau - eps) k, k <= record
};

template <class Space>
Extraction<Space> extract_functional(const Space& s, const Semicontraction<Space>& f,
                                     typename Space::point_type x0,
                                     std::vector<double> eps_schedule, std::size_t horizon,
                                     OrbitPolicy policy = {}) {
  if (eps_schedule.empty()) eps_schedule = default_eps_schedule();
  for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] > eps_schedule[i + 1]))
      throw parameter_error("extract_functional: eps schedule must strictly decrease");
  if (!(eps_schedule.back() > 0.0))
    throw parameter_error("extract_functional: eps floor must be positive");

  Extraction<Space> out;
  out.trace = orbit(s, f, std::move(x0), horizon, policy);
  out.drift = drift(out.trace, f.oracle().tau);

  // Largest record time first, then the smallest eps achieving it.  When
  // tau_hat carries finite-horizon inflation, eps below the inflation makes
  // b(n) slope downward and strands the records at small n, so the floor eps
  // is not automatically the right one: the anchor must stay deep in the
  // orbit for the functional to approximate the limit.
  out.record_index = 0;
  for (double eps : eps_schedule) {
    auto recs = record_times(out.trace, eps, out.drift.tau_hat);
    if (!recs.empty() && recs.back() >= out.record_index) {
      out.record_index = recs.back();
      out.eps_used = eps;
    }
  }
  if (out.record_index == 0)
    throw horizon_error("extract_functional: no record time within horizon");

  const std::size_t n_star = out.record_index;
  auto engine = out.trace.engine;
  const double a_star = out.trace.a[n_star];
  typename MetricFunctional<Space>::Empirical tag{engine->point(n_star), n_star};
  out.h = MetricFunctional<Space>{
      tag, [engine, n_star, a_star](const typename Space::point_type& y) {
        return engine->dist_to(n_star, y) - a_star;
      }};
  out.h_on_orbit = [engine, n_star, a_star](std::size_t k) {
    return engine->pair_dist(k, n_star) - a_star;
  };

  const double rate = out.drift.tau_hat - out.eps_used;
  for (std::size_t k = 1; k <= n_star; ++k)
    out.max_descent_excess = std::max(
        out.max_descent_excess, out.h_on_orbit(k) + rate * static_cast<double>(k));
  return out;
}

// ---------------------------------------------------------------------------
// Descent certificate.

struct DescentReport {
  double max_excess = 0.0;        // max_k h(f^k x0) + tau k - slack(k)
  double terminal_rate = 0.0;     // -h(f^K x0) / K
  double terminal_rate_gap = 0.0; // |terminal_rate - tau|
  double lower_bound_margin = 0.0;  // min_k h(f^k x0) + a_k  (>= 0 up to fp)
  std::size_t checked_horizon = 0;
  bool pass = false;
};

template <class Space>
DescentReport verify_descent(const OrbitTrace<Space>& tr,
                             const std::function<double(std::size_t)>& h_on_orbit,
                             double tau, double slack_linear, double slack_const,
                             std::size_t k_check = 0) {
  DescentReport rep;
  const std::size_t kmax = (k_check == 0) ? tr.horizon : std::min(k_check, tr.horizon);
  rep.checked_horizon = kmax;
  double max_excess = -kInf, lower_margin = kInf;
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double hk = h_on_orbit(k);
    max_excess = std::max(max_excess,
                          hk + tau * static_cast<double>(k) -
                              slack_linear * static_cast<double>(k));
    lower_margin = std::min(lower_margin, hk + tr.a[k]);
  }
  rep.max_excess = max_excess;
  rep.lower_bound_margin = lower_margin;
  rep.terminal_rate = -h_on_orbit(kmax) / static_cast<double>(kmax);
  rep.terminal_rate_gap = std::abs(rep.terminal_rate - tau);
  rep.pass = (max_excess <= slack_const) && (lower_margin >= -kAlgebraicTol);
  return rep;
}

// Adapter for closed-form functionals: evaluates h at the stored orbit points
// (only as resolvable as the points themselves; extraction results carry
// their own exact h_on_orbit instead).
template <class Space>
std::function<double(std::size_t)> on_orbit(const OrbitTrace<Space>& tr,
                                            const MetricFunctional<Space>& h) {
  auto engine = tr.engine;
  auto eval = h.eval;
  return [engine, eval](std::size_t k) { return eval(engine->point(k)); };
}

// ---------------------------------------------------------------------------
// Displacement search and classification.

template <class Space>
struct SearchWindow {
  using Point = typename Space::point_type;
  std::vector<Point> samples;
  std::function<bool(const Point&)> interior;          // strictly inside the window
  std::function<double(const Point&)> depth;           // 0 = center .. 1 = window edge
  std::function<Point(const Point&, double, Rng&)> perturb;  // local move at scale
  std::string description;
};

struct SearchBudget {
  std::size_t local_iterations = 200;
  std::uint64_t seed = 23;
};

template <class Space>
struct DisplacementReport {
  using Point = typename Space::point_type;
  double value = kInf;
  Point argmin;
  bool interior = false;
  double argmin_depth = 0.0;
  std::vector<double> shell_min;  // min displacement per depth decile
};

template <class Space>
DisplacementReport<Space> min_displacement(const Space& s, const Semicontraction<Space>& f,
                                           const SearchWindow<Space>& window,
                                           SearchBudget budget = {}) {
  if (window.samples.empty()) throw parameter_error("min_displacement: empty sampler");
  DisplacementReport<Space> rep;
  rep.shell_min.assign(10, kInf);

  auto apply = [&f](const typename Space::point_type& p) { return f(p); };
  std::size_t best_idx = 0;
  double best = kInf;
  for (std::size_t i = 0; i < window.samples.size(); ++i) {
    const double v = s.dist(window.samples[i], apply(window.samples[i]));
    const double dep = std::clamp(window.depth(window.samples[i]), 0.0, 1.0);
    auto shell = std::min<std::size_t>(9, static_cast<std::size_t>(dep * 10.0));
    rep.shell_min[shell] = std::min(rep.shell_min[shell], v);
    if (v < best) {
      best = v;
      best_idx = i;
    }
  }

  // Local refinement, seeded and serial.
  Rng rng(budget.seed);
  auto current = window.samples[best_idx];
  double scale = 0.25;
  for (std::size_t it = 0; it < budget.local_iterations; ++it) {
    auto cand = window.perturb(current, scale, rng);
    if (!s.contains(cand)) continue;
    const double v = s.dist(cand, apply(cand));
    if (v < best) {
      best = v;
      current = cand;
    } else {
      scale *= 0.97;
    }
  }
  rep.value = best;
  rep.argmin = current;
  rep.interior = window.interior(current);
  rep.argmin_depth = std::clamp(window.depth(current), 0.0, 1.0);
  return rep;
}

enum class MapKind { elliptic, hyperbolic, parabolic, undetermined };

inline const char* map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::elliptic: return "elliptic";
    case MapKind::hyperbolic: return "hyperbolic";
    case MapKind::parabolic: return "parabolic";
    default: return "undetermined";
  }
}

template <class Space>
struct Classification {
  MapKind kind = MapKind::undetermined;
  double d_f_hat = kInf;
  double tau_hat = 0.0;
  DisplacementReport<Space> displacement;
  std::string evidence;
};

struct ClassifyBudget {
  std::size_t horizon = 2000;
  SearchBudget search;
};

// Tolerance-based trichotomy; attainment is only ever declared inside the
// search window, so "parabolic" means the infimum runs to the window edge.
template <class Space>
Classification<Space> classify(const Space& s, const Semicontraction<Space>& f,
                               const SearchWindow<Space>& window, double tol,
                               ClassifyBudget budget = {}) {
  if (!(tol > 0.0)) throw parameter_error("classify: tol must be positive");
  Classification<Space> out;
  OrbitPolicy policy;
  policy.allow_truncation = true;
  const auto tr = orbit(s, f, s.base_point(), budget.horizon, policy);
  out.tau_hat = drift(tr).tau_hat;
  out.displacement = min_displacement(s, f, window, budget.search);
  out.d_f_hat = out.displacement.value;

  // Shells with samples, scanned from the center out.  Parabolic evidence is
  // a strictly improving tail toward the edge; a hyperbolic axis instead has
  // flat shell minima, so the argmin landing near the edge is no objection.
  const auto& shells = out.displacement.shell_min;
  bool monotone = true;
  double first = kInf, last = kInf, prev = kInf;
  for (double v : shells) {
    if (v == kInf) continue;
    if (first == kInf) first = v;
    if (v > prev + tol) monotone = false;
    prev = v;
    last = v;
  }
  const bool strictly_improving = monotone && first != kInf && (first - last > tol);
  const bool edge_min = out.displacement.argmin_depth > 0.85;

  if (out.d_f_hat < tol && out.displacement.interior && !edge_min) {
    out.kind = MapKind::elliptic;
    out.evidence = "displacement < tol at interior point";
  } else if (out.tau_hat >= tol && out.d_f_hat <= out.tau_hat + tol) {
    out.kind = MapKind::hyperbolic;
    out.evidence = "drift >= tol and displacement ~ drift attained in window";
  } else if (strictly_improving && edge_min) {
    out.kind = MapKind::parabolic;
    out.evidence = "displacement decreases toward the window edge without attainment";
  } else {
    out.kind = MapKind::undetermined;
    out.evidence = "no criterion matched within budgets";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tracial property tau(fg) = tau(gf).

struct TracialReport {
  double tau_fg = 0.0, tau_gf = 0.0;
  double diff = 0.0;
  double gap_fg = 0.0, gap_gf = 0.0;  // |tau_hat(H) - tau_hat(H/2)| convergence gaps
  bool pass = false;
};

template <class Space>
TracialReport tracial_check(const Space& s, const Semicontraction<Space>& f,
                            const Semicontraction<Space>& g, std::size_t horizon,
                            OrbitPolicy policy = {}) {
  const auto fg = compose(f, g);
  const auto gf = compose(g, f);
  const auto tr_fg = orbit(s, fg, s.base_point(), horizon, policy);
  const auto tr_gf = orbit(s, gf, s.base_point(), horizon, policy);
  TracialReport rep;
  rep.tau_fg = drift(tr_fg).tau_hat;
  rep.tau_gf = drift(tr_gf).tau_hat;
  rep.diff = std::abs(rep.tau_fg - rep.tau_gf);
  auto halfway_gap = [](const auto& tr) {
    const std::size_t h = tr.horizon, hh = std::max<std::size_t>(1, h / 2);
    return std::abs(tr.a[h] / static_cast<double>(h) - tr.a[hh] / static_cast<double>(hh));
  };
  rep.gap_fg = halfway_gap(tr_fg);
  rep.gap_gf = halfway_gap(tr_gf);
  rep.pass = rep.diff <= 2.0 * (rep.gap_fg + rep.gap_gf) + kAlgebraicTol;
  return rep;
}

// ---------------------------------------------------------------------------
// Inverse-isometry bound: with h extracted from f's forward orbit,
// h(f^{-n} x0) >= tau(f^{-1}) n.  For an isometry, d(f^{-n} x0, f^m x0) =
// d(x0, f^{m+n} x0), so the backward evaluations ride the forward engine
// exactly.

struct InverseBoundReport {
  double tau_hat = 0.0;       // drift of f
  double tau_inv_hat = 0.0;   // drift of f^{-1}
  double margin_forward = 0.0;   // min_n h_f(f^{-n} x0) - tau_inv n
  double margin_backward = 0.0;  // mirrored orientation
  double lower_bound_margin = 0.0;  // min_n h_f(f^{-n} x0) + d(x0, f^{-n} x0)
  std::size_t horizon = 0;
};

template <class Space>
InverseBoundReport isometry_inverse_bound(const Space& s, const Semicontraction<Space>& f,
                                          std::size_t horizon,
                                          std::vector<double> eps_schedule = {},
                                          OrbitPolicy policy = {}) {
  if (!f.is_isometry())
    throw unsupported_space_error("isometry_inverse_bound: map is not an isometry");
  auto finv = f.inverse();
  if (!finv)
    throw unsupported_space_error("isometry_inverse_bound: no computable inverse");

  // Forward trace long enough to reach index record + n for all n <= horizon.
  auto ext_f = extract_functional(s, f, s.base_point(), eps_schedule, horizon, policy);
  auto ext_b = extract_functional(s, *finv, s.base_point(), eps_schedule, horizon, policy);
  const auto tr_b = orbit(s, *finv, s.base_point(), horizon, policy);
  const auto tr_f = ext_f.trace;

  InverseBoundReport rep;
  rep.horizon = horizon;
  rep.tau_hat = ext_f.drift.tau_hat;
  rep.tau_inv_hat = drift(tr_b).tau_hat;

  const std::size_t nf = ext_f.record_index;
  const std::size_t nb = ext_b.record_index;
  // h_f(f^{-n} x0) = d(f^{-n} x0, f^{nf} x0) - a_f[nf] = a_f[n + nf] - a_f[nf]
  // needs forward indices up to nf + horizon; extend via a second trace.
  const auto tr_f_long = orbit(s, f, s.base_point(), nf + horizon, policy);
  const auto tr_b_long = orbit(s, *finv, s.base_point(), nb + horizon, policy);

  double margin_f = kInf, margin_b = kInf, lower = kInf;
  for (std::size_t n = 1; n <= horizon; ++n) {
    const double h_f_at_back = tr_f_long.a[n + nf] - tr_f_long.a[nf];
    margin_f = std::min(margin_f,
                        h_f_at_back - rep.tau_inv_hat * static_cast<double>(n));
    lower = std::min(lower, h_f_at_back + tr_b.a[n]);
    const double h_b_at_fwd = tr_b_long.a[n + nb] - tr_b_long.a[nb];
    margin_b = std::min(margin_b, h_b_at_fwd - rep.tau_hat * static_cast<double>(n));
  }
  rep.margin_forward = margin_f;
  rep.margin_backward = margin_b;
  rep.lower_bound_margin = lower;
  return rep;
}

// ---------------------------------------------------------------------------
// Mean ergodic pipeline for f(w) = U w + v on (R^d, ||.||_2).

struct MeanErgodicReport {
  Vec average;      // (1/n) sum U^k v at the horizon
  Vec projection;   // P v onto ker(U - I)
  double final_dev = 0.0;        // ||average - P v||
  double max_scaled_dev = 0.0;   // max_n n ||avg_n - P v||
  double tau_hat = 0.0;
  double tau_gap = 0.0;          // |tau_hat - ||P v|||
  double functional_match_dev = 0.0;  // extracted h vs -(y, Pv/||Pv||) on probes
  std::size_t horizon = 0;
};

inline Vec fixed_space_projection(const Eigen::MatrixXd& u, const Vec& v) {
  const Eigen::Index d = u.rows();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(u - Eigen::MatrixXd::Identity(d, d));
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() == 0 || lu.rank() == d) return Vec(static_cast<std::size_t>(d), 0.0);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(kernel)
                                .householderQ() *
                            Eigen::MatrixXd::Identity(d, kernel.cols());
  return from_eigen(q * (q.transpose() * to_eigen(v)));
}

inline MeanErgodicReport mean_ergodic(const Eigen::MatrixXd& u, const Vec& v,
                                      std::size_t horizon, std::size_t n_probes = 16,
                                      std::uint64_t seed = 101) {
  const Eigen::Index d = u.rows();
  if (u.cols() != d || static_cast<Eigen::Index>(v.size()) != d)
    throw parameter_error("mean_ergodic: dimension mismatch");
  if ((u.transpose() * u - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw precondition_error("mean_ergodic: U is not orthogonal");
  if (horizon < 1) throw parameter_error("mean_ergodic: horizon must be >= 1");

  MeanErgodicReport rep;
  rep.horizon = horizon;
  rep.projection = fixed_space_projection(u, v);
  const Eigen::VectorXd pv = to_eigen(rep.projection);
  const Eigen::VectorXd ve = to_eigen(v);

  // w_n = f^n(0) = sum_{k<n} U^k v, updated incrementally.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double max_scaled = 0.0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    w = u * w + ve;
    max_scaled = std::max(max_scaled, (w - static_cast<double>(n) * pv).norm());
  }
  rep.average = from_eigen(Eigen::VectorXd(w / static_cast<double>(horizon)));
  rep.final_dev = (w / static_cast<double>(horizon) - pv).norm();
  rep.max_scaled_dev = max_scaled;  // equals max_n n ||avg_n - Pv||

  const EuclideanPSpace space(static_cast<std::size_t>(d), 2.0);
  auto f = affine_isometry_map(space, u, v, "mean-ergodic-affine");
  auto ext = extract_functional(space, f, space.base_point(), {}, horizon);
  rep.tau_hat = ext.drift.tau_hat;
  const double pv_norm = pv.norm();
  rep.tau_gap = std::abs(rep.tau_hat - pv_norm);

  if (pv_norm > 1e-12) {
    Rng rng(seed);
    const Vec w_dir = from_eigen(Eigen::VectorXd(pv / pv_norm));
    double dev = 0.0;
    for (std::size_t i = 0; i < n_probes; ++i) {
      const Vec y = rng.vector(static_cast<std::size_t>(d), -2.0, 2.0);
      dev = std::max(dev, std::abs(ext.h(y) + dot(y, w_dir)));
    }
    rep.functional_match_dev = dev;
  }
  return rep;
}

}  // namespace specmet
