/*
 * ergodic.hpp — random products over a space: Z_n(w) = f_w ∘ f_Tw ∘ ... ∘
 * f_{T^{n-1}w}, their subadditive distance cocycle a(n, w) = d(x0, Z_n x0),
 * record times, top Lyapunov exponents and curve growth.
 *
 * Composition order: new maps enter on the right, so Z_{n+1} x0 feeds the new
 * point through the whole old word.  Engines answer two queries:
 *
 *   a(n)                    for all n up to the horizon
 *   a(n - k, T^k w)         the shifted suffix values, recomposed on demand
 *
 * and are exact in log scale: matrix-backed families (torus mapping classes,
 * operator left multiplications) renormalize products every few steps and
 * carry the scale separately; generic families recompose points per index.
 *
 * A record time n satisfies a(n) - a(n - k, T^k w) >= (tau - eps) k for all
 * k in [K, n]; the smallest admissible K per eps is reported, never assumed.
 */

#pragma once

#include "specmet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace specmet {

// ---------------------------------------------------------------------------
// Drivers.

enum class DriverKind { iid, markov, rotation };

template <class Space>
struct CocycleDriver {
  DriverKind kind = DriverKind::iid;
  std::vector<Semicontraction<Space>> family;
  std::vector<double> weights;                   // iid
  std::vector<std::vector<double>> transition;   // markov (row-stochastic)
  std::size_t markov_start = 0;
  double angle = 0.61803398874989484820;         // rotation driver
  std::vector<double> partition;                 // interior cut points, increasing
  std::uint64_t seed = 1;
};

template <class Space>
void validate_driver(const CocycleDriver<Space>& d) {
  const std::size_t m = d.family.size();
  if (m == 0) throw parameter_error("driver: empty map family");
  switch (d.kind) {
    case DriverKind::iid: {
      if (d.weights.size() != m) throw parameter_error("driver: weights size mismatch");
      double sum = 0.0;
      for (double w : d.weights) {
        if (w < 0.0) throw parameter_error("driver: negative weight");
        sum += w;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw parameter_error("driver: weights must sum to 1");
      break;
    }
    case DriverKind::markov: {
      if (d.transition.size() != m) throw parameter_error("driver: transition size mismatch");
      for (const auto& row : d.transition) {
        if (row.size() != m) throw parameter_error("driver: transition row size mismatch");
        double sum = 0.0;
        for (double p : row) {
          if (p < 0.0) throw parameter_error("driver: negative transition probability");
          sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
          throw parameter_error("driver: transition rows must sum to 1");
      }
      if (d.markov_start >= m) throw parameter_error("driver: start state out of range");
      // Irreducibility via boolean closure of the positive-entry graph.
      std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) reach[i][j] = d.transition[i][j] > 0.0;
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
          if (!reach[i][j]) throw parameter_error("driver: markov chain not irreducible");
      break;
    }
    case DriverKind::rotation: {
      if (d.partition.size() + 1 != m)
        throw parameter_error("driver: rotation needs |family| - 1 cut points");
      double prev = 0.0;
      for (double c : d.partition) {
        if (!(c > prev && c < 1.0))
          throw parameter_error("driver: cut points must increase inside (0, 1)");
        prev = c;
      }
      break;
    }
  }
}

// The applied-map index sequence; bit-exact for a given (driver, seed).
template <class Space>
std::vector<std::uint32_t> driver_choices(const CocycleDriver<Space>& d, std::size_t n) {
  validate_driver(d);
  std::vector<std::uint32_t> out(n);
  Rng rng(d.seed);
  switch (d.kind) {
    case DriverKind::iid: {
      for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform01();
        double cum = 0.0;
        std::uint32_t pick = static_cast<std::uint32_t>(d.family.size() - 1);
        for (std::size_t i = 0; i < d.weights.size(); ++i) {
          cum += d.weights[i];
          if (u < cum) {
            pick = static_cast<std::uint32_t>(i);
            break;
          }
        }
        out[k] = pick;
      }
      break;
    }
    case DriverKind::markov: {
      std::size_t state = d.markov_start;
      for (std::size_t k = 0; k < n; ++k) {
        out[k] = static_cast<std::uint32_t>(state);
        const double u = rng.uniform01();
        double cum = 0.0;
        std::size_t next = d.transition[state].size() - 1;
        for (std::size_t j = 0; j < d.transition[state].size(); ++j) {
          cum += d.transition[state][j];
          if (u < cum) {
            next = j;
            break;
          }
        }
        state = next;
      }
      break;
    }
    case DriverKind::rotation: {
      double x = rng.uniform01();
      for (std::size_t k = 0; k < n; ++k) {
        std::uint32_t cell = 0;
        while (cell < d.partition.size() && x >= d.partition[cell]) ++cell;
        out[k] = cell;
        x += d.angle;
        x -= std::floor(x);
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cocycle engines.

template <class Space>
class CocycleEngine {
 public:
  virtual ~CocycleEngine() = default;
  virtual std::size_t horizon() const = 0;
  virtual double a(std::size_t n) const = 0;
  // prof[k] = a(n - k, T^k w) for k = 0..n (prof[0] = a(n), prof[n] = 0).
  virtual std::vector<double> suffix_profile(std::size_t n) const = 0;
  // Torus-backed engines also answer curve log-lengths along the word.
  virtual double log_length(std::size_t /*k*/, const CurveClass& /*alpha*/) const {
    throw unsupported_space_error("cocycle engine: no curve lengths on this space");
  }
};

template <class Space>
class GenericCocycleEngine final : public CocycleEngine<Space> {
 public:
  using Point = typename Space::point_type;

  GenericCocycleEngine(const Space& s, std::vector<std::shared_ptr<const MapCore<Space>>> cores,
                       std::vector<std::uint32_t> choices, Point x0)
      : space_(&s), cores_(std::move(cores)), choices_(std::move(choices)), x0_(std::move(x0)) {
    const std::size_t n = choices_.size();
    a_.assign(n + 1, 0.0);
    // Z_n x0 is recomposed per index (suffix-first application); the passes
    // are independent across n.  Exceptions may not cross the parallel
    // region, so failures are collected and rethrown afterwards.
    const std::int64_t m = static_cast<std::int64_t>(n);
    std::exception_ptr failure = nullptr;
#ifdef SPECMET_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::int64_t i = 1; i <= m; ++i) {
      try {
        const auto idx = static_cast<std::size_t>(i);
        Point y = x0_;
        for (std::size_t j = idx; j-- > 0;) {
          y = cores_[choices_[j]]->apply(y);
          if (!orbit_point_resolvable(*space_, y))
            throw horizon_error("cocycle: point lost resolution at word index " +
                                std::to_string(j));
        }
        a_[idx] = space_->dist(x0_, y);
      } catch (...) {
#ifdef SPECMET_HAVE_OPENMP
#pragma omp critical
#endif
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  std::size_t horizon() const override { return choices_.size(); }
  double a(std::size_t n) const override { return a_.at(n); }

  std::vector<double> suffix_profile(std::size_t n) const override {
    std::vector<double> prof(n + 1, 0.0);
    Point y = x0_;
    for (std::size_t j = n; j-- > 0;) {
      y = cores_[choices_[j]]->apply(y);
      prof[j] = space_->dist(x0_, y);
    }
    return prof;
  }

 private:
  const Space* space_;
  std::vector<std::shared_ptr<const MapCore<Space>>> cores_;
  std::vector<std::uint32_t> choices_;
  Point x0_;
  std::vector<double> a_;
};

// Torus engine: the whole trajectory lives in the log-scale product tracker.
class TorusCocycleEngine final : public CocycleEngine<TorusTeich> {
 public:
  TorusCocycleEngine(std::vector<MapClass> letters, std::vector<std::uint32_t> choices, Cx x0)
      : letters_(std::move(letters)), choices_(std::move(choices)), tracker_(x0) {
    for (auto c : choices_) tracker_.push(letters_.at(c));
  }

  std::size_t horizon() const override { return choices_.size(); }
  double a(std::size_t n) const override { return tracker_.base_dist(n); }
  double log_length(std::size_t k, const CurveClass& alpha) const override {
    return tracker_.log_length(k, alpha);
  }
  Cx modulus(std::size_t k) const { return tracker_.modulus(k); }

  std::vector<double> suffix_profile(std::size_t n) const override {
    // Accumulate adj(M_{n-1}) ... adj(M_k) backward with a scale carry.
    std::vector<double> prof(n + 1, 0.0);
    const QForm q0 = tracker_.base_form();
    Mat2 acc;
    double s = 0.0;
    for (std::size_t j = n; j-- > 0;) {
      acc = acc.times(Mat2::adj_of(letters_[choices_[j]]));
      const double m = acc.max_abs();
      if (m > 1e8) {
        acc.m00 /= m;
        acc.m01 /= m;
        acc.m10 /= m;
        acc.m11 /= m;
        s += std::log(m);
      }
      prof[j] = s + 0.5 * std::log(q_pencil_lambda_max(q0, congruent_form(q0, acc)));
    }
    return prof;
  }

 private:
  std::vector<MapClass> letters_;
  std::vector<std::uint32_t> choices_;
  TorusProductTracker tracker_;
};

// Operator-space engine: renormalized right products, norms in log scale.
class MatrixCocycleEngine final : public CocycleEngine<OperatorSpace> {
 public:
  MatrixCocycleEngine(std::vector<Mat> letters, std::vector<std::uint32_t> choices, Mat x0)
      : letters_(std::move(letters)), choices_(std::move(choices)), x0_(std::move(x0)) {
    x0_inv_t_ = Eigen::FullPivLU<Mat>(x0_.transpose()).inverse();
    const std::size_t n = choices_.size();
    a_.assign(n + 1, 0.0);
    Mat p = Mat::Identity(x0_.rows(), x0_.cols());
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      p = p * letters_.at(choices_[k]);
      const double m = p.cwiseAbs().maxCoeff();
      if (m > 1e8 || (m > 0.0 && m < 1e-8)) {
        p /= m;
        s += std::log(m);
      }
      a_[k + 1] = s + std::log(operator_norm((p * x0_).transpose() * x0_inv_t_));
    }
  }

  std::size_t horizon() const override { return choices_.size(); }
  double a(std::size_t n) const override { return a_.at(n); }

  std::vector<double> suffix_profile(std::size_t n) const override {
    std::vector<double> prof(n + 1, 0.0);
    Mat acc = Mat::Identity(x0_.rows(), x0_.cols());
    double s = 0.0;
    for (std::size_t j = n; j-- > 0;) {
      acc = letters_[choices_[j]] * acc;
      const double m = acc.cwiseAbs().maxCoeff();
      if (m > 1e8 || (m > 0.0 && m < 1e-8)) {
        acc /= m;
        s += std::log(m);
      }
      prof[j] = s + std::log(operator_norm((acc * x0_).transpose() * x0_inv_t_));
    }
    return prof;
  }

 private:
  std::vector<Mat> letters_;
  std::vector<std::uint32_t> choices_;
  Mat x0_, x0_inv_t_;
  std::vector<double> a_;
};

// ---------------------------------------------------------------------------
// Engine selection: structured families get the log-scale engines, everything
// else recomposes points.

template <class Space>
std::shared_ptr<CocycleEngine<Space>> make_cocycle_engine(
    const Space& s, const std::vector<Semicontraction<Space>>& family,
    std::vector<std::uint32_t> choices, typename Space::point_type x0) {
  std::vector<std::shared_ptr<const MapCore<Space>>> cores;
  cores.reserve(family.size());
  for (const auto& f : family) cores.push_back(f.core());
  return std::make_shared<GenericCocycleEngine<Space>>(s, std::move(cores),
                                                       std::move(choices), std::move(x0));
}

inline std::shared_ptr<CocycleEngine<TorusTeich>> make_cocycle_engine(
    const TorusTeich& s, const std::vector<Semicontraction<TorusTeich>>& family,
    std::vector<std::uint32_t> choices, Cx x0) {
  std::vector<MapClass> letters;
  for (const auto& f : family) {
    auto core = std::dynamic_pointer_cast<const TorusClassCore>(f.core());
    if (!core) {
      std::vector<std::shared_ptr<const MapCore<TorusTeich>>> cores;
      for (const auto& g : family) cores.push_back(g.core());
      return std::make_shared<GenericCocycleEngine<TorusTeich>>(s, std::move(cores),
                                                                std::move(choices), x0);
    }
    letters.push_back(core->map_class());
  }
  return std::make_shared<TorusCocycleEngine>(std::move(letters), std::move(choices), x0);
}

inline std::shared_ptr<CocycleEngine<OperatorSpace>> make_cocycle_engine(
    const OperatorSpace& s, const std::vector<Semicontraction<OperatorSpace>>& family,
    std::vector<std::uint32_t> choices, Mat x0) {
  std::vector<Mat> letters;
  for (const auto& f : family) {
    auto core = std::dynamic_pointer_cast<const LeftMultCore>(f.core());
    if (!core) {
      std::vector<std::shared_ptr<const MapCore<OperatorSpace>>> cores;
      for (const auto& g : family) cores.push_back(g.core());
      return std::make_shared<GenericCocycleEngine<OperatorSpace>>(
          s, std::move(cores), std::move(choices), std::move(x0));
    }
    letters.push_back(core->factor());
  }
  return std::make_shared<MatrixCocycleEngine>(std::move(letters), std::move(choices),
                                               std::move(x0));
}

// ---------------------------------------------------------------------------

template <class Space>
struct CocycleTrace {
  using Point = typename Space::point_type;
  Point x0;
  std::vector<std::uint32_t> choices;
  std::vector<double> a;
  std::shared_ptr<CocycleEngine<Space>> engine;
  double max_cocycle_violation = 0.0;  // sampled a(n+m) - a(n) - a(m, T^n w)

  std::size_t horizon() const { return choices.size(); }
  double tau_hat() const { return a.back() / static_cast<double>(choices.size()); }
  double fekete_inf() const {
    double v = kInf;
    for (std::size_t k = 1; k < a.size(); ++k)
      v = std::min(v, a[k] / static_cast<double>(k));
    return v;
  }
};

template <class Space>
CocycleTrace<Space> compose_cocycle(const Space& s, const CocycleDriver<Space>& driver,
                                    std::size_t horizon, typename Space::point_type x0,
                                    std::size_t cocycle_samples = 64) {
  if (horizon < 1) throw parameter_error("compose_cocycle: horizon must be >= 1");
  CocycleTrace<Space> tr;
  tr.x0 = x0;
  tr.choices = driver_choices(driver, horizon);
  tr.engine = make_cocycle_engine(s, driver.family, tr.choices, std::move(x0));
  tr.a.resize(horizon + 1);
  for (std::size_t n = 0; n <= horizon; ++n) tr.a[n] = tr.engine->a(n);

  // Sampled subadditive cocycle inequality.
  Rng rng(driver.seed ^ 0x5eedULL);
  for (std::size_t t = 0; t < cocycle_samples; ++t) {
    const std::size_t total = 2 + rng.index(horizon - 1);
    const std::size_t n = 1 + rng.index(total - 1);
    const auto prof = tr.engine->suffix_profile(total);
    tr.max_cocycle_violation =
        std::max(tr.max_cocycle_violation, tr.a[total] - tr.a[n] - prof[n]);
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Record times of the subadditive cocycle against its shifted suffixes.

struct KmRecordReport {
  std::vector<std::size_t> records;  // sandwich-filtered, lag <= k_eps
  std::uint32_t k_eps = 0;           // smallest admissible lag over all candidates
  double tau_hat = 0.0;
  double eps = 0.0;
  std::size_t candidates_checked = 0;
};

template <class Space>
KmRecordReport km_record_times(const CocycleTrace<Space>& tr, double eps,
                               std::uint32_t lag_override = 0,
                               par::Exec exec = par::default_exec()) {
  if (!(eps > 0.0)) throw parameter_error("km_record_times: eps must be positive");
  KmRecordReport rep;
  rep.eps = eps;
  rep.tau_hat = tr.tau_hat();
  rep.candidates_checked = tr.horizon();
  const double rate = rep.tau_hat - eps;

  auto engine = tr.engine;
  const auto lags = par::km_lag_scan(
      tr.horizon(), [engine](std::size_t n) { return engine->suffix_profile(n); }, tr.a,
      rate, exec);

  std::uint32_t k_eps = lag_override;
  if (k_eps == 0) {
    k_eps = static_cast<std::uint32_t>(tr.horizon() + 1);
    for (std::size_t n = 1; n <= tr.horizon(); ++n)
      if (lags[n] <= n) k_eps = std::min(k_eps, lags[n]);
  }
  rep.k_eps = k_eps;
  for (std::size_t n = 1; n <= tr.horizon(); ++n) {
    if (lags[n] > k_eps || lags[n] > n) continue;
    const double nn = static_cast<double>(n);
    if (tr.a[n] < (rep.tau_hat - eps) * nn - kAlgebraicTol) continue;
    if (tr.a[n] > (rep.tau_hat + eps) * nn + kAlgebraicTol) continue;
    rep.records.push_back(n);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Top Lyapunov exponent of an operator cocycle.

struct LyapunovReport {
  double exponent = 0.0;    // a(n)/n at the horizon
  double fekete_inf = 0.0;
  double clt_tol = 0.0;     // 4 sigma_hat / sqrt(blocks) from block increments
  std::size_t horizon = 0;
};

inline LyapunovReport top_lyapunov(const OperatorSpace& s,
                                   const CocycleDriver<OperatorSpace>& driver,
                                   std::size_t horizon) {
  auto tr = compose_cocycle(s, driver, horizon, s.base_point());
  LyapunovReport rep;
  rep.horizon = horizon;
  rep.exponent = tr.tau_hat();
  rep.fekete_inf = tr.fekete_inf();
  constexpr std::size_t blocks = 32;
  if (horizon >= 2 * blocks) {
    const std::size_t len = horizon / blocks;
    std::vector<double> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
      means[b] = (tr.a[(b + 1) * len] - tr.a[b * len]) / static_cast<double>(len);
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= blocks;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (blocks - 1);
    rep.clt_tol = 4.0 * std::sqrt(var / blocks);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Curve growth along a torus cocycle.

struct CurveGrowthReport {
  CurveClass alpha;
  double rate_cesaro = 0.0;   // (1/n) log l_{Z_n x0}(alpha)
  double rate_step = 0.0;     // log l_{Z_n x0}(alpha) - log l_{Z_{n-1} x0}(alpha)
  double tau_hat = 0.0;
  double gap = 0.0;           // |rate_cesaro - tau_hat|
  std::vector<std::size_t> ks;       // sampled indices
  std::vector<double> log_lengths;   // log l_{Z_k x0}(alpha) at ks
  std::size_t horizon = 0;
};

template <class Space>
CurveGrowthReport curve_growth(const CocycleTrace<Space>& tr, const CurveClass& alpha) {
  if (!is_primitive(alpha)) throw parameter_error("curve_growth: alpha not primitive");
  CurveGrowthReport rep;
  rep.alpha = alpha;
  rep.horizon = tr.horizon();
  const std::size_t n = tr.horizon();
  const double base = tr.engine->log_length(0, alpha);
  const double ln = tr.engine->log_length(n, alpha) - base;
  rep.rate_cesaro = ln / static_cast<double>(n);
  rep.rate_step =
      tr.engine->log_length(n, alpha) - tr.engine->log_length(n - 1, alpha);
  rep.tau_hat = tr.tau_hat();
  rep.gap = std::abs(rep.rate_cesaro - rep.tau_hat);
  for (std::size_t k = 1; k <= n; k = (k < 16 ? k + 1 : k + std::max<std::size_t>(1, n / 64))) {
    rep.ks.push_back(k);
    rep.log_lengths.push_back(tr.engine->log_length(k, alpha));
  }
  if (rep.ks.empty() || rep.ks.back() != n) {
    rep.ks.push_back(n);
    rep.log_lengths.push_back(tr.engine->log_length(n, alpha));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Dominant curve via pigeonhole across record indices.

inline std::vector<CurveClass> default_curve_basis() {
  return {CurveClass{1, 0}, CurveClass{0, 1}, CurveClass{1, 1}};
}

struct DominantCurveReport {
  CurveClass alpha1;                       // realizer at the terminal record
  CurveClass modal;                        // most frequent realizer over records
  std::map<std::size_t, std::size_t> realizer_counts;  // basis index -> count
  double max_additive_gap = 0.0;  // sup gap L(x0, Z_n x0) - max-over-basis, over records
  double lower_bound_margin = 0.0;  // min over sampled k of the growth lower bound
  std::size_t top_record = 0;
  std::uint32_t k_eps = 0;
  double tau_hat = 0.0;
};

template <class Space>
DominantCurveReport dominant_curve(const CocycleTrace<Space>& tr,
                                   std::vector<CurveClass> basis, double eps) {
  if (basis.empty()) throw parameter_error("dominant_curve: empty basis");
  for (auto& b : basis) {
    if (!is_primitive(b)) throw parameter_error("dominant_curve: basis curve not primitive");
    b = b.canonical();
  }
  std::sort(basis.begin(), basis.end());

  const auto km = km_record_times(tr, eps);
  if (km.records.empty()) throw horizon_error("dominant_curve: no record times");

  DominantCurveReport rep;
  rep.k_eps = km.k_eps;
  rep.tau_hat = km.tau_hat;
  rep.top_record = km.records.back();

  auto ratio_log = [&](std::size_t n, const CurveClass& a) {
    return tr.engine->log_length(n, a) - tr.engine->log_length(0, a);
  };
  auto realizer_at = [&](std::size_t n) {
    std::size_t best = 0;
    double best_v = -kInf;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const double v = ratio_log(n, basis[i]);
      if (v > best_v) {  // ties keep the lex-smaller (basis is sorted)
        best_v = v;
        best = i;
      }
    }
    return std::pair<std::size_t, double>{best, best_v};
  };

  for (std::size_t n : km.records) {
    const auto [idx, v] = realizer_at(n);
    rep.realizer_counts[idx]++;
    rep.max_additive_gap = std::max(rep.max_additive_gap, tr.a[n] - v);
  }
  std::size_t modal = 0, modal_count = 0;
  for (const auto& [idx, count] : rep.realizer_counts)
    if (count > modal_count) {
      modal = idx;
      modal_count = count;
    }
  rep.modal = basis[modal];
  rep.alpha1 = basis[realizer_at(rep.top_record).first];

  // Growth lower bound at the top record:
  //   log l_{Z_k}(a1) >= log l_{Z_ni}(a1) - a(ni) + (tau - eps) k
  // for k in [K_eps, ni]; report the minimum margin over sampled k.
  const std::size_t ni = rep.top_record;
  const double len_ni = tr.engine->log_length(ni, rep.alpha1);
  double margin = kInf;
  const std::size_t k0 = std::max<std::size_t>(1, rep.k_eps);
  const std::size_t stride = std::max<std::size_t>(1, (ni - k0 + 1) / 128);
  for (std::size_t k = k0; k <= ni; k += stride) {
    const double lhs = tr.engine->log_length(k, rep.alpha1);
    const double rhs = len_ni - tr.a[ni] + (rep.tau_hat - eps) * static_cast<double>(k);
    margin = std::min(margin, lhs - rhs);
  }
  rep.lower_bound_margin = margin;
  return rep;
}

}  // namespace specmet
