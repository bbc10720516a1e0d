#include "specmet/experiments.hpp"

#include "specmet/serialize.hpp"
#include "specmet/zoo.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <set>
#include <variant>

namespace specmet {

namespace {

// ---------------------------------------------------------------------------
// Config plumbing.

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw config_error("config error at '" + path + "': " + what);
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  if (!obj.is_object()) fail_at(path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail_at(path + "." + key, "unknown key");
}

const Json& need(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail_at(path + "." + key, "missing required key");
  return obj.at(key);
}

double as_double(const Json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  if (!j.is_number()) fail_at(path, "expected a number");
  return j.get<double>();
}

std::size_t as_count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0)
    fail_at(path, "expected a positive integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

Vec as_vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a nonempty array of numbers");
  Vec v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

Cx as_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail_at(path, "expected [re, im]");
  return Cx(as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]"));
}

Mat as_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail_at(path, "expected a matrix (array of rows)");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail_at(path, "expected a matrix (array of rows)");
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) fail_at(rp, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          as_double(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

// Tolerance tiers with stated defaults, overridable from the config block.
struct Tolerances {
  double algebraic = kAlgebraicTol;           // exact identities
  double geometric = kGeometricTol;           // geometric limits
  double ergodic = kErgodicTol;               // ergodic limits
  double functional_match = 1e-3;             // anchored vs catalog functionals
  double boundary_euclid = 1e-6;              // orbit vs attracting point
  double rate = 0.02;                         // Monte-Carlo growth rates
  double mean_dev_cap = 3.0;                  // n * ||avg_n - Pv|| bound

  Json echo() const {
    return Json{{"algebraic", algebraic},     {"geometric", geometric},
                {"ergodic", ergodic},         {"functional_match", functional_match},
                {"boundary_euclid", boundary_euclid}, {"rate", rate},
                {"mean_dev_cap", mean_dev_cap}};
  }
};

Tolerances parse_tolerances(const Json& cfg) {
  Tolerances t;
  if (!cfg.contains("tolerances")) return t;
  const Json& j = cfg.at("tolerances");
  reject_unknown(j,
                 {"algebraic", "geometric", "ergodic", "functional_match",
                  "boundary_euclid", "rate", "mean_dev_cap"},
                 "tolerances");
  auto get = [&](const char* k, double& slot) {
    if (j.contains(k)) slot = as_double(j.at(k), std::string("tolerances.") + k);
  };
  get("algebraic", t.algebraic);
  get("geometric", t.geometric);
  get("ergodic", t.ergodic);
  get("functional_match", t.functional_match);
  get("boundary_euclid", t.boundary_euclid);
  get("rate", t.rate);
  get("mean_dev_cap", t.mean_dev_cap);
  return t;
}

// ---------------------------------------------------------------------------
// Space and map descriptors.

using SpaceVariant =
    std::variant<EuclideanPSpace, PoincareDisk, PositiveCone, OperatorSpace, TorusTeich>;

SpaceVariant parse_space(const Json& j, const std::string& path) {
  const std::string type = need(j, "type", path).get<std::string>();
  if (type == "euclidean") {
    reject_unknown(j, {"type", "dim", "p"}, path);
    const std::size_t dim = as_count(need(j, "dim", path), path + ".dim");
    const double p = j.contains("p") ? as_double(j.at("p"), path + ".p") : 2.0;
    return EuclideanPSpace(dim, p);
  }
  if (type == "poincare-disk") {
    reject_unknown(j, {"type"}, path);
    return PoincareDisk{};
  }
  if (type == "cone") {
    reject_unknown(j, {"type", "dim", "variant"}, path);
    const std::size_t dim = as_count(need(j, "dim", path), path + ".dim");
    const std::string variant = need(j, "variant", path).get<std::string>();
    if (variant == "funk") return PositiveCone(dim, ConeVariant::funk);
    if (variant == "thompson") return PositiveCone(dim, ConeVariant::thompson);
    fail_at(path + ".variant", "expected 'funk' or 'thompson'");
  }
  if (type == "operator") {
    reject_unknown(j, {"type", "dim"}, path);
    return OperatorSpace(static_cast<Eigen::Index>(as_count(need(j, "dim", path), path + ".dim")));
  }
  if (type == "torus") {
    reject_unknown(j, {"type"}, path);
    return TorusTeich{};
  }
  fail_at(path + ".type", "unknown space type '" + type + "'");
}

Semicontraction<EuclideanPSpace> parse_map(const EuclideanPSpace& s, const Json& j,
                                           const std::string& path) {
  const std::string type = need(j, "type", path).get<std::string>();
  if (type == "translation") {
    reject_unknown(j, {"type", "c"}, path);
    return translation_map(s, as_vector(need(j, "c", path), path + ".c"));
  }
  if (type == "rotation") {
    reject_unknown(j, {"type", "theta"}, path);
    return rotation_map(s, as_double(need(j, "theta", path), path + ".theta"));
  }
  if (type == "scale") {
    reject_unknown(j, {"type", "factor"}, path);
    return scale_map(s, as_double(need(j, "factor", path), path + ".factor"));
  }
  if (type == "affine-isometry") {
    reject_unknown(j, {"type", "u", "v"}, path);
    return affine_isometry_map(s, as_matrix(need(j, "u", path), path + ".u"),
                               as_vector(need(j, "v", path), path + ".v"));
  }
  fail_at(path + ".type", "unknown euclidean map '" + type + "'");
}

Semicontraction<PoincareDisk> parse_map(const PoincareDisk&, const Json& j,
                                        const std::string& path) {
  const std::string type = need(j, "type", path).get<std::string>();
  if (type == "mobius") {
    if (j.contains("matrix")) {
      reject_unknown(j, {"type", "matrix"}, path);
      const Mat m = as_matrix(j.at("matrix"), path + ".matrix");
      if (m.rows() != 2 || m.cols() != 2) fail_at(path + ".matrix", "expected 2x2");
      if (std::abs(m(1, 0) - m(0, 1)) > 1e-12 || std::abs(m(1, 1) - m(0, 0)) > 1e-12)
        fail_at(path + ".matrix", "real disk matrix must have shape [[a,b],[b,a]]");
      return mobius_map_from_matrix(Cx(m(0, 0), 0.0), Cx(m(0, 1), 0.0));
    }
    reject_unknown(j, {"type", "a", "b"}, path);
    return mobius_map_from_matrix(as_complex(need(j, "a", path), path + ".a"),
                                  as_complex(need(j, "b", path), path + ".b"));
  }
  if (type == "mobius-rotation") {
    reject_unknown(j, {"type", "theta"}, path);
    return mobius_map(MobiusTransform::rotation(as_double(need(j, "theta", path), path + ".theta")),
                      "mobius-rotation");
  }
  if (type == "mobius-parabolic") {
    reject_unknown(j, {"type", "zeta", "t"}, path);
    const Cx zeta = j.contains("zeta") ? as_complex(j.at("zeta"), path + ".zeta") : Cx(1, 0);
    const double t = j.contains("t") ? as_double(j.at("t"), path + ".t") : 1.0;
    return mobius_map(MobiusTransform::parabolic_fixing(zeta, t), "mobius-parabolic");
  }
  if (type == "blaschke") {
    reject_unknown(j, {"type", "a", "mirrored"}, path);
    const bool mirrored = j.contains("mirrored") && j.at("mirrored").get<bool>();
    return blaschke_map(as_double(need(j, "a", path), path + ".a"), mirrored);
  }
  if (type == "square") {
    reject_unknown(j, {"type"}, path);
    return squaring_map();
  }
  fail_at(path + ".type", "unknown disk map '" + type + "'");
}

Semicontraction<PositiveCone> parse_map(const PositiveCone& s, const Json& j,
                                        const std::string& path) {
  const std::string type = need(j, "type", path).get<std::string>();
  if (type == "diag-scale") {
    reject_unknown(j, {"type", "lambda"}, path);
    return diag_scale_map(s, as_vector(need(j, "lambda", path), path + ".lambda"));
  }
  if (type == "coord-pow") {
    reject_unknown(j, {"type", "theta"}, path);
    return coord_pow_map(s, as_double(need(j, "theta", path), path + ".theta"));
  }
  if (type == "positive-linear") {
    reject_unknown(j, {"type", "matrix"}, path);
    return positive_linear_map(s, as_matrix(need(j, "matrix", path), path + ".matrix"));
  }
  fail_at(path + ".type", "unknown cone map '" + type + "'");
}

Semicontraction<OperatorSpace> parse_map(const OperatorSpace& s, const Json& j,
                                         const std::string& path) {
  const std::string type = need(j, "type", path).get<std::string>();
  if (type == "left-mult") {
    reject_unknown(j, {"type", "matrix"}, path);
    return left_mult_map(s, as_matrix(need(j, "matrix", path), path + ".matrix"));
  }
  fail_at(path + ".type", "unknown operator map '" + type + "'");
}

Semicontraction<TorusTeich> parse_map(const TorusTeich&, const Json& j,
                                      const std::string& path) {
  const std::string type = need(j, "type", path).get<std::string>();
  if (type == "mapclass") {
    reject_unknown(j, {"type", "m"}, path);
    const Mat m = as_matrix(need(j, "m", path), path + ".m");
    if (m.rows() != 2 || m.cols() != 2) fail_at(path + ".m", "expected 2x2 integers");
    MapClass mc;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        const double e = m(r, c);
        if (e != std::floor(e)) fail_at(path + ".m", "entries must be integers");
        mc.m[r][c] = static_cast<std::int64_t>(e);
      }
    return torus_class_map(mc);
  }
  fail_at(path + ".type", "unknown torus map '" + type + "'");
}

template <class Space>
CocycleDriver<Space> parse_driver(const Space& s, const Json& j, std::uint64_t seed,
                                  const std::string& path) {
  reject_unknown(j, {"kind", "family", "weights", "transition", "start", "angle",
                     "partition"},
                 path);
  CocycleDriver<Space> d;
  d.seed = seed;
  const std::string kind = need(j, "kind", path).get<std::string>();
  const Json& family = need(j, "family", path);
  if (!family.is_array() || family.empty()) fail_at(path + ".family", "expected maps");
  for (std::size_t i = 0; i < family.size(); ++i)
    d.family.push_back(parse_map(s, family[i], path + ".family[" + std::to_string(i) + "]"));

  if (kind == "iid") {
    d.kind = DriverKind::iid;
    if (j.contains("weights"))
      d.weights = as_vector(j.at("weights"), path + ".weights");
    else
      d.weights.assign(d.family.size(), 1.0 / static_cast<double>(d.family.size()));
  } else if (kind == "markov") {
    d.kind = DriverKind::markov;
    const Json& t = need(j, "transition", path);
    for (std::size_t r = 0; r < t.size(); ++r)
      d.transition.push_back(as_vector(t[r], path + ".transition[" + std::to_string(r) + "]"));
    if (j.contains("start")) d.markov_start = as_count(j.at("start"), path + ".start") - 1;
  } else if (kind == "rotation") {
    d.kind = DriverKind::rotation;
    if (j.contains("angle")) d.angle = as_double(j.at("angle"), path + ".angle");
    d.partition = as_vector(need(j, "partition", path), path + ".partition");
  } else {
    fail_at(path + ".kind", "expected iid | markov | rotation");
  }
  validate_driver(d);
  return d;
}

// ---------------------------------------------------------------------------
// Report helpers.

CheckResult make_check(std::string name, double value, std::optional<double> expected,
                       double tol, std::string oracle) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.expected = expected;
  c.tolerance = tol;
  c.oracle = std::move(oracle);
  c.pass = expected ? std::abs(value - *expected) <= tol : value <= tol;
  return c;
}

// Log-spaced orbit indices for CSV tables.
std::vector<std::size_t> sample_indices(std::size_t n) {
  std::vector<std::size_t> ks;
  for (std::size_t k = 1; k <= n;
       k = (k < 16 ? k + 1 : k + std::max<std::size_t>(1, n / 128)))
    ks.push_back(k);
  if (ks.empty() || ks.back() != n) ks.push_back(n);
  return ks;
}

// ---------------------------------------------------------------------------
// Catalog matching of extracted functionals.

template <class Space>
std::optional<CheckResult> catalog_match(const Space&, const Extraction<Space>&,
                                         const Tolerances&, std::uint64_t) {
  return std::nullopt;
}

std::optional<CheckResult> catalog_match(const PoincareDisk& disk,
                                         const Extraction<PoincareDisk>& ext,
                                         const Tolerances& tols, std::uint64_t seed) {
  const auto* emp = std::get_if<MetricFunctional<PoincareDisk>::Empirical>(&ext.h.tag);
  if (!emp || std::abs(emp->anchor) < 1e-6) return std::nullopt;
  const Cx dir = emp->anchor / std::abs(emp->anchor);
  auto h_cat = disk_busemann(dir);
  double dev = 0.0;
  for (const auto& z : sample_points(disk, 20, seed))
    dev = std::max(dev, std::abs(ext.h(z) - h_cat(z)));
  return make_check("spaces.disk_busemann.match", dev, std::nullopt,
                    tols.functional_match, "Busemann form at the anchor direction");
}

std::optional<CheckResult> catalog_match(const EuclideanPSpace& s,
                                         const Extraction<EuclideanPSpace>& ext,
                                         const Tolerances& tols, std::uint64_t seed) {
  if (s.p() != 2.0) return std::nullopt;
  const auto* emp = std::get_if<MetricFunctional<EuclideanPSpace>::Empirical>(&ext.h.tag);
  if (!emp) return std::nullopt;
  const double n = norm2(emp->anchor);
  Rng rng(seed);
  double dev = 0.0;
  if (n < 1e-9) {
    auto h0 = hilbert_functional(s, 0.0, Vec(s.dim(), 0.0));
    for (int i = 0; i < 20; ++i) {
      const Vec y = rng.vector(s.dim(), -2.0, 2.0);
      dev = std::max(dev, std::abs(ext.h(y) - h0(y)));
    }
    return make_check("spaces.hilbert_catalog.match_h0", dev, std::nullopt,
                      tols.functional_match, "norm functional h_0");
  }
  const Vec w = scaled(emp->anchor, 1.0 / n);
  for (int i = 0; i < 20; ++i) {
    const Vec y = rng.vector(s.dim(), -2.0, 2.0);
    dev = std::max(dev, std::abs(ext.h(y) + dot(y, w)));
  }
  return make_check("spaces.hilbert_catalog.match_linear_dual", dev, std::nullopt,
                    tols.functional_match, "h_{inf,v} at the anchor direction");
}

// ---------------------------------------------------------------------------
// Experiment runners.  Each appends checks and optionally a CSV artifact.

struct RunContext {
  Tolerances tols;
  std::uint64_t seed = 1;
  std::size_t horizon = 0;
  std::vector<double> eps_schedule;
  bool csv_enabled = true;  // config-level switch
  std::string out_dir;
  std::string csv_name;
  std::optional<CsvWriter> csv;  // present when the experiment writes a table
};

template <class Space>
void run_drift(const Space& s, const Json& cfg, RunContext& ctx, RunReport& rep) {
  auto f = parse_map(s, need(cfg, "map", "config"), "config.map");
  OrbitPolicy policy;
  policy.allow_truncation = true;
  policy.seed = ctx.seed;
  auto tr = orbit(s, f, s.base_point(), ctx.horizon, policy);
  auto d = drift(tr, f.oracle().tau);

  rep.checks.push_back(make_check("spectral.orbit.subadditivity", tr.max_subadd_violation,
                                  std::nullopt, ctx.tols.algebraic, "triangle inequality"));
  rep.checks.push_back(make_check("spectral.orbit.step_monotone", tr.max_step_increase,
                                  std::nullopt, ctx.tols.algebraic, "1-Lipschitz property"));
  rep.checks.push_back(make_check("spectral.drift.fekete_le_tau",
                                  d.fekete_inf - d.tau_hat, std::nullopt,
                                  ctx.tols.algebraic, "running infimum"));
  if (f.oracle().tau)
    rep.checks.push_back(make_check("spectral.drift.tau_vs_oracle", d.tau_hat,
                                    f.oracle().tau, ctx.tols.geometric,
                                    f.oracle().provenance));
  else
    rep.checks.push_back(make_check("spectral.drift.tau_hat", d.tau_hat, d.tau_hat,
                                    0.0, "estimate only"));

  if (ctx.csv) {
    double fekete = kInf;
    std::size_t next = 0;
    const auto ks = sample_indices(tr.horizon);
    for (std::size_t k = 1; k <= tr.horizon; ++k) {
      fekete = std::min(fekete, tr.a[k] / static_cast<double>(k));
      if (next < ks.size() && ks[next] == k) {
        ctx.csv->row_values({static_cast<double>(k), tr.a[k],
                             tr.a[k] / static_cast<double>(k), fekete});
        ++next;
      }
    }
  }
}

template <class Space>
void run_functional(const Space& s, const Json& cfg, RunContext& ctx, RunReport& rep) {
  auto f = parse_map(s, need(cfg, "map", "config"), "config.map");
  OrbitPolicy policy;
  policy.allow_truncation = true;
  policy.seed = ctx.seed;
  auto ext = extract_functional(s, f, s.base_point(), ctx.eps_schedule, ctx.horizon, policy);
  auto desc = verify_descent(ext.trace, ext.h_on_orbit, ext.drift.tau_hat, ext.eps_used,
                             ctx.tols.algebraic, ext.record_index);

  rep.checks.push_back(make_check("spectral.extract.descent_excess",
                                  ext.max_descent_excess, std::nullopt,
                                  ctx.tols.algebraic, "record-time inequality"));
  rep.checks.push_back(make_check("spectral.verify_descent.max_excess", desc.max_excess,
                                  std::nullopt, ctx.tols.algebraic,
                                  "h(f^k x0) <= -(tau - eps) k"));
  rep.checks.push_back(make_check("spectral.verify_descent.lower_bound",
                                  -desc.lower_bound_margin, std::nullopt,
                                  ctx.tols.algebraic, "h >= -d(x0, f^k x0)"));
  if (f.oracle().tau)
    rep.checks.push_back(make_check("spectral.drift.tau_vs_oracle", ext.drift.tau_hat,
                                    f.oracle().tau, ctx.tols.geometric,
                                    f.oracle().provenance));
  if (auto match = catalog_match(s, ext, ctx.tols, ctx.seed ^ 0xabcdULL))
    rep.checks.push_back(*match);
  rep.details["functional"] = functional_to_json(s, ext.h);
  rep.details["record_index"] = ext.record_index;
  rep.details["eps_used"] = ext.eps_used;

  if (ctx.csv) {
    const double rate = ext.drift.tau_hat - ext.eps_used;
    auto recs = record_times(ext.trace, ext.eps_used, ext.drift.tau_hat);
    std::set<std::size_t> rec_set(recs.begin(), recs.end());
    for (std::size_t k : sample_indices(ext.trace.horizon)) {
      const double b = ext.trace.a[k] - rate * static_cast<double>(k);
      ctx.csv->row_values({static_cast<double>(k), ext.trace.a[k],
                           ext.trace.a[k] / static_cast<double>(k), b,
                           rec_set.count(k) ? 1.0 : 0.0, ext.h_on_orbit(k)});
    }
  }
}

void run_wolff_denjoy(const Json& cfg, RunContext& ctx, RunReport& rep) {
  PoincareDisk disk;
  const Json& maps = need(cfg, "maps", "config");
  if (!maps.is_array() || maps.empty()) fail_at("config.maps", "expected a map list");

  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string path = "config.maps[" + std::to_string(i) + "]";
    auto f = parse_map(disk, maps[i], path);
    if (!f.oracle().boundary_point)
      fail_at(path, "map '" + f.label() + "' has no attracting boundary point oracle");
    const Cx target = *f.oracle().boundary_point;

    // Euclidean chase of the orbit (plain complex arithmetic).
    Cx z = disk.base_point();
    for (std::size_t n = 0; n < ctx.horizon; ++n) {
      z = f(z);
      if (ctx.csv && (n + 1) % std::max<std::size_t>(1, ctx.horizon / 16) == 0)
        ctx.csv->row_values({static_cast<double>(i), static_cast<double>(n + 1),
                             z.real(), z.imag(), std::abs(z - target)});
    }
    rep.checks.push_back(make_check("spectral.orbit.boundary_attraction." + f.label(),
                                    std::abs(z - target), std::nullopt,
                                    ctx.tols.boundary_euclid,
                                    "attracting point: " + f.oracle().provenance));

    OrbitPolicy policy;
    policy.allow_truncation = true;
    policy.seed = ctx.seed;
    auto ext = extract_functional(disk, f, disk.base_point(), ctx.eps_schedule,
                                  ctx.horizon, policy);
    auto h_cat = disk_busemann(target);
    double dev = 0.0;
    for (const auto& p : sample_points(disk, 20, ctx.seed ^ (0x77ULL + i)))
      dev = std::max(dev, std::abs(ext.h(p) - h_cat(p)));
    rep.checks.push_back(make_check("spaces.disk_busemann.match." + f.label(), dev,
                                    std::nullopt, ctx.tols.functional_match,
                                    "Busemann form at the attracting point"));
    rep.details[f.label()] = Json{{"functional", functional_to_json(disk, ext.h)},
                                  {"catalog", functional_to_json(disk, h_cat)}};
    if (f.oracle().tau)
      rep.checks.push_back(make_check("spectral.drift.tau_vs_oracle." + f.label(),
                                      ext.drift.tau_hat, f.oracle().tau,
                                      ctx.tols.ergodic, f.oracle().provenance));
  }
}

void run_mean_ergodic(const Json& cfg, RunContext& ctx, RunReport& rep) {
  const Mat u = as_matrix(need(cfg, "u", "config"), "config.u");
  const Vec v = as_vector(need(cfg, "v", "config"), "config.v");
  auto r = mean_ergodic(u, v, ctx.horizon, 16, ctx.seed);

  rep.checks.push_back(make_check("spectral.mean_ergodic.scaled_dev", r.max_scaled_dev,
                                  std::nullopt, ctx.tols.mean_dev_cap,
                                  "geometric-sum bound: n ||avg_n - Pv|| <= C"));
  rep.checks.push_back(make_check("spectral.mean_ergodic.tau_gap", r.tau_gap,
                                  std::nullopt, 1e-4, "projection norm ||Pv||"));
  if (norm2(r.projection) > 1e-12)
    rep.checks.push_back(make_check("spectral.mean_ergodic.functional_match",
                                    r.functional_match_dev, std::nullopt,
                                    ctx.tols.functional_match,
                                    "h(x) = -(x, Pv/||Pv||)"));
  if (ctx.csv)
    ctx.csv->row_values({static_cast<double>(r.horizon), r.final_dev, r.max_scaled_dev,
                         r.tau_hat});
}

void run_lyapunov(const Json& cfg, RunContext& ctx, RunReport& rep) {
  const std::size_t dim =
      cfg.contains("dim") ? as_count(cfg.at("dim"), "config.dim") : 2;
  OperatorSpace sp(static_cast<Eigen::Index>(dim));
  auto driver = parse_driver(sp, need(cfg, "driver", "config"), ctx.seed, "config.driver");
  auto r = top_lyapunov(sp, driver, ctx.horizon);

  if (cfg.contains("expected")) {
    const double expected = as_double(cfg.at("expected"), "config.expected");
    rep.checks.push_back(make_check("ergodic.top_lyapunov.exponent", r.exponent, expected,
                                    std::max(ctx.tols.rate, r.clt_tol),
                                    "declared analytic value"));
  } else {
    rep.checks.push_back(make_check("ergodic.top_lyapunov.exponent", r.exponent,
                                    r.exponent, 0.0, "estimate only"));
  }
  rep.checks.push_back(make_check("ergodic.top_lyapunov.fekete_le_exponent",
                                  r.fekete_inf - r.exponent, std::nullopt,
                                  ctx.tols.algebraic, "running infimum"));
  if (ctx.csv) ctx.csv->row_values({static_cast<double>(r.horizon), r.exponent, r.clt_tol});
}

void run_thurston(const Json& cfg, RunContext& ctx, RunReport& rep) {
  const std::size_t n_pairs =
      cfg.contains("n_pairs") ? as_count(cfg.at("n_pairs"), "config.n_pairs") : 100;
  const int enum_n = cfg.contains("enumerate_n")
                         ? static_cast<int>(as_count(cfg.at("enumerate_n"), "config.enumerate_n"))
                         : 50;
  const int check_n = cfg.contains("check_n")
                          ? static_cast<int>(as_count(cfg.at("check_n"), "config.check_n"))
                          : 800;

  Rng rng(ctx.seed);
  double max_gap = 0.0, max_gap_fine = 0.0, max_asym = 0.0;
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const Cx x(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
    const Cx y(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0));
    const double closed = thurston_closed(x, y);
    const auto en = thurston_enumerate(x, y, enum_n);
    max_gap = std::max(max_gap, closed - en.value);
    max_gap_fine = std::max(max_gap_fine, closed - thurston_enumerate(x, y, check_n).value);
    max_asym = std::max(max_asym, std::abs(closed - thurston_closed(y, x)));
    if (ctx.csv)
      ctx.csv->row_values({x.real(), x.imag(), y.real(), y.imag(), en.value, closed,
                           closed - en.value, static_cast<double>(en.arg.p),
                           static_cast<double>(en.arg.q)});
  }

  rep.checks.push_back(make_check(
      "spaces.thurston.enumerate_gap_n" + std::to_string(enum_n), max_gap, std::nullopt,
      ctx.tols.geometric, "closed form (1/2) log lambda_max"));
  rep.checks.push_back(make_check(
      "spaces.thurston.enumerate_gap_n" + std::to_string(check_n), max_gap_fine,
      std::nullopt, ctx.tols.geometric, "closed form, refined curve box"));
  rep.checks.push_back(make_check("spaces.thurston.symmetry", max_asym, std::nullopt,
                                  ctx.tols.algebraic, "reciprocal eigenvalue pairs"));
  rep.checks.push_back(make_check("spaces.thurston.base_example",
                                  thurston_closed(Cx(0, 1), Cx(0, 2)),
                                  0.5 * std::log(2.0), ctx.tols.algebraic,
                                  "hand evaluation on the rectangular pair"));
}

void run_curve_growth(const Json& cfg, RunContext& ctx, RunReport& rep) {
  TorusTeich torus;
  auto driver = parse_driver(torus, need(cfg, "driver", "config"), ctx.seed, "config.driver");
  CurveClass alpha{1, 0};
  if (cfg.contains("alpha")) {
    const Vec a = as_vector(cfg.at("alpha"), "config.alpha");
    if (a.size() != 2) fail_at("config.alpha", "expected [p, q]");
    alpha = CurveClass{static_cast<std::int64_t>(a[0]), static_cast<std::int64_t>(a[1])};
  }
  std::vector<CurveClass> basis = default_curve_basis();
  if (cfg.contains("basis")) {
    basis.clear();
    for (std::size_t i = 0; i < cfg.at("basis").size(); ++i) {
      const Vec b = as_vector(cfg.at("basis")[i], "config.basis[" + std::to_string(i) + "]");
      basis.push_back(CurveClass{static_cast<std::int64_t>(b[0]),
                                 static_cast<std::int64_t>(b[1])});
    }
  }
  const double eps = cfg.contains("eps") ? as_double(cfg.at("eps"), "config.eps") : 0.1;

  auto tr = compose_cocycle(torus, driver, ctx.horizon, torus.base_point());
  auto growth = curve_growth(tr, alpha);
  auto dom = dominant_curve(tr, basis, eps);
  auto km = km_record_times(tr, eps);

  rep.checks.push_back(make_check("ergodic.cocycle.subadditivity",
                                  tr.max_cocycle_violation, std::nullopt,
                                  ctx.tols.algebraic, "shifted suffix recomposition"));
  const bool deterministic = driver.family.size() == 1;
  if (deterministic && driver.family[0].oracle().tau) {
    rep.checks.push_back(make_check("ergodic.curve_growth.rate_step", growth.rate_step,
                                    driver.family[0].oracle().tau, ctx.tols.ergodic,
                                    driver.family[0].oracle().provenance));
    rep.checks.push_back(make_check("ergodic.curve_growth.tau_hat", growth.tau_hat,
                                    driver.family[0].oracle().tau, ctx.tols.ergodic,
                                    driver.family[0].oracle().provenance));
  } else {
    rep.checks.push_back(make_check("ergodic.curve_growth.rate_vs_drift", growth.gap,
                                    std::nullopt, ctx.tols.rate,
                                    "Thurston-metric drift of the same trajectory"));
  }
  rep.checks.push_back(make_check("ergodic.km_records.nonempty",
                                  km.records.empty() ? 1.0 : 0.0, std::nullopt, 0.5,
                                  "record scan at eps=" + format_double(eps)));
  rep.checks.push_back(make_check("ergodic.dominant_curve.lower_bound",
                                  -dom.lower_bound_margin, std::nullopt,
                                  ctx.tols.algebraic,
                                  "record-time growth bound at the top record"));
  rep.checks.push_back(make_check("ergodic.dominant_curve.additive_gap",
                                  dom.max_additive_gap, std::nullopt, 1.0,
                                  "sup over curves vs max over the basis (monitored)"));

  if (ctx.csv_enabled) {
    std::vector<std::string> header{"k", "a", "ratio", "record"};
    for (const auto& b : basis)
      header.push_back("loglen_" + std::to_string(b.p) + "_" + std::to_string(b.q));
    ctx.csv_name = "curve-growth.csv";
    ctx.csv.emplace(header);
    std::set<std::size_t> rec_set(km.records.begin(), km.records.end());
    for (std::size_t k : sample_indices(tr.horizon())) {
      std::vector<double> row{static_cast<double>(k), tr.a[k],
                              tr.a[k] / static_cast<double>(k),
                              rec_set.count(k) ? 1.0 : 0.0};
      for (const auto& b : basis) row.push_back(tr.engine->log_length(k, b));
      ctx.csv->row_values(row);
    }
  }
}

// ---------------------------------------------------------------------------
// Invariant suite across the zoo.

template <class Space>
void zoo_space_checks(const Space& s, std::size_t samples, std::uint64_t seed,
                      const Tolerances& tols, std::vector<CheckResult>& checks) {
  const auto pts = sample_points(s, std::max<std::size_t>(64, samples / 8), seed);
  const auto triples = sample_triples(pts.size(), samples, seed ^ 0x3ULL);
  checks.push_back(make_check("core.triangle." + s.name(),
                              par::triangle_scan(s, pts, triples, par::default_exec()),
                              std::nullopt, tols.algebraic, "sampled triples"));

  double min_sep = kInf;
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2)
    if (!s.point_eq(pts[i], pts[i + 1]))
      min_sep = std::min(min_sep, sym_dist(s, pts[i], pts[i + 1]));
  checks.push_back(make_check("core.separation." + s.name(), -min_sep, std::nullopt,
                              0.0, "distinct sampled pairs have D > 0"));

  const auto pairs = sample_pairs(pts.size(), samples, seed ^ 0x5ULL);
  auto h = internal_functional(s, pts[0]);
  checks.push_back(make_check(
      "core.functional_laws." + s.name(),
      par::functional_law_scan(s, h, pts, pairs, par::default_exec()).worst(),
      std::nullopt, tols.algebraic, "normalization, bounds, 1-Lipschitz"));
}

template <class Space>
void zoo_map_checks(const Space& s, const Semicontraction<Space>& f, std::size_t samples,
                    std::size_t horizon, std::uint64_t seed, const Tolerances& tols,
                    std::vector<CheckResult>& checks) {
  const auto pts = sample_points(s, std::max<std::size_t>(64, samples / 8), seed);
  const auto pairs = sample_pairs(pts.size(), samples, seed ^ 0x7ULL);
  const std::string tag = s.name() + "." + f.label();

  checks.push_back(make_check(
      "spectral.semicontraction." + tag,
      par::contraction_scan(s, [&f](const auto& x) { return f(x); }, pts, pairs,
                            par::default_exec()),
      std::nullopt, tols.algebraic, "sampled pairs"));

  OrbitPolicy policy;
  policy.allow_truncation = true;
  policy.seed = seed;
  auto tr = orbit(s, f, s.base_point(), horizon, policy);
  checks.push_back(make_check("spectral.orbit.subadditivity." + tag,
                              tr.max_subadd_violation, std::nullopt, tols.algebraic,
                              "sampled index pairs"));
  checks.push_back(make_check("spectral.orbit.step_monotone." + tag,
                              tr.max_step_increase, std::nullopt, tols.algebraic,
                              "1-Lipschitz property"));

  // Drift estimates converge at map-dependent rates (exact for group-form
  // orbits, O(log n / n) for parabolics); the halfway gap is the observable
  // convergence allowance.
  auto d = drift(tr, f.oracle().tau);
  const std::size_t hh = std::max<std::size_t>(1, tr.horizon / 2);
  const double halfgap = std::abs(d.tau_hat - tr.a[hh] / static_cast<double>(hh));
  if (f.oracle().tau)
    checks.push_back(make_check("spectral.drift.tau_vs_oracle." + tag, d.tau_hat,
                                f.oracle().tau, tols.ergodic + 2.0 * halfgap,
                                f.oracle().provenance));

  // tau <= d(f): the drift estimate converges from above, so allow the same
  // convergence gap on top of the sampled displacement minimum.
  const double disp =
      par::displacement_scan(s, [&f](const auto& x) { return f(x); }, pts,
                             par::default_exec())
          .value;
  checks.push_back(make_check("spectral.tau_le_displacement." + tag,
                              d.tau_hat - disp, std::nullopt,
                              tols.ergodic + 2.0 * halfgap,
                              "sampled displacement minimum + convergence gap"));
}

template <class Space>
void zoo_tracial_check(const Space& s, const Semicontraction<Space>& f,
                       const Semicontraction<Space>& g, std::size_t horizon,
                       const Tolerances& tols, std::vector<CheckResult>& checks) {
  OrbitPolicy policy;
  policy.allow_truncation = true;
  auto rep = tracial_check(s, f, g, horizon, policy);
  checks.push_back(make_check(
      "spectral.tracial." + s.name() + "." + f.label() + "." + g.label(), rep.diff,
      std::nullopt, std::max(tols.ergodic, 2.0 * (rep.gap_fg + rep.gap_gf)),
      "composition in both orders"));
}

void run_invariants(const Json& cfg, RunContext& ctx, RunReport& rep) {
  const std::size_t samples =
      cfg.contains("samples") ? as_count(cfg.at("samples"), "config.samples") : 1000;
  std::string only;
  if (cfg.contains("space"))
    only = need(cfg.at("space"), "type", "config.space").get<std::string>();
  auto wants = [&only](const std::string& type) { return only.empty() || only == type; };
  auto& checks = rep.checks;
  const std::uint64_t seed = ctx.seed;
  const Tolerances& tols = ctx.tols;

  if (wants("euclidean")) {
    EuclideanZoo zoo;
    EuclideanPSpace d8(8, 2.0), p1(3, 1.0), pinf(3, kInf);
    for (const auto* sp : {&zoo.plane, &d8}) zoo_space_checks(*sp, samples, seed, tols, checks);
    zoo_space_checks(p1, samples, seed, tols, checks);
    zoo_space_checks(pinf, samples, seed, tols, checks);
    for (const auto& f : zoo.maps)
      zoo_map_checks(zoo.plane, f, samples, 2000, seed, tols, checks);
    zoo_tracial_check(zoo.plane, zoo.maps[0], zoo.maps[1], 10000, tols, checks);

    // Hilbert catalog laws on R^8 over the full (r, v) grid.
    const auto pts = sample_points(d8, 200, seed, 5.0);
    const auto pairs = sample_pairs(pts.size(), samples, seed ^ 0x9ULL);
    par::MidpointFn<EuclideanPSpace> mid = [](const Vec& a, const Vec& b, Vec& out) {
      out.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    };
    Rng rng(seed ^ 0x11ULL);
    double worst = -kInf;
    for (double r : {0.0, 0.5, 1.0, 2.0, kInf})
      for (int repe = 0; repe < 4; ++repe) {
        Vec v = rng.vector(8, -1.0, 1.0);
        const double n = norm2(v);
        if (n > 1.0) v = scaled(v, rng.uniform01() / n);
        auto h = hilbert_functional(d8, r, v);
        worst = std::max(worst, par::functional_law_scan(d8, h, pts, pairs,
                                                         par::default_exec(), mid)
                                    .worst());
      }
    checks.push_back(make_check("spaces.hilbert_catalog.laws", worst, std::nullopt,
                                tols.algebraic, "catalog grid over (r, v)"));
  }

  if (wants("poincare-disk")) {
    DiskZoo zoo;
    zoo_space_checks(zoo.disk, samples, seed, tols, checks);
    for (const auto& f : zoo.all())
      zoo_map_checks(zoo.disk, f, samples, 2000, seed, tols, checks);
    zoo_tracial_check(zoo.disk, zoo.hyperbolic,
                      mobius_map(MobiusTransform::from_su11(Cx(1.1, 0.2), Cx(0.35, -0.1)),
                                 "mobius-generic"),
                      10000, tols, checks);
    // Busemann catalog laws.
    const auto pts = sample_points(zoo.disk, 200, seed);
    const auto pairs = sample_pairs(pts.size(), samples, seed ^ 0xdULL);
    checks.push_back(make_check(
        "spaces.disk_busemann.laws",
        par::functional_law_scan(zoo.disk, disk_busemann(Cx(1, 0)), pts, pairs,
                                 par::default_exec())
            .worst(),
        std::nullopt, tols.algebraic, "closed Busemann form"));
  }

  if (wants("cone")) {
    ConeZoo zoo;
    zoo_space_checks(zoo.funk, samples, seed, tols, checks);
    zoo_space_checks(zoo.thompson, samples, seed, tols, checks);
    for (const auto& f : zoo.funk_maps)
      zoo_map_checks(zoo.funk, f, samples, 1000, seed, tols, checks);
    for (const auto& f : zoo.thompson_maps)
      zoo_map_checks(zoo.thompson, f, samples, 1000, seed, tols, checks);
    zoo_tracial_check(zoo.thompson, zoo.thompson_maps[0], zoo.thompson_maps[2], 10000,
                      tols, checks);
  }

  if (wants("operator")) {
    OperatorZoo zoo;
    zoo_space_checks(zoo.space, samples, seed, tols, checks);
    for (const auto& f : zoo.maps) zoo_map_checks(zoo.space, f, samples, 1000, seed, tols, checks);
    zoo_tracial_check(zoo.space, zoo.maps[0], zoo.maps[1], 2000, tols, checks);
  }

  if (wants("torus")) {
    TorusZoo zoo;
    zoo_space_checks(zoo.space, samples, seed, tols, checks);
    for (const auto& f : zoo.all()) zoo_map_checks(zoo.space, f, samples, 500, seed, tols, checks);
    zoo_tracial_check(zoo.space, zoo.anosov, zoo.shear, 2000, tols, checks);
  }

  if (ctx.csv)
    for (const auto& c : checks)
      ctx.csv->row({c.name, format_double(c.value), format_double(c.tolerance),
                    c.pass ? "1" : "0"});
}

// ---------------------------------------------------------------------------
// Schema.

const std::set<std::string> kSharedKeys = {"schema_version", "experiment", "seed",
                                           "horizon", "eps_schedule", "tolerances",
                                           "output"};

struct ExperimentSpec {
  std::set<std::string> keys;       // experiment-specific, on top of shared
  std::set<std::string> required;
  std::size_t default_horizon;
  std::vector<std::string> csv_header;  // empty -> no CSV
  std::string summary;
  Json example;
};

const std::map<std::string, ExperimentSpec>& experiment_specs() {
  static const std::map<std::string, ExperimentSpec> specs = [] {
    std::map<std::string, ExperimentSpec> m;
    m["drift"] = {{"space", "map"},
                  {"space", "map"},
                  1000,
                  {"k", "a", "ratio", "fekete"},
                  "orbit distance growth a_n/n with the running-infimum certificate",
                  Json{{"schema_version", 1},
                       {"experiment", "drift"},
                       {"space", {{"type", "euclidean"}, {"dim", 2}, {"p", 2}}},
                       {"map", {{"type", "translation"}, {"c", {3.0, 4.0}}}},
                       {"horizon", 100}}};
    m["functional"] = {{"space", "map"},
                       {"space", "map"},
                       1000,
                       {"k", "a", "ratio", "b", "record", "h"},
                       "record-time extraction of a metric functional with the descent "
                       "certificate",
                       Json{{"schema_version", 1},
                            {"experiment", "functional"},
                            {"space", {{"type", "poincare-disk"}}},
                            {"map", {{"type", "mobius"},
                                     {"matrix", {{1.0, 0.5}, {0.5, 1.0}}}}},
                            {"horizon", 1000}}};
    m["wolff-denjoy"] = {{"maps"},
                         {"maps"},
                         1000,
                         {"map", "n", "re", "im", "euclid_dev"},
                         "boundary attraction of fixed-point-free holomorphic disk maps",
                         Json{{"schema_version", 1},
                              {"experiment", "wolff-denjoy"},
                              {"maps", Json::array({Json{{"type", "mobius"},
                                                         {"matrix", {{1.0, 0.5}, {0.5, 1.0}}}}})},
                              {"horizon", 1000}}};
    m["mean-ergodic"] = {{"u", "v"},
                         {"u", "v"},
                         100000,
                         {"n", "final_dev", "max_scaled_dev", "tau_hat"},
                         "affine-isometry averages vs the fixed-space projection",
                         Json{{"schema_version", 1},
                              {"experiment", "mean-ergodic"},
                              {"u", {{0.5403023058681398, -0.8414709848078965, 0.0},
                                     {0.8414709848078965, 0.5403023058681398, 0.0},
                                     {0.0, 0.0, 1.0}}},
                              {"v", {1.0, 0.0, 1.0}},
                              {"horizon", 10000}}};
    m["lyapunov"] = {{"driver", "dim", "expected"},
                     {"driver"},
                     100000,
                     {"horizon", "exponent", "clt_tol"},
                     "top Lyapunov exponent of a random matrix product",
                     Json{{"schema_version", 1},
                          {"experiment", "lyapunov"},
                          {"driver",
                           {{"kind", "iid"},
                            {"family", Json::array({Json{{"type", "left-mult"},
                                                         {"matrix", {{4.0, 0.0}, {0.0, 1.0}}}},
                                                    Json{{"type", "left-mult"},
                                                         {"matrix", {{1.0, 0.0}, {0.0, 2.0}}}}})}}},
                          {"expected", 0.6931471805599453},
                          {"horizon", 100000},
                          {"seed", 2024}}};
    m["thurston"] = {{"n_pairs", "enumerate_n", "check_n"},
                     {},
                     1,
                     {"xr", "xi", "yr", "yi", "enumerate", "closed", "gap", "p", "q"},
                     "curve enumeration vs the closed form of the torus Thurston metric",
                     Json{{"schema_version", 1},
                          {"experiment", "thurston"},
                          {"n_pairs", 100},
                          {"enumerate_n", 50},
                          {"seed", 8}}};
    m["curve-growth"] = {{"driver", "alpha", "basis", "eps"},
                         {"driver"},
                         10000,
                         {},
                         "curve length growth along a mapping-class cocycle vs its drift",
                         Json{{"schema_version", 1},
                              {"experiment", "curve-growth"},
                              {"driver",
                               {{"kind", "iid"},
                                {"family", Json::array({Json{{"type", "mapclass"},
                                                             {"m", {{1, 1}, {0, 1}}}},
                                                        Json{{"type", "mapclass"},
                                                             {"m", {{1, 0}, {1, 1}}}}})}}},
                              {"alpha", {1, 0}},
                              {"horizon", 10000},
                              {"seed", 4}}};
    m["invariants"] = {{"samples", "space"},
                       {},
                       1,
                       {"name", "value", "tolerance", "pass"},
                       "triangle, semicontraction, drift-vs-displacement, tracial and "
                       "functional-law sweeps over the stock zoo",
                       Json{{"schema_version", 1},
                            {"experiment", "invariants"},
                            {"samples", 1000},
                            {"seed", 7}}};
    return m;
  }();
  return specs;
}

}  // namespace

// ---------------------------------------------------------------------------

Json CheckResult::to_json() const {
  Json j{{"name", name}, {"value", value}, {"tolerance", tolerance},
         {"oracle", oracle}, {"pass", pass}};
  if (expected) j["expected"] = *expected;
  return j;
}

Json RunReport::to_json() const {
  Json checks_json = Json::array();
  for (const auto& c : checks) checks_json.push_back(c.to_json());
  return Json{{"schema_version", kSchemaVersion},
              {"experiment", experiment},
              {"config", config_echo},
              {"checks", checks_json},
              {"details", details},
              {"artifacts", artifacts},
              {"pass", pass()}};
}

Json experiment_catalog() {
  Json out = Json::array();
  for (const auto& [name, spec] : experiment_specs()) {
    Json keys = Json::array();
    for (const auto& k : kSharedKeys) keys.push_back(k);
    for (const auto& k : spec.keys) keys.push_back(k);
    out.push_back(Json{{"experiment", name},
                       {"summary", spec.summary},
                       {"keys", keys},
                       {"required", std::vector<std::string>(spec.required.begin(),
                                                             spec.required.end())},
                       {"example", spec.example}});
  }
  return out;
}

void validate_config(const Json& config) {
  if (!config.is_object()) fail_at("config", "expected a JSON object");
  const int version =
      static_cast<int>(as_double(need(config, "schema_version", "config"),
                                 "config.schema_version"));
  if (version != kSchemaVersion)
    fail_at("config.schema_version", "unsupported schema version");
  const std::string name = need(config, "experiment", "config").get<std::string>();
  const auto& specs = experiment_specs();
  const auto it = specs.find(name);
  if (it == specs.end()) fail_at("config.experiment", "unknown experiment '" + name + "'");

  std::set<std::string> allowed = kSharedKeys;
  allowed.insert(it->second.keys.begin(), it->second.keys.end());
  reject_unknown(config, allowed, "config");
  for (const auto& k : it->second.required) need(config, k, "config");

  if (config.contains("output"))
    reject_unknown(config.at("output"), {"dir", "csv", "json"}, "config.output");
  parse_tolerances(config);

  // Descriptor-level validation without running anything.
  if (config.contains("space")) {
    auto space = parse_space(config.at("space"), "config.space");
    if (config.contains("map"))
      std::visit([&](const auto& s) { (void)parse_map(s, config.at("map"), "config.map"); },
                 space);
  } else if (config.contains("map")) {
    fail_at("config.map", "a map needs a space");
  }
  if (name == "wolff-denjoy") {
    PoincareDisk disk;
    const Json& maps = need(config, "maps", "config");
    if (!maps.is_array() || maps.empty()) fail_at("config.maps", "expected a map list");
    for (std::size_t i = 0; i < maps.size(); ++i)
      (void)parse_map(disk, maps[i], "config.maps[" + std::to_string(i) + "]");
  }
  if (name == "lyapunov") {
    const std::size_t dim =
        config.contains("dim") ? as_count(config.at("dim"), "config.dim") : 2;
    OperatorSpace sp(static_cast<Eigen::Index>(dim));
    (void)parse_driver(sp, need(config, "driver", "config"), 1, "config.driver");
  }
  if (name == "curve-growth") {
    TorusTeich torus;
    (void)parse_driver(torus, need(config, "driver", "config"), 1, "config.driver");
  }
  if (name == "mean-ergodic") {
    const Mat u = as_matrix(need(config, "u", "config"), "config.u");
    const Vec v = as_vector(need(config, "v", "config"), "config.v");
    if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != v.size())
      fail_at("config.u", "U must be square and match v");
  }
}

std::string resolve_out_dir(const Json& config, const RunOverrides& overrides) {
  if (overrides.out_dir) return *overrides.out_dir;
  if (config.contains("output") && config.at("output").contains("dir"))
    return config.at("output").at("dir").get<std::string>();
  if (const char* env = std::getenv("SPECMET_OUT_DIR")) return env;
  return "out";
}

RunReport run_experiment(Json config, const RunOverrides& overrides) {
  validate_config(config);
  const auto t0 = std::chrono::steady_clock::now();

  const std::string name = config.at("experiment").get<std::string>();
  const auto& spec = experiment_specs().at(name);

  RunContext ctx;
  ctx.tols = parse_tolerances(config);
  ctx.seed = overrides.seed ? *overrides.seed
             : config.contains("seed") ? config.at("seed").get<std::uint64_t>()
                                       : 1;
  ctx.horizon = overrides.horizon ? *overrides.horizon
                : config.contains("horizon")
                    ? as_count(config.at("horizon"), "config.horizon")
                    : spec.default_horizon;
  if (config.contains("eps_schedule")) {
    for (std::size_t i = 0; i < config.at("eps_schedule").size(); ++i)
      ctx.eps_schedule.push_back(as_double(config.at("eps_schedule")[i],
                                           "config.eps_schedule[" + std::to_string(i) + "]"));
  }
  ctx.out_dir = resolve_out_dir(config, overrides);
  bool want_json = true;
  if (config.contains("output")) {
    const Json& o = config.at("output");
    if (o.contains("csv")) ctx.csv_enabled = o.at("csv").get<bool>();
    if (o.contains("json")) want_json = o.at("json").get<bool>();
  }
  if (ctx.csv_enabled && !spec.csv_header.empty()) {
    ctx.csv_name = name + ".csv";
    ctx.csv.emplace(spec.csv_header);
  }

  // Echo the resolved configuration so the report replays on its own.
  config["seed"] = ctx.seed;
  config["horizon"] = ctx.horizon;
  config["tolerances"] = ctx.tols.echo();

  RunReport rep;
  rep.experiment = name;
  rep.config_echo = config;

  try {
    if (name == "drift" || name == "functional") {
      auto space = parse_space(config.at("space"), "config.space");
      std::visit(
          [&](const auto& s) {
            if (name == "drift")
              run_drift(s, config, ctx, rep);
            else
              run_functional(s, config, ctx, rep);
          },
          space);
    } else if (name == "wolff-denjoy") {
      run_wolff_denjoy(config, ctx, rep);
    } else if (name == "mean-ergodic") {
      run_mean_ergodic(config, ctx, rep);
    } else if (name == "lyapunov") {
      run_lyapunov(config, ctx, rep);
    } else if (name == "thurston") {
      run_thurston(config, ctx, rep);
    } else if (name == "curve-growth") {
      run_curve_growth(config, ctx, rep);
    } else {
      run_invariants(config, ctx, rep);
    }
  } catch (const horizon_error& e) {
    rep.checks.push_back(make_check("runtime." + name, kInf, std::nullopt, 0.0, e.what()));
  } catch (const domain_error& e) {
    rep.checks.push_back(make_check("runtime." + name, kInf, std::nullopt, 0.0, e.what()));
  } catch (const precondition_error& e) {
    rep.checks.push_back(make_check("runtime." + name, kInf, std::nullopt, 0.0, e.what()));
  }

  namespace fs = std::filesystem;
  if (ctx.csv && ctx.csv->rows() > 0) {
    const fs::path p = fs::path(ctx.out_dir) / ctx.csv_name;
    write_file_atomic(p, ctx.csv->content());
    rep.artifacts.push_back(p.string());
  }
  if (want_json) {
    const fs::path p = fs::path(ctx.out_dir) / (name + "-report.json");
    rep.artifacts.push_back(p.string());
    write_file_atomic(p, rep.to_json().dump(2) + "\n");
  }

  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

}  // namespace specmet
