#pragma once

// End-to-end pipeline: domain -> estimate_c -> detect -> dimension -> bound
// -> sharpness, assembled into one versioned report. Nothing in the report
// depends on wall-clock time or scheduling.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "combdim/bounds.hpp"
#include "combdim/comb_domain.hpp"
#include "combdim/curve.hpp"
#include "combdim/dimension.hpp"
#include "combdim/error.hpp"
#include "combdim/estimate.hpp"
#include "combdim/io.hpp"
#include "combdim/two_sided.hpp"

namespace combdim {

struct ExperimentConfig {
  double lambda = 1.0 / 3.0;
  double p = 1.2;
  int depth = 8;            // level of the Cantor endpoint set measured by the dimension stage
  int resolution = 512;     // cells per side in detection rasters
  std::int64_t pairs = 2000;
  std::uint64_t seed = 1;
  double c_const = 9.0;     // the constant c of the connecting-curve lemma
  double tol = 1e-8;        // relative quadrature tolerance
  int tent_depth = 20;
  int corpus_level = 5;     // detection corpus: Cantor endpoints up to this level
  int i_min = 3;
  int i_max = 8;
  int sharpness_grid = 1000;
  double net_ratio = 0.5;
  unsigned workers = 0;     // 0: hardware concurrency; never affects results
};

/// Raised for configuration problems (exit code 2 in the CLI).
struct ConfigError : Error {
  using Error::Error;
};

/// Keys accepted in JSON config files; they match the CLI flag names.
inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"lambda",     "p",           "depth",        "resolution", "pairs",
                                             "seed",       "c-const",     "tol",          "tent-depth", "corpus-level",
                                             "i-min",      "i-max",       "sharpness-grid", "net-ratio", "workers",
                                             "out",        "format"};
  return keys;
}

namespace detail {

template <class T>
void read_key(const Json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
    dst = v.get<double>();
  } else {
    if (!v.is_number_integer()) throw ConfigError(std::string("config key '") + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<std::int64_t>() < 0) throw ConfigError(std::string("config key '") + key + "' must be non-negative");
    }
    dst = v.get<T>();
  }
}

}  // namespace detail

/// Applies the keys present in `j` on top of `cfg`; unknown keys are errors.
inline void apply_config_json(const Json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const auto& keys = config_keys();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ConfigError("unknown config key '" + it.key() + "'");
    }
  }
  detail::read_key(j, "lambda", cfg.lambda);
  detail::read_key(j, "p", cfg.p);
  detail::read_key(j, "depth", cfg.depth);
  detail::read_key(j, "resolution", cfg.resolution);
  detail::read_key(j, "pairs", cfg.pairs);
  detail::read_key(j, "seed", cfg.seed);
  detail::read_key(j, "c-const", cfg.c_const);
  detail::read_key(j, "tol", cfg.tol);
  detail::read_key(j, "tent-depth", cfg.tent_depth);
  detail::read_key(j, "corpus-level", cfg.corpus_level);
  detail::read_key(j, "i-min", cfg.i_min);
  detail::read_key(j, "i-max", cfg.i_max);
  detail::read_key(j, "sharpness-grid", cfg.sharpness_grid);
  detail::read_key(j, "net-ratio", cfg.net_ratio);
  detail::read_key(j, "workers", cfg.workers);
}

/// `require_pair` off skips the (lambda, p) admissibility check for commands
/// that never build a domain.
inline void validate(const ExperimentConfig& c, bool require_pair = true) {
  if (!(c.lambda > 0.0 && c.lambda < 0.5)) throw ConfigError("lambda must lie in (0, 1/2)");
  if (!(c.p > 1.0 && c.p < 2.0)) throw ConfigError("p must lie in (1, 2)");
  if (require_pair && !admissible(c.lambda, c.p)) {
    throw AdmissibilityError("inadmissible pair: 2*lambda^(2-p) = " + std::to_string(series_ratio(c.lambda, c.p)) +
                             " >= 1; need p < " + std::to_string(admissible_p_threshold(c.lambda)));
  }
  if (c.depth < 0 || c.depth > kIntervalListCap) throw ConfigError("depth must lie in [0, 24]");
  if (c.tent_depth < 1 || c.tent_depth > 60) throw ConfigError("tent-depth must lie in [1, 60]");
  if (c.corpus_level < 1 || c.corpus_level > 12) throw ConfigError("corpus-level must lie in [1, 12]");
  if (c.resolution < 64 || c.resolution > kRasterResolutionCap) throw ConfigError("resolution must lie in [64, 8192]");
  if (c.pairs < 1) throw ConfigError("pairs must be at least 1");
  if (!(c.c_const > 0.0)) throw ConfigError("c-const must be positive");
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw ConfigError("tol must lie in (0, 1)");
  if (!(c.i_min >= 0 && c.i_min < c.i_max && c.i_max <= 30)) throw ConfigError("need 0 <= i-min < i-max <= 30");
  if (c.sharpness_grid < 2) throw ConfigError("sharpness-grid must be at least 2");
  if (!(c.net_ratio > 0.0 && c.net_ratio < 1.0)) throw ConfigError("net-ratio must lie in (0, 1)");
}

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["lambda"] = c.lambda;
  j["p"] = c.p;
  j["depth"] = c.depth;
  j["resolution"] = c.resolution;
  j["pairs"] = c.pairs;
  j["seed"] = c.seed;
  j["c-const"] = c.c_const;
  j["tol"] = c.tol;
  j["tent-depth"] = c.tent_depth;
  j["corpus-level"] = c.corpus_level;
  j["i-min"] = c.i_min;
  j["i-max"] = c.i_max;
  j["sharpness-grid"] = c.sharpness_grid;
  j["net-ratio"] = c.net_ratio;
  return j;
}

struct ExperimentResult {
  Json report;
  std::map<std::string, std::string> files;  // file name -> contents
  bool all_pass = false;
};

namespace detail {

template <class F>
auto run_stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  // box slope needs three lambda-aligned scales
  if (cfg.depth < 4) throw ConfigError("experiment needs depth >= 4");
  ExperimentResult res;
  Json& rep = res.report;
  rep["schema"] = "combdim-report";
  rep["version"] = kReportSchemaVersion;
  rep["config"] = to_json(cfg);
  rep["conventions"] = {
      {"log", "natural logarithm in every sharpness formula; log2 only where written"},
      {"c", cfg.c_const},
      {"M2", "4 c k with k = 2/ln 2, i.e. 8c/ln 2"},
      {"C_estimate", "lower estimate of the pairwise supremum over the connecting-curve family"},
      {"dimension_check", "bound consistency uses the exact Cantor dimension; box and net values are reported only"}};
  Json checks = Json::array();
  auto check = [&](const std::string& name, bool pass, Json detail) {
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
  };

  const CombDomain domain = detail::run_stage("domain", [&] {
    return CombDomain(CantorParams(cfg.lambda, cfg.tent_depth), cfg.tent_depth);
  });
  rep["domain"] = {{"lambda", cfg.lambda},
                   {"tent_depth", domain.tent_depth()},
                   {"band", domain.band()},
                   {"distance_error", domain.distance_error()},
                   {"dimension", CantorParams(cfg.lambda, 1).dimension()}};

  // estimate_c
  const double lemma_bound = curve_constant_bound(cfg.p, cfg.lambda, cfg.c_const);
  const CEstimate est = detail::run_stage("estimate_c", [&] {
    IntegrationOptions opt;
    opt.tol = cfg.tol;
    return estimate_C(domain, Exponent(cfg.p), cfg.pairs, cfg.seed, opt, cfg.workers);
  });
  rep["estimate_c"] = to_json(est, lemma_bound);
  check("estimate_c_below_lemma_bound", est.value <= lemma_bound, {{"value", est.value}, {"bound", lemma_bound}});
  res.files["pairs.csv"] = pairs_csv(est);

  // detect
  const std::vector<Point2> corpus = two_sided_corpus(cfg.lambda, cfg.corpus_level);
  const auto certs = detail::run_stage("detect", [&] {
    return detect_all(domain, corpus, cfg.i_min, cfg.i_max, cfg.resolution, cfg.workers);
  });
  std::vector<Point2> detected;
  int agree = 0;
  int inconclusive = 0;
  Json verdicts = Json::array();
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const bool pos = certs[k].verdict == Verdict::two_sided;
    if (pos) detected.push_back(corpus[k]);
    if (certs[k].verdict == Verdict::inconclusive) ++inconclusive;
    const bool ok = certs[k].verdict != Verdict::inconclusive && pos == expected_two_sided(corpus[k]);
    agree += ok ? 1 : 0;
    verdicts.push_back({{"center", to_json(corpus[k])},
                        {"verdict", to_string(certs[k].verdict)},
                        {"expected", expected_two_sided(corpus[k]) ? "two_sided" : "not_two_sided"},
                        {"tail_start", certs[k].tail_start}});
  }
  rep["detect"] = {{"corpus_size", corpus.size()},
                   {"levels", Json::array({cfg.i_min, cfg.i_max})},
                   {"resolution", cfg.resolution},
                   {"agreement", agree},
                   {"inconclusive", inconclusive},
                   {"verdicts", verdicts}};
  check("detect_matches_cantor_claim", agree == static_cast<int>(corpus.size()) && inconclusive == 0,
        {{"agreement", agree}, {"corpus_size", corpus.size()}});

  // dimension
  detail::run_stage("dimension", [&] {
    const PointSet reference = cantor_endpoint_set(cfg.lambda, cfg.depth);
    const DimensionEstimate box = box_count(reference, geometric_scales(cfg.lambda, 1, cfg.depth - 1));
    const NetBoundResult net = net_dimension_bound(build_default_hierarchy(reference, cfg.net_ratio));
    Json dim;
    dim["exact"] = CantorParams(cfg.lambda, 1).dimension();
    dim["box"] = to_json(box);
    dim["net"] = to_json(net.estimate);
    dim["net"]["window"] = net.window;
    dim["net"]["tested_levels"] = net.tested_levels;
    if (detected.size() >= 2) {
      const PointSet det(detected, "detected");
      const int top = std::max(3, cfg.corpus_level);
      try {
        dim["detected_box"] = to_json(box_count(det, geometric_scales(cfg.lambda, 1, top)));
      } catch (const RegressionError& e) {
        dim["detected_box"] = {{"error", e.what()}};
      }
    }
    rep["dimension"] = dim;
    res.files["boxcounts.csv"] = boxcounts_csv(box);
    res.files["nets.csv"] = nets_csv(net);
    return 0;
  });

  // bound
  detail::run_stage("bound", [&] {
    const ConsistencyRecord cons = bound_consistency(cfg.lambda, cfg.p, cfg.c_const, est.value);
    const BoundReport br = main_bound(cfg.p, cons.C_ref);
    const double floor = m1_floor(cfg.p);
    rep["bound"] = {{"C_ref", cons.C_ref},
                    {"rhs", br.rhs},
                    {"exact_dim", cons.exact_dim},
                    {"margin", cons.margin},
                    {"scaled_gap", br.scaled_gap},
                    {"m1_floor", floor},
                    {"admissible", br.admissible}};
    check("exact_dim_below_bound", cons.margin > 0.0, {{"margin", cons.margin}});
    check("scaled_gap_above_m1_floor", br.scaled_gap >= floor, {{"scaled_gap", br.scaled_gap}, {"floor", floor}});
    return 0;
  });

  // sharpness
  detail::run_stage("sharpness", [&] {
    const SharpnessReport sr = verify_sharpness(cfg.p, cfg.c_const, cfg.sharpness_grid);
    rep["sharpness"] = {{"C_threshold", sr.C_threshold},
                        {"lambda_interval", Json::array({sr.lambda_lo, sr.lambda_hi})},
                        {"M2", sr.M2},
                        {"f_max", sr.f_max},
                        {"f_endpoint", sr.f_endpoint},
                        {"fprime_min", sr.fprime_min},
                        {"dim_margin_min", sr.dim_margin_min},
                        {"pass", Json::array({sr.pass_a, sr.pass_b, sr.pass_c, sr.pass_d})}};
    check("sharpness", sr.pass(), {{"violations", sr.violations.size()}});
    return 0;
  });

  bool all = true;
  for (const auto& c : checks) all = all && c["pass"].get<bool>();
  rep["checks"] = checks;
  rep["all_pass"] = all;
  res.all_pass = all;
  res.files["report.json"] = dump_json17(rep);
  res.files["domain.svg"] = domain_svg(domain, std::min(domain.tent_depth(), 8), {SvgOverlay{detected}});
  return res;
}

}  // namespace combdim
