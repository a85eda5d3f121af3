#include "ldlab/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "ldlab/aih.hpp"
#include "ldlab/cumulant.hpp"
#include "ldlab/empirical.hpp"
#include "ldlab/error.hpp"
#include "ldlab/models.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/raresim.hpp"
#include "ldlab/tailpredict.hpp"
#include "ldlab/weights.hpp"

namespace ldlab::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.17g", v);
  return buf;
}

// nlohmann prints the shortest round-trip form; fixtures want a fixed 17 digits.
void emit(const json& j, std::string& s) {
  switch (j.type()) {
    case json::value_t::object: {
      s += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) s += ", ";
        first = false;
        s += json(it.key()).dump();
        s += ": ";
        emit(it.value(), s);
      }
      s += '}';
      break;
    }
    case json::value_t::array: {
      s += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) s += ", ";
        emit(j[k], s);
      }
      s += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      s += std::isfinite(v) ? num(v) : "null";
      break;
    }
    default: s += j.dump();
  }
}

std::string dump17(const json& j) {
  std::string s;
  emit(j, s);
  return s;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

int resolved_workers(int w) { return w > 0 ? w : std::max(1, omp_get_max_threads()); }

std::uint64_t as_count(double v, const char* what, bool allow_zero = false) {
  if (!(v >= (allow_zero ? 0.0 : 1.0)) || v != std::floor(v) || v > 9.0e18)
    throw UsageError(std::string(what) + " must be a positive integer");
  return std::uint64_t(v);
}

std::shared_ptr<const ZeroTable> zero_table(const RunConfig& c) {
  const std::filesystem::path path = c.zeros.empty() ? default_zero_table_path() : std::filesystem::path(c.zeros);
  return std::make_shared<const ZeroTable>(load_zero_table(path));
}

WeightFamily family_of(const RunConfig& c) {
  std::shared_ptr<const ZeroTable> zeros;
  if (c.family.rfind("zeta", 0) == 0) zeros = zero_table(c);
  return WeightFamily::parse(c.family, zeros);
}

RangeSpec range_of(const RunConfig& c) {
  RangeSpec r;
  r.theta = c.theta;
  r.c = c.c;
  r.L = c.L;
  r.Q = c.Q;
  r.validate();
  return r;
}

json prediction_json(const TailPrediction& p) {
  return {{"V", p.V},
          {"W", p.W},
          {"Z", p.Z},
          {"s", p.s},
          {"eta", p.eta},
          {"lambda", p.lambda},
          {"log_lambda", p.log_lambda},
          {"error_window", p.error_window},
          {"in_range", p.in_range},
          {"range_used", to_string(p.range_used)}};
}

json estimate_json(const EstimateResult& r) {
  return {{"log_p_hat", r.log_p_hat}, {"stderr_rel", r.stderr_rel}, {"n_samples", r.n_samples},
          {"hits", r.hits},           {"method", to_string(r.method)}, {"s", r.s},
          {"seed", r.seed},           {"workers", r.workers},     {"zero_hits", r.zero_hits},
          {"upper_95", r.upper_95}};
}

json moment_json(const MomentComparison& m) {
  return {{"indices", m.indices}, {"ell", m.ell},   {"empirical", m.empirical},
          {"model", m.model},     {"budget", m.budget}, {"pass", m.pass},
          {"in_range", m.in_range}, {"note", m.note}};
}

class Output {
 public:
  Output(const RunConfig& c, std::ostream& fallback) {
    if (!c.out.empty()) {
      file_.open(c.out);
      if (!file_) fail(ErrorKind::fixture, "cannot open output file " + c.out);
    }
    os_ = c.out.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

int write_json(const RunConfig& c, json result, std::ostream& out) {
  result["config"] = json::parse(to_json(c));
  Output o(c, out);
  *o << dump17(result) << '\n';
  return kOk;
}

int strict_exit(const RunConfig& c, bool in_range, std::ostream& err) {
  if (c.strict && !in_range) {
    err << "ldlab: outside the admissible range (strict mode)\n";
    return kRange;
  }
  return kOk;
}

// ---- subcommands ----------------------------------------------------------

int cmd_predict(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.V) throw UsageError("predict needs --V");
  const WeightFamily f = calibrated(family_of(c));
  const RandomModel y = ModelAssignment::parse(c.model).limit();
  const double e = eta(y).eta;
  const RangeSpec r = range_of(c);
  const TailPrediction main = predict_tail_main(f, e, *c.V, r);
  json j = prediction_json(main);
  try {
    j["corrected"] = prediction_json(predict_tail_cor(f, e, *c.V, r));
  } catch (const Error&) {
    j["corrected"] = nullptr;  // W undefined this low
  }
  write_json(c, j, out);
  return strict_exit(c, main.in_range, err);
}

double default_tilt(const RunConfig& c, const WeightFamily& f, const RandomModel& y) {
  if (c.s) return *c.s;
  return predict_tail_main(calibrated(f), y, *c.V, range_of(c)).s;
}

SimOptions sim_options(const RunConfig& c) {
  SimOptions o;
  o.workers = resolved_workers(c.workers);
  o.head_cutoff = c.head_cutoff > 0 ? c.head_cutoff : kInf;
  o.reuse = c.reuse;
  return o;
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (!c.V) throw UsageError("simulate needs --V");
  const std::uint64_t n = as_count(c.n, "--n");
  const WeightFamily f = family_of(c);
  const ModelAssignment m = ModelAssignment::parse(c.model);
  const Ensemble ens(f, m, c.Q);
  EstimateResult r;
  if (c.method == "direct") {
    r = direct_estimate(ens, *c.V, n, c.seed, sim_options(c));
  } else if (c.method == "tilted") {
    r = tilted_estimate(ens, *c.V, default_tilt(c, f, m.limit()), n, c.seed, sim_options(c));
  } else if (c.method == "exact") {
    r = exact_enumeration(ens, *c.V);
  } else {
    throw UsageError("unknown method " + c.method);
  }
  json j = estimate_json(r);
  j["V"] = *c.V;
  j["lambda_mc"] = -r.log_p_hat;
  return write_json(c, j, out);
}

int cmd_cumulant(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.s) throw UsageError("cumulant needs --s");
  const Ensemble ens(family_of(c), ModelAssignment::parse(c.model), c.Q);
  json j;
  j["s"] = *c.s;
  j["K"] = K_real(ens, *c.s);
  bool in_range = true;
  try {
    const KAsymptotic a = K_asymptotic(ens, *c.s);
    j["K_asym"] = a.value;
    j["rel_err"] = a.rel_err;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::precondition) throw;
    in_range = false;
    j["K_asym"] = nullptr;
    j["rel_err"] = nullptr;
  }
  j["in_range"] = in_range;
  write_json(c, j, out);
  return strict_exit(c, in_range, err);
}

int cmd_eta(const RunConfig& c, std::ostream& out, std::ostream&) {
  const RandomModel y = ModelAssignment::parse(c.model).limit();
  const EtaResult e = eta(y);
  return write_json(c,
                    {{"model", y.name()},
                     {"eta", e.eta},
                     {"scheme_a", e.scheme_a},
                     {"scheme_b", e.scheme_b},
                     {"discrepancy", e.discrepancy},
                     {"crvh_c", y.crvh_c()}},
                    out);
}

int cmd_aih(const RunConfig& c, std::ostream& out, std::ostream& err) {
  MomentComparison m;
  if (c.kind == "characters") {
    m = moment_characters(as_count(c.q, "--q"), c.primes);
  } else if (c.kind == "pit") {
    m = moment_pit(c.primes, c.T);
  } else if (c.kind == "quadchar") {
    m = moment_quadchar(c.x, c.primes);
  } else if (c.kind == "kloosterman") {
    std::optional<KloostermanSampling> sampled;
    if (c.pairs > 0) sampled = KloostermanSampling{as_count(c.pairs, "--pairs"), c.seed};
    m = moment_kloosterman(as_count(c.q, "--q"), c.shifts, sampled);
  } else {
    throw UsageError("unknown aih family " + c.kind);
  }
  write_json(c, moment_json(m), out);
  return strict_exit(c, m.in_range, err);
}

double correlation(const std::vector<PsiRow>& rows) {
  std::vector<double> a, b;
  for (const auto& r : rows) a.push_back(r.actual), b.push_back(r.model);
  return pearson_correlation(a, b);
}

int cmd_empirical(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.points < 2) throw UsageError("--points must be at least 2");
  Output o(c, out);
  std::ostream& os = *o;
  os << "# config: " << to_json(c) << '\n';
  if (c.kind == "psi") {
    const auto zeros = zero_table(c);
    const auto rows = psi_error_compare(log_spaced(1e3, 1e5, std::size_t(c.points)), *zeros, c.n_zeros);
    os << "# correlation: " << num(correlation(rows)) << '\n';
    os << "# x: abscissa; actual: (psi(x) - x)/sqrt(x); model: truncated zero sum\n";
    os << "x,actual,model\n";
    for (const auto& r : rows) os << num(r.x) << ',' << num(r.actual) << ',' << num(r.model) << '\n';
    return kOk;
  }
  EmpiricalTail t;
  std::string model = "circle";
  if (c.kind == "zeta") {
    t = scan_G_zeta(c.T, c.P, c.step);
  } else if (c.kind == "characters") {
    t = scan_G_characters(as_count(c.q, "--q"), c.P);
  } else if (c.kind == "quadratic") {
    t = scan_G_quadratic(c.x, c.P);
    model = "rademacher";
  } else {
    throw UsageError("unknown empirical kind " + c.kind);
  }
  const WeightFamily f = calibrated(WeightFamily::primes());
  const double e = eta(RandomModel::parse(model)).eta;
  RangeSpec r;
  r.Q = std::max(c.P, 3.0);
  os << "# samples: " << t.count() << ", bound: " << num(t.bound) << '\n';
  os << "# V: level; tail_fraction: share of values above V; lambda_pred: -log tail from the "
     << model << " model (nan where undefined)\n";
  os << "V,tail_fraction,lambda_pred\n";
  const double top = t.values.empty() ? 0.0 : t.values.back();
  for (int k = 0; k < c.points; ++k) {
    const double V = top * double(k) / double(c.points - 1);
    double lam = kNaN;
    try {
      lam = predict_tail_main(f, e, V, r).lambda;
    } catch (const Error&) {
    }
    os << num(V) << ',' << num(t.tail(V)) << ',' << num(lam) << '\n';
  }
  return kOk;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.points < 2) throw UsageError("--points must be at least 2");
  const bool v_sweep = c.V_max > c.V_min;
  const bool s_sweep = c.s_max > c.s_min;
  if (v_sweep == s_sweep) throw UsageError("sweep needs exactly one non-empty range (V or s)");
  const WeightFamily f = family_of(c);
  const ModelAssignment m = ModelAssignment::parse(c.model);
  const Ensemble ens(f, m, c.Q);
  const double h = v_sweep ? (c.V_max - c.V_min) / (c.points - 1) : (c.s_max - c.s_min) / (c.points - 1);

  Output o(c, out);
  std::ostream& os = *o;
  os << "# config: " << to_json(c) << '\n';
  if (s_sweep) {
    os << "# s: tilt; K: K_Q(s); second_diff: K(s-h) - 2K(s) + K(s+h) (nan at the ends)\n";
    os << "s,K,second_diff\n";
    std::vector<double> K(std::size_t(c.points));
    for (int k = 0; k < c.points; ++k) K[std::size_t(k)] = K_real(ens, c.s_min + h * k);
    for (int k = 0; k < c.points; ++k) {
      const auto i = std::size_t(k);
      const double d2 = (k == 0 || k + 1 == c.points) ? kNaN : K[i - 1] - 2.0 * K[i] + K[i + 1];
      os << num(c.s_min + h * k) << ',' << num(K[i]) << ',' << num(d2) << '\n';
    }
    return kOk;
  }

  const WeightFamily fc = calibrated(f);
  const double e = eta(m.limit()).eta;
  const RangeSpec r = range_of(c);
  const bool sim = !c.simulate.empty();
  std::uint64_t n = 0;
  if (sim) {
    if (c.simulate != "tilted" && c.simulate != "direct") throw UsageError("--simulate must be tilted or direct");
    n = as_count(c.n, "--n");
  }
  os << "# V: level; lambda = -log P(H > V) predicted; s: saddle tilt; in_range: admissible window"
     << (sim ? "; log_p_hat, stderr_rel, log_lambda_mc: simulation at seed + row index" : "") << '\n';
  os << "V,W,Z,s,lambda,log_lambda,error_window,in_range";
  if (sim) os << ",log_p_hat,stderr_rel,log_lambda_mc";
  os << '\n';
  for (int k = 0; k < c.points; ++k) {
    const double V = c.V_min + h * k;
    const TailPrediction p = predict_tail_main(fc, e, V, r);
    os << num(V) << ',' << num(p.W) << ',' << num(p.Z) << ',' << num(p.s) << ',' << num(p.lambda) << ','
       << num(p.log_lambda) << ',' << num(p.error_window) << ',' << (p.in_range ? 1 : 0);
    if (sim) {
      const std::uint64_t seed = c.seed + std::uint64_t(k);
      const EstimateResult est = c.simulate == "tilted"
                                     ? tilted_estimate(ens, V, p.s, n, seed, sim_options(c))
                                     : direct_estimate(ens, V, n, seed, sim_options(c));
      os << ',' << num(est.log_p_hat) << ',' << num(est.stderr_rel) << ',' << num(std::log(-est.log_p_hat));
    }
    os << '\n';
  }
  return kOk;
}

int cmd_calibrate(const RunConfig& c, std::ostream& out, std::ostream&) {
  WeightFamily f = family_of(c);
  const std::vector<double> grid = c.grid.empty() ? default_calibration_grid(f) : c.grid;
  const CalibrationResult cal = estimate_CA(f, grid);
  json j = {{"family", f.name()}, {"c_A", cal.c_A}, {"grid", cal.grid}, {"estimates", cal.estimates}};
  if (f.c_A) j["c_A_reference"] = *f.c_A;
  const ModelAssignment m = ModelAssignment::parse(c.model);
  j["model"] = m.name();
  j["crvh_c"] = m.limit().crvh_c();
  if (c.fit_C0) {
    const C0Fit fit = fit_C0(Ensemble(f, m, c.Q));
    j["C0"] = fit.C0;
    j["C0_raw_min"] = fit.raw_min;
    j["C0_verified"] = fit.verified;
    j["C0_worst_margin"] = fit.worst_margin;
  }
  return write_json(c, j, out);
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.subcommand == "predict") return cmd_predict(c, out, err);
  if (c.subcommand == "simulate") return cmd_simulate(c, out, err);
  if (c.subcommand == "cumulant") return cmd_cumulant(c, out, err);
  if (c.subcommand == "eta") return cmd_eta(c, out, err);
  if (c.subcommand == "aih") return cmd_aih(c, out, err);
  if (c.subcommand == "empirical") return cmd_empirical(c, out, err);
  if (c.subcommand == "sweep") return cmd_sweep(c, out, err);
  if (c.subcommand == "calibrate") return cmd_calibrate(c, out, err);
  throw UsageError("unknown subcommand '" + c.subcommand + "'");
}

// A JSON result carries its config under "config"; a CSV carries it on a "# config: " line.
RunConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::fixture, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const std::string tag = "# config: ";
  if (text.rfind(tag, 0) == 0) return config_from_json(text.substr(tag.size(), text.find('\n') - tag.size()));
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw UsageError(path + " is neither a result nor a config");
  return config_from_json(j.contains("config") ? j["config"].dump() : text);
}

}  // namespace

std::string to_json(const RunConfig& c) {
  const json j = {{"subcommand", c.subcommand},
                  {"family", c.family},
                  {"model", c.model},
                  {"kind", c.kind},
                  {"Q", c.Q},
                  {"V", opt(c.V)},
                  {"s", opt(c.s)},
                  {"n", c.n},
                  {"T", c.T},
                  {"q", c.q},
                  {"x", c.x},
                  {"P", c.P},
                  {"step", c.step},
                  {"seed", c.seed},
                  {"workers", c.workers},
                  {"method", c.method},
                  {"head_cutoff", c.head_cutoff},
                  {"reuse", c.reuse},
                  {"out", c.out},
                  {"zeros", c.zeros},
                  {"n_zeros", c.n_zeros},
                  {"theta", c.theta},
                  {"c", c.c},
                  {"L", opt(c.L)},
                  {"strict", c.strict},
                  {"primes", c.primes},
                  {"shifts", c.shifts},
                  {"pairs", c.pairs},
                  {"V_min", c.V_min},
                  {"V_max", c.V_max},
                  {"s_min", c.s_min},
                  {"s_max", c.s_max},
                  {"points", c.points},
                  {"simulate", c.simulate},
                  {"grid", c.grid},
                  {"fit_C0", c.fit_C0}};
  return dump17(j);
}

RunConfig config_from_json(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  if (!j.is_object()) throw UsageError("config is not a JSON object");
  RunConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key) && !j[key].is_null()) j[key].get_to(field);
  };
  try {
    get("subcommand", c.subcommand);
    get("family", c.family);
    get("model", c.model);
    get("kind", c.kind);
    get("Q", c.Q);
    c.V = get_opt(j, "V");
    c.s = get_opt(j, "s");
    get("n", c.n);
    get("T", c.T);
    get("q", c.q);
    get("x", c.x);
    get("P", c.P);
    get("step", c.step);
    get("seed", c.seed);
    get("workers", c.workers);
    get("method", c.method);
    get("head_cutoff", c.head_cutoff);
    get("reuse", c.reuse);
    get("out", c.out);
    get("zeros", c.zeros);
    get("n_zeros", c.n_zeros);
    get("theta", c.theta);
    get("c", c.c);
    c.L = get_opt(j, "L");
    get("strict", c.strict);
    get("primes", c.primes);
    get("shifts", c.shifts);
    get("pairs", c.pairs);
    get("V_min", c.V_min);
    get("V_max", c.V_max);
    get("s_min", c.s_min);
    get("s_max", c.s_max);
    get("points", c.points);
    get("simulate", c.simulate);
    get("grid", c.grid);
    get("fit_C0", c.fit_C0);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::optional<double> V, s, L;
  std::string replay_path;
  std::optional<std::string> replay_out;

  CLI::App app{"ldlab: large deviations of weighted sums of random multiplicative models"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto common = [&](CLI::App* sc, bool weight_family = true) {
    if (weight_family)
      sc->add_option("--family", c.family, "integers | primes | zeta | lfl:<m> | synthetic:<alpha>:<beta>:<A>");
    sc->add_option("--model", c.model, "circle | roots:<m> | rademacher | radzero:<p> | radzero:p | satotate | lfl:p:<m> ...");
    sc->add_option("--Q", c.Q, "weight cutoff");
    sc->add_option("--workers", c.workers, "worker threads (0: all available)");
    sc->add_option("--seed", c.seed);
    sc->add_option("--out", c.out, "output file (default stdout)");
    sc->add_option("--zeros", c.zeros, "zeta zero ordinates file");
    sc->add_flag("--strict", c.strict, "exit 3 when outside the admissible range");
    sc->add_option("--theta", c.theta);
    sc->add_option("--c", c.c);
  };

  auto* predict = app.add_subcommand("predict", "tail prediction lambda(V)");
  common(predict);
  predict->add_option("--V", V)->required();
  predict->add_option("--L", L, "moment-matching order for the L-restricted ranges");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of P(H > V)");
  common(simulate);
  simulate->add_option("--V", V)->required();
  simulate->add_option("--s", s, "tilt (default: the saddle s(V))");
  simulate->add_option("--n", c.n);
  simulate->add_option("--method", c.method, "direct | tilted | exact");
  simulate->add_option("--head-cutoff", c.head_cutoff, "coordinates above this weight are shared across --reuse samples");
  simulate->add_option("--reuse", c.reuse);

  auto* cumulant = app.add_subcommand("cumulant", "K_Q(s) and its asymptotic");
  common(cumulant);
  cumulant->add_option("--s", s)->required();

  auto* eta_cmd = app.add_subcommand("eta", "the model constant eta");
  common(eta_cmd);

  auto* aih = app.add_subcommand("aih", "moment comparisons against independent models");
  common(aih, false);
  aih->add_option("--family", c.kind, "characters | pit | quadchar | kloosterman")->required();
  aih->add_option("--q", c.q);
  aih->add_option("--T", c.T);
  aih->add_option("--x", c.x);
  aih->add_option("--primes", c.primes)->delimiter(',');
  aih->add_option("--shifts", c.shifts)->delimiter(',');
  aih->add_option("--pairs", c.pairs, "sampled (a, b) pairs for kloosterman (0: all)");

  auto* empirical = app.add_subcommand("empirical", "empirical tails of arithmetic statistics");
  common(empirical);
  empirical->add_option("kind", c.kind, "zeta | characters | quadratic | psi")->required();
  empirical->add_option("--T", c.T);
  empirical->add_option("--P", c.P);
  empirical->add_option("--step", c.step);
  empirical->add_option("--q", c.q);
  empirical->add_option("--x", c.x);
  empirical->add_option("--n-zeros", c.n_zeros);
  empirical->add_option("--points", c.points);

  auto* sweep = app.add_subcommand("sweep", "CSV sweeps over V or s");
  common(sweep);
  sweep->add_option("--V-min", c.V_min);
  sweep->add_option("--V-max", c.V_max);
  sweep->add_option("--s-min", c.s_min);
  sweep->add_option("--s-max", c.s_max);
  sweep->add_option("--points", c.points);
  sweep->add_option("--simulate", c.simulate, "tilted | direct");
  sweep->add_option("--n", c.n);
  sweep->add_option("--head-cutoff", c.head_cutoff);
  sweep->add_option("--reuse", c.reuse);
  sweep->add_option("--L", L);

  auto* calibrate = app.add_subcommand("calibrate", "fit C_A, report crvh_c, optionally fit C0");
  common(calibrate);
  calibrate->add_option("--grid", c.grid, "calibration abscissas")->delimiter(',');
  calibrate->add_flag("--fit-C0", c.fit_C0);

  auto* replay = app.add_subcommand("replay", "rerun from a saved result or config");
  replay->add_option("file", replay_path)->required();
  replay->add_option("--out", replay_out);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "ldlab: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (replay->parsed()) {
      c = config_from_file(replay_path);
      if (replay_out) c.out = *replay_out;
    } else {
      c.subcommand = app.get_subcommands().front()->get_name();
      c.V = V;
      c.s = s;
      c.L = L;
      c.workers = resolved_workers(c.workers);
    }
    return dispatch(c, out, err);
  } catch (const UsageError& e) {
    err << "ldlab: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "ldlab: " << e.what() << '\n';
    return e.kind() == ErrorKind::numeric ? 1 : kRange;
  } catch (const json::exception& e) {
    err << "ldlab: " << e.what() << '\n';
    return kUsage;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ldlab::cli
