#include "ldlab/weights.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ldlab/error.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/primes.hpp"

namespace ldlab {

ZeroTable::ZeroTable(std::vector<double> ordinates) : ordinates_(std::move(ordinates)) {
  rho_abs_.reserve(ordinates_.size());
  for (std::size_t i = 0; i < ordinates_.size(); ++i) {
    const double g = ordinates_[i];
    if (!(g > 0.0) || !std::isfinite(g))
      fail(ErrorKind::fixture, "zero table: non-positive ordinate at line " + std::to_string(i + 1));
    if (i > 0 && !(g > ordinates_[i - 1]))
      fail(ErrorKind::fixture, "zero table: ordinates not ascending at line " + std::to_string(i + 1));
    rho_abs_.push_back(std::sqrt(0.25 + g * g));
  }
}

ZeroTable load_zero_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::fixture, "cannot open zero table " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const char* begin = line.c_str() + first;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || line.find_first_not_of(" \t\r", std::size_t(end - line.c_str())) != std::string::npos)
      fail(ErrorKind::fixture, "zero table: malformed line " + std::to_string(lineno));
    values.push_back(v);
  }
  return ZeroTable(std::move(values));
}

std::filesystem::path default_zero_table_path() {
  if (const char* dir = std::getenv("LDLAB_DATA"); dir && *dir)
    return std::filesystem::path(dir) / "zeta_zeros.txt";
  return std::filesystem::path(LDLAB_DEFAULT_DATA_DIR) / "zeta_zeros.txt";
}

// Built-in families. B may be taken arbitrarily large for all of them; 10 is
// already far past anything visible at desk scale.
WeightFamily WeightFamily::integers() {
  WeightFamily f;
  f.kind = FamilyKind::integers;
  f.alpha = 1.0;
  f.beta = 1.0;
  f.A = 1.0;
  f.B = 10.0;
  f.c_A = kEulerGamma;
  return f;
}

WeightFamily WeightFamily::primes() {
  WeightFamily f;
  f.kind = FamilyKind::primes;
  f.alpha = 1.0;
  f.beta = 1.0;
  f.A = 0.0;
  f.B = 10.0;
  f.c_A = 0.2614972128476428;
  return f;
}

WeightFamily WeightFamily::zeta_zeros(std::shared_ptr<const ZeroTable> table) {
  require(table != nullptr, "zeta_zeros family needs a zero table");
  WeightFamily f;
  f.kind = FamilyKind::zeta_zeros;
  f.alpha = 1.0 / (2.0 * kPi);
  f.beta = 2.0 * kPi;
  f.A = 2.0;
  f.B = 10.0;
  f.zeros = std::move(table);
  return f;
}

WeightFamily WeightFamily::lfunction_local(int m) {
  require(m == 0 || m >= 2, "lfunction_local order must be >= 2 (or 0 for the circle)");
  WeightFamily f;
  f.kind = FamilyKind::lfunction_local;
  f.alpha = 1.0;
  f.beta = 1.0;
  f.A = 0.0;
  f.B = 10.0;
  f.order = m;
  f.c_A = lfunction_local_constant(m);
  return f;
}

WeightFamily WeightFamily::synthetic(double alpha, double beta, double A) {
  require(alpha > 0.0 && beta > 0.0 && A >= 0.0, "synthetic family needs alpha > 0, beta > 0, A >= 0");
  WeightFamily f;
  f.kind = FamilyKind::synthetic;
  f.alpha = alpha;
  f.beta = beta;
  f.A = A;
  f.B = kInf;
  return f;
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(!s.empty() && end && *end == '\0' && std::isfinite(v), "malformed number for " + what + ": '" + s + "'");
  return v;
}

}  // namespace

WeightFamily WeightFamily::parse(std::string_view spec, std::shared_ptr<const ZeroTable> zeros) {
  const auto parts = split(spec, ':');
  const std::string& head = parts[0];
  if (head == "integers" && parts.size() == 1) return integers();
  if (head == "primes" && parts.size() == 1) return primes();
  if ((head == "zeta" || head == "zeta_zeros") && parts.size() == 1) {
    if (!zeros) zeros = std::make_shared<const ZeroTable>(load_zero_table(default_zero_table_path()));
    return zeta_zeros(std::move(zeros));
  }
  if ((head == "lfl" || head == "lfunction_local") && parts.size() == 2) {
    if (parts[1] == "circle" || parts[1] == "inf") return lfunction_local(0);
    return lfunction_local(int(parse_real(parts[1], "order m")));
  }
  if (head == "synthetic" && parts.size() == 4)
    return synthetic(parse_real(parts[1], "alpha"), parse_real(parts[2], "beta"),
                     parse_real(parts[3], "A"));
  require(false, "unknown family '" + std::string(spec) + "'");
  return {};
}

std::string WeightFamily::name() const {
  std::ostringstream os;
  switch (kind) {
    case FamilyKind::integers: return "integers";
    case FamilyKind::primes: return "primes";
    case FamilyKind::zeta_zeros: return "zeta";
    case FamilyKind::lfunction_local:
      if (order == 0) return "lfl:circle";
      return "lfl:" + std::to_string(order);
    case FamilyKind::synthetic:
      os.precision(17);
      os << "synthetic:" << alpha << ':' << beta << ':' << A;
      return os.str();
  }
  return "?";
}

double lfunction_local_mean(std::uint64_t p, int m) {
  if (m == 0) return 0.0;
  return -std::log1p(-std::pow(double(p), -double(m))) / m;
}

double lfunction_local_weight(std::uint64_t p, int m) {
  require(p >= 2, "lfunction_local weight needs p >= 2");
  return 1.0 / (-std::log1p(-1.0 / double(p)) - lfunction_local_mean(p, m));
}

double lfunction_local_constant(int m) {
  if (m == 0) return kEulerGamma;
  require(m >= 2, "lfunction_local order must be >= 2 (or 0 for the circle)");
  return kEulerGamma - std::log(boost::math::zeta(double(m))) / m;
}

namespace {

// Weights of the synthetic family: q_n solves alpha * int_{beta'}^{q_n} g = n,
// g(t) = (log(t/beta))^(A-1). Each step integrates from the previous point.
void enumerate_synthetic(const WeightFamily& f, double x, Weights& out) {
  const double start = f.beta_prime();
  auto g = [&](double t) { return std::pow(std::log(t / f.beta), f.A - 1.0); };
  double prev = start;
  for (std::uint64_t n = 1;; ++n) {
    double cur = prev + 1.0 / (f.alpha * g(prev));
    for (int it = 0; it < 50; ++it) {
      const double F = f.alpha * boost::math::quadrature::gauss<double, 10>::integrate(g, prev, cur) - 1.0;
      const double step = F / (f.alpha * g(cur));
      cur -= step;
      if (std::abs(step) <= 1e-14 * cur) break;
    }
    if (cur > x) break;
    out.q.push_back(cur);
    out.label.push_back(n);
    prev = cur;
  }
}

}  // namespace

Weights enumerate_labeled(const WeightFamily& family, double x) {
  require(std::isfinite(x), "weight enumeration needs finite x");
  Weights w;
  if (x < 1.0) {
    if (family.kind == FamilyKind::zeta_zeros && family.zeros->empty() && x > 0.0)
      fail(ErrorKind::fixture, "fixture range exceeded: zero table is empty");
    return w;
  }
  switch (family.kind) {
    case FamilyKind::integers: {
      const auto n = std::uint64_t(std::floor(x));
      w.q.reserve(n);
      w.label.reserve(n);
      for (std::uint64_t i = 1; i <= n; ++i) {
        w.q.push_back(double(i));
        w.label.push_back(i);
      }
      break;
    }
    case FamilyKind::primes:
      for (std::uint64_t p : primes_up_to(std::uint64_t(std::floor(x)))) {
        w.q.push_back(double(p));
        w.label.push_back(p);
      }
      break;
    case FamilyKind::lfunction_local:
      // q_p lies in (p - 1, p], so primes up to x + 1 suffice
      for (std::uint64_t p : primes_up_to(std::uint64_t(std::floor(x)) + 1)) {
        const double q = lfunction_local_weight(p, family.order);
        if (q > x) break;
        w.q.push_back(q);
        w.label.push_back(p);
      }
      break;
    case FamilyKind::zeta_zeros: {
      const ZeroTable& t = *family.zeros;
      if (x > t.coverage())
        fail(ErrorKind::fixture, "fixture range exceeded: zero table covers weights up to " +
                                     std::to_string(t.coverage()) + ", requested " + std::to_string(x));
      for (std::size_t i = 0; i < t.size() && t.rho_abs(i) <= x; ++i) {
        for (int copy = 0; copy < 2; ++copy) {
          w.q.push_back(t.rho_abs(i));
          w.label.push_back(i + 1);
        }
      }
      break;
    }
    case FamilyKind::synthetic:
      enumerate_synthetic(family, x, w);
      break;
  }
  return w;
}

std::vector<double> enumerate_weights(const WeightFamily& family, double x) {
  return enumerate_labeled(family, x).q;
}

std::uint64_t counting(const WeightFamily& family, double x) {
  require(x >= 0.0, "counting needs x >= 0");
  if (family.kind == FamilyKind::integers) return x < 1.0 ? 0 : std::uint64_t(std::floor(x));
  return enumerate_labeled(family, x).size();
}

double harmonic_sum(const WeightFamily& family, double x) {
  const Weights w = enumerate_labeled(family, x);
  CompensatedSum acc;
  for (double q : w.q) acc.add(1.0 / q);
  return acc.value();
}

double harmonic_main_terms(const WeightFamily& f, double x) {
  require(x > 1.0, "harmonic main terms need x > 1");
  const double L = std::log(x);
  const double lb = std::log(f.beta);
  if (f.A > 0.0) return f.alpha / f.A * std::pow(L, f.A) - f.alpha * lb * std::pow(L, f.A - 1.0);
  require(L > 1.0, "harmonic main terms for A = 0 need x > e");
  return f.alpha * std::log(L) - f.alpha * lb / L;
}

double harmonic_asymptotic(const WeightFamily& f, double x) {
  if (!f.c_A) fail(ErrorKind::precondition, "constant not calibrated");
  require(x >= 4.0 * f.beta_prime(), "harmonic asymptotic needs x >= 4 (2 + beta)^2");
  return harmonic_main_terms(f, x) + *f.c_A;
}

CalibrationResult estimate_CA(const WeightFamily& family, std::span<const double> grid) {
  require(!grid.empty(), "calibration grid is empty");
  require(grid.front() >= 1000.0, "calibration grid must start at 1000 or above");
  for (std::size_t i = 1; i < grid.size(); ++i)
    require(grid[i] > grid[i - 1], "calibration grid must be strictly ascending");
  const HarmonicTable table(family, grid.back());
  CalibrationResult r;
  r.grid.assign(grid.begin(), grid.end());
  CompensatedSum acc;
  for (double x : grid) {
    const double e = table.H(x) - harmonic_main_terms(family, x);
    r.estimates.push_back(e);
    acc.add(e);
  }
  r.c_A = acc.value() / double(grid.size());
  return r;
}

std::vector<double> default_calibration_grid(const WeightFamily& family) {
  if (family.kind == FamilyKind::zeta_zeros) {
    std::vector<double> g;
    const double top = std::min(family.zeros->coverage(), 2500.0);
    require(top >= 1000.0, "zero table too short to calibrate (needs weights up to 1000)");
    for (double x = 1000.0; x <= top + 1e-9; x += 250.0) g.push_back(x);
    return g;
  }
  return {1e4, 1e5, 1e6};
}

WeightFamily calibrated(const WeightFamily& family) {
  if (family.c_A) return family;
  const auto grid = default_calibration_grid(family);
  return family.with_c_A(estimate_CA(family, grid).c_A);
}

HarmonicDiff harmonic_diff(const WeightFamily& f, double u, double v) {
  require(u >= 2.0 && v >= 2.0, "harmonic difference needs u, v >= 2");
  HarmonicDiff d;
  d.tau = std::log(u) - std::log(v);
  require(std::abs(d.tau) <= std::log(v) / 2.0,
          "harmonic difference hypothesis violated: |log u - log v| > (log v)/2");
  const HarmonicTable table(f, std::max(u, v));
  d.exact = table.H(u) - table.H(v);
  d.predicted = f.alpha * d.tau * std::pow(std::log(v), f.A - 1.0);
  return d;
}

HarmonicTable::HarmonicTable(const WeightFamily& family, double Q)
    : family_(family), Q_(Q), weights_(enumerate_labeled(family, Q)) {
  prefix_.reserve(weights_.size());
  CompensatedSum acc;
  for (double q : weights_.q) {
    acc.add(1.0 / q);
    prefix_.push_back(acc.value());
  }
}

double HarmonicTable::H(double x) const {
  require(x <= Q_ * (1.0 + 1e-15), "harmonic table queried beyond its range");
  const auto it = std::upper_bound(weights_.q.begin(), weights_.q.end(), x);
  const auto n = std::size_t(it - weights_.q.begin());
  return n == 0 ? 0.0 : prefix_[n - 1];
}

std::optional<double> HarmonicTable::smallest_weight_reaching(double V) const {
  const auto it = std::lower_bound(prefix_.begin(), prefix_.end(), V);
  if (it == prefix_.end()) return std::nullopt;
  return weights_.q[std::size_t(it - prefix_.begin())];
}

}  // namespace ldlab
