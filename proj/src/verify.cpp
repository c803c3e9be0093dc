#include "gmedian/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <tuple>

#include "gmedian/median.hpp"
#include "gmedian/paperfun.hpp"

namespace gmedian {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A value or the reason it could not be computed.
struct Field {
  std::optional<double> value;
  std::string error;
};

Field attempt(const std::function<double()>& compute) {
  try {
    return {compute(), {}};
  } catch (const std::exception& e) {
    return {std::nullopt, e.what()};
  }
}

struct PointEval {
  double x = 0.0;
  std::optional<FirstOrder> base;
  std::string base_error;
  Field m_second, xphi_second, g, g_prime, A, A_prime, B, B_prime;
};

PointEval evaluate_point(double x) {
  PointEval e;
  e.x = x;
  try {
    e.base = first_order(x);
  } catch (const std::exception& ex) {
    e.base_error = ex.what();
    return e;
  }
  const FirstOrder& p = *e.base;
  e.m_second = attempt([x] { return median_second_derivative(x); });
  e.xphi_second = attempt([x] { return phi_bundle(x).xphi_second; });
  e.g = attempt([&p] { return g_value(p); });
  e.g_prime = attempt([&p] { return g_prime(p); });
  e.A = attempt([&p] { return A_value(p); });
  e.A_prime = attempt([&p] { return A_prime(p); });
  if (e.g.value && e.A.value) {
    e.B = {-p.xphi_prime * std::exp(-*e.g.value) - *e.A.value, {}};
  } else {
    e.B = {std::nullopt, "B needs g and A: " + e.g.error + e.A.error};
  }
  e.B_prime = attempt([x] { return B_prime(x); });
  return e;
}

class RecordSink {
 public:
  RecordSink(std::vector<VerificationRecord>& out, double tol)
      : out_(out), tol_(tol) {}

  void add(double x, std::string_view id, double lhs, double rhs) {
    VerificationRecord r;
    r.x = x;
    r.check_id = std::string(id);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    const double floor = is_finite_difference_check(id) ? -tol_ : 0.0;
    r.pass = r.margin > floor;
    if (std::isnan(r.margin)) r.diagnostic = "non-finite value";
    out_.push_back(std::move(r));
  }

  void fail(double x, std::string_view id, std::string diagnostic) {
    VerificationRecord r;
    r.x = x;
    r.check_id = std::string(id);
    r.lhs = r.rhs = r.margin = kNaN;
    r.pass = false;
    r.diagnostic = std::move(diagnostic);
    out_.push_back(std::move(r));
  }

  // Adds lhs < rhs when every field it needs is present.
  template <class... Fields>
  void add_if(double x, std::string_view id,
              const std::function<std::pair<double, double>()>& sides,
              const Fields&... needed) {
    std::string missing;
    ((missing += needed.value ? std::string() : needed.error + "; "), ...);
    if (!missing.empty()) {
      fail(x, id, missing);
      return;
    }
    const auto [lhs, rhs] = sides();
    add(x, id, lhs, rhs);
  }

 private:
  std::vector<VerificationRecord>& out_;
  double tol_;
};

}  // namespace

const std::vector<std::string_view>& check_registry() {
  static const std::vector<std::string_view> ids = {
      "xphi_in_range",
      "xphi_decreasing",
      "phi_decreasing",
      "phi_lt_neg_xphiprime",
      "mprime_in_01",
      "msecond_positive",
      "g_lt_xphi",
      "negGprime_lt_negXphiprimePhi",
      "negGprime_lt_negXphiprime",
      "A_lt_xphi3_over6",
      "negAprime_bound",
      "B_positive",
      "B_upper_bound",
      "negBprime_bound",
      "key_ineq_xphi2nd_lt_xphiprime2",
      "cube_bound",
  };
  return ids;
}

bool is_finite_difference_check(std::string_view check_id) {
  return check_id == "msecond_positive" ||
         check_id == "key_ineq_xphi2nd_lt_xphiprime2";
}

void validate(const GridSpec& grid) {
  if (!std::isfinite(grid.start) || !std::isfinite(grid.stop)) {
    throw domain_error("grid: start and stop must be finite");
  }
  if (grid.start < kMinShape || grid.stop > kMaxShape) {
    throw domain_error("grid: points must lie in [1e-3, 1e6]");
  }
  if (!(grid.start < grid.stop)) throw domain_error("grid: need start < stop");
  if (grid.count < 2) throw domain_error("grid: need count >= 2");
}

std::vector<double> grid_points(const GridSpec& grid) {
  validate(grid);
  const int n = grid.count;
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double last = static_cast<double>(n - 1);
  if (grid.spacing == Spacing::linear) {
    const double step = (grid.stop - grid.start) / last;
    for (int i = 0; i < n; ++i) xs[i] = grid.start + step * i;
  } else {
    const double log_start = std::log(grid.start);
    const double step = (std::log(grid.stop) - log_start) / last;
    for (int i = 0; i < n; ++i) xs[i] = std::exp(log_start + step * i);
  }
  xs.front() = grid.start;
  xs.back() = grid.stop;
  return xs;
}

std::vector<VerificationRecord> run_checks(const GridSpec& grid, double tol) {
  const std::vector<double> xs = grid_points(grid);
  std::vector<PointEval> evals;
  evals.reserve(xs.size());
  for (double x : xs) evals.push_back(evaluate_point(x));

  std::vector<VerificationRecord> records;
  records.reserve(xs.size() * check_registry().size());
  RecordSink sink(records, tol);


  for (std::size_t i = 0; i < evals.size(); ++i) {
    const PointEval& e = evals[i];
    const double x = e.x;
    if (!e.base) {
      for (std::string_view id : check_registry()) sink.fail(x, id, e.base_error);
      continue;
    }
    const FirstOrder& p = *e.base;

    sink.add(x, "xphi_in_range",
             std::max(1.0 / 3.0 - p.xphi, p.xphi - std::numbers::ln2), 0.0);

    // Pair (i, i+1); the last point pairs with its predecessor.
    const std::size_t lo = i + 1 < evals.size() ? i : i - 1;
    const PointEval& left = evals[lo];
    const PointEval& right = evals[lo + 1];
    if (left.base && right.base) {
      sink.add(x, "xphi_decreasing", right.base->xphi, left.base->xphi);
      sink.add(x, "phi_decreasing", right.base->phi, left.base->phi);
    } else {
      const std::string why = "neighbour evaluation failed: " +
                              left.base_error + right.base_error;
      sink.fail(x, "xphi_decreasing", why);
      sink.fail(x, "phi_decreasing", why);
    }

    const double neg_x_phi_prime = -x * p.phi_prime;
    sink.add(x, "phi_lt_neg_xphiprime", p.phi, neg_x_phi_prime);
    sink.add(x, "mprime_in_01", std::max(-p.m_prime, p.m_prime - 1.0), 0.0);
    sink.add_if(x, "msecond_positive",
                [&] { return std::pair{0.0, *e.m_second.value}; }, e.m_second);
    sink.add_if(x, "g_lt_xphi", [&] { return std::pair{*e.g.value, p.xphi}; },
                e.g);
    sink.add_if(x, "negGprime_lt_negXphiprimePhi",
                [&] {
                  return std::pair{-*e.g_prime.value, neg_x_phi_prime * p.phi};
                },
                e.g_prime);
    sink.add_if(x, "negGprime_lt_negXphiprime",
                [&] { return std::pair{-*e.g_prime.value, neg_x_phi_prime}; },
                e.g_prime);
    const double phi2 = p.phi * p.phi;
    const double phi3 = phi2 * p.phi;
    sink.add_if(x, "A_lt_xphi3_over6",
                [&] { return std::pair{*e.A.value, x * phi3 / 6.0}; }, e.A);
    sink.add_if(x, "negAprime_bound",
                [&] {
                  return std::pair{-*e.A_prime.value,
                                   -phi3 / 6.0 - 0.5 * x * p.phi_prime * phi2};
                },
                e.A_prime);
    sink.add_if(x, "B_positive", [&] { return std::pair{0.0, *e.B.value}; },
                e.B);
    sink.add_if(x, "B_upper_bound",
                [&] { return std::pair{*e.B.value, 4.0 / (135.0 * x * x)}; },
                e.B);
    sink.add_if(x, "negBprime_bound",
                [&] {
                  return std::pair{-*e.B_prime.value, 8.0 / (135.0 * x * x * x)};
                },
                e.B_prime);
    sink.add_if(x, "key_ineq_xphi2nd_lt_xphiprime2",
                [&] {
                  return std::pair{*e.xphi_second.value,
                                   x * p.phi_prime * p.phi_prime};
                },
                e.xphi_second);
    sink.add(x, "cube_bound", p.xphi * p.xphi * p.xphi, 48.0 / 135.0);
  }

  std::stable_sort(records.begin(), records.end(),
                   [](const VerificationRecord& a, const VerificationRecord& b) {
                     return std::tie(a.x, a.check_id) < std::tie(b.x, b.check_id);
                   });
  return records;
}

std::size_t count_failures(const std::vector<VerificationRecord>& records) {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(),
      [](const VerificationRecord& r) { return !r.pass; }));
}

ScanResult scan_max(HFunction target, double a, double b, long samples) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a > 0.0) || !(a < b)) {
    throw domain_error("scan_max: need 0 < a < b");
  }
  if (samples < 2) throw domain_error("scan_max: need at least 2 samples");
  const auto f = [target](double t) {
    return target == HFunction::h1 ? h1(t) : h2(t);
  };

  const double step = (b - a) / static_cast<double>(samples - 1);
  auto sample_at = [&](long i) { return i == samples - 1 ? b : a + step * i; };
  long best = 0;
  double best_value = f(a);
  for (long i = 1; i < samples; ++i) {
    const double v = f(sample_at(i));
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }

  // Golden-section search for a maximum in the neighbouring cells.
  double lo = best > 0 ? sample_at(best - 1) : a;
  double hi = best < samples - 1 ? sample_at(best + 1) : b;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > 1e-12) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_value = f(refined);
  if (refined_value > best_value) return {refined, refined_value};
  return {sample_at(best), best_value};
}

}  // namespace gmedian
