#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gmedian/errors.hpp"

namespace gmedian {

enum class Spacing { linear, logarithmic };

struct GridSpec {
  double start = 1e-2;
  double stop = 1e3;
  int count = 200;
  Spacing spacing = Spacing::logarithmic;
};

/// Throws domain_error unless 1e-3 <= start < stop <= 1e6 and count >= 2.
void validate(const GridSpec& grid);

/// Grid abscissae; the first and last points are exactly start and stop.
std::vector<double> grid_points(const GridSpec& grid);

/// One inequality lhs < rhs at one x. margin = rhs - lhs.
struct VerificationRecord {
  double x = 0.0;
  std::string check_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string diagnostic;  // empty unless the evaluation itself failed
};

/// The sixteen check ids, in registry order.
const std::vector<std::string_view>& check_registry();

/// Checks that rest on finite differences and get margin > -tol.
bool is_finite_difference_check(std::string_view check_id);

inline constexpr double kDefaultCheckTolerance = 1e-10;

/// Evaluates every registry check at every grid point. Records come back
/// sorted by (x, check_id). Evaluation errors become failed records with a
/// diagnostic; the sweep itself never throws past grid validation.
///
/// Two-sided checks are folded into one strict inequality:
///   xphi_in_range: max(1/3 - x phi, x phi - ln 2) < 0
///   mprime_in_01:  max(-m', m' - 1) < 0
/// The decreasing checks compare x_i against x_{i+1} (the last point
/// against its predecessor), so they are grid-level claims.
std::vector<VerificationRecord> run_checks(
    const GridSpec& grid, double tol = kDefaultCheckTolerance);

std::size_t count_failures(const std::vector<VerificationRecord>& records);

enum class HFunction { h1, h2 };

struct ScanResult {
  double argmax = 0.0;
  double max = 0.0;
};

/// Maximum of h1 or h2 on [a, b]: uniform samples (endpoints included), then
/// golden-section refinement to 1e-12 around the best sample.
ScanResult scan_max(HFunction target, double a, double b,
                    long samples = 100000);

}  // namespace gmedian
