#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gmedian/verify.hpp"

namespace gmedian::cli {

enum class OutputFormat { text, csv, json };

/// One row of `eval` / `table`.
struct EvalRow {
  double x = 0.0;
  double m = 0.0;
  double m_prime = 0.0;
  double m_second = 0.0;  // NaN when the difference stencil leaves the domain
  double phi = 0.0;
  double xphi = 0.0;
  double xphi_prime = 0.0;
  double g = 0.0;
  double A = 0.0;
  double B = 0.0;
};

inline constexpr std::string_view kTableHeader =
    "x,m,m_prime,m_second,phi,xphi,xphi_prime,g,A,B";

EvalRow compute_row(double x);

/// Shortest decimal that round-trips to the same double.
std::string format_shortest(double v);

/// 12 significant digits, for terminal output.
std::string format_readable(double v);

std::string render_eval(const EvalRow& row, OutputFormat format);
std::string render_table(const std::vector<EvalRow>& rows, OutputFormat format);
std::string render_verify(const std::vector<VerificationRecord>& records,
                          OutputFormat format);
std::string render_scan(HFunction target, double a, double b,
                        const ScanResult& result);

/// Parses the CSV written by render_table. Throws domain_error on a bad
/// header or malformed row.
std::vector<EvalRow> parse_table_csv(std::string_view csv);

/// Runs the command line. Exit codes: 0 success, 1 verification failures,
/// 2 usage or domain errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gmedian::cli
