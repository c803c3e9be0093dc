#include "gmedian/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "gmedian/median.hpp"
#include "gmedian/paperfun.hpp"

namespace gmedian::cli {
namespace {

using nlohmann::json;

constexpr int kExitFailures = 1;
constexpr int kExitUsage = 2;

constexpr std::array<std::string_view, 10> kColumns = {
    "x", "m", "m_prime", "m_second", "phi", "xphi", "xphi_prime", "g", "A", "B"};

std::array<double, 10> row_values(const EvalRow& r) {
  return {r.x, r.m, r.m_prime, r.m_second, r.phi,
          r.xphi, r.xphi_prime, r.g, r.A, r.B};
}

EvalRow row_from_values(const std::array<double, 10>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
}

// JSON has no NaN; missing values become null.
json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json row_json(const EvalRow& r) {
  json j = json::object();
  const auto values = row_values(r);
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    j[std::string(kColumns[i])] = json_number(values[i]);
  }
  return j;
}

std::string csv_row(const EvalRow& r) {
  std::string line;
  const auto values = row_values(r);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_shortest(values[i]);
  }
  return line;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  return OutputFormat::text;
}

}  // namespace

EvalRow compute_row(double x) {
  const FirstOrder p = first_order(x);
  EvalRow r;
  r.x = x;
  r.m = p.m;
  r.m_prime = p.m_prime;
  try {
    r.m_second = median_second_derivative(x);
  } catch (const domain_error&) {
    r.m_second = std::numeric_limits<double>::quiet_NaN();
  }
  r.phi = p.phi;
  r.xphi = p.xphi;
  r.xphi_prime = p.xphi_prime;
  r.g = g_value(p);
  r.A = A_value(p);
  r.B = -p.xphi_prime * std::exp(-r.g) - r.A;
  return r;
}

std::string format_shortest(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string format_readable(double v) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return buf.data();
}

std::string render_eval(const EvalRow& row, OutputFormat format) {
  switch (format) {
    case OutputFormat::csv:
      return std::string(kTableHeader) + "\n" + csv_row(row) + "\n";
    case OutputFormat::json:
      return row_json(row).dump(2) + "\n";
    case OutputFormat::text:
      break;
  }
  std::ostringstream os;
  const auto values = row_values(row);
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    os << kColumns[i] << std::string(12 - kColumns[i].size(), ' ') << "= "
       << format_shortest(values[i]) << '\n';
  }
  return os.str();
}

std::string render_table(const std::vector<EvalRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    std::string out = std::string(kTableHeader) + "\n";
    for (const EvalRow& r : rows) out += csv_row(r) + "\n";
    return out;
  }
  if (format == OutputFormat::json) {
    json arr = json::array();
    for (const EvalRow& r : rows) arr.push_back(row_json(r));
    return arr.dump(2) + "\n";
  }
  std::ostringstream os;
  constexpr int kWidth = 20;
  for (std::string_view c : kColumns) {
    os << std::string(kWidth - c.size(), ' ') << c;
  }
  os << '\n';
  for (const EvalRow& r : rows) {
    for (double v : row_values(r)) {
      const std::string s = format_readable(v);
      os << std::string(kWidth > static_cast<int>(s.size()) ? kWidth - s.size() : 1,
                        ' ')
         << s;
    }
    os << '\n';
  }
  return os.str();
}

std::string render_verify(const std::vector<VerificationRecord>& records,
                          OutputFormat format) {
  const std::size_t failures = count_failures(records);
  if (format == OutputFormat::csv) {
    std::string out = "x,check_id,lhs,rhs,margin,pass\n";
    for (const auto& r : records) {
      out += format_shortest(r.x) + ',' + r.check_id + ',' +
             format_shortest(r.lhs) + ',' + format_shortest(r.rhs) + ',' +
             format_shortest(r.margin) + ',' + (r.pass ? "true" : "false") + '\n';
    }
    return out;
  }
  if (format == OutputFormat::json) {
    json arr = json::array();
    for (const auto& r : records) {
      json j = {{"x", r.x},
                {"check_id", r.check_id},
                {"lhs", json_number(r.lhs)},
                {"rhs", json_number(r.rhs)},
                {"margin", json_number(r.margin)},
                {"pass", r.pass}};
      if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
      arr.push_back(std::move(j));
    }
    json doc = {{"records", arr},
                {"total", records.size()},
                {"failures", failures}};
    return doc.dump(2) + "\n";
  }

  struct Summary {
    std::size_t total = 0;
    std::size_t passed = 0;
    double min_margin = std::numeric_limits<double>::infinity();
  };
  std::map<std::string, Summary> by_check;
  for (const auto& r : records) {
    Summary& s = by_check[r.check_id];
    ++s.total;
    if (r.pass) ++s.passed;
    if (!std::isnan(r.margin)) s.min_margin = std::min(s.min_margin, r.margin);
  }
  std::ostringstream os;
  os << "check                            passed      min margin\n";
  for (std::string_view id : check_registry()) {
    const auto it = by_check.find(std::string(id));
    if (it == by_check.end()) continue;
    const Summary& s = it->second;
    std::string count = std::to_string(s.passed) + "/" + std::to_string(s.total);
    os << id << std::string(id.size() < 33 ? 33 - id.size() : 1, ' ') << count
       << std::string(count.size() < 12 ? 12 - count.size() : 1, ' ')
       << format_readable(s.min_margin) << '\n';
  }
  for (const auto& r : records) {
    if (r.pass) continue;
    os << "FAIL x=" << format_readable(r.x) << ' ' << r.check_id
       << " lhs=" << format_readable(r.lhs) << " rhs=" << format_readable(r.rhs)
       << " margin=" << format_readable(r.margin);
    if (!r.diagnostic.empty()) os << " (" << r.diagnostic << ')';
    os << '\n';
  }
  os << records.size() << " records, " << failures << " failures\n";
  return os.str();
}

std::string render_scan(HFunction target, double a, double b,
                        const ScanResult& result) {
  std::ostringstream os;
  os << "function " << (target == HFunction::h1 ? "h1" : "h2") << '\n'
     << "interval " << format_readable(a) << ' ' << format_readable(b) << '\n'
     << "argmax   " << format_readable(result.argmax) << '\n'
     << "max      " << format_readable(result.max) << '\n';
  return os.str();
}

std::vector<EvalRow> parse_table_csv(std::string_view csv) {
  std::vector<EvalRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    if (header) {
      if (line != kTableHeader) throw domain_error("table csv: unexpected header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::array<double, 10> values{};
    std::size_t field_start = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::size_t comma = line.find(',', field_start);
      const bool last = i + 1 == values.size();
      if (last != (comma == std::string_view::npos)) {
        throw domain_error("table csv: wrong number of fields");
      }
      if (last) comma = line.size();
      const std::string_view field = line.substr(field_start, comma - field_start);
      const auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), values[i]);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw domain_error("table csv: bad number '" + std::string(field) + "'");
      }
      field_start = comma + 1;
    }
    rows.push_back(row_from_values(values));
  }
  if (header) throw domain_error("table csv: missing header");
  return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Median of the gamma distribution and its convexity checks"};
  app.require_subcommand(1);

  const std::vector<std::string> formats = {"text", "csv", "json"};
  std::string format = "text";

  double eval_x = 0.0;
  auto* eval = app.add_subcommand("eval", "Evaluate m, its derivatives and g, A, B at one x");
  eval->add_option("--x", eval_x, "Shape parameter")->required();
  eval->add_option("--format", format)->check(CLI::IsMember(formats));

  GridSpec grid;
  std::string spacing = "log";
  auto add_grid_flags = [&](CLI::App* sub) {
    sub->add_option("--start", grid.start, "First grid point")->capture_default_str();
    sub->add_option("--stop", grid.stop, "Last grid point")->capture_default_str();
    sub->add_option("--count", grid.count, "Number of grid points")->capture_default_str();
    sub->add_option("--spacing", spacing)
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    sub->add_option("--format", format)->check(CLI::IsMember(formats));
  };
  auto* table = app.add_subcommand("table", "Tabulate the eval columns over a grid");
  add_grid_flags(table);

  double tol = kDefaultCheckTolerance;
  auto* verify = app.add_subcommand("verify", "Run every inequality check over a grid");
  add_grid_flags(verify);
  verify->add_option("--tol", tol, "Slack for the finite-difference checks")
      ->capture_default_str();

  std::string function = "h1";
  std::vector<double> interval;
  long samples = 100000;
  auto* scan = app.add_subcommand("scan", "Maximize h1 or h2 on an interval");
  scan->add_option("--function", function)
      ->required()
      ->check(CLI::IsMember({"h1", "h2"}));
  scan->add_option("--interval", interval, "Interval end points A B")
      ->required()
      ->expected(2);
  scan->add_option("--samples", samples)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  grid.spacing = spacing == "linear" ? Spacing::linear : Spacing::logarithmic;
  const OutputFormat fmt = parse_format(format);

  try {
    if (*eval) {
      const EvalRow row = compute_row(eval_x);
      if (std::isnan(row.m_second)) {
        err << "note: m_second unavailable, difference stencil leaves [1e-3, 1e6]\n";
      }
      out << render_eval(row, fmt);
      return 0;
    }
    if (*table) {
      std::vector<EvalRow> rows;
      for (double x : grid_points(grid)) rows.push_back(compute_row(x));
      out << render_table(rows, fmt);
      return 0;
    }
    if (*verify) {
      if (!(tol >= 0.0)) throw domain_error("verify: tol must be >= 0");
      const auto records = run_checks(grid, tol);
      out << render_verify(records, fmt);
      const std::size_t failures = count_failures(records);
      if (fmt != OutputFormat::text) {
        err << records.size() << " records, " << failures << " failures\n";
      }
      return failures == 0 ? 0 : kExitFailures;
    }
    if (*scan) {
      const HFunction target = function == "h1" ? HFunction::h1 : HFunction::h2;
      const ScanResult r = scan_max(target, interval.at(0), interval.at(1), samples);
      out << render_scan(target, interval[0], interval[1], r);
      return 0;
    }
  } catch (const domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << " (best estimate "
        << format_shortest(e.best_estimate()) << ")\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace gmedian::cli
