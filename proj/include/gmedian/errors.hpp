#pragma once

#include <stdexcept>
#include <string>

namespace gmedian {

/// Argument outside the mathematical or supported domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method ran out of iterations, levels or subdivisions.
/// Carries the best estimate reached so callers can report diagnostics.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double best_estimate,
                    double error_estimate, long iterations)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate),
        iterations_(iterations) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double best_estimate_;
  double error_estimate_;
  long iterations_;
};

}  // namespace gmedian
