#pragma once

#include <stdexcept>
#include <string>

namespace cpde {

/// Malformed input file. Carries a 1-based line number when known.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, long line = -1)
      : std::runtime_error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Input violates a documented precondition or invariant.
class validation_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation requested outside the domain of definition.
class domain_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A time integration produced non-finite values or rejected every step size.
class divergence_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative numerical procedure failed (non-convergence, no bracket, ...).
class numeric_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model parameters outside the regime a formula covers (no wave, no invasion, ...).
class model_error : public validation_error {
  using validation_error::validation_error;
};

/// A parameter fit could not be carried out (every evaluation diverged, bad start).
class fit_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cpde
