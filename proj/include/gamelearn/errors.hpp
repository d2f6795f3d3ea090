#pragma once

#include <stdexcept>
#include <string>

namespace gamelearn {

// An iterative solver exhausted its budget; carries the last residual so
// callers can decide whether to retry with a different method.
class nonconvergence_error : public std::runtime_error {
  public:
    nonconvergence_error(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

  private:
    double residual_;
    int iterations_;
};

// Input text could not be parsed; line is 1-based (0 when unknown).
class parse_error : public std::runtime_error {
  public:
    parse_error(const std::string& what, int line)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    int line() const noexcept { return line_; }

  private:
    int line_;
};

// A requested schedule or run exceeds a configured size cap.
class capacity_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A model assumption (unique invariant measure, simplex membership,
// nondecreasing costs, ...) is violated by the supplied data.
class assumption_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An ODE trajectory left its admissible region; usually means the step
// size is too large for the requested field.
class integration_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace gamelearn
