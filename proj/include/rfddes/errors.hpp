#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rfddes {

/// Error thrown by any solver phase. `phase` identifies the pipeline stage
/// ("ingestion", "partition", "factorization", "interface", "interior",
/// "projection", "output") so callers can map failures to exit codes.
class SolverError : public std::runtime_error {
public:
  SolverError(std::string phase, const std::string& message)
      : std::runtime_error(phase + ": " + message), phase_(std::move(phase)) {}

  const std::string& phase() const noexcept { return phase_; }

private:
  std::string phase_;
};

class ParseError : public SolverError {
public:
  explicit ParseError(const std::string& message) : SolverError("ingestion", message) {}
};

class FactorizationError : public SolverError {
public:
  FactorizationError(const std::string& message, std::complex<double> shift)
      : SolverError("factorization",
                    message + " (shift " + std::to_string(shift.real()) + (shift.imag() < 0 ? " - " : " + ") +
                        std::to_string(std::abs(shift.imag())) + "i)"),
        shift_(shift) {}

  std::complex<double> shift() const noexcept { return shift_; }

private:
  std::complex<double> shift_;
};

} // namespace rfddes
