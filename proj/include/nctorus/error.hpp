#pragma once

#include <stdexcept>
#include <string>

namespace nct {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

// Minimum compressed eigenvalue below the configured floor for a function singular at 0.
class SpectralFloorViolation : public Error {
 public:
  SpectralFloorViolation(double min_eigenvalue, double floor)
      : Error("spectral floor violation: min eigenvalue " + std::to_string(min_eigenvalue) +
              " < floor " + std::to_string(floor)),
        min_eigenvalue_(min_eigenvalue),
        floor_(floor) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double floor() const noexcept { return floor_; }

 private:
  double min_eigenvalue_;
  double floor_;
};

class NonSelfadjointInput : public Error {
 public:
  using Error::Error;
};

// Names the compatibility predicate that failed.
class HypothesisViolated : public Error {
 public:
  explicit HypothesisViolated(std::string predicate, double residual)
      : Error("hypothesis violated: " + predicate + " (residual " + std::to_string(residual) + ")"),
        predicate_(std::move(predicate)),
        residual_(residual) {}
  const std::string& predicate() const noexcept { return predicate_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string predicate_;
  double residual_;
};

class PositivityViolation : public Error {
 public:
  using Error::Error;
};

class SpectrumOutsideDomain : public Error {
 public:
  using Error::Error;
};

class BoxTooSmall : public Error {
 public:
  using Error::Error;
};

class UnstableSpectrum : public Error {
 public:
  UnstableSpectrum(std::size_t requested, std::size_t stable)
      : Error("only " + std::to_string(stable) + " of " + std::to_string(requested) +
              " requested eigenvalues are stable"),
        requested_(requested),
        stable_(stable) {}
  std::size_t requested() const noexcept { return requested_; }
  std::size_t stable() const noexcept { return stable_; }

 private:
  std::size_t requested_;
  std::size_t stable_;
};

class WindowOutOfRange : public Error {
 public:
  using Error::Error;
};

class NonzeroTheta : public Error {
 public:
  using Error::Error;
};

class AliasingRisk : public Error {
 public:
  using Error::Error;
};

class InvalidMetric : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nct
