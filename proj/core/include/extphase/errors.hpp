#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace extphase {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state or parameter violates a construction invariant (d = 0, non-finite entries, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// An extended point was expected on the diagonal q = x, p = y but is not.
class NotOnDiagonal : public Error {
 public:
  NotOnDiagonal(const std::string& what, double defect)
      : Error(what), defect_(defect) {}
  [[nodiscard]] double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

/// The Hamiltonian is singular at the requested point.
class SingularConfiguration : public Error {
 public:
  using Error::Error;
};

/// Two point vortices coincide (logarithmic singularity of the energy).
class VortexCollision : public SingularConfiguration {
 public:
  VortexCollision(const std::string& what, int i, int j)
      : SingularConfiguration(what), first_(i), second_(j) {}
  [[nodiscard]] int first() const noexcept { return first_; }
  [[nodiscard]] int second() const noexcept { return second_; }

 private:
  int first_;
  int second_;
};

/// An iterative solve hit its iteration cap or diverged.
///
/// Carries the best iterate seen (lowest residual) so callers can inspect it.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd best, double residual, int iterations)
      : Error(what), best_(std::move(best)), residual_(residual), iterations_(iterations) {}

  [[nodiscard]] const Eigen::VectorXd& best() const noexcept { return best_; }
  [[nodiscard]] double final_residual() const noexcept { return residual_; }
  [[nodiscard]] int iterations() const noexcept { return iterations_; }

 private:
  Eigen::VectorXd best_;
  double residual_;
  int iterations_;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// Reading or writing an output file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration (unknown key, bad value, invalid combination).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace extphase
