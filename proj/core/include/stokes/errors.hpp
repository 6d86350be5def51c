#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stokes {

/// Thrown when problem data violates the compatibility condition required by
/// the boundary regime (net boundary flux in the pure Dirichlet case, net
/// force/torque balance in the pure Neumann case, or an unsolvable divergence
/// constraint). The defect values carry the measured imbalance.
class IncompatibleDataError : public std::runtime_error {
 public:
  IncompatibleDataError(const std::string& what, std::vector<double> defects)
      : std::runtime_error(what), defects_(std::move(defects)) {}

  const std::vector<double>& defects() const { return defects_; }

 private:
  std::vector<double> defects_;
};

/// Thrown when a linear solve fails: singular factorization, non-finite
/// result, or the residual target was not reached within the iteration cap.
class NumericalBreakdownError : public std::runtime_error {
 public:
  NumericalBreakdownError(const std::string& what, std::vector<double> residual_history = {})
      : std::runtime_error(what), residual_history_(std::move(residual_history)) {}

  const std::vector<double>& residual_history() const { return residual_history_; }

 private:
  std::vector<double> residual_history_;
};

}  // namespace stokes
