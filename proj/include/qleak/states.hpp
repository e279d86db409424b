#pragma once

#include <string>
#include <vector>

#include "qleak/linalg.hpp"

namespace qleak {

// PSD, unit-trace Hermitian operator.
class DensityOperator {
 public:
  explicit DensityOperator(HermitianMatrix m, const Tolerances& tol = {});
  explicit DensityOperator(const ComplexMatrix& m, const Tolerances& tol = {})
      : DensityOperator(HermitianMatrix(m, tol.hermitian), tol) {}

  static DensityOperator pure(std::span<const Complex> psi);
  static DensityOperator maximally_mixed(std::size_t dim);

  const HermitianMatrix& hermitian() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }
  std::size_t dim() const { return m_.dim(); }

 private:
  HermitianMatrix m_;
};

// Classical-quantum ensemble {p(x), rho^x}. Labels are opaque.
class CqEnsemble {
 public:
  CqEnsemble(std::vector<std::string> labels, std::vector<double> probs,
             std::vector<DensityOperator> states);

  std::size_t size() const { return states_.size(); }
  std::size_t dim() const { return states_.front().dim(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<DensityOperator>& states() const { return states_; }
  const DensityOperator& state(std::size_t x) const { return states_[x]; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> probs_;
  std::vector<DensityOperator> states_;
};

// Depolarizing strength p in [0, 1].
class DepolarizingParam {
 public:
  explicit DepolarizingParam(double p);
  double value() const { return p_; }

 private:
  double p_;
};

DensityOperator average_state(const CqEnsemble& e);

// rho^x -> U rho^x U^dagger. Throws InvalidInput if U is not unitary.
CqEnsemble apply_unitary(const CqEnsemble& e, const ComplexMatrix& u, const Tolerances& tol = {});

// D_p(rho) = p I/d + (1 - p) rho
DensityOperator depolarize(const DensityOperator& rho, DepolarizingParam p);
CqEnsemble depolarize(const CqEnsemble& e, DepolarizingParam p);

// max_x || U rho^x U^dagger - rho^x ||_tr
double dpi_beta(const CqEnsemble& e, const ComplexMatrix& u, const Tolerances& tol = {});

// Uniform ensemble over |0>, |1>, |+>, |-> with labels "00", "01", "10", "11"
// (first bit selects the basis, second bit the value).
CqEnsemble bb84_ensemble();

// Common qubit operators.
namespace gates {
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();
}  // namespace gates

}  // namespace qleak
