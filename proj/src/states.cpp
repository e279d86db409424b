#include "qleak/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qleak/errors.hpp"

namespace qleak {

DensityOperator::DensityOperator(HermitianMatrix m, const Tolerances& tol) : m_(std::move(m)) {
  const double tr = m_.trace();
  if (std::abs(tr - 1.0) > tol.hermitian) {
    std::ostringstream os;
    os << "density operator must have unit trace (trace = " << tr << ")";
    throw InvalidInput(os.str());
  }
  const double lmin = min_eigenvalue(m_, tol);
  if (lmin < -tol.psd) {
    std::ostringstream os;
    os << "density operator must be PSD (min eigenvalue " << lmin << ")";
    throw InvalidInput(os.str());
  }
}

DensityOperator DensityOperator::pure(std::span<const Complex> psi) {
  double norm = 0.0;
  for (const auto& z : psi) norm += std::norm(z);
  ComplexVector v(psi.begin(), psi.end());
  for (auto& z : v) z /= std::sqrt(norm);
  return DensityOperator(HermitianMatrix::projector(v));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  return DensityOperator(HermitianMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

CqEnsemble::CqEnsemble(std::vector<std::string> labels, std::vector<double> probs,
                       std::vector<DensityOperator> states)
    : labels_(std::move(labels)), probs_(std::move(probs)), states_(std::move(states)) {
  if (states_.empty()) throw InvalidInput("ensemble must contain at least one state");
  if (labels_.size() != states_.size() || probs_.size() != states_.size()) {
    throw InvalidInput("ensemble labels, probs and states must have equal length");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < states_.size(); ++x) {
    if (!(probs_[x] > 0.0) || probs_[x] > 1.0) {
      throw InvalidInput("ensemble probs[" + std::to_string(x) + "] must lie in (0, 1]");
    }
    if (states_[x].dim() != states_.front().dim()) {
      throw InvalidInput("ensemble states[" + std::to_string(x) + "] has dimension " +
                         std::to_string(states_[x].dim()) + ", expected " +
                         std::to_string(states_.front().dim()));
    }
    total += probs_[x];
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "ensemble probabilities must sum to 1 (sum = " << total << ")";
    throw InvalidInput(os.str());
  }
}

DepolarizingParam::DepolarizingParam(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("depolarizing parameter must lie in [0, 1]");
}

DensityOperator average_state(const CqEnsemble& e) {
  auto acc = HermitianMatrix::zero(e.dim());
  for (std::size_t x = 0; x < e.size(); ++x) acc = acc + e.state(x).hermitian() * e.probs()[x];
  return DensityOperator(std::move(acc));
}

CqEnsemble apply_unitary(const CqEnsemble& e, const ComplexMatrix& u, const Tolerances& tol) {
  if (u.dim() != e.dim()) throw InvalidInput("apply_unitary: dimension mismatch");
  if (!is_unitary(u, tol.unitary)) throw InvalidInput("apply_unitary: operator is not unitary");
  std::vector<DensityOperator> rotated;
  rotated.reserve(e.size());
  for (const auto& rho : e.states()) {
    rotated.emplace_back(HermitianMatrix(conjugate(u, rho.matrix()), 1e-9), tol);
  }
  return CqEnsemble(e.labels(), e.probs(), std::move(rotated));
}

DensityOperator depolarize(const DensityOperator& rho, DepolarizingParam p) {
  const double d = static_cast<double>(rho.dim());
  return DensityOperator(HermitianMatrix::identity(rho.dim()) * (p.value() / d) +
                         rho.hermitian() * (1.0 - p.value()));
}

CqEnsemble depolarize(const CqEnsemble& e, DepolarizingParam p) {
  std::vector<DensityOperator> out;
  out.reserve(e.size());
  for (const auto& rho : e.states()) out.push_back(depolarize(rho, p));
  return CqEnsemble(e.labels(), e.probs(), std::move(out));
}

double dpi_beta(const CqEnsemble& e, const ComplexMatrix& u, const Tolerances& tol) {
  if (u.dim() != e.dim()) throw InvalidInput("dpi_beta: dimension mismatch");
  if (!is_unitary(u, tol.unitary)) throw InvalidInput("dpi_beta: operator is not unitary");
  double beta = 0.0;
  for (const auto& rho : e.states()) {
    const HermitianMatrix rotated(conjugate(u, rho.matrix()), 1e-9);
    beta = std::max(beta, trace_distance(rotated, rho.hermitian(), tol));
  }
  return beta;
}

CqEnsemble bb84_ensemble() {
  const double h = 1.0 / std::sqrt(2.0);
  const ComplexVector zero{1.0, 0.0};
  const ComplexVector one{0.0, 1.0};
  const ComplexVector plus{h, h};
  const ComplexVector minus{h, -h};
  return CqEnsemble({"00", "01", "10", "11"}, {0.25, 0.25, 0.25, 0.25},
                    {DensityOperator::pure(zero), DensityOperator::pure(one),
                     DensityOperator::pure(plus), DensityOperator::pure(minus)});
}

namespace gates {

ComplexMatrix pauli_x() { return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return ComplexMatrix{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}}; }
ComplexMatrix pauli_z() { return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return ComplexMatrix{{h, h}, {h, -h}};
}

}  // namespace gates

}  // namespace qleak
