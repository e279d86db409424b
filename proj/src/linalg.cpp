#include "qleak/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qleak/errors.hpp"

namespace qleak {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw InvalidInput(os.str());
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw InvalidInput("matrix dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw InvalidInput("matrix dimension must be >= 1");
  if (data_.size() != dim * dim) {
    throw InvalidInput("matrix of dimension " + std::to_string(dim) + " needs " +
                       std::to_string(dim * dim) + " entries, got " +
                       std::to_string(data_.size()));
  }
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidInput("matrix entries must be finite");
    }
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  if (dim_ == 0) throw InvalidInput("matrix dimension must be >= 1");
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw InvalidInput("matrix must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexVector ComplexMatrix::column(std::size_t col) const {
  ComplexVector v(dim_);
  for (std::size_t i = 0; i < dim_; ++i) v[i] = (*this)(i, col);
  return v;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "matrix addition");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "matrix subtraction");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "matrix product");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
  if (v.size() != m.dim()) throw InvalidInput("matrix-vector product: dimension mismatch");
  ComplexVector out(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) out[i] += m(i, j) * v[j];
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
  }
  return m;
}

// HermitianMatrix

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) : m_(m.dim()) {
  const std::size_t n = m.dim();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  if (asym > tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |M - M^dagger| = " << asym << ")";
    throw InvalidInput(os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = z;
      m_(j, i) = std::conj(z);
    }
  }
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

HermitianMatrix HermitianMatrix::identity(std::size_t dim) {
  return HermitianMatrix(ComplexMatrix::identity(dim), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(std::size_t dim) {
  return HermitianMatrix(ComplexMatrix(dim), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  return HermitianMatrix(ComplexMatrix::diagonal(values), Trusted{});
}

HermitianMatrix HermitianMatrix::projector(std::span<const Complex> v) {
  return HermitianMatrix(ComplexMatrix::outer(v));
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  return HermitianMatrix(m_ + other.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  return HermitianMatrix(m_ - other.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator*(double scale) const {
  return HermitianMatrix(Complex(scale) * m_, Trusted{});
}

// Eigendecomposition

EigenDecomposition eig_hermitian(const HermitianMatrix& h, const Tolerances& tol) {
  const std::size_t n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, a.frobenius_norm());

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += std::norm(a(i, j));
      }
    }
    return std::sqrt(s);
  };

  int sweeps = 0;
  for (double off = off_norm(); off > tol.jacobi_off * scale; off = off_norm()) {
    if (sweeps == tol.jacobi_max_sweeps) {
      std::ostringstream os;
      os << "Jacobi eigensolver did not converge after " << sweeps
         << " sweeps (off-diagonal norm " << off << ")";
      throw NotConverged(os.str());
    }
    ++sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g < 1e-300) continue;
        // Phase D = diag(1, e^{-i phi}) makes the (p,q) block real symmetric;
        // a real rotation then annihilates it. G = D R.
        const Complex phase = apq / g;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n), sweeps};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> eigenvalues(const HermitianMatrix& m, const Tolerances& tol) {
  return eig_hermitian(m, tol).values;
}

double min_eigenvalue(const HermitianMatrix& m, const Tolerances& tol) {
  return eigenvalues(m, tol).back();
}

HermitianMatrix apply_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                               const Tolerances& tol) {
  const auto eig = eig_hermitian(m, tol);
  const std::size_t n = m.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = fk * eig.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return HermitianMatrix(out, 1e-8);
}

double trace_norm(const HermitianMatrix& m, const Tolerances& tol) {
  double s = 0.0;
  for (double lambda : eigenvalues(m, tol)) s += std::abs(lambda);
  return s;
}

double trace_norm(const ComplexMatrix& m, const Tolerances& tol) {
  const std::size_t n = m.dim();
  ComplexMatrix dilation(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dilation(i, n + j) = m(i, j);
      dilation(n + j, i) = std::conj(m(i, j));
    }
  }
  double s = 0.0;
  for (double lambda : eigenvalues(HermitianMatrix(dilation), tol)) s += std::abs(lambda);
  return 0.5 * s;
}

double trace_distance(const HermitianMatrix& rho, const HermitianMatrix& sigma,
                      const Tolerances& tol) {
  if (rho.dim() != sigma.dim()) {
    throw InvalidInput("trace_distance: dimension mismatch (" + std::to_string(rho.dim()) +
                       " vs " + std::to_string(sigma.dim()) + ")");
  }
  return 0.5 * trace_norm(rho - sigma, tol);
}

HermitianMatrix psd_sqrt(const HermitianMatrix& m, const Tolerances& tol) {
  const auto eig = eig_hermitian(m, tol);
  if (eig.values.back() < -tol.psd) {
    std::ostringstream os;
    os << "psd_sqrt: matrix is not PSD (min eigenvalue " << eig.values.back() << ")";
    throw InvalidInput(os.str());
  }
  const std::size_t n = m.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, eig.values[k]));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = root * eig.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.vectors(j, k));
    }
  }
  return HermitianMatrix(out, 1e-8);
}

HermitianMatrix abs_operator(const ComplexMatrix& m, const Tolerances& tol) {
  return psd_sqrt(HermitianMatrix(m.adjoint() * m, 1e-8), tol);
}

bool is_psd(const HermitianMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  const auto id = ComplexMatrix::identity(u.dim());
  return max_abs_diff(u.adjoint() * u, id) <= tol && max_abs_diff(u * u.adjoint(), id) <= tol;
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw InvalidInput("trace_product: dimension mismatch");
  const std::size_t n = a.dim();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s += (a(i, j) * b(j, i)).real();
  }
  return s;
}

double expectation(const HermitianMatrix& a, std::span<const Complex> v) {
  if (v.size() != a.dim()) throw InvalidInput("expectation: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) row += a(i, j) * v[j];
    s += std::conj(v[i]) * row;
  }
  return s.real();
}

ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& rho) {
  return a * rho * a.adjoint();
}

}  // namespace qleak
