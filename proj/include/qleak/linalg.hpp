#pragma once

// Dense complex linear algebra for small (d <= ~16) operators.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace qleak {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Numerical tolerances shared by the library. Callers override by passing a
// modified copy; nothing is read from the environment.
struct Tolerances {
  double hermitian = 1e-10;      // max |M - M^dagger| entry accepted as Hermitian
  double psd = 1e-10;            // lambda_min >= -psd counts as PSD
  double unitary = 1e-9;         // max |U^dagger U - I| entry
  double jacobi_off = 1e-12;     // off-diagonal Frobenius norm (relative) at convergence
  int jacobi_max_sweeps = 100;
};

class ComplexMatrix {
 public:
  // Zero matrix of dimension dim.
  explicit ComplexMatrix(std::size_t dim);
  // Row-major entries; entries.size() must equal dim*dim.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  // |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }
  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  ComplexVector column(std::size_t col) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);

// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// A complex matrix checked to be Hermitian within tolerance and then
// symmetrized to (M + M^dagger)/2, so that it is exactly Hermitian.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = Tolerances{}.hermitian);

  static HermitianMatrix identity(std::size_t dim);
  static HermitianMatrix zero(std::size_t dim);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix projector(std::span<const Complex> v);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  const Complex& operator()(std::size_t row, std::size_t col) const { return m_(row, col); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix operator*(double scale) const;

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted);
  ComplexMatrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k pairs with values[k]
  int sweeps = 0;
};

// Cyclic complex Jacobi rotations. Throws NotConverged with the residual
// off-diagonal norm if the sweep budget runs out.
EigenDecomposition eig_hermitian(const HermitianMatrix& m, const Tolerances& tol = {});

std::vector<double> eigenvalues(const HermitianMatrix& m, const Tolerances& tol = {});
double min_eigenvalue(const HermitianMatrix& m, const Tolerances& tol = {});

// V f(Lambda) V^dagger
HermitianMatrix apply_function(const HermitianMatrix& m, const std::function<double(double)>& f,
                               const Tolerances& tol = {});

// tr|M| for Hermitian M (sum of |eigenvalues|).
double trace_norm(const HermitianMatrix& m, const Tolerances& tol = {});
// tr|M| = tr sqrt(M^dagger M) for arbitrary M, computed from the Hermitian
// dilation [[0, M], [M^dagger, 0]] whose eigenvalues are +-singular values.
double trace_norm(const ComplexMatrix& m, const Tolerances& tol = {});

// Normalized trace distance 1/2 tr|rho - sigma|.
double trace_distance(const HermitianMatrix& rho, const HermitianMatrix& sigma,
                      const Tolerances& tol = {});

// Principal square root of a PSD matrix. Throws InvalidInput if an
// eigenvalue is below -tol.psd.
HermitianMatrix psd_sqrt(const HermitianMatrix& m, const Tolerances& tol = {});

// |M| = sqrt(M^dagger M)
HermitianMatrix abs_operator(const ComplexMatrix& m, const Tolerances& tol = {});

bool is_psd(const HermitianMatrix& m, double tol = Tolerances{}.psd);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

bool is_unitary(const ComplexMatrix& u, double tol = Tolerances{}.unitary);

// Re tr(A B) for Hermitian A, B.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

// <v| A |v> for Hermitian A.
double expectation(const HermitianMatrix& a, std::span<const Complex> v);

// A ρ A^dagger
ComplexMatrix conjugate(const ComplexMatrix& a, const ComplexMatrix& rho);

}  // namespace qleak
