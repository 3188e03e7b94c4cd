#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hcm/errors.hpp"
#include "hcm/rng.hpp"

namespace hcm {

// Scalar coefficient field: finite complex doubles.
using ComplexScalar = std::complex<double>;

// Unit-modulus scalar mu = exp(i*angle), angle kept in [0, 2*pi).
struct UnitScalar {
  double angle = 0.0;

  static UnitScalar from_angle(double theta);
  ComplexScalar value() const;
};

// The coefficient algebra is M_k(C). Desk-scale guard: 1 <= k <= 16.
struct AlgebraDescriptor {
  int dim = 1;

  AlgebraDescriptor() = default;
  explicit AlgebraDescriptor(int k);
  bool operator==(const AlgebraDescriptor&) const = default;
};

// Dense k x k complex matrix, row-major. Value type; all operations below
// are pure functions returning fresh elements.
class AlgebraElement {
 public:
  AlgebraElement() : AlgebraElement(AlgebraDescriptor{1}) {}
  explicit AlgebraElement(AlgebraDescriptor desc);
  AlgebraElement(AlgebraDescriptor desc, std::vector<ComplexScalar> entries);

  static AlgebraElement identity(AlgebraDescriptor desc);
  // Matrix unit e_{row,col} (zero-based indices).
  static AlgebraElement unit(AlgebraDescriptor desc, int row, int col);
  // Entries drawn i.i.d. complex Gaussian with standard deviation sd.
  static AlgebraElement random_gaussian(AlgebraDescriptor desc, double sd, Rng& rng);

  AlgebraDescriptor descriptor() const { return desc_; }
  int dim() const { return desc_.dim; }

  ComplexScalar& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * desc_.dim + c]; }
  const ComplexScalar& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * desc_.dim + c];
  }
  const std::vector<ComplexScalar>& entries() const { return data_; }

  bool finite() const;
  bool operator==(const AlgebraElement&) const = default;

 private:
  AlgebraDescriptor desc_;
  std::vector<ComplexScalar> data_;
};

// Conjugate transpose; an exact involution entrywise.
AlgebraElement adjoint(const AlgebraElement& a);

// Matrix product. Throws ShapeError on dimension mismatch.
AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b);

// alpha*a + beta*b. Throws ShapeError on dimension mismatch.
AlgebraElement lin_comb(ComplexScalar alpha, const AlgebraElement& a,
                        ComplexScalar beta, const AlgebraElement& b);

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(ComplexScalar alpha, const AlgebraElement& a);

// Largest singular value, computed as sqrt of the top eigenvalue of the
// Hermitian product a* a.
double operator_norm(const AlgebraElement& a);

// Cheap upper bound on operator_norm (Frobenius), used for overflow guards.
double frobenius_norm(const AlgebraElement& a);

// Positivity test: a is close to self-adjoint (||a - a*|| <= tol * max(1, ||a||))
// and the Hermitian part (a + a*)/2 has min eigenvalue >= -tol * max(1, ||a||).
bool is_positive(const AlgebraElement& a, double tol);

// Smallest eigenvalue of the Hermitian part (a + a*)/2. Exposed for reports.
double min_hermitian_eigenvalue(const AlgebraElement& a);

// Haar-style random unitary: seeded complex Gaussian matrix orthonormalized
// by modified Gram-Schmidt (which leaves the triangular factor with a real
// positive diagonal). Deterministic in the seed; ||u u* - I|| <= 1e-12.
AlgebraElement random_unitary(AlgebraDescriptor desc, std::uint64_t seed);

}  // namespace hcm
