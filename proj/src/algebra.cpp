#include "hcm/algebra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

namespace hcm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Eigen::MatrixXcd to_eigen(const AlgebraElement& a) {
  const int k = a.dim();
  Eigen::MatrixXcd m(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) m(r, c) = a(r, c);
  return m;
}

void require_same_dim(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
  if (a.dim() != b.dim())
    throw ShapeError(std::string(op) + ": dimension mismatch " + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()));
}

}  // namespace

UnitScalar UnitScalar::from_angle(double theta) {
  if (!std::isfinite(theta)) throw DomainError("UnitScalar: angle must be finite");
  double a = std::fmod(theta, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return UnitScalar{a};
}

ComplexScalar UnitScalar::value() const { return {std::cos(angle), std::sin(angle)}; }

AlgebraDescriptor::AlgebraDescriptor(int k) : dim(k) {
  if (k < 1 || k > 16)
    throw DomainError("AlgebraDescriptor: dim must lie in [1, 16], got " + std::to_string(k));
}

AlgebraElement::AlgebraElement(AlgebraDescriptor desc)
    : desc_(desc), data_(static_cast<std::size_t>(desc.dim) * desc.dim, ComplexScalar{0.0, 0.0}) {}

AlgebraElement::AlgebraElement(AlgebraDescriptor desc, std::vector<ComplexScalar> entries)
    : desc_(desc), data_(std::move(entries)) {
  if (data_.size() != static_cast<std::size_t>(desc.dim) * desc.dim)
    throw ShapeError("AlgebraElement: entry count " + std::to_string(data_.size()) +
                     " does not match dim " + std::to_string(desc.dim));
  if (!finite()) throw DomainError("AlgebraElement: entries must be finite");
}

AlgebraElement AlgebraElement::identity(AlgebraDescriptor desc) {
  AlgebraElement a(desc);
  for (int i = 0; i < desc.dim; ++i) a(i, i) = ComplexScalar{1.0, 0.0};
  return a;
}

AlgebraElement AlgebraElement::unit(AlgebraDescriptor desc, int row, int col) {
  if (row < 0 || row >= desc.dim || col < 0 || col >= desc.dim)
    throw DomainError("AlgebraElement::unit: index out of range");
  AlgebraElement a(desc);
  a(row, col) = ComplexScalar{1.0, 0.0};
  return a;
}

AlgebraElement AlgebraElement::random_gaussian(AlgebraDescriptor desc, double sd, Rng& rng) {
  AlgebraElement a(desc);
  for (int r = 0; r < desc.dim; ++r)
    for (int c = 0; c < desc.dim; ++c) a(r, c) = sd * rng.next_complex_gaussian();
  return a;
}

bool AlgebraElement::finite() const {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement r(a.descriptor());
  const int k = a.dim();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) r(i, j) = std::conj(a(j, i));
  return r;
}

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_dim(a, b, "mul");
  const int k = a.dim();
  AlgebraElement r(a.descriptor());
  for (int i = 0; i < k; ++i) {
    for (int l = 0; l < k; ++l) {
      const ComplexScalar ail = a(i, l);
      if (ail == ComplexScalar{0.0, 0.0}) continue;
      for (int j = 0; j < k; ++j) r(i, j) += ail * b(l, j);
    }
  }
  return r;
}

AlgebraElement lin_comb(ComplexScalar alpha, const AlgebraElement& a,
                        ComplexScalar beta, const AlgebraElement& b) {
  require_same_dim(a, b, "lin_comb");
  const int k = a.dim();
  AlgebraElement r(a.descriptor());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) r(i, j) = alpha * a(i, j) + beta * b(i, j);
  return r;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  return lin_comb({1.0, 0.0}, a, {1.0, 0.0}, b);
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  return lin_comb({1.0, 0.0}, a, {-1.0, 0.0}, b);
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return mul(a, b); }

AlgebraElement operator*(ComplexScalar alpha, const AlgebraElement& a) {
  const int k = a.dim();
  AlgebraElement r(a.descriptor());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) r(i, j) = alpha * a(i, j);
  return r;
}

namespace {

double max_abs_part(const AlgebraElement& a) {
  double m = 0.0;
  for (const auto& z : a.entries())
    m = std::max({m, std::abs(z.real()), std::abs(z.imag())});
  return m;
}

// Entries above this would overflow the Gram products below; 2^-e scaling is
// exact, so routing such elements through a scaled copy changes nothing but
// the representable range. Everything in the ordinary range keeps the
// unscaled arithmetic path bit for bit.
constexpr double kRescaleThreshold = 1e140;

}  // namespace

double operator_norm(const AlgebraElement& a) {
  if (!a.finite()) throw DomainError("operator_norm: non-finite entries");
  const double mx = max_abs_part(a);
  if (mx > kRescaleThreshold) {
    const int e = std::ilogb(mx);
    AlgebraElement scaled(a.descriptor());
    for (int r = 0; r < a.dim(); ++r)
      for (int c = 0; c < a.dim(); ++c)
        scaled(r, c) = {std::ldexp(a(r, c).real(), -e), std::ldexp(a(r, c).imag(), -e)};
    return std::ldexp(operator_norm(scaled), e);
  }
  const Eigen::MatrixXcd m = to_eigen(a);
  const Eigen::MatrixXcd gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return top > 0.0 ? std::sqrt(top) : 0.0;
}

double frobenius_norm(const AlgebraElement& a) {
  double s = 0.0;
  for (const auto& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

double min_hermitian_eigenvalue(const AlgebraElement& a) {
  const double mx = max_abs_part(a);
  if (mx > kRescaleThreshold) {
    const int e = std::ilogb(mx);
    AlgebraElement scaled(a.descriptor());
    for (int r = 0; r < a.dim(); ++r)
      for (int c = 0; c < a.dim(); ++c)
        scaled(r, c) = {std::ldexp(a(r, c).real(), -e), std::ldexp(a(r, c).imag(), -e)};
    return std::ldexp(min_hermitian_eigenvalue(scaled), e);
  }
  const Eigen::MatrixXcd m = to_eigen(a);
  const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_positive(const AlgebraElement& a, double tol) {
  if (tol < 0.0) throw DomainError("is_positive: tol must be nonnegative");
  const double gauge = std::max(1.0, operator_norm(a));
  if (operator_norm(a - adjoint(a)) > tol * gauge) return false;
  return min_hermitian_eigenvalue(a) >= -tol * gauge;
}

AlgebraElement random_unitary(AlgebraDescriptor desc, std::uint64_t seed) {
  const int k = desc.dim;
  Rng rng(seed, 0x756e6974ull);  // dedicated stream for unitary draws
  // Columns of g, orthonormalized in place by modified Gram-Schmidt. A
  // residual that collapses numerically is redrawn from the same stream.
  std::vector<std::vector<ComplexScalar>> q(k, std::vector<ComplexScalar>(k));
  for (int col = 0; col < k; ++col) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 64) throw ContractError("random_unitary: degenerate draw stream");
      for (int r = 0; r < k; ++r) q[col][r] = rng.next_complex_gaussian();
      for (int prev = 0; prev < col; ++prev) {
        ComplexScalar proj{0.0, 0.0};
        for (int r = 0; r < k; ++r) proj += std::conj(q[prev][r]) * q[col][r];
        for (int r = 0; r < k; ++r) q[col][r] -= proj * q[prev][r];
      }
      double nrm2 = 0.0;
      for (int r = 0; r < k; ++r) nrm2 += std::norm(q[col][r]);
      if (nrm2 > 1e-24) {
        const double inv = 1.0 / std::sqrt(nrm2);
        for (int r = 0; r < k; ++r) q[col][r] *= inv;
        break;
      }
    }
  }
  AlgebraElement u(desc);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) u(r, c) = q[c][r];
  return u;
}

}  // namespace hcm
