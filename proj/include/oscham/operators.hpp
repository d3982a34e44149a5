// operators.hpp — truncated theta-dependent operators on the mode ladder:
// Fourier-block storage, weighted decay norms, harmonic arithmetic, and a
// matrix exponential for building transforms.

#pragma once

#include <Eigen/Core>
#include <complex>
#include <map>
#include <vector>

#include "oscham/errors.hpp"

namespace oscham::op {

/// Fourier multi-index j in Z^d (d = angle dimension).
using Harmonic = std::vector<int>;

/// |j|_1.
int harmonic_order(const Harmonic& j);

/// Component-wise negation.
Harmonic negate(const Harmonic& j);

// ---------------------------------------------------------------- operator

/// Finite family of Fourier blocks Q_j (dim x dim complex matrices) of a
/// theta-dependent operator Q(theta) = sum_j Q_j e^{i j.theta} acting on the
/// first `dim` oscillator modes (1-based mode indices a, b; storage 0-based).
struct TruncatedOperator {
  int dim = 0;
  int angle_dim = 1;
  std::map<Harmonic, Eigen::MatrixXcd> modes;

  static TruncatedOperator zero(int dim, int angle_dim = 1);

  /// Block for j, inserted as a zero matrix if absent.
  Eigen::MatrixXcd& block(const Harmonic& j);
  /// Pointer to the block for j, or nullptr.
  const Eigen::MatrixXcd* find(const Harmonic& j) const;

  /// Q(theta); theta.size() must equal angle_dim (ValidationError).
  Eigen::MatrixXcd at(const std::vector<double>& theta) const;

  /// Largest |j|_1 present (0 for an empty operator).
  int max_harmonic_order() const;

  /// sup_j max_entry |Q_{-j} - conj(Q_j)| — zero for operators representing
  /// real-valued Q(theta).
  double reality_defect() const;

  /// sup_j max_entry |Q_j - Q_j^T|.
  double symmetry_defect() const;

  /// Removes blocks whose max entry is <= tol; returns the number removed.
  int prune(double tol);
};

// ---------------------------------------------------------------- norms

/// Weighted decay norm.  With sigma_prime == 0:
///   sup_{j, a, b} (a b)^alpha W_plus(a, b) |(Q_j)_a^b|,
/// where W_plus = 1 + |a - b| when `plus` is set and 1 otherwise.  With
/// sigma_prime > 0 the sup over harmonics becomes the analytic envelope
///   sup_{a, b} (a b)^alpha W_plus(a, b) sum_j |(Q_j)_a^b| e^{sigma_prime |j|_1},
/// an upper bound for the norm of Q(theta) on |Im theta| < sigma_prime.
double malpha_norm(const TruncatedOperator& Q, double alpha, bool plus,
                   double sigma_prime = 0.0);

// ---------------------------------------------------------------- algebra

/// Shape equality check used by the arithmetic helpers (ValidationError).
void require_same_shape(const TruncatedOperator& A, const TruncatedOperator& B);

TruncatedOperator add(const TruncatedOperator& A, const TruncatedOperator& B);
TruncatedOperator sub(const TruncatedOperator& A, const TruncatedOperator& B);
TruncatedOperator scale(const TruncatedOperator& A, std::complex<double> s);

/// Harmonic convolution (A B)_j = sum_{j1 + j2 = j} A_{j1} B_{j2}.
TruncatedOperator product(const TruncatedOperator& A,
                          const TruncatedOperator& B);

/// commutator(A, B) = A B - B A.
TruncatedOperator commutator(const TruncatedOperator& A,
                             const TruncatedOperator& B);

/// Largest entry magnitude over all blocks.
double max_entry(const TruncatedOperator& A);

// ---------------------------------------------------------------- expm

/// Matrix exponential by Taylor series with scaling and squaring
/// (||M||_inf / 2^s <= 1/4, terms to relative 1e-18).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& M);

}  // namespace oscham::op
