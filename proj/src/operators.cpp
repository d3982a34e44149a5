// operators.cpp — Fourier-block operator arithmetic and norms.

#include "oscham/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace oscham::op {

int harmonic_order(const Harmonic& j) {
  int s = 0;
  for (int c : j) s += std::abs(c);
  return s;
}

Harmonic negate(const Harmonic& j) {
  Harmonic out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = -j[i];
  return out;
}

// ---------------------------------------------------------------- operator

TruncatedOperator TruncatedOperator::zero(int dim, int angle_dim) {
  if (dim < 1) throw ValidationError("operator: dim must be >= 1");
  if (angle_dim < 1)
    throw ValidationError("operator: angle_dim must be >= 1");
  TruncatedOperator out;
  out.dim = dim;
  out.angle_dim = angle_dim;
  return out;
}

Eigen::MatrixXcd& TruncatedOperator::block(const Harmonic& j) {
  if (static_cast<int>(j.size()) != angle_dim)
    throw ValidationError("operator: harmonic length != angle_dim");
  auto it = modes.find(j);
  if (it == modes.end())
    it = modes.emplace(j, Eigen::MatrixXcd::Zero(dim, dim)).first;
  return it->second;
}

const Eigen::MatrixXcd* TruncatedOperator::find(const Harmonic& j) const {
  const auto it = modes.find(j);
  return it == modes.end() ? nullptr : &it->second;
}

Eigen::MatrixXcd TruncatedOperator::at(const std::vector<double>& theta) const {
  if (static_cast<int>(theta.size()) != angle_dim)
    throw ValidationError("operator: theta length != angle_dim");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [j, q] : modes) {
    double phase = 0.0;
    for (int c = 0; c < angle_dim; ++c) phase += j[c] * theta[c];
    out += std::polar(1.0, phase) * q;
  }
  return out;
}

int TruncatedOperator::max_harmonic_order() const {
  int s = 0;
  for (const auto& [j, q] : modes) s = std::max(s, harmonic_order(j));
  return s;
}

double TruncatedOperator::reality_defect() const {
  double defect = 0.0;
  for (const auto& [j, q] : modes) {
    const Eigen::MatrixXcd* neg = find(negate(j));
    const Eigen::MatrixXcd diff =
        neg ? Eigen::MatrixXcd(*neg - q.conjugate())
            : Eigen::MatrixXcd(-q.conjugate());
    defect = std::max(defect, diff.cwiseAbs().maxCoeff());
  }
  return defect;
}

double TruncatedOperator::symmetry_defect() const {
  double defect = 0.0;
  for (const auto& [j, q] : modes) {
    const Eigen::MatrixXcd diff = q - q.transpose();
    defect = std::max(defect, diff.cwiseAbs().maxCoeff());
  }
  return defect;
}

int TruncatedOperator::prune(double tol) {
  int removed = 0;
  for (auto it = modes.begin(); it != modes.end();) {
    const double amp =
        it->second.size() > 0 ? it->second.cwiseAbs().maxCoeff() : 0.0;
    if (amp <= tol) {
      it = modes.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

// ---------------------------------------------------------------- norms

double malpha_norm(const TruncatedOperator& Q, double alpha, bool plus,
                   double sigma_prime) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw ValidationError("malpha norm: alpha must be finite and >= 0");
  if (!std::isfinite(sigma_prime) || sigma_prime < 0.0)
    throw ValidationError("malpha norm: sigma_prime must be finite and >= 0");
  if (Q.dim == 0 || Q.modes.empty()) return 0.0;
  const int dim = Q.dim;
  // Entrywise magnitude aggregate over harmonics: sup (sigma' == 0) or the
  // weighted envelope sum (sigma' > 0).
  Eigen::MatrixXd agg = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [j, q] : Q.modes) {
    const double w =
        sigma_prime > 0.0 ? std::exp(sigma_prime * harmonic_order(j)) : 1.0;
    if (sigma_prime > 0.0) {
      agg += w * q.cwiseAbs();
    } else {
      agg = agg.cwiseMax(q.cwiseAbs());
    }
  }
  double norm = 0.0;
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double a = r + 1.0, b = c + 1.0;
      double w = std::pow(a * b, alpha);
      if (plus) w *= 1.0 + std::abs(a - b);
      norm = std::max(norm, w * agg(r, c));
    }
  }
  return norm;
}

// ---------------------------------------------------------------- algebra

void require_same_shape(const TruncatedOperator& A,
                        const TruncatedOperator& B) {
  if (A.dim != B.dim || A.angle_dim != B.angle_dim)
    throw ValidationError("operator arithmetic: shape mismatch");
}

TruncatedOperator add(const TruncatedOperator& A, const TruncatedOperator& B) {
  require_same_shape(A, B);
  TruncatedOperator out = A;
  for (const auto& [j, q] : B.modes) out.block(j) += q;
  return out;
}

TruncatedOperator sub(const TruncatedOperator& A, const TruncatedOperator& B) {
  require_same_shape(A, B);
  TruncatedOperator out = A;
  for (const auto& [j, q] : B.modes) out.block(j) -= q;
  return out;
}

TruncatedOperator scale(const TruncatedOperator& A, std::complex<double> s) {
  TruncatedOperator out = A;
  for (auto& [j, q] : out.modes) q *= s;
  return out;
}

TruncatedOperator product(const TruncatedOperator& A,
                          const TruncatedOperator& B) {
  require_same_shape(A, B);
  TruncatedOperator out = TruncatedOperator::zero(A.dim, A.angle_dim);
  for (const auto& [ja, qa] : A.modes) {
    for (const auto& [jb, qb] : B.modes) {
      Harmonic j(ja.size());
      for (std::size_t c = 0; c < ja.size(); ++c) j[c] = ja[c] + jb[c];
      out.block(j) += qa * qb;
    }
  }
  return out;
}

TruncatedOperator commutator(const TruncatedOperator& A,
                             const TruncatedOperator& B) {
  return sub(product(A, B), product(B, A));
}

double max_entry(const TruncatedOperator& A) {
  double m = 0.0;
  for (const auto& [j, q] : A.modes)
    if (q.size() > 0) m = std::max(m, q.cwiseAbs().maxCoeff());
  return m;
}

// ---------------------------------------------------------------- expm

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& M) {
  if (M.rows() != M.cols())
    throw ValidationError("expm: matrix must be square");
  const Eigen::Index n = M.rows();
  const double norm = M.size() > 0 ? M.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  int squarings = 0;
  double scaled = norm;
  while (scaled > 0.25 && squarings < 60) {
    scaled *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXcd A = M / std::pow(2.0, squarings);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * A) / static_cast<double>(k);
    sum += term;
    const double tmax = term.cwiseAbs().maxCoeff();
    if (tmax < 1e-18 * std::max(1.0, sum.cwiseAbs().maxCoeff())) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace oscham::op
