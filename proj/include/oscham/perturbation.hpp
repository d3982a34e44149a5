// perturbation.hpp — perturbation specifications (trigonometric coefficient
// families attached to oscillation strengths) and assembly of the truncated
// perturbation operator from matrix elements.

#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "oscham/operators.hpp"

namespace oscham::pert {

/// One Fourier coefficient c e^{i j.theta} of a coefficient function.
struct FourierCoeff {
  op::Harmonic j;
  std::complex<double> c{0.0, 0.0};
};

/// Coefficient families attached to one oscillation strength k: P picks up
///   a_k(theta) * S_k^{sin} + b_k(theta) * S_k^{cos},
/// where S_k^{sin/cos} are the sine/cosine matrix-element blocks.
struct ChannelCoeffs {
  std::vector<FourierCoeff> a;
  std::vector<FourierCoeff> b;
};

struct PerturbationSpec {
  double beta = 2.0;
  double mu = 0.0;
  int angle_dim = 1;  ///< number of angles ("n" in the JSON)
  double sigma = 0.5; ///< declared analyticity width of the coefficients
  std::vector<double> lambda;               ///< oscillation strengths
  std::map<double, ChannelCoeffs> coeffs;   ///< keyed by entries of lambda
  double envelope_constant = 0.0;  ///< max over coeffs of |c| e^{sigma |j|_1}
};

/// Parses and validates a JSON spec (schema in docs/formats.md).  Checks
/// beta > 1, mu >= 0, sigma > 0, angle_dim >= 1, a nonempty duplicate-free
/// strength list, coefficient rows of length angle_dim + 2 with integral
/// harmonics, coefficient keys matching a listed strength, no duplicate
/// harmonics inside a family, and the reality condition c_{-j} = conj(c_j)
/// (so the coefficient functions are real-valued).  ValidationError names
/// the offending location.  Fills envelope_constant.
PerturbationSpec parse_spec(const std::string& json_text);

/// parse_spec applied to the contents of `path`.
PerturbationSpec load_spec(const std::string& path);

/// Serializes back to the JSON schema (used by tooling round-trips).
std::string spec_to_json(const PerturbationSpec& spec);

/// Evaluates a coefficient family at theta.
std::complex<double> eval_coeff(const std::vector<FourierCoeff>& family,
                                const std::vector<double>& theta);

/// Assembles P(theta) = sum_k a_k(theta) S_k^{sin} + b_k(theta) S_k^{cos} on
/// the first `dim` modes, where (S_k^{sin})_m^n = Im I(m, n; k, beta, mu) and
/// (S_k^{cos})_m^n = Re I(m, n; k, beta, mu).  All matrix elements are
/// computed at abs_tol; the largest certified element error is written to
/// *max_element_error when given.  The result satisfies the reality and
/// symmetry invariants inherited from the spec.
op::TruncatedOperator assemble_P(const PerturbationSpec& spec, int dim,
                                 double abs_tol = 1e-11, unsigned threads = 0,
                                 double* max_element_error = nullptr);

}  // namespace oscham::pert
