// simulate.hpp — direct time integration of the forced mode-ladder equation
//   i d/dt xi = (N + eps P(omega t)) xi,   N = diag(2a - 1),
// by unitary operator splitting, plus a comparison of the integrated flow
// against the reduced propagator produced by the normal-form iteration.
//
// Both substeps are unitary (diagonal phases for N; a Taylor-summed matrix
// exponential for the kick), so the l2 norm is preserved to roundoff over
// millions of steps.  The integrator is deterministic: no RNG, no threading.

#pragma once

#include <Eigen/Core>
#include <vector>

#include "oscham/kam.hpp"
#include "oscham/operators.hpp"

namespace oscham::sim {

enum class Scheme {
  strang2,   // A(h/2) B(h) A(h/2), second order
  yoshida4,  // triple-jump composition of strang2, fourth order
};

struct SimParams {
  double eps = 0.0;            // perturbation scale (0 = free flow)
  std::vector<double> omega;   // forcing frequencies, size = P.angle_dim
  double t_final = 0.0;
  double dt = 1e-3;            // target step; the actual step divides t_final
  int sample_stride = 1000;    // record every this many steps
  Scheme scheme = Scheme::yoshida4;
};

struct Trajectory {
  std::vector<double> times;             // sample times, first = 0, last = t_final
  std::vector<Eigen::VectorXcd> states;  // sampled states, aligned with times
  long steps = 0;                        // steps actually taken
  double step = 0.0;                     // step size actually used
  double norm_defect = 0.0;  // max over samples of | ||xi||_2 - ||xi_0||_2 |
};

/// Sobolev-type surrogate (sum_a lambda_a |xi_a|^2)^{1/2}, lambda_a = 2a - 1.
double h1_norm(const Eigen::VectorXcd& xi);

Trajectory integrate(const op::TruncatedOperator& P, const Eigen::VectorXcd& xi0,
                     const SimParams& par);

/// Integrates eps P directly and compares each sampled state against the
/// reduced propagator U(t) = V(omega t) e^{-i t N_inf} V(0)^H of `run`
/// (which must have been produced with the same eps and omega).
struct FlowCompareReport {
  double max_deviation = 0.0;    // sup over samples of ||xi_sim - U xi_0||_2
  double final_deviation = 0.0;
  int samples = 0;
};

FlowCompareReport reduced_flow_compare(const kam::KamRunResult& run,
                                       const op::TruncatedOperator& P,
                                       const Eigen::VectorXcd& xi0,
                                       const SimParams& par);

}  // namespace oscham::sim
