// simulate.cpp — operator-splitting integrator and reduced-flow comparison.

#include "oscham/simulate.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "oscham/errors.hpp"

namespace oscham::sim {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct KickFamily {
  // Real-valued representation P(theta) = C0 + sum_j [cos(j.theta) Cj +
  // sin(j.theta) Sj] over canonical harmonics (first nonzero component > 0);
  // usable when P passes the reality check.
  bool real_path = false;
  Eigen::MatrixXd C0;
  std::vector<op::Harmonic> harm;
  std::vector<Eigen::MatrixXd> C;
  std::vector<Eigen::MatrixXd> S;
  // General complex representation (mirrors excluded handling not needed).
  const op::TruncatedOperator* P = nullptr;
};

bool canonical_positive(const op::Harmonic& j) {
  for (int v : j) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;  // zero harmonic
}

KickFamily build_family(const op::TruncatedOperator& P) {
  KickFamily f;
  f.P = &P;
  const double scale = std::max(1.0, op::max_entry(P));
  f.real_path = P.reality_defect() <= 1e-12 * scale;
  if (!f.real_path) return f;
  f.C0 = Eigen::MatrixXd::Zero(P.dim, P.dim);
  for (const auto& [j, M] : P.modes) {
    if (op::harmonic_order(j) == 0) {
      f.C0 += M.real();
    } else if (canonical_positive(j)) {
      f.harm.push_back(j);
      f.C.push_back(2.0 * M.real());
      f.S.push_back(-2.0 * M.imag());
    }
  }
  return f;
}

// xi <- exp(-i c P(theta)) xi by Taylor summation; c = eps * (substep length).
void kick(const KickFamily& f, const std::vector<double>& theta, double c,
          Eigen::VectorXcd& xi) {
  const int dim = static_cast<int>(xi.size());
  constexpr double kTol = 1e-18;
  constexpr int kMaxTerms = 64;
  if (f.real_path) {
    Eigen::MatrixXd Ptheta = f.C0;
    for (std::size_t q = 0; q < f.harm.size(); ++q) {
      double ph = 0.0;
      for (std::size_t i = 0; i < theta.size(); ++i) ph += f.harm[q][i] * theta[i];
      Ptheta += std::cos(ph) * f.C[q] + std::sin(ph) * f.S[q];
    }
    Eigen::VectorXd yr = xi.real(), yi = xi.imag();
    Eigen::VectorXd tr = yr, ti = yi;
    for (int k = 1; k <= kMaxTerms; ++k) {
      const double ck = c / k;
      Eigen::VectorXd u = Ptheta * tr;
      Eigen::VectorXd v = Ptheta * ti;
      tr = ck * v;
      ti = -ck * u;
      yr += tr;
      yi += ti;
      const double tn = std::max(tr.cwiseAbs().maxCoeff(), ti.cwiseAbs().maxCoeff());
      const double yn = std::max(yr.cwiseAbs().maxCoeff(), yi.cwiseAbs().maxCoeff());
      if (tn <= kTol * (yn + 1e-300)) {
        for (int a = 0; a < dim; ++a) xi(a) = std::complex<double>(yr(a), yi(a));
        return;
      }
    }
    throw NumericalError("simulate: kick exponential did not converge");
  }
  Eigen::MatrixXcd Ptheta = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [j, M] : f.P->modes) {
    double ph = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) ph += j[i] * theta[i];
    Ptheta += std::exp(std::complex<double>(0.0, ph)) * M;
  }
  Eigen::VectorXcd y = xi, t = xi;
  const std::complex<double> mic(0.0, -c);
  for (int k = 1; k <= kMaxTerms; ++k) {
    t = (mic / static_cast<double>(k)) * (Ptheta * t);
    y += t;
    if (t.cwiseAbs().maxCoeff() <= kTol * (y.cwiseAbs().maxCoeff() + 1e-300)) {
      xi = y;
      return;
    }
  }
  throw NumericalError("simulate: kick exponential did not converge");
}

void validate(const op::TruncatedOperator& P, const Eigen::VectorXcd& xi0,
              const SimParams& par) {
  if (P.dim < 1) throw ValidationError("simulate: operator dim must be >= 1");
  if (xi0.size() != P.dim)
    throw ValidationError("simulate: initial state size must match operator dim");
  if (static_cast<int>(par.omega.size()) != P.angle_dim)
    throw ValidationError("simulate: omega size must match angle dimension");
  for (double w : par.omega)
    if (!std::isfinite(w)) throw ValidationError("simulate: omega must be finite");
  if (!std::isfinite(par.eps) || par.eps < 0.0)
    throw ValidationError("simulate: eps must be >= 0");
  if (!(par.t_final > 0.0) || !std::isfinite(par.t_final))
    throw ValidationError("simulate: t_final must be positive");
  if (!(par.dt > 0.0)) throw ValidationError("simulate: dt must be positive");
  if (par.sample_stride < 1)
    throw ValidationError("simulate: sample_stride must be >= 1");
}

}  // namespace

double h1_norm(const Eigen::VectorXcd& xi) {
  double s = 0.0;
  for (int a = 0; a < xi.size(); ++a)
    s += (2.0 * a + 1.0) * std::norm(xi(a));
  return std::sqrt(s);
}

Trajectory integrate(const op::TruncatedOperator& P, const Eigen::VectorXcd& xi0,
                     const SimParams& par) {
  validate(P, xi0, par);
  const int dim = P.dim;
  const long n_steps = std::max(1l, std::lround(par.t_final / par.dt));
  const double h = par.t_final / static_cast<double>(n_steps);

  // Substep pattern per step, in units of h: pairs (A advance, then kick?).
  // strang2:  A(1/2) B(1) A(1/2)
  // yoshida4: A(w1/2) B(w1) A((w1+w0)/2) B(w0) A((w1+w0)/2) B(w1) A(w1/2)
  std::vector<double> adv;   // A-substep lengths
  std::vector<double> bcoef; // kick strengths between them (size adv.size()-1)
  if (par.scheme == Scheme::strang2) {
    adv = {0.5, 0.5};
    bcoef = {1.0};
  } else {
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double w0 = 1.0 - 2.0 * w1;
    adv = {w1 / 2.0, (w1 + w0) / 2.0, (w1 + w0) / 2.0, w1 / 2.0};
    bcoef = {w1, w0, w1};
  }
  // Phase vectors exp(-i adv[q] h lambda) and cumulative time offsets of the
  // kicks within one step.  The phases are built and applied in long double:
  // double-precision phase constants carry a sub-ulp modulus bias that drifts
  // the state norm linearly over millions of applications.
  std::vector<std::vector<std::complex<long double>>> phases(adv.size());
  for (std::size_t q = 0; q < adv.size(); ++q) {
    phases[q].resize(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      const long double arg = -static_cast<long double>(adv[q]) *
                              static_cast<long double>(h) * (2.0L * a + 1.0L);
      phases[q][static_cast<std::size_t>(a)] =
          std::complex<long double>(std::cos(arg), std::sin(arg));
    }
  }
  std::vector<double> koff(bcoef.size());
  {
    double acc = 0.0;
    for (std::size_t q = 0; q < bcoef.size(); ++q) {
      acc += adv[q];
      koff[q] = acc;
    }
  }

  const KickFamily fam = build_family(P);
  const bool kicks_on = par.eps > 0.0 && !P.modes.empty();

  Trajectory traj;
  traj.steps = n_steps;
  traj.step = h;
  Eigen::VectorXcd xi = xi0;
  const double norm0 = xi.norm();
  std::vector<double> theta(par.omega.size());
  auto record = [&](long i) {
    traj.times.push_back(h * static_cast<double>(i));
    traj.states.push_back(xi);
    traj.norm_defect = std::max(traj.norm_defect, std::abs(xi.norm() - norm0));
  };
  record(0);
  for (long i = 0; i < n_steps; ++i) {
    for (std::size_t q = 0; q < adv.size(); ++q) {
      for (int a = 0; a < dim; ++a) {
        const std::complex<long double> z =
            std::complex<long double>(xi(a)) * phases[q][static_cast<std::size_t>(a)];
        xi(a) = std::complex<double>(static_cast<double>(z.real()),
                                     static_cast<double>(z.imag()));
      }
      if (q < bcoef.size() && kicks_on) {
        const double tau = h * (static_cast<double>(i) + koff[q]);
        for (std::size_t c = 0; c < theta.size(); ++c)
          theta[c] = std::fmod(par.omega[c] * tau, kTwoPi);
        kick(fam, theta, par.eps * bcoef[q] * h, xi);
      }
    }
    if ((i + 1) % par.sample_stride == 0 || i + 1 == n_steps) record(i + 1);
  }
  return traj;
}

FlowCompareReport reduced_flow_compare(const kam::KamRunResult& run,
                                       const op::TruncatedOperator& P,
                                       const Eigen::VectorXcd& xi0,
                                       const SimParams& par) {
  const double eps_ref = std::max(std::abs(run.params.eps), 1e-300);
  if (std::abs(run.params.eps - par.eps) > 1e-12 * eps_ref)
    throw ValidationError("flow-compare: eps of run and simulation differ");
  if (run.params.omega.size() != par.omega.size())
    throw ValidationError("flow-compare: omega sizes differ");
  for (std::size_t c = 0; c < par.omega.size(); ++c)
    if (std::abs(run.params.omega[c] - par.omega[c]) > 1e-12)
      throw ValidationError("flow-compare: omega of run and simulation differ");

  const Trajectory traj = integrate(P, xi0, par);
  const int dim = P.dim;
  const int adim = P.angle_dim;
  const Eigen::MatrixXcd V0 = kam::composite_transform(
      run, std::vector<double>(static_cast<std::size_t>(adim), 0.0));
  const Eigen::VectorXcd w0 = V0.adjoint() * xi0;

  FlowCompareReport rep;
  rep.samples = static_cast<int>(traj.times.size());
  std::vector<double> theta(static_cast<std::size_t>(adim));
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const double t = traj.times[s];
    for (int c = 0; c < adim; ++c)
      theta[static_cast<std::size_t>(c)] =
          std::fmod(run.params.omega[static_cast<std::size_t>(c)] * t, kTwoPi);
    Eigen::VectorXcd w = w0;
    for (int a = 0; a < dim; ++a)
      w(a) *= std::exp(std::complex<double>(
          0.0, -t * run.state.lambda[static_cast<std::size_t>(a)]));
    const Eigen::VectorXcd y = kam::composite_transform(run, theta) * w;
    const double dev = (traj.states[s] - y).norm();
    rep.max_deviation = std::max(rep.max_deviation, dev);
    rep.final_deviation = dev;
  }
  return rep;
}

}  // namespace oscham::sim
