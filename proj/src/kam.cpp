// kam.cpp — nonresonance screening, excluded-measure estimates, and the
// quadratic reducibility iteration with exact remainder bookkeeping.

#include "oscham/kam.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

#include "oscham/errors.hpp"

namespace oscham::kam {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> ladder(int dim) {
  std::vector<double> lambda(static_cast<std::size_t>(dim));
  for (int a = 1; a <= dim; ++a) lambda[a - 1] = 2.0 * a - 1.0;
  return lambda;
}

double dot(const op::Harmonic& k, const std::vector<double>& omega) {
  double d = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) d += k[i] * omega[i];
  return d;
}

// ---- canonical harmonic enumeration: 0 < |k|_1 <= cutoff, first nonzero
// component positive (k and -k give the same divisor family).

void enumerate_rec(std::size_t pos, int remaining, bool leading,
                   std::vector<int>& cur, std::vector<op::Harmonic>& out) {
  if (pos == cur.size()) {
    if (!leading) out.push_back(cur);
    return;
  }
  const int lo = leading ? 0 : -remaining;
  for (int v = lo; v <= remaining; ++v) {
    cur[pos] = v;
    enumerate_rec(pos + 1, remaining - std::abs(v), leading && v == 0, cur, out);
  }
  cur[pos] = 0;
}

std::vector<op::Harmonic> canonical_harmonics(int angle_dim, int cutoff) {
  double count = 1.0;
  for (int i = 0; i < angle_dim; ++i) count *= 2.0 * cutoff + 1.0;
  if (count > 4e6)
    throw ValidationError("melnikov: cutoff too large for this angle dimension");
  std::vector<op::Harmonic> out;
  std::vector<int> cur(static_cast<std::size_t>(angle_dim), 0);
  enumerate_rec(0, cutoff, true, cur, out);
  return out;
}

void validate_melnikov(const MelnikovParams& p, int angle_dim, int dim) {
  if (!std::isfinite(p.kappa) || !(p.kappa > 0.0) || !(p.kappa < 1.0))
    throw ValidationError("melnikov: kappa must lie in (0, 1)");
  if (p.cutoff < 1) throw ValidationError("melnikov: cutoff must be >= 1");
  if (angle_dim < 1 || angle_dim > 8)
    throw ValidationError("melnikov: angle dimension must be in 1..8");
  if (dim < 1) throw ValidationError("melnikov: dim must be >= 1");
}

struct ScreenWitness {
  op::Harmonic k;
  long j = 0;
  double divisor = 0.0;
};

bool divisor_clears(double d, long j, double kappa) {
  return std::abs(d + static_cast<double>(j)) >=
         kappa * (1.0 + std::abs(static_cast<double>(j)));
}

// Shared screen core.  A violating j obeys |j| <= (|d| + kappa)/(1 - kappa)
// and lies within kappa (1 + |j|) of -d, so the windowed path tests a padded
// superset of the possible violators.
std::optional<ScreenWitness> find_violation(const std::vector<op::Harmonic>& ks,
                                            const std::vector<double>& omega,
                                            double kappa, long jmax,
                                            bool exhaustive) {
  for (const auto& k : ks) {
    const double d = dot(k, omega);
    long lo = -jmax;
    long hi = jmax;
    if (!exhaustive) {
      const double jb = (std::abs(d) + kappa) / (1.0 - kappa);
      const double h = kappa * (1.0 + jb) + 1.0;
      lo = std::max(lo, std::lround(std::floor(-d - h)) - 1);
      hi = std::min(hi, std::lround(std::ceil(-d + h)) + 1);
    }
    for (long j = lo; j <= hi; ++j)
      if (!divisor_clears(d, j, kappa))
        return ScreenWitness{k, j, d + static_cast<double>(j)};
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------- spectrum

SpectrumReport check_A1(int dim) {
  if (dim < 2) throw ValidationError("spectrum: dim must be >= 2");
  const auto lambda = ladder(dim);
  SpectrumReport r;
  r.c0 = std::numeric_limits<double>::infinity();
  r.c1 = std::numeric_limits<double>::infinity();
  r.c2 = 0.0;
  for (int a = 1; a <= dim; ++a) {
    const double q = lambda[a - 1] / a;
    r.c0 = std::min(r.c0, q);
    r.c2 = std::max(r.c2, q);
  }
  // The difference quotient is constant for this ladder; sweep all pairs up
  // to a size guard, adjacent pairs beyond it.
  if (dim <= 2048) {
    for (int a = 1; a <= dim; ++a)
      for (int b = a + 1; b <= dim; ++b)
        r.c1 = std::min(r.c1, (lambda[b - 1] - lambda[a - 1]) / (b - a));
  } else {
    for (int a = 1; a < dim; ++a)
      r.c1 = std::min(r.c1, lambda[a] - lambda[a - 1]);
  }
  r.pass = r.c0 > 0.0 && r.c1 > 0.0 && std::isfinite(r.c2);
  return r;
}

// ---------------------------------------------------------------- screening

bool is_nonresonant(const std::vector<double>& omega, const MelnikovParams& p,
                    int dim, bool exhaustive) {
  validate_melnikov(p, static_cast<int>(omega.size()), dim);
  for (double w : omega)
    if (!std::isfinite(w)) throw ValidationError("melnikov: omega must be finite");
  const auto ks = canonical_harmonics(static_cast<int>(omega.size()), p.cutoff);
  return !find_violation(ks, omega, p.kappa, 2L * dim, exhaustive).has_value();
}

MeasureEstimate excluded_measure(const MelnikovParams& p, int angle_dim, int dim,
                                 long samples, std::uint64_t seed) {
  validate_melnikov(p, angle_dim, dim);
  if (samples < 1) throw ValidationError("melnikov: samples must be >= 1");
  const auto ks = canonical_harmonics(angle_dim, p.cutoff);
  const long jmax = 2L * dim;

  double volume = 1.0;
  for (int i = 0; i < angle_dim; ++i) volume *= kTwoPi;

  // Deterministic chunked sampling: chunk c draws from its own splitmix64
  // stream, so the estimate depends only on (seed, samples).  The chunk index
  // is avalanche-hashed into the initial state; without that, nearby initial
  // states land on overlapping orbit segments and the chunks repeat samples.
  auto splitmix = [](std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  auto hash64 = [](std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  };

  const int kChunks = 256;
  long violations = 0;
  std::vector<double> omega(static_cast<std::size_t>(angle_dim));
  for (int c = 0; c < kChunks; ++c) {
    long nc = samples / kChunks + (c < samples % kChunks ? 1 : 0);
    std::uint64_t st =
        hash64(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(c + 1));
    for (long s = 0; s < nc; ++s) {
      for (int i = 0; i < angle_dim; ++i)
        omega[static_cast<std::size_t>(i)] =
            kTwoPi * ((splitmix(st) >> 11) * 0x1.0p-53);
      if (find_violation(ks, omega, p.kappa, jmax, false).has_value()) ++violations;
    }
  }

  MeasureEstimate est;
  est.samples = samples;
  est.violations = violations;
  const double phat = static_cast<double>(violations) / static_cast<double>(samples);
  est.estimate = volume * phat;
  est.std_error =
      volume * std::sqrt(std::max(phat * (1.0 - phat), 0.0) / static_cast<double>(samples));

  // First-order union bound: for each canonical k the slab |k.omega + j| <
  // kappa (1 + |j|) meets the box in measure at most
  //   (2 pi)^{n-1} |slab range ∩ box range of k.omega| / max_i |k_i|,
  // since every fiber along the steepest component cuts the slab in at most
  // that length.
  double ceiling = 0.0;
  const double cross = volume / kTwoPi;
  for (const auto& k : ks) {
    int kinf = 0;
    double box_lo = 0.0;
    double box_hi = 0.0;
    for (int v : k) {
      kinf = std::max(kinf, std::abs(v));
      if (v > 0) box_hi += kTwoPi * v;
      if (v < 0) box_lo += kTwoPi * v;
    }
    for (long j = -jmax; j <= jmax; ++j) {
      const double h = p.kappa * (1.0 + std::abs(static_cast<double>(j)));
      const double lo = std::max(box_lo, -static_cast<double>(j) - h);
      const double hi = std::min(box_hi, -static_cast<double>(j) + h);
      if (hi > lo) ceiling += cross * (hi - lo) / kinf;
    }
  }
  est.ceiling = std::min(ceiling, volume);
  return est;
}

double excluded_measure_exact(const MelnikovParams& p, int dim) {
  validate_melnikov(p, 1, dim);
  const long jmax = 2L * dim;
  std::vector<std::pair<double, double>> iv;
  for (int k = 1; k <= p.cutoff; ++k) {
    for (long j = -jmax; j <= jmax; ++j) {
      const double half = p.kappa * (1.0 + std::abs(static_cast<double>(j)));
      double lo = (-static_cast<double>(j) - half) / k;
      double hi = (-static_cast<double>(j) + half) / k;
      lo = std::max(lo, 0.0);
      hi = std::min(hi, kTwoPi);
      if (hi > lo) iv.emplace_back(lo, hi);
    }
  }
  std::sort(iv.begin(), iv.end());
  double total = 0.0;
  double cur_lo = 0.0;
  double cur_hi = -1.0;
  for (const auto& [lo, hi] : iv) {
    if (lo > cur_hi) {
      if (cur_hi > cur_lo) total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (cur_hi > cur_lo) total += cur_hi - cur_lo;
  return total;
}

// ---------------------------------------------------------------- homological

HomologicalSolution homological_solve(const op::TruncatedOperator& R,
                                      const std::vector<double>& lambda,
                                      const std::vector<double>& omega,
                                      double kappa, int cutoff) {
  if (static_cast<int>(lambda.size()) != R.dim)
    throw ValidationError("homological: lambda size must match operator dim");
  if (static_cast<int>(omega.size()) != R.angle_dim)
    throw ValidationError("homological: omega size must match angle dimension");
  if (!std::isfinite(kappa) || !(kappa > 0.0))
    throw ValidationError("homological: kappa must be positive");
  if (cutoff < 0) throw ValidationError("homological: cutoff must be >= 0");

  HomologicalSolution sol;
  sol.W = op::TruncatedOperator::zero(R.dim, R.angle_dim);
  sol.resolved = op::TruncatedOperator::zero(R.dim, R.angle_dim);

  for (const auto& [j, block] : R.modes) {
    const int order = op::harmonic_order(j);
    if (order > cutoff) continue;  // stays in the remainder
    const double jw = dot(j, omega);

    Eigen::MatrixXcd res = block;
    if (order == 0) res.diagonal().setZero();  // diagonal feeds the normal form

    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(R.dim, R.dim);
    double frob2 = 0.0;
    bool any = false;
    for (int b = 0; b < R.dim; ++b) {
      for (int a = 0; a < R.dim; ++a) {
        const std::complex<double> num = res(a, b);
        if (num == 0.0) continue;
        any = true;
        const double gap = lambda[static_cast<std::size_t>(a)] -
                           lambda[static_cast<std::size_t>(b)];
        const double d = jw + gap;
        const double thresh = 0.5 * kappa * (1.0 + 0.5 * std::abs(gap));
        if (std::abs(d) < thresh) {
          std::ostringstream os;
          os << "homological: divisor " << d << " below threshold " << thresh
             << " at harmonic order " << order << ", modes (" << (a + 1) << ", "
             << (b + 1) << ")";
          throw SmallDivisorError(os.str(), order, a + 1, b + 1, d);
        }
        W(a, b) = -num / d;
        sol.residual = std::max(sol.residual, std::abs(d * W(a, b) + num));
        const double q = std::abs(num) / thresh;
        frob2 += q * q;
      }
    }
    if (!any) continue;
    sol.W.block(j) = W;
    sol.resolved.block(j) = res;
    sol.closeness_increment += std::sqrt(frob2);
  }
  return sol;
}

// ---------------------------------------------------------------- iteration

namespace {

// Per-block envelope contribution e^{sigma |j|_1} sup_ab (ab)^alpha (1+|a-b|)
// |Q_j,ab| — one summand of the working norm, used for accounted pruning.
double block_contribution(const Eigen::MatrixXcd& M, double alpha, double sigma,
                          int order) {
  const int dim = static_cast<int>(M.rows());
  std::vector<double> pa(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a)
    pa[static_cast<std::size_t>(a)] = std::pow(static_cast<double>(a + 1), alpha);
  double sup = 0.0;
  for (int b = 0; b < dim; ++b)
    for (int a = 0; a < dim; ++a) {
      const double w = pa[static_cast<std::size_t>(a)] * pa[static_cast<std::size_t>(b)] *
                       (1.0 + std::abs(a - b));
      sup = std::max(sup, w * std::abs(M(a, b)));
    }
  return std::exp(sigma * order) * sup;
}

// Drops blocks whose envelope contribution is <= tol; returns the summed
// contributions of everything removed (an upper bound on the norm change).
double prune_env(op::TruncatedOperator& Q, double tol, double alpha, double sigma) {
  double removed = 0.0;
  for (auto it = Q.modes.begin(); it != Q.modes.end();) {
    const double c =
        block_contribution(it->second, alpha, sigma, op::harmonic_order(it->first));
    if (c <= tol) {
      removed += c;
      it = Q.modes.erase(it);
    } else {
      ++it;
    }
  }
  return removed;
}

void validate_params(const op::TruncatedOperator& P, const KamParams& par) {
  if (P.dim < 2) throw ValidationError("kam: operator dim must be >= 2");
  if (static_cast<int>(par.omega.size()) != P.angle_dim)
    throw ValidationError("kam: omega size must match the angle dimension");
  for (double w : par.omega)
    if (!std::isfinite(w)) throw ValidationError("kam: omega must be finite");
  if (!std::isfinite(par.eps) || !(par.eps > 0.0))
    throw ValidationError("kam: eps must be positive");
  if (!(par.alpha >= 0.0)) throw ValidationError("kam: alpha must be >= 0");
  if (!(par.sigma > 0.0)) throw ValidationError("kam: sigma must be positive");
  const KamSchedule& s = par.schedule;
  if (!(s.kappa0 > 0.0) || !(s.eps_ref > 0.0) || s.cutoff0 < 1 || s.max_steps < 0 ||
      !(s.stop_eps > 0.0) || !(s.drop_tol > 0.0))
    throw ValidationError("kam: malformed schedule");
  if (!std::isfinite(op::max_entry(P)))
    throw ValidationError("kam: operator has non-finite entries");
}

}  // namespace

KamRunResult kam_iterate(const op::TruncatedOperator& P, const KamParams& par) {
  validate_params(P, par);
  const KamSchedule& sch = par.schedule;
  const int dim = P.dim;
  const int adim = P.angle_dim;
  const op::Harmonic zero(static_cast<std::size_t>(adim), 0);

  KamRunResult run;
  run.params = par;
  run.lambda0 = ladder(dim);

  KamState st;
  st.lambda = run.lambda0;
  st.remainder = op::scale(P, par.eps);
  st.sigma = par.sigma;
  st.eps = op::malpha_norm(st.remainder, par.alpha, true, st.sigma);
  const double eps0 = st.eps;

  const double kappa_base =
      sch.kappa0 * std::pow(par.eps / sch.eps_ref, sch.kappa_eps_exponent);
  const double inner_tol = sch.drop_tol * 1e-6;
  bool grew_before = false;

  for (int step = 0; step < sch.max_steps; ++step) {
    if (st.eps <= sch.stop_eps) break;
    const double kappa = kappa_base * std::pow(0.5, step);
    const int cutoff = sch.cutoff0 << step;

    // Screen the frequency vector at this rung before dividing by anything.
    {
      const auto ks = canonical_harmonics(adim, cutoff);
      if (auto bad = find_violation(ks, par.omega, kappa, 2L * dim, false)) {
        std::ostringstream os;
        os << "kam: nonresonance screen failed at step " << step << " (kappa "
           << kappa << ", cutoff " << cutoff << ", j " << bad->j << ")";
        throw ResonanceError(os.str(), bad->k, bad->j, bad->divisor);
      }
    }

    HomologicalSolution sol =
        homological_solve(st.remainder, st.lambda, par.omega, kappa, cutoff);
    run.trace.push_back({step, st.eps, kappa, cutoff, st.sigma, sol.residual});

    // Absorb the theta-averaged diagonal into the normal form; the imaginary
    // rounding dust stays in the remainder so the update is exact.
    Eigen::VectorXd dust_imag;
    const Eigen::MatrixXcd* r0 = st.remainder.find(zero);
    if (r0 != nullptr) {
      dust_imag = r0->diagonal().imag();
      for (int a = 0; a < dim; ++a)
        st.lambda[static_cast<std::size_t>(a)] += (*r0)(a, a).real();
    }

    // Exact next remainder:
    //   R+ = R_{>K} + i Im diag(R_0)
    //        + sum_{k>=1} ad^k(R)/k! - sum_{k>=1} ad^k(Rres)/(k+1)!.
    op::TruncatedOperator total = op::TruncatedOperator::zero(dim, adim);
    for (const auto& [j, M] : st.remainder.modes)
      if (op::harmonic_order(j) > cutoff) total.modes.emplace(j, M);
    if (r0 != nullptr && dust_imag.cwiseAbs().maxCoeff() > 0.0) {
      Eigen::MatrixXcd& d0 = total.block(zero);
      for (int a = 0; a < dim; ++a)
        d0(a, a) += std::complex<double>(0.0, dust_imag(a));
    }

    op::TruncatedOperator A = st.remainder;  // full R, diagonal included
    op::TruncatedOperator B = sol.resolved;
    double fact = 1.0;
    double prev_tn = std::numeric_limits<double>::infinity();
    double tail_new = 0.0;
    bool converged = false;
    for (int k = 1; k <= 60; ++k) {
      A = op::commutator(A, sol.W);
      B = op::commutator(B, sol.W);
      fact *= k;
      // Accounted pruning keeps the harmonic support from ballooning; the
      // factor 3 covers the pruned mass plus its descendants deeper in the
      // series (the generator bound keeps the amplification per level < 1).
      tail_new += (3.0 / fact) * prune_env(A, inner_tol, par.alpha, st.sigma);
      tail_new += (3.0 / (fact * (k + 1))) * prune_env(B, inner_tol, par.alpha, st.sigma);
      op::TruncatedOperator term =
          op::sub(op::scale(A, {1.0 / fact, 0.0}),
                  op::scale(B, {1.0 / (fact * (k + 1)), 0.0}));
      total = op::add(total, term);
      const double tn = op::malpha_norm(term, par.alpha, true, st.sigma);
      if (k >= 2 && tn < sch.drop_tol &&
          (tn <= 0.5 * prev_tn || tn < 1e-3 * sch.drop_tol)) {
        tail_new += 2.0 * tn;  // geometric tail at measured ratio <= 1/2
        converged = true;
        break;
      }
      if (k >= 8 && tn > prev_tn && tn > st.eps)
        throw DivergenceError("kam: commutator series stopped contracting");
      prev_tn = tn;
    }
    if (!converged)
      throw DivergenceError("kam: commutator series exceeded 60 terms");

    const double sigma_next =
        st.sigma - par.sigma / (2.0 * (step + 1.0) * (step + 1.0));
    tail_new += prune_env(total, sch.drop_tol * 1e-2, par.alpha, sigma_next);

    // Carried dust is conjugated along with the remainder on later steps;
    // scale its bound by e^{2 ||W||} before adding the new contributions.
    st.tail_accum = st.tail_accum * std::exp(2.0 * sol.closeness_increment) + tail_new;
    const double eps_next =
        op::malpha_norm(total, par.alpha, true, sigma_next) + st.tail_accum;

    if (eps_next > st.eps) {
      if (grew_before)
        throw DivergenceError("kam: remainder grew on consecutive steps");
      grew_before = true;
    } else {
      grew_before = false;
    }
    if (!(eps_next < 1e3 * eps0 + 1.0))
      throw DivergenceError("kam: remainder norm blew up");

    st.generators.push_back(std::move(sol.W));
    st.closeness_cert += sol.closeness_increment;
    st.remainder = std::move(total);
    st.eps = eps_next;
    st.sigma = sigma_next;
    st.steps_done = step + 1;
  }

  run.state = std::move(st);
  return run;
}

double normal_form_shift(const KamRunResult& run, double alpha) {
  double s = 0.0;
  for (std::size_t a = 0; a < run.lambda0.size(); ++a) {
    const double w = std::pow(static_cast<double>(a + 1), 2.0 * alpha);
    s = std::max(s, w * std::abs(run.state.lambda[a] - run.lambda0[a]));
  }
  return s;
}

// ---------------------------------------------------------------- transforms

Eigen::MatrixXcd composite_transform(const KamRunResult& run,
                                     const std::vector<double>& theta) {
  const int dim = run.state.remainder.dim;
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& W : run.state.generators) V *= op::expm(W.at(theta));
  return V;
}

ClosenessReport transform_closeness(const KamRunResult& run, int theta_samples) {
  if (theta_samples < 1)
    throw ValidationError("closeness: theta_samples must be >= 1");
  const int dim = run.state.remainder.dim;
  const int adim = run.state.remainder.angle_dim;
  ClosenessReport rep;
  rep.certified = std::expm1(run.state.closeness_cert);
  const double phi = 0.6180339887498949;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  for (int s = 0; s < theta_samples; ++s) {
    std::vector<double> theta(static_cast<std::size_t>(adim));
    for (int c = 0; c < adim; ++c) {
      double f = std::fmod((s + 1.0) * (c + 1.0) * phi, 1.0);
      theta[static_cast<std::size_t>(c)] = kTwoPi * f;
    }
    const Eigen::MatrixXcd V = composite_transform(run, theta);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V - id);
    rep.measured = std::max(rep.measured, svd.singularValues()(0));
    rep.unitarity_defect =
        std::max(rep.unitarity_defect,
                 (V.adjoint() * V - id).cwiseAbs().maxCoeff());
  }
  rep.norm_estimate = std::max(rep.measured, rep.certified);
  return rep;
}

Eigen::MatrixXcd reduced_flow(const KamRunResult& run, double t) {
  const int dim = run.state.remainder.dim;
  const int adim = run.state.remainder.angle_dim;
  std::vector<double> th(static_cast<std::size_t>(adim));
  for (int c = 0; c < adim; ++c)
    th[static_cast<std::size_t>(c)] =
        std::fmod(run.params.omega[static_cast<std::size_t>(c)] * t, kTwoPi);
  const Eigen::MatrixXcd V = composite_transform(run, th);
  const Eigen::MatrixXcd V0 =
      composite_transform(run, std::vector<double>(static_cast<std::size_t>(adim), 0.0));
  Eigen::VectorXcd phase(dim);
  for (int a = 0; a < dim; ++a)
    phase(a) = std::exp(std::complex<double>(0.0, -t * run.state.lambda[static_cast<std::size_t>(a)]));
  return V * phase.asDiagonal() * V0.adjoint();
}

}  // namespace oscham::kam
