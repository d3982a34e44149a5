// main.cpp — the oscham command-line workbench.
//
// Subcommands: matelem, decay-scan, assemble, kam-run, measure-est, simulate,
// report, and the debug helper `hermite eval`.  Exit codes: 0 success,
// 2 input/validation failure (including argument parse errors), 3 numerical
// failure (tolerance not met, small divisor, divergence).

#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oscham/decay.hpp"
#include "oscham/errors.hpp"
#include "oscham/hermite.hpp"
#include "oscham/io.hpp"
#include "oscham/kam.hpp"
#include "oscham/operators.hpp"
#include "oscham/oscint.hpp"
#include "oscham/parallel.hpp"
#include "oscham/perturbation.hpp"
#include "oscham/simulate.hpp"
#include "oscham/version.hpp"

namespace {

using ojson = nlohmann::ordered_json;
namespace osc = oscham;

ojson complex_json(std::complex<double> z) {
  return ojson{{"re", z.real()}, {"im", z.imag()}};
}

void emit(const ojson& j) { std::cout << j.dump(2) << "\n"; }

std::vector<int> modes_up_to(int max_mode) {
  std::vector<int> m;
  for (int v = 4; v <= max_mode; v *= 2) m.push_back(v);
  if (m.empty())
    throw osc::ValidationError("decay-scan: --max-mode must be >= 4");
  return m;
}

// ---------------------------------------------------------------- schedules

osc::kam::KamSchedule schedule_from_json(const std::string& path) {
  osc::kam::KamSchedule s;
  ojson j;
  try {
    j = ojson::parse(osc::io::read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw osc::ValidationError(std::string("schedule: JSON parse failure: ") + e.what());
  }
  if (!j.is_object()) throw osc::ValidationError("schedule: top level must be an object");
  for (const auto& [key, val] : j.items()) {
    if (key == "kappa0") s.kappa0 = val.get<double>();
    else if (key == "eps_ref") s.eps_ref = val.get<double>();
    else if (key == "kappa_eps_exponent") s.kappa_eps_exponent = val.get<double>();
    else if (key == "cutoff0") s.cutoff0 = val.get<int>();
    else if (key == "max_steps") s.max_steps = val.get<int>();
    else if (key == "stop_eps") s.stop_eps = val.get<double>();
    else if (key == "drop_tol") s.drop_tol = val.get<double>();
    else throw osc::ValidationError("schedule: unknown key '" + key + "'");
  }
  return s;
}

ojson schedule_json(const osc::kam::KamSchedule& s) {
  return ojson{{"kappa0", s.kappa0},
               {"eps_ref", s.eps_ref},
               {"kappa_eps_exponent", s.kappa_eps_exponent},
               {"cutoff0", s.cutoff0},
               {"max_steps", s.max_steps},
               {"stop_eps", s.stop_eps},
               {"drop_tol", s.drop_tol}};
}

// ---------------------------------------------------------------- matelem

struct MatelemArgs {
  int m = 1, n = 1;
  double k = 1.0, beta = 2.0, mu = 0.0;
  double tol = osc::oscint::kDefaultTol;
  double x_end_hint = 0.0;
  std::size_t max_panels = 40000;
  bool long_double = false;
  bool json = false;
  bool panels = false;
};

void run_matelem(const MatelemArgs& a) {
  osc::oscint::OscIntegralQuery q{a.m, a.n, a.k, a.beta, a.mu};
  osc::oscint::MatrixElementOptions opt;
  opt.abs_tol = a.tol;
  opt.x_end_hint = a.x_end_hint;
  opt.max_panels = a.max_panels;
  opt.record_panels = true;
  const auto r = osc::oscint::matrix_element(q, opt);

  ojson j{{"m", a.m},       {"n", a.n},   {"k", a.k},
          {"beta", a.beta}, {"mu", a.mu}, {"value", complex_json(r.value)},
          {"abs_error", r.abs_error_estimate}};
  j["panel_count"] = r.panels.size();
  if (a.long_double) {
    const auto rl = osc::oscint::matrix_element_ld(q);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.21Lg", static_cast<long double>(rl.value.real()));
    j["value_ld"] = ojson{{"re", std::string(buf)}, {"im", ""}};
    std::snprintf(buf, sizeof(buf), "%.21Lg", static_cast<long double>(rl.value.imag()));
    j["value_ld"]["im"] = std::string(buf);
    j["abs_error_ld"] = rl.abs_error_estimate;
  }
  if (a.panels) {
    ojson rows = ojson::array();
    for (const auto& p : r.panels)
      rows.push_back(ojson{{"a", p.a}, {"b", p.b}, {"method", p.method}, {"error", p.error}});
    j["panels"] = rows;
  }
  if (a.json) {
    emit(j);
    return;
  }
  std::cout << "I(" << a.m << "," << a.n << "; k=" << osc::io::format_short(a.k)
            << ", beta=" << osc::io::format_short(a.beta)
            << ", mu=" << osc::io::format_short(a.mu) << ") = "
            << osc::io::format_short(r.value.real()) << " + "
            << osc::io::format_short(r.value.imag()) << " i"
            << "  (abs_error <= " << osc::io::format_short(r.abs_error_estimate)
            << ", panels " << r.panels.size() << ")\n";
}

// ---------------------------------------------------------------- decay-scan

struct DecayArgs {
  double k = 1.0, beta = 2.0, mu = 0.0;
  int max_mode = 512;
  std::vector<int> modes;
  std::vector<int> offsets{2, 8, 32};
  bool diag_only = false;
  double tol = osc::oscint::kDefaultTol;
  unsigned threads = 0;
  bool json = false;
  std::string csv = "decay-scan.csv";
};

void run_decay(const DecayArgs& a) {
  const std::vector<int> modes =
      a.modes.empty() ? modes_up_to(a.max_mode) : a.modes;
  const auto rep = osc::decay::decay_scan(a.k, a.beta, a.mu, modes, a.diag_only,
                                          a.offsets, a.tol, a.threads);
  if (!a.csv.empty()) {
    std::string body = osc::io::csv_line(
        {"m", "n", "value_re", "value_im", "abs_value", "compensated", "abs_error"});
    for (const auto& r : rep.grid)
      body += osc::io::csv_line({std::to_string(r.m), std::to_string(r.n),
                                 osc::io::format_double(r.value.real()),
                                 osc::io::format_double(r.value.imag()),
                                 osc::io::format_double(r.abs_value),
                                 osc::io::format_double(r.compensated),
                                 osc::io::format_double(r.abs_error)});
    osc::io::write_text_file(a.csv, body);
  }
  ojson j{{"k", a.k},
          {"beta", a.beta},
          {"mu", a.mu},
          {"l_star", rep.law.l_star},
          {"c_k_beta", rep.law.c},
          {"rows", rep.grid.size()},
          {"envelope_sup", rep.envelope_sup},
          {"fit_slope", rep.fit_slope},
          {"compensated_slope", rep.compensated_slope},
          {"pass", rep.pass}};
  if (a.json) {
    ojson rows = ojson::array();
    for (const auto& r : rep.grid)
      rows.push_back(ojson{{"m", r.m},
                           {"n", r.n},
                           {"value", complex_json(r.value)},
                           {"compensated", r.compensated},
                           {"abs_error", r.abs_error}});
    j["grid"] = rows;
    emit(j);
    return;
  }
  std::cout << "decay-scan k=" << osc::io::format_short(a.k)
            << " beta=" << osc::io::format_short(a.beta)
            << " mu=" << osc::io::format_short(a.mu) << ": l*=" << rep.law.l_star
            << " C=" << rep.law.c << " rows=" << rep.grid.size()
            << "\n  envelope_sup=" << rep.envelope_sup
            << " fit_slope=" << rep.fit_slope
            << " compensated_slope=" << rep.compensated_slope
            << (rep.pass ? "  [pass]" : "  [FAIL]") << "\n";
}

// ---------------------------------------------------------------- assemble

struct AssembleArgs {
  std::string spec;
  std::string out;
  int dim = 32;
  double tol = 1e-11;
  unsigned threads = 0;
  bool json = false;
};

void run_assemble(const AssembleArgs& a) {
  const auto spec = osc::pert::load_spec(a.spec);
  double max_err = 0.0;
  const auto P = osc::pert::assemble_P(spec, a.dim, a.tol, a.threads, &max_err);
  osc::io::write_operator(a.out, P);
  ojson j{{"spec", a.spec},
          {"out", a.out},
          {"dim", P.dim},
          {"angle_dim", P.angle_dim},
          {"harmonics", P.modes.size()},
          {"max_element_error", max_err},
          {"reality_defect", P.reality_defect()},
          {"symmetry_defect", P.symmetry_defect()},
          {"max_entry", osc::op::max_entry(P)}};
  if (a.json) {
    emit(j);
    return;
  }
  std::cout << "assembled " << a.out << ": dim=" << P.dim << " harmonics="
            << P.modes.size() << " max_entry=" << osc::io::format_short(osc::op::max_entry(P))
            << " max_element_error=" << osc::io::format_short(max_err) << "\n";
}

// ---------------------------------------------------------------- kam-run

struct KamArgs {
  std::string spec;
  std::string op_path;
  std::string schedule_path;
  std::string save_op;
  int dim = 32;
  double eps = 1e-3;
  double alpha = -1.0;  // <0: derive from the spec's decay law, else 0
  double sigma = -1.0;  // <0: take the spec's sigma, else 0.5
  std::vector<double> omega{3.6180339887498949};
  double assemble_tol = 1e-11;
  unsigned threads = 0;
  int theta_samples = 8;
  osc::kam::KamSchedule sched;
  bool json = false;
};

void run_kam(const KamArgs& a, const CLI::App* cmd) {
  if (a.spec.empty() == a.op_path.empty())
    throw osc::ValidationError("kam-run: exactly one of --spec or --op is required");

  osc::kam::KamSchedule sched = a.sched;
  if (!a.schedule_path.empty()) {
    sched = schedule_from_json(a.schedule_path);
    // Explicit flags override file values.
    for (const char* name : {"--kappa0", "--eps-ref", "--kappa-exp", "--cutoff0",
                             "--max-steps", "--stop-eps", "--drop-tol"}) {
      if (cmd->count(name) == 0) continue;
      if (std::string(name) == "--kappa0") sched.kappa0 = a.sched.kappa0;
      else if (std::string(name) == "--eps-ref") sched.eps_ref = a.sched.eps_ref;
      else if (std::string(name) == "--kappa-exp") sched.kappa_eps_exponent = a.sched.kappa_eps_exponent;
      else if (std::string(name) == "--cutoff0") sched.cutoff0 = a.sched.cutoff0;
      else if (std::string(name) == "--max-steps") sched.max_steps = a.sched.max_steps;
      else if (std::string(name) == "--stop-eps") sched.stop_eps = a.sched.stop_eps;
      else if (std::string(name) == "--drop-tol") sched.drop_tol = a.sched.drop_tol;
    }
  }

  osc::op::TruncatedOperator P;
  double alpha = a.alpha;
  double sigma = a.sigma;
  double max_err = 0.0;
  ojson assembly;
  if (!a.spec.empty()) {
    const auto spec = osc::pert::load_spec(a.spec);
    P = osc::pert::assemble_P(spec, a.dim, a.assemble_tol, a.threads, &max_err);
    if (alpha < 0.0)
      alpha = osc::decay::mu_admissible(spec.beta, spec.mu)
                  ? osc::decay::l_exponent(spec.beta, spec.mu)
                  : 0.0;
    if (sigma < 0.0) sigma = spec.sigma;
    assembly = ojson{{"spec", a.spec}, {"dim", P.dim}, {"max_element_error", max_err}};
  } else {
    P = osc::io::read_operator(a.op_path);
    if (alpha < 0.0) alpha = 0.0;
    if (sigma < 0.0) sigma = 0.5;
    assembly = ojson{{"op", a.op_path}, {"dim", P.dim}};
  }

  osc::kam::KamParams par;
  par.eps = a.eps;
  par.alpha = alpha;
  par.sigma = sigma;
  par.omega = a.omega;
  par.schedule = sched;

  const auto spectrum = osc::kam::check_A1(P.dim);
  const auto run = osc::kam::kam_iterate(P, par);
  const auto close = osc::kam::transform_closeness(run, a.theta_samples);
  if (!a.save_op.empty()) osc::io::write_operator(a.save_op, run.state.remainder);

  ojson trace = ojson::array();
  for (const auto& r : run.trace)
    trace.push_back(ojson{{"step", r.step},
                          {"eps", r.eps},
                          {"kappa", r.kappa},
                          {"cutoff", r.cutoff},
                          {"sigma", r.sigma},
                          {"residual", r.residual}});
  ojson lambda_head = ojson::array();
  for (int i = 0; i < std::min(8, P.dim); ++i)
    lambda_head.push_back(run.state.lambda[static_cast<std::size_t>(i)]);

  ojson j{{"params",
           ojson{{"eps", par.eps},
                 {"alpha", par.alpha},
                 {"sigma", par.sigma},
                 {"omega", par.omega},
                 {"schedule", schedule_json(sched)}}},
          {"assembly", assembly},
          {"spectrum",
           ojson{{"c0", spectrum.c0}, {"c1", spectrum.c1}, {"c2", spectrum.c2}, {"pass", spectrum.pass}}},
          {"trace", trace},
          {"state",
           ojson{{"steps_done", run.state.steps_done},
                 {"eps", run.state.eps},
                 {"sigma", run.state.sigma},
                 {"tail_accum", run.state.tail_accum},
                 {"closeness_cert", run.state.closeness_cert}}},
          {"normal_form",
           ojson{{"shift_alpha", osc::kam::normal_form_shift(run, par.alpha)},
                 {"shift_over_eps", osc::kam::normal_form_shift(run, par.alpha) / par.eps},
                 {"lambda_head", lambda_head}}},
          {"closeness",
           ojson{{"measured", close.measured},
                 {"certified", close.certified},
                 {"norm_estimate", close.norm_estimate},
                 {"unitarity_defect", close.unitarity_defect}}}};
  if (a.json) {
    emit(j);
    return;
  }
  std::cout << "kam-run: steps=" << run.state.steps_done
            << " final_eps=" << osc::io::format_short(run.state.eps)
            << " closeness(measured)=" << osc::io::format_short(close.measured)
            << " closeness(certified)=" << osc::io::format_short(close.certified) << "\n";
  for (const auto& r : run.trace)
    std::cout << "  step " << r.step << ": eps=" << osc::io::format_short(r.eps)
              << " kappa=" << osc::io::format_short(r.kappa) << " cutoff=" << r.cutoff
              << " residual=" << osc::io::format_short(r.residual) << "\n";
}

// ---------------------------------------------------------------- measure-est

struct MeasureArgs {
  double kappa = 2e-5;
  int cutoff = 8;
  int angle_dim = 1;
  int dim = 64;
  long samples = 200000;
  std::uint64_t seed = 1;
  bool exact = false;
  bool json = false;
};

void run_measure(const MeasureArgs& a) {
  osc::kam::MelnikovParams p{a.kappa, a.cutoff};
  const auto est = osc::kam::excluded_measure(p, a.angle_dim, a.dim, a.samples, a.seed);
  ojson j{{"kappa", a.kappa},       {"cutoff", a.cutoff},
          {"angle_dim", a.angle_dim}, {"dim", a.dim},
          {"samples", est.samples},   {"seed", a.seed},
          {"violations", est.violations}, {"estimate", est.estimate},
          {"std_error", est.std_error},   {"ceiling", est.ceiling}};
  if (a.exact) {
    if (a.angle_dim != 1)
      throw osc::ValidationError("measure-est: --exact requires --angle-dim 1");
    j["exact"] = osc::kam::excluded_measure_exact(p, a.dim);
  }
  if (a.json) {
    emit(j);
    return;
  }
  std::cout << "excluded measure: " << osc::io::format_short(est.estimate) << " +- "
            << osc::io::format_short(est.std_error)
            << " (ceiling " << osc::io::format_short(est.ceiling);
  if (a.exact) std::cout << ", exact " << osc::io::format_short(j["exact"].get<double>());
  std::cout << ")\n";
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
  std::string spec;
  std::string op_path;
  int dim = 32;
  double eps = 1e-3;
  std::vector<double> omega{3.6180339887498949};
  double t_final = 100.0;
  double dt = 1e-3;
  int stride = 1000;
  std::string scheme = "yoshida4";
  int init_mode = 1;
  double assemble_tol = 1e-11;
  unsigned threads = 0;
  std::string csv;
  bool json = false;
};

void run_simulate(const SimArgs& a) {
  if (a.spec.empty() == a.op_path.empty())
    throw osc::ValidationError("simulate: exactly one of --spec or --op is required");
  osc::op::TruncatedOperator P;
  if (!a.spec.empty()) {
    const auto spec = osc::pert::load_spec(a.spec);
    P = osc::pert::assemble_P(spec, a.dim, a.assemble_tol, a.threads);
  } else {
    P = osc::io::read_operator(a.op_path);
  }
  if (a.init_mode < 1 || a.init_mode > P.dim)
    throw osc::ValidationError("simulate: --init-mode must be in 1..dim");

  osc::sim::SimParams par;
  par.eps = a.eps;
  par.omega = a.omega;
  par.t_final = a.t_final;
  par.dt = a.dt;
  par.sample_stride = a.stride;
  par.scheme = a.scheme == "strang2" ? osc::sim::Scheme::strang2
                                     : osc::sim::Scheme::yoshida4;
  Eigen::VectorXcd xi0 = Eigen::VectorXcd::Zero(P.dim);
  xi0(a.init_mode - 1) = 1.0;

  const auto traj = osc::sim::integrate(P, xi0, par);
  if (!a.csv.empty()) {
    std::string body = osc::io::csv_line({"time", "norm", "h1"});
    for (std::size_t s = 0; s < traj.times.size(); ++s)
      body += osc::io::csv_line({osc::io::format_double(traj.times[s]),
                                 osc::io::format_double(traj.states[s].norm()),
                                 osc::io::format_double(osc::sim::h1_norm(traj.states[s]))});
    osc::io::write_text_file(a.csv, body);
  }
  ojson j{{"dim", P.dim},
          {"eps", a.eps},
          {"t_final", a.t_final},
          {"steps", traj.steps},
          {"step", traj.step},
          {"scheme", a.scheme},
          {"samples", traj.times.size()},
          {"norm_defect", traj.norm_defect},
          {"h1_initial", osc::sim::h1_norm(traj.states.front())},
          {"h1_final", osc::sim::h1_norm(traj.states.back())}};
  if (a.json) {
    emit(j);
    return;
  }
  std::cout << "simulate: steps=" << traj.steps << " h=" << osc::io::format_short(traj.step)
            << " norm_defect=" << osc::io::format_short(traj.norm_defect)
            << " H1 " << osc::io::format_short(j["h1_initial"].get<double>()) << " -> "
            << osc::io::format_short(j["h1_final"].get<double>()) << "\n";
}

// ---------------------------------------------------------------- report

struct ReportArgs {
  int dim = 64;
  bool json = false;
};

void run_report(const ReportArgs& a) {
  const auto spectrum = osc::kam::check_A1(a.dim);
  const auto r11 = osc::oscint::matrix_element({1, 1, 1.0, 2.0, 0.0});
  ojson laws = ojson::array();
  for (double beta : {1.5, 2.0, 3.0}) {
    const auto law = osc::decay::decay_law(1.0, beta, 0.0);
    laws.push_back(ojson{{"beta", beta}, {"l_star", law.l_star}, {"c", law.c}});
  }
  const bool screen = osc::kam::is_nonresonant({3.6180339887498949}, {4e-3, 2}, a.dim);
  ojson j{{"version", osc::kVersionString},
          {"spectrum",
           ojson{{"c0", spectrum.c0}, {"c1", spectrum.c1}, {"c2", spectrum.c2}, {"pass", spectrum.pass}}},
          {"zeta_1_at_0", osc::hermite::zeta(1, 0.0)},
          {"matelem_1_1",
           ojson{{"value", complex_json(r11.value)}, {"abs_error", r11.abs_error_estimate}}},
          {"decay_laws", laws},
          {"screen_default_omega", screen},
          {"threads", osc::resolve_thread_count(0)}};
  if (a.json) {
    emit(j);
    return;
  }
  std::cout << "oscham " << osc::kVersionString << ": spectrum pass=" << spectrum.pass
            << ", I(1,1;1,2,0) = " << osc::io::format_short(r11.value.real()) << " + "
            << osc::io::format_short(r11.value.imag()) << " i"
            << ", screen(omega=3.618..., kappa=4e-3, K=2) = "
            << (screen ? "pass" : "fail") << "\n";
}

// ---------------------------------------------------------------- hermite

struct HermiteArgs {
  int m = 1;
  double x = 0.0;
  bool ld = false;
  bool json = false;
};

void run_hermite_eval(const HermiteArgs& a) {
  const double v = osc::hermite::hermite_eval(a.m, a.x);
  const auto regime = osc::hermite::classify(a.m, a.x);
  const char* tag = regime.tag == osc::hermite::RegimeTag::oscillatory ? "oscillatory"
                    : regime.tag == osc::hermite::RegimeTag::turning   ? "turning"
                                                                       : "evanescent";
  ojson j{{"m", a.m}, {"x", a.x}, {"value", v}, {"regime", tag}};
  const double X = std::sqrt(osc::hermite::eigenvalue(a.m));
  if (a.x <= X) j["zeta"] = osc::hermite::zeta(a.m, a.x);
  if (a.x >= X) j["zeta_evanescent"] = osc::hermite::zeta_evanescent(a.m, a.x);
  if (a.ld) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.21Lg",
                  osc::hermite::hermite_eval_ld(a.m, static_cast<long double>(a.x)));
    j["value_ld"] = std::string(buf);
  }
  if (a.json) {
    emit(j);
    return;
  }
  std::cout << "h_" << a.m << "(" << osc::io::format_short(a.x)
            << ") = " << osc::io::format_short(v) << "  [" << tag << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oscham: oscillatory matrix elements of perturbed oscillator "
               "ladders, decay-law scans, and reducibility runs"};
  app.set_version_flag("--version", osc::kVersionString);
  app.require_subcommand(1);

  MatelemArgs ma;
  auto* matelem = app.add_subcommand("matelem", "Compute one matrix element I(m,n;k,beta,mu)");
  matelem->add_option("-m,--m", ma.m, "First mode index (1-based)")->required();
  matelem->add_option("-n,--n", ma.n, "Second mode index (1-based)")->required();
  matelem->add_option("-k,--k", ma.k, "Oscillation strength k (nonzero)")->required();
  matelem->add_option("--beta", ma.beta, "Phase power beta (> 1)")->required();
  matelem->add_option("--mu", ma.mu, "Weight exponent mu (>= 0)");
  matelem->add_option("--tol", ma.tol, "Absolute tolerance");
  matelem->add_option("--x-end-hint", ma.x_end_hint, "Lower bound for the far cutoff");
  matelem->add_option("--max-panels", ma.max_panels, "Adaptive panel budget");
  matelem->add_flag("--long-double", ma.long_double, "Also compute the extended-precision value");
  matelem->add_flag("--panels", ma.panels, "Include the panel decomposition");
  matelem->add_flag("--json", ma.json, "JSON output");
  matelem->callback([&ma] { run_matelem(ma); });

  DecayArgs da;
  auto* dscan = app.add_subcommand("decay-scan", "Scan |I| against the (mn)^{-l} decay law");
  dscan->add_option("-k,--k", da.k, "Oscillation strength k")->required();
  dscan->add_option("--beta", da.beta, "Phase power beta (> 1)")->required();
  dscan->add_option("--mu", da.mu, "Weight exponent mu (inside the admissible window)");
  auto* maxmode = dscan->add_option("--max-mode", da.max_mode,
                                    "Largest anchor mode (powers of two from 4)");
  dscan->add_option("--modes", da.modes, "Explicit anchor modes (overrides --max-mode)")
      ->delimiter(',')
      ->excludes(maxmode);
  dscan->add_option("--offsets", da.offsets, "Band offsets")->delimiter(',');
  dscan->add_flag("--diag-only", da.diag_only, "Diagonal pairs only");
  dscan->add_option("--tol", da.tol, "Matrix-element tolerance");
  dscan->add_option("--threads", da.threads, "Worker threads (0 = auto)");
  dscan->add_option("--csv", da.csv, "Grid CSV path (empty string disables)")
      ->capture_default_str();
  dscan->add_flag("--json", da.json, "JSON output");
  dscan->callback([&da] { run_decay(da); });

  AssembleArgs aa;
  auto* assemble = app.add_subcommand("assemble", "Assemble a perturbation operator from a spec");
  assemble->add_option("--spec", aa.spec, "Perturbation spec (JSON)")->required();
  assemble->add_option("--dim", aa.dim, "Number of modes")->required();
  assemble->add_option("--out", aa.out, "Output operator file")->required();
  assemble->add_option("--tol", aa.tol, "Matrix-element tolerance");
  assemble->add_option("--threads", aa.threads, "Worker threads (0 = auto)");
  assemble->add_flag("--json", aa.json, "JSON output");
  assemble->callback([&aa] { run_assemble(aa); });

  KamArgs ka;
  auto* kamc = app.add_subcommand("kam-run", "Run the reducibility iteration");
  kamc->add_option("--spec", ka.spec, "Perturbation spec (JSON)");
  kamc->add_option("--op", ka.op_path, "Pre-assembled operator file");
  kamc->add_option("--dim", ka.dim, "Number of modes (with --spec)");
  kamc->add_option("--eps", ka.eps, "Perturbation scale")->required();
  kamc->add_option("--alpha", ka.alpha, "Decay-norm exponent (default: from the spec)");
  kamc->add_option("--sigma", ka.sigma, "Initial envelope width (default: from the spec)");
  kamc->add_option("--omega", ka.omega, "Frequency vector")->delimiter(',');
  kamc->add_option("--schedule", ka.schedule_path, "Schedule JSON file");
  kamc->add_option("--kappa0", ka.sched.kappa0, "Screening constant at eps_ref");
  kamc->add_option("--eps-ref", ka.sched.eps_ref, "Reference eps for kappa scaling");
  kamc->add_option("--kappa-exp", ka.sched.kappa_eps_exponent, "kappa-eps scaling exponent");
  kamc->add_option("--cutoff0", ka.sched.cutoff0, "Initial Fourier cutoff");
  kamc->add_option("--max-steps", ka.sched.max_steps, "Maximum iteration steps");
  kamc->add_option("--stop-eps", ka.sched.stop_eps, "Stopping size");
  kamc->add_option("--drop-tol", ka.sched.drop_tol, "Series/pruning envelope threshold");
  kamc->add_option("--assemble-tol", ka.assemble_tol, "Matrix-element tolerance (with --spec)");
  kamc->add_option("--threads", ka.threads, "Worker threads for assembly (0 = auto)");
  kamc->add_option("--theta-samples", ka.theta_samples, "Closeness sampling count");
  kamc->add_option("--save-op", ka.save_op, "Write the final remainder to this file");
  kamc->add_flag("--json", ka.json, "JSON output");
  kamc->callback([&ka, kamc] { run_kam(ka, kamc); });

  MeasureArgs mea;
  auto* meas = app.add_subcommand("measure-est", "Estimate the excluded frequency measure");
  meas->add_option("--kappa", mea.kappa, "Divisor constant")->required();
  meas->add_option("--cutoff", mea.cutoff, "Harmonic cutoff")->required();
  meas->add_option("--angle-dim", mea.angle_dim, "Number of angles");
  meas->add_option("--dim", mea.dim, "Number of modes");
  meas->add_option("--samples", mea.samples, "Monte-Carlo samples");
  meas->add_option("--seed", mea.seed, "RNG seed");
  meas->add_flag("--exact", mea.exact, "Also compute the exact measure (angle-dim 1)");
  meas->add_flag("--json", mea.json, "JSON output");
  meas->callback([&mea] { run_measure(mea); });

  SimArgs sa;
  auto* simc = app.add_subcommand("simulate", "Integrate the forced ladder directly");
  simc->add_option("--spec", sa.spec, "Perturbation spec (JSON)");
  simc->add_option("--op", sa.op_path, "Pre-assembled operator file");
  simc->add_option("--dim", sa.dim, "Number of modes (with --spec)");
  simc->add_option("--eps", sa.eps, "Perturbation scale")->required();
  simc->add_option("--omega", sa.omega, "Forcing frequencies")->delimiter(',');
  simc->add_option("--t-final", sa.t_final, "Final time")->required();
  simc->add_option("--dt", sa.dt, "Target step size");
  simc->add_option("--stride", sa.stride, "Sampling stride (steps)");
  simc->add_option("--scheme", sa.scheme, "Splitting scheme")
      ->check(CLI::IsMember({"strang2", "yoshida4"}));
  simc->add_option("--init-mode", sa.init_mode, "Initial basis mode (1-based)");
  simc->add_option("--assemble-tol", sa.assemble_tol, "Matrix-element tolerance (with --spec)");
  simc->add_option("--threads", sa.threads, "Worker threads for assembly (0 = auto)");
  simc->add_option("--csv", sa.csv, "Write time/norm/H1 samples to this CSV file");
  simc->add_flag("--json", sa.json, "JSON output");
  simc->callback([&sa] { run_simulate(sa); });

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Quick self-check summary");
  report->add_option("--dim", ra.dim, "Ladder size for the spectrum check");
  report->add_flag("--json", ra.json, "JSON output");
  report->callback([&ra] { run_report(ra); });

  HermiteArgs ha;
  auto* hermite = app.add_subcommand("hermite", "Mode-function debug helpers");
  hermite->require_subcommand(1);
  auto* heval = hermite->add_subcommand("eval", "Evaluate a normalized mode function");
  heval->add_option("-m,--m", ha.m, "Mode index (1-based)")->required();
  heval->add_option("-x,--x", ha.x, "Evaluation point")->required();
  heval->add_flag("--long-double", ha.ld, "Also print the extended-precision value");
  heval->add_flag("--json", ha.json, "JSON output");
  heval->callback([&ha] { run_hermite_eval(ha); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const osc::ToleranceNotMet& e) {
    std::cerr << "error: " << e.what() << "\n  best value " << e.value.real() << " + "
              << e.value.imag() << " i, estimate " << e.abs_error << "\n";
    return 3;
  } catch (const osc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const osc::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
