// perturbation.cpp — JSON spec handling and perturbation assembly.

#include "oscham/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "oscham/oscint.hpp"
#include "oscham/parallel.hpp"

namespace oscham::pert {

namespace {

using nlohmann::json;

double require_number(const json& node, const char* where) {
  if (!node.is_number())
    throw ValidationError(std::string("perturbation spec: ") + where +
                          " must be a number");
  return node.get<double>();
}

// Parses one coefficient row [j_1, ..., j_d, re, im].
FourierCoeff parse_row(const json& row, int angle_dim, const std::string& where) {
  if (!row.is_array() || static_cast<int>(row.size()) != angle_dim + 2)
    throw ValidationError("perturbation spec: " + where +
                          ": row must be [j_1..j_d, re, im]");
  FourierCoeff out;
  out.j.resize(angle_dim);
  for (int c = 0; c < angle_dim; ++c) {
    const double v = require_number(row[c], where.c_str());
    if (std::rint(v) != v || std::abs(v) > 1e6)
      throw ValidationError("perturbation spec: " + where +
                            ": harmonic entries must be small integers");
    out.j[c] = static_cast<int>(v);
  }
  out.c = {require_number(row[angle_dim], where.c_str()),
           require_number(row[angle_dim + 1], where.c_str())};
  return out;
}

void check_family(const std::vector<FourierCoeff>& family,
                  const std::string& where) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t l = i + 1; l < family.size(); ++l) {
      if (family[i].j == family[l].j)
        throw ValidationError("perturbation spec: " + where +
                              ": duplicate harmonic");
    }
  }
  // reality: c_{-j} = conj(c_j)
  for (const auto& fc : family) {
    const op::Harmonic neg = op::negate(fc.j);
    const std::complex<double> want = std::conj(fc.c);
    bool found = false;
    for (const auto& other : family) {
      if (other.j == neg) {
        if (std::abs(other.c - want) >
            1e-12 * std::max(1.0, std::abs(fc.c)))
          throw ValidationError("perturbation spec: " + where +
                                ": reality condition c_{-j} = conj(c_j) violated");
        found = true;
        break;
      }
    }
    if (!found && std::abs(fc.c) > 0.0)
      throw ValidationError("perturbation spec: " + where +
                            ": missing mirror harmonic for the reality condition");
  }
}

}  // namespace

PerturbationSpec parse_spec(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("perturbation spec: invalid JSON: ") +
                          e.what());
  }
  if (!root.is_object())
    throw ValidationError("perturbation spec: top level must be an object");

  PerturbationSpec spec;
  if (!root.contains("beta") || !root.contains("mu") ||
      !root.contains("Lambda") || !root.contains("n") ||
      !root.contains("sigma"))
    throw ValidationError(
        "perturbation spec: required fields are beta, mu, Lambda, n, sigma");
  spec.beta = require_number(root["beta"], "beta");
  spec.mu = require_number(root["mu"], "mu");
  spec.sigma = require_number(root["sigma"], "sigma");
  const double nd = require_number(root["n"], "n");
  if (std::rint(nd) != nd || nd < 1 || nd > 8)
    throw ValidationError("perturbation spec: n must be an integer in [1, 8]");
  spec.angle_dim = static_cast<int>(nd);
  if (!std::isfinite(spec.beta) || !(spec.beta > 1.0))
    throw ValidationError("perturbation spec: beta must be > 1");
  if (!std::isfinite(spec.mu) || spec.mu < 0.0)
    throw ValidationError("perturbation spec: mu must be >= 0");
  if (!std::isfinite(spec.sigma) || !(spec.sigma > 0.0))
    throw ValidationError("perturbation spec: sigma must be > 0");

  const json& lam = root["Lambda"];
  if (!lam.is_array() || lam.empty())
    throw ValidationError("perturbation spec: Lambda must be a nonempty array");
  for (const auto& v : lam) {
    const double k = require_number(v, "Lambda");
    if (!std::isfinite(k) || k == 0.0)
      throw ValidationError(
          "perturbation spec: strengths must be finite and nonzero");
    for (double prev : spec.lambda)
      if (std::abs(prev - k) <= 1e-12 * std::max(1.0, std::abs(k)))
        throw ValidationError("perturbation spec: duplicate strength in Lambda");
    spec.lambda.push_back(k);
  }

  if (root.contains("coeffs")) {
    const json& co = root["coeffs"];
    if (!co.is_object())
      throw ValidationError("perturbation spec: coeffs must be an object");
    for (auto it = co.begin(); it != co.end(); ++it) {
      double kval = 0.0;
      try {
        std::size_t pos = 0;
        kval = std::stod(it.key(), &pos);
        if (pos != it.key().size()) throw std::invalid_argument(it.key());
      } catch (const std::exception&) {
        throw ValidationError("perturbation spec: coeffs key '" + it.key() +
                              "' is not a number");
      }
      const double* match = nullptr;
      for (const double& k : spec.lambda) {
        if (std::abs(k - kval) <= 1e-12 * std::max(1.0, std::abs(k))) {
          match = &k;
          break;
        }
      }
      if (match == nullptr)
        throw ValidationError("perturbation spec: coeffs key '" + it.key() +
                              "' does not appear in Lambda");
      ChannelCoeffs ch;
      const json& entry = it.value();
      if (!entry.is_object())
        throw ValidationError("perturbation spec: coeffs entries must be objects");
      if (entry.contains("a")) {
        for (const auto& row : entry["a"])
          ch.a.push_back(parse_row(row, spec.angle_dim,
                                   "coeffs[" + it.key() + "].a"));
      }
      if (entry.contains("b")) {
        for (const auto& row : entry["b"])
          ch.b.push_back(parse_row(row, spec.angle_dim,
                                   "coeffs[" + it.key() + "].b"));
      }
      check_family(ch.a, "coeffs[" + it.key() + "].a");
      check_family(ch.b, "coeffs[" + it.key() + "].b");
      spec.coeffs[*match] = std::move(ch);
    }
  }

  spec.envelope_constant = 0.0;
  for (const auto& [k, ch] : spec.coeffs) {
    for (const auto* family : {&ch.a, &ch.b}) {
      for (const auto& fc : *family) {
        spec.envelope_constant =
            std::max(spec.envelope_constant,
                     std::abs(fc.c) *
                         std::exp(spec.sigma * op::harmonic_order(fc.j)));
      }
    }
  }
  return spec;
}

PerturbationSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("perturbation spec: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

std::string spec_to_json(const PerturbationSpec& spec) {
  nlohmann::ordered_json root;
  root["beta"] = spec.beta;
  root["mu"] = spec.mu;
  root["n"] = spec.angle_dim;
  root["sigma"] = spec.sigma;
  root["Lambda"] = spec.lambda;
  nlohmann::ordered_json co = nlohmann::ordered_json::object();
  for (const auto& [k, ch] : spec.coeffs) {
    std::ostringstream key;
    key.precision(17);
    key << k;
    nlohmann::ordered_json entry = nlohmann::ordered_json::object();
    auto rows = [&](const std::vector<FourierCoeff>& family) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& fc : family) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c : fc.j) row.push_back(c);
        row.push_back(fc.c.real());
        row.push_back(fc.c.imag());
        arr.push_back(row);
      }
      return arr;
    };
    if (!ch.a.empty()) entry["a"] = rows(ch.a);
    if (!ch.b.empty()) entry["b"] = rows(ch.b);
    co[key.str()] = entry;
  }
  root["coeffs"] = co;
  return root.dump(2);
}

std::complex<double> eval_coeff(const std::vector<FourierCoeff>& family,
                                const std::vector<double>& theta) {
  std::complex<double> out{0.0, 0.0};
  for (const auto& fc : family) {
    if (fc.j.size() != theta.size())
      throw ValidationError("perturbation spec: theta length != angle_dim");
    double phase = 0.0;
    for (std::size_t c = 0; c < theta.size(); ++c) phase += fc.j[c] * theta[c];
    out += fc.c * std::polar(1.0, phase);
  }
  return out;
}

op::TruncatedOperator assemble_P(const PerturbationSpec& spec, int dim,
                                 double abs_tol, unsigned threads,
                                 double* max_element_error) {
  if (dim < 1) throw ValidationError("assemble: dim must be >= 1");
  op::TruncatedOperator P = op::TruncatedOperator::zero(dim, spec.angle_dim);
  if (max_element_error != nullptr) *max_element_error = 0.0;

  // Strengths that actually contribute.
  std::vector<double> active;
  for (const auto& [k, ch] : spec.coeffs)
    if (!ch.a.empty() || !ch.b.empty()) active.push_back(k);
  if (active.empty()) return P;

  // Same-parity index pairs (m <= n) of the upper triangle.
  std::vector<std::pair<int, int>> pairs;
  for (int m = 1; m <= dim; ++m)
    for (int n = m; n <= dim; n += 2) pairs.push_back({m, n});

  std::vector<Eigen::MatrixXd> s_sin(active.size()), s_cos(active.size());
  for (auto& s : s_sin) s = Eigen::MatrixXd::Zero(dim, dim);
  for (auto& s : s_cos) s = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<double> errors(active.size() * pairs.size(), 0.0);

  parallel_for(
      active.size() * pairs.size(),
      [&](std::size_t idx) {
        const std::size_t ki = idx / pairs.size();
        const auto [m, n] = pairs[idx % pairs.size()];
        oscint::OscIntegralQuery q;
        q.m = m;
        q.n = n;
        q.k = active[ki];
        q.beta = spec.beta;
        q.mu = spec.mu;
        oscint::MatrixElementOptions opt;
        opt.abs_tol = abs_tol;
        opt.record_panels = false;
        const auto r = oscint::matrix_element(q, opt);
        s_sin[ki](m - 1, n - 1) = r.value.imag();
        s_sin[ki](n - 1, m - 1) = r.value.imag();
        s_cos[ki](m - 1, n - 1) = r.value.real();
        s_cos[ki](n - 1, m - 1) = r.value.real();
        errors[idx] = r.abs_error_estimate;
      },
      threads);

  if (max_element_error != nullptr)
    for (double e : errors) *max_element_error = std::max(*max_element_error, e);

  for (std::size_t ki = 0; ki < active.size(); ++ki) {
    const ChannelCoeffs& ch = spec.coeffs.at(active[ki]);
    for (const auto& fc : ch.a) P.block(fc.j) += fc.c * s_sin[ki];
    for (const auto& fc : ch.b) P.block(fc.j) += fc.c * s_cos[ki];
  }
  P.prune(0.0);
  return P;
}

}  // namespace oscham::pert
