#include "coopjam/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "coopjam/error.hpp"

namespace coopjam::gp {

void Posynomial::validate() const {
  if (terms.empty()) throw InvalidInput("posynomial has no terms");
  const std::size_t n = terms.front().n_vars();
  for (const auto& t : terms) {
    if (!(t.coeff > 0.0) || !std::isfinite(t.coeff)) throw InvalidInput("posynomial term coefficient must be > 0");
    if (t.n_vars() != n) throw InvalidInput("posynomial terms have mismatched exponent vectors");
  }
}

double eval(const Monomial& m, std::span<const double> x) {
  if (x.size() != m.n_vars()) throw InvalidInput("monomial evaluated at a point of wrong dimension");
  double v = m.coeff;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double e = m.exponents[j];
    if (e == 0.0) continue;
    if (!(x[j] > 0.0)) throw DomainError("monomial: nonpositive base with nonzero exponent");
    v *= (e == 1.0) ? x[j] : std::pow(x[j], e);
  }
  return v;
}

double eval(const Posynomial& p, std::span<const double> x) {
  double v = 0.0;
  for (const auto& t : p.terms) v += eval(t, x);
  return v;
}

Condensation condense(const Posynomial& g, std::span<const double> x_hat) {
  g.validate();
  for (double v : x_hat)
    if (!(v > 0.0)) throw DomainError("condense: expansion point must be strictly positive");
  const std::size_t k_terms = g.terms.size();
  const std::size_t n = g.n_vars();

  std::vector<double> w(k_terms);
  double total = 0.0;
  for (std::size_t k = 0; k < k_terms; ++k) {
    w[k] = eval(g.terms[k], x_hat);
    total += w[k];
  }
  CondensationWeights weights;
  weights.alpha.resize(k_terms);
  double sum = 0.0;
  for (std::size_t k = 0; k < k_terms; ++k) {
    weights.alpha[k] = std::max(w[k] / total, kMinCondensationWeight);
    sum += weights.alpha[k];
  }
  for (double& a : weights.alpha) a /= sum;

  // prod_k (c_k x^{e_k} / a_k)^{a_k}
  Monomial mono;
  mono.exponents.assign(n, 0.0);
  double log_coeff = 0.0;
  for (std::size_t k = 0; k < k_terms; ++k) {
    const double a = weights.alpha[k];
    log_coeff += a * (std::log(g.terms[k].coeff) - std::log(a));
    for (std::size_t j = 0; j < n; ++j) mono.exponents[j] += a * g.terms[k].exponents[j];
  }
  mono.coeff = std::exp(log_coeff);
  return {std::move(mono), std::move(weights)};
}

Posynomial multiply(const Posynomial& a, const Posynomial& b) {
  Posynomial out;
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      if (ta.n_vars() != tb.n_vars()) throw InvalidInput("multiply: posynomials over different variables");
      Monomial m;
      m.coeff = ta.coeff * tb.coeff;
      m.exponents.resize(ta.n_vars());
      for (std::size_t j = 0; j < ta.n_vars(); ++j) m.exponents[j] = ta.exponents[j] + tb.exponents[j];
      out.terms.push_back(std::move(m));
    }
  }
  return out;
}

void sort_terms(Posynomial& p) {
  std::stable_sort(p.terms.begin(), p.terms.end(),
                   [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
}

namespace {

// Linear posynomial sum_i w_i p_i + constants (zero coefficients dropped).
Posynomial linear_form(std::span<const double> weights, std::initializer_list<double> constants) {
  const std::size_t n = weights.size();
  Posynomial out;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] <= 0.0) continue;
    Monomial m;
    m.coeff = weights[i];
    m.exponents.assign(n, 0.0);
    m.exponents[i] = 1.0;
    out.terms.push_back(std::move(m));
  }
  for (double c : constants) {
    if (c <= 0.0) continue;
    out.terms.push_back(Monomial{c, std::vector<double>(n, 0.0)});
  }
  return out;
}

std::vector<double> ge_row(const ChannelGains& c, std::size_t m) {
  const std::size_t n = c.g_d.size();
  return {c.g_e.begin() + static_cast<std::ptrdiff_t>(m * n), c.g_e.begin() + static_cast<std::ptrdiff_t>((m + 1) * n)};
}

}  // namespace

Posynomial build_phi(const Scenario& s, const ChannelGains& c, std::size_t m) {
  const auto row = ge_row(c, m);
  auto left = linear_form(row, {s.sigma2_eaves[m], s.p_source * c.h_e[m]});
  auto right = linear_form(c.g_d, {s.sigma2_dest});
  auto out = multiply(left, right);
  sort_terms(out);
  return out;
}

Posynomial build_psi(const Scenario& s, const ChannelGains& c, std::size_t m) {
  const auto row = ge_row(c, m);
  auto left = linear_form(c.g_d, {s.p_source * c.h_d, s.sigma2_dest});
  auto right = linear_form(row, {s.sigma2_eaves[m]});
  auto out = multiply(left, right);
  sort_terms(out);
  return out;
}

double p_floor_for(const Scenario& s) { return 1e-8 * *std::min_element(s.p_max.begin(), s.p_max.end()); }

double P3Problem::gamma_hat(std::size_t m, std::span<const double> p) const {
  return eval(phi.at(m), p) / eval(psi_hat.at(m).monomial, p);
}

double P3Problem::gamma(std::size_t m, std::span<const double> p) const {
  return eval(phi.at(m), p) / eval(psi.at(m), p);
}

std::vector<double> P3Problem::strictly_feasible_start() const {
  std::vector<double> x(n_jammers + 1);
  for (std::size_t i = 0; i < n_jammers; ++i) {
    // Geometric interior: at least 1e-3 of the log-range away from each bound.
    const double lo = std::log(p_floor), hi = std::log(p_max[i]);
    const double pad = 1e-3 * (hi - lo);
    x[i] = std::exp(std::clamp(std::log(expansion[i]), lo + pad, hi - pad));
  }
  std::span<const double> p(x.data(), n_jammers);
  double tau = 0.0;
  for (std::size_t m = 0; m < phi.size(); ++m) tau = std::max(tau, gamma_hat(m, p));
  x[n_jammers] = 2.0 * tau;
  return x;
}

P3Problem build_p3(const Scenario& s, const ChannelGains& c, const PowerAllocation& p_tilde) {
  s.validate();
  c.validate(s);
  if (p_tilde.p.size() != s.n_jammers) throw InvalidInput("build_p3: expansion point has wrong dimension");
  P3Problem prob;
  prob.n_jammers = s.n_jammers;
  prob.p_floor = p_floor_for(s);
  prob.p_max = s.p_max;
  prob.expansion.resize(s.n_jammers);
  for (std::size_t i = 0; i < s.n_jammers; ++i) {
    const double v = p_tilde.p[i];
    if (!std::isfinite(v) || v < 0.0 || v > s.p_max[i] * (1.0 + 1e-12))
      throw InvalidInput("build_p3: expansion point outside [0, p_max]");
    prob.expansion[i] = std::clamp(v, prob.p_floor, s.p_max[i]);
  }

  const std::size_t n = s.n_jammers;
  const std::size_t nv = n + 1;
  prob.program.objective.coeff = 1.0;
  prob.program.objective.exponents.assign(nv, 0.0);
  prob.program.objective.exponents[n] = 1.0;

  for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) {
    prob.phi.push_back(build_phi(s, c, m));
    prob.psi.push_back(build_psi(s, c, m));
    prob.psi_hat.push_back(condense(prob.psi.back(), prob.expansion));

    // Phi_m * Psi_hat_m^{-1} * tau^{-1} <= 1
    const Monomial& den = prob.psi_hat.back().monomial;
    Posynomial con;
    for (const auto& t : prob.phi.back().terms) {
      Monomial term;
      term.coeff = t.coeff / den.coeff;
      term.exponents.resize(nv);
      for (std::size_t j = 0; j < n; ++j) term.exponents[j] = t.exponents[j] - den.exponents[j];
      term.exponents[n] = -1.0;
      con.terms.push_back(std::move(term));
    }
    prob.program.constraints.push_back(std::move(con));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Monomial upper{1.0 / s.p_max[i], std::vector<double>(nv, 0.0)};
    upper.exponents[i] = 1.0;
    prob.program.constraints.push_back(Posynomial{{upper}});
    Monomial lower{prob.p_floor, std::vector<double>(nv, 0.0)};
    lower.exponents[i] = -1.0;
    prob.program.constraints.push_back(Posynomial{{lower}});
  }
  return prob;
}

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// One constraint in log form: F(y) = log sum_k exp(A_k . y + b_k).
struct LogSumExp {
  Mat a;  // terms x vars
  Vec b;

  double value(const Vec& y) const {
    const Vec z = a * y + b;
    const double zmax = z.maxCoeff();
    return zmax + std::log((z.array() - zmax).exp().sum());
  }

  // Value, gradient and Hessian at y.
  double derivatives(const Vec& y, Vec& grad, Mat& hess) const {
    const Vec z = a * y + b;
    const double zmax = z.maxCoeff();
    Vec w = (z.array() - zmax).exp();
    const double sum = w.sum();
    w /= sum;
    grad = a.transpose() * w;
    hess = a.transpose() * w.asDiagonal() * a - grad * grad.transpose();
    return zmax + std::log(sum);
  }
};

}  // namespace

GpSolution gp_solve(const GeometricProgram& program, std::span<const double> start, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("gp_solve: tol must be positive");
  const std::size_t n = program.n_vars();
  if (start.size() != n) throw InvalidInput("gp_solve: start point has wrong dimension");
  for (double v : start)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("gp_solve: start point must be strictly positive");

  std::vector<LogSumExp> cons;
  cons.reserve(program.constraints.size());
  for (const auto& p : program.constraints) {
    p.validate();
    if (p.n_vars() != n) throw InvalidInput("gp_solve: constraint dimension mismatch");
    LogSumExp f;
    f.a.resize(static_cast<Eigen::Index>(p.terms.size()), static_cast<Eigen::Index>(n));
    f.b.resize(static_cast<Eigen::Index>(p.terms.size()));
    for (std::size_t k = 0; k < p.terms.size(); ++k) {
      for (std::size_t j = 0; j < n; ++j)
        f.a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = p.terms[k].exponents[j];
      f.b(static_cast<Eigen::Index>(k)) = std::log(p.terms[k].coeff);
    }
    cons.push_back(std::move(f));
  }
  Vec c(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) c(static_cast<Eigen::Index>(j)) = program.objective.exponents[j];
  const double c0 = std::log(program.objective.coeff);

  Vec y(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) y(static_cast<Eigen::Index>(j)) = std::log(start[j]);
  for (const auto& f : cons)
    if (!(f.value(y) < 0.0)) throw InvalidInput("gp_solve: start point is not strictly feasible");

  const double m_cons = static_cast<double>(cons.size());
  auto barrier = [&](const Vec& v, double s) {
    double total = s * c.dot(v);
    for (const auto& f : cons) {
      const double fv = f.value(v);
      if (!(fv < 0.0)) return std::numeric_limits<double>::infinity();
      total -= std::log(-fv);
    }
    return total;
  };

  constexpr int kMaxNewton = 2000;
  constexpr double kGrowth = 16.0;
  int steps = 0;
  double s = std::max(1.0, m_cons);
  Vec grad(static_cast<Eigen::Index>(n));
  Mat hess(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Vec gj;
  Mat hj;
  while (true) {
    // Centering by damped Newton.
    for (int inner = 0; inner < 200; ++inner) {
      grad = s * c;
      hess.setZero();
      for (const auto& f : cons) {
        const double fv = f.derivatives(y, gj, hj);
        const double inv = -1.0 / fv;
        grad += inv * gj;
        hess += inv * hj + (inv * inv) * gj * gj.transpose();
      }
      Eigen::LDLT<Mat> ldlt(hess);
      Vec step = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        // Fall back to a regularized solve.
        const double reg = 1e-12 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
        step = (hess + reg * Mat::Identity(hess.rows(), hess.cols())).ldlt().solve(-grad);
        if (!step.allFinite()) throw NumericalError("gp_solve: singular Newton system");
      }
      const double decrement2 = -grad.dot(step);
      if (decrement2 * 0.5 <= 1e-12) break;

      const double f0 = barrier(y, s);
      double alpha = 1.0;
      while (true) {
        const Vec trial = y + alpha * step;
        const double ft = barrier(trial, s);
        if (std::isfinite(ft) && ft <= f0 - 0.25 * alpha * decrement2) {
          y = trial;
          break;
        }
        alpha *= 0.5;
        if (alpha < 1e-14) break;
      }
      if (++steps > kMaxNewton)
        throw AccuracyNotReached("gp_solve: Newton step limit reached", std::exp(c.dot(y) + c0), m_cons / s);
      if (alpha < 1e-14) break;
    }
    if (m_cons / s < tol) break;
    s *= kGrowth;
  }

  GpSolution out;
  out.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.x[j] = std::exp(y(static_cast<Eigen::Index>(j)));
  out.objective = std::exp(c.dot(y) + c0);
  out.duality_gap = m_cons / s;
  out.newton_steps = steps;
  return out;
}

P3Solution solve_p3(const P3Problem& problem, double tol) {
  const auto start = problem.strictly_feasible_start();
  P3Solution out;
  out.raw = gp_solve(problem.program, start, tol);
  out.p.assign(out.raw.x.begin(), out.raw.x.begin() + static_cast<std::ptrdiff_t>(problem.n_jammers));
  // Barrier iterates sit strictly inside the box; pin them to it exactly.
  for (std::size_t i = 0; i < problem.n_jammers; ++i)
    out.p[i] = std::clamp(out.p[i], problem.p_floor, problem.p_max[i]);
  out.tau = out.raw.objective;
  return out;
}

}  // namespace coopjam::gp
