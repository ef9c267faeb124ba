#include "coopjam/numerics/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coopjam::numerics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr double kPhase1Tol = 1e-9;
constexpr int kMaxPivots = 100000;

// x_j = offset_j + sum over (column, sign) of sign * y_column, with y >= 0.
struct VarMap {
  double offset = 0.0;
  int col_pos = -1;
  int col_neg = -1;
  double sign_pos = 1.0;
};

struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // excluding rhs
  std::vector<double> data;
  std::vector<std::size_t> basis;

  double& at(std::size_t r, std::size_t c) { return data[r * (cols + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * (cols + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols); }
  double rhs(std::size_t r) const { return at(r, cols); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
  }

  void remove_row(std::size_t r) {
    data.erase(data.begin() + static_cast<std::ptrdiff_t>(r * (cols + 1)),
               data.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols + 1)));
    basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
    --rows;
  }
};

enum class SimplexOutcome { kOptimal, kUnbounded };

// Minimizes cost^T z over the tableau using only columns with allowed[c].
SimplexOutcome run_simplex(Tableau& t, const std::vector<double>& cost, const std::vector<bool>& allowed) {
  std::vector<double> reduced(t.cols);
  for (int iter = 0; iter < kMaxPivots; ++iter) {
    for (std::size_t c = 0; c < t.cols; ++c) {
      double r = cost[c];
      for (std::size_t i = 0; i < t.rows; ++i) r -= cost[t.basis[i]] * t.at(i, c);
      reduced[c] = r;
    }
    // Bland: lowest-index improving column.
    std::size_t enter = t.cols;
    for (std::size_t c = 0; c < t.cols; ++c) {
      if (allowed[c] && reduced[c] < -kCostTol) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols) return SimplexOutcome::kOptimal;

    std::size_t leave = t.rows;
    double best_ratio = kInf;
    for (std::size_t i = 0; i < t.rows; ++i) {
      const double a = t.at(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (leave == t.rows) {
        best_ratio = ratio;
        leave = i;
        continue;
      }
      const double tie = 1e-12 * std::max(1.0, best_ratio);
      if (ratio < best_ratio - tie || (std::abs(ratio - best_ratio) <= tie && t.basis[i] < t.basis[leave])) {
        best_ratio = ratio;
        leave = i;
      }
    }
    if (leave == t.rows) return SimplexOutcome::kUnbounded;
    t.pivot(leave, enter);
  }
  throw NumericalError("lp_solve: pivot limit exceeded");
}

}  // namespace

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (n == 0) throw InvalidInput("linear program has no variables");
  for (double c : objective)
    if (!std::isfinite(c)) throw InvalidInput("linear program objective must be finite");
  for (const auto& row : constraints) {
    if (row.a.size() != n)
      throw InvalidInput("constraint row has " + std::to_string(row.a.size()) + " entries, expected " +
                         std::to_string(n));
    for (double v : row.a)
      if (!std::isfinite(v)) throw InvalidInput("constraint coefficients must be finite");
    if (!std::isfinite(row.b)) throw InvalidInput("constraint bound must be finite");
  }
  if (!lower_bounds.empty() && lower_bounds.size() != n) throw InvalidInput("lower_bounds size mismatch");
  if (!upper_bounds.empty() && upper_bounds.size() != n) throw InvalidInput("upper_bounds size mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lower_bounds.empty() ? 0.0 : lower_bounds[j];
    const double hi = upper_bounds.empty() ? kInf : upper_bounds[j];
    if (std::isnan(lo) || std::isnan(hi) || lo == kInf || hi == -kInf)
      throw InvalidInput("invalid variable bound");
  }
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& row : lp.constraints) {
    double ax = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) ax += row.a[j] * x[j];
    const double scale = 1.0 + std::abs(row.b);
    double v = 0.0;
    switch (row.relation) {
      case Relation::kLessEqual: v = ax - row.b; break;
      case Relation::kGreaterEqual: v = row.b - ax; break;
      case Relation::kEqual: v = std::abs(ax - row.b); break;
    }
    worst = std::max(worst, v / scale);
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double lo = lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
    const double hi = lp.upper_bounds.empty() ? kInf : lp.upper_bounds[j];
    if (std::isfinite(lo)) worst = std::max(worst, (lo - x[j]) / (1.0 + std::abs(lo)));
    if (std::isfinite(hi)) worst = std::max(worst, (x[j] - hi) / (1.0 + std::abs(hi)));
  }
  return worst;
}

LpResult lp_solve(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.n_vars();

  // Substitute bounded/free variables by nonnegative columns.
  std::vector<VarMap> map(n);
  std::size_t n_struct = 0;
  struct RangeRow {
    std::size_t col;
    double width;
  };
  std::vector<RangeRow> range_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
    const double hi = lp.upper_bounds.empty() ? kInf : lp.upper_bounds[j];
    if (std::isfinite(lo) && std::isfinite(hi) && hi < lo) return {};
    if (std::isfinite(lo)) {
      map[j] = {lo, static_cast<int>(n_struct), -1, 1.0};
      if (std::isfinite(hi)) range_rows.push_back({n_struct, hi - lo});
      ++n_struct;
    } else if (std::isfinite(hi)) {
      map[j] = {hi, static_cast<int>(n_struct), -1, -1.0};
      ++n_struct;
    } else {
      map[j] = {0.0, static_cast<int>(n_struct), static_cast<int>(n_struct + 1), 1.0};
      n_struct += 2;
    }
  }

  struct Row {
    std::vector<double> a;  // over structural columns
    Relation rel;
    double b;
  };
  std::vector<Row> rows;
  rows.reserve(lp.constraints.size() + range_rows.size());
  for (const auto& c : lp.constraints) {
    Row r{std::vector<double>(n_struct, 0.0), c.relation, c.b};
    for (std::size_t j = 0; j < n; ++j) {
      r.b -= c.a[j] * map[j].offset;
      r.a[static_cast<std::size_t>(map[j].col_pos)] += c.a[j] * map[j].sign_pos;
      if (map[j].col_neg >= 0) r.a[static_cast<std::size_t>(map[j].col_neg)] -= c.a[j];
    }
    rows.push_back(std::move(r));
  }
  for (const auto& rr : range_rows) {
    Row r{std::vector<double>(n_struct, 0.0), Relation::kLessEqual, rr.width};
    r.a[rr.col] = 1.0;
    rows.push_back(std::move(r));
  }

  // Equilibrate rows and make every right-hand side nonnegative.
  for (auto& r : rows) {
    double scale = 0.0;
    for (double v : r.a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
      const bool ok = (r.rel == Relation::kLessEqual && r.b >= -kPhase1Tol) ||
                      (r.rel == Relation::kGreaterEqual && r.b <= kPhase1Tol) ||
                      (r.rel == Relation::kEqual && std::abs(r.b) <= kPhase1Tol);
      if (!ok) return {};
      continue;
    }
    for (double& v : r.a) v /= scale;
    r.b /= scale;
    if (r.b < 0.0) {
      for (double& v : r.a) v = -v;
      r.b = -r.b;
      if (r.rel == Relation::kLessEqual)
        r.rel = Relation::kGreaterEqual;
      else if (r.rel == Relation::kGreaterEqual)
        r.rel = Relation::kLessEqual;
    }
  }
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [](const Row& r) {
                              return std::all_of(r.a.begin(), r.a.end(), [](double v) { return v == 0.0; });
                            }),
             rows.end());

  std::size_t n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::kEqual) ++n_slack;
    if (r.rel != Relation::kLessEqual) ++n_art;
  }

  Tableau t;
  t.rows = rows.size();
  t.cols = n_struct + n_slack + n_art;
  t.data.assign(t.rows * (t.cols + 1), 0.0);
  t.basis.assign(t.rows, 0);
  const std::size_t art0 = n_struct + n_slack;
  std::size_t slack = n_struct, art = art0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    for (std::size_t c = 0; c < n_struct; ++c) t.at(i, c) = r.a[c];
    t.rhs(i) = r.b;
    switch (r.rel) {
      case Relation::kLessEqual:
        t.at(i, slack) = 1.0;
        t.basis[i] = slack++;
        break;
      case Relation::kGreaterEqual:
        t.at(i, slack++) = -1.0;
        t.at(i, art) = 1.0;
        t.basis[i] = art++;
        break;
      case Relation::kEqual:
        t.at(i, art) = 1.0;
        t.basis[i] = art++;
        break;
    }
  }

  std::vector<bool> allowed(t.cols, true);
  if (n_art > 0) {
    std::vector<double> phase1(t.cols, 0.0);
    for (std::size_t c = art0; c < t.cols; ++c) phase1[c] = 1.0;
    run_simplex(t, phase1, allowed);
    double infeas = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i)
      if (t.basis[i] >= art0) infeas += t.rhs(i);
    if (infeas > kPhase1Tol) return {};

    // Pivot remaining (zero-level) artificials out, dropping redundant rows.
    for (std::size_t i = 0; i < t.rows;) {
      if (t.basis[i] < art0) {
        ++i;
        continue;
      }
      std::size_t col = t.cols;
      double best = kPivotTol;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(t.at(i, c)) > best) {
          best = std::abs(t.at(i, c));
          col = c;
        }
      }
      if (col == t.cols) {
        t.remove_row(i);
      } else {
        t.pivot(i, col);
        ++i;
      }
    }
    for (std::size_t c = art0; c < t.cols; ++c) allowed[c] = false;
  }

  std::vector<double> cost(t.cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    cost[static_cast<std::size_t>(map[j].col_pos)] += lp.objective[j] * map[j].sign_pos;
    if (map[j].col_neg >= 0) cost[static_cast<std::size_t>(map[j].col_neg)] -= lp.objective[j];
  }
  if (run_simplex(t, cost, allowed) == SimplexOutcome::kUnbounded) {
    LpResult out;
    out.status = LpStatus::kUnbounded;
    return out;
  }

  std::vector<double> y(t.cols, 0.0);
  for (std::size_t i = 0; i < t.rows; ++i) y[t.basis[i]] = std::max(t.rhs(i), 0.0);
  LpResult out;
  out.status = LpStatus::kOptimal;
  out.x.resize(n);
  out.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double v = map[j].offset + map[j].sign_pos * y[static_cast<std::size_t>(map[j].col_pos)];
    if (map[j].col_neg >= 0) v -= y[static_cast<std::size_t>(map[j].col_neg)];
    // Clip rounding noise back into the box.
    if (!lp.lower_bounds.empty() && std::isfinite(lp.lower_bounds[j])) v = std::max(v, lp.lower_bounds[j]);
    if (lp.lower_bounds.empty()) v = std::max(v, 0.0);
    if (!lp.upper_bounds.empty() && std::isfinite(lp.upper_bounds[j])) v = std::min(v, lp.upper_bounds[j]);
    out.x[j] = v;
    out.value += lp.objective[j] * v;
  }
  return out;
}

}  // namespace coopjam::numerics
