#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cbpp/errors.hpp"
#include "cbpp/model.hpp"

namespace cbpp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

// Restorable snapshot of an optimal basis: the basic column of every row plus
// the bound each nonbasic column rests at. Enough to rebuild the vertex under
// nearby bounds, which is what branch and bound re-solves need.
struct WarmStart {
  std::vector<int> basis;            // one column per row (structurals, then slacks)
  std::vector<char> nonbasic_upper;  // per structural/slack column: 1 = rests at its upper bound
  bool empty() const { return basis.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> values;  // structural variables, in model order
  WarmStart warm;              // filled when status == Optimal
  long long iterations = 0;
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  long long max_iterations = 0;  // 0: derived from the problem size
};

namespace detail {

// Bounded-variable two-phase simplex over an explicit dense basis inverse.
// Columns: structurals, then one slack per row, then one artificial per row.
// Phase 1 starts from the all-artificial basis and minimizes the total
// infeasibility; phase 2 minimizes the real objective with artificials fixed
// at zero. Dantzig pricing with a Bland fallback after a stall guards against
// cycling; the inverse is refactorized periodically and at optimality.
class Simplex {
 public:
  Simplex(const MilpModel& model, const std::vector<double>& lb, const std::vector<double>& ub,
          const SimplexOptions& opts)
      : opts_(opts) {
    n_struct_ = model.num_variables();
    m_ = model.num_constraints();
    cols_.resize(static_cast<std::size_t>(n_struct_ + 2 * m_));
    lb_.assign(static_cast<std::size_t>(n_struct_ + 2 * m_), 0.0);
    ub_.assign(static_cast<std::size_t>(n_struct_ + 2 * m_), kInf);
    cost_.assign(static_cast<std::size_t>(n_struct_ + 2 * m_), 0.0);
    b_.assign(static_cast<std::size_t>(m_), 0.0);

    for (int j = 0; j < n_struct_; ++j) {
      lb_[static_cast<std::size_t>(j)] = lb[static_cast<std::size_t>(j)];
      ub_[static_cast<std::size_t>(j)] = ub[static_cast<std::size_t>(j)];
      if (lb_[static_cast<std::size_t>(j)] > ub_[static_cast<std::size_t>(j)] + 1e-12)
        empty_box_ = true;
    }
    for (const LinTerm& t : model.objective) cost_[static_cast<std::size_t>(t.var)] += t.coeff;

    for (int i = 0; i < m_; ++i) {
      const Constraint& c = model.constraints[static_cast<std::size_t>(i)];
      b_[static_cast<std::size_t>(i)] = c.rhs;
      for (const LinTerm& t : c.terms) add_entry(t.var, i, t.coeff);
      int s = n_struct_ + i;  // slack: row + s = rhs
      add_entry(s, i, 1.0);
      if (c.rel == Relation::Le) {
        lb_[static_cast<std::size_t>(s)] = 0.0;
        ub_[static_cast<std::size_t>(s)] = kInf;
      } else if (c.rel == Relation::Ge) {
        lb_[static_cast<std::size_t>(s)] = -kInf;
        ub_[static_cast<std::size_t>(s)] = 0.0;
      } else {
        lb_[static_cast<std::size_t>(s)] = 0.0;
        ub_[static_cast<std::size_t>(s)] = 0.0;
      }
    }
  }

  LpSolution run(const WarmStart* warm = nullptr) {
    LpSolution out;
    if (empty_box_) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    if (m_ == 0) {  // boxed minimization only
      out.values.assign(static_cast<std::size_t>(n_struct_), 0.0);
      for (int j = 0; j < n_struct_; ++j) {
        double c = cost_[static_cast<std::size_t>(j)];
        double v;
        if (c > 0)
          v = lb_[static_cast<std::size_t>(j)];
        else if (c < 0)
          v = ub_[static_cast<std::size_t>(j)];
        else
          v = std::isfinite(lb_[static_cast<std::size_t>(j)]) ? lb_[static_cast<std::size_t>(j)]
              : std::isfinite(ub_[static_cast<std::size_t>(j)]) ? ub_[static_cast<std::size_t>(j)]
                                                                : 0.0;
        if (std::isinf(v)) {
          out.status = LpStatus::Unbounded;
          return out;
        }
        out.values[static_cast<std::size_t>(j)] = v;
        out.objective += c * v;
      }
      out.status = LpStatus::Optimal;
      return out;
    }

    const int attempts = 3;
    for (int att = 0; att < attempts; ++att) {
      try {
        return run_once(att, att == 0 ? warm : nullptr);
      } catch (const SolverError&) {
        if (att + 1 == attempts) throw;
      }
    }
    throw SolverError("simplex failed after retries");
  }

 private:
  enum class St : char { Basic, AtLower, AtUpper, FreeZero };

  void add_entry(int col, int row, double v) {
    if (v == 0.0) return;
    auto& vec = cols_[static_cast<std::size_t>(col)];
    for (auto& [r, val] : vec)
      if (r == row) {
        val += v;
        return;
      }
    vec.push_back({row, v});
  }

  double col_dot(int col, const std::vector<double>& y) const {
    double s = 0.0;
    for (const auto& [r, v] : cols_[static_cast<std::size_t>(col)]) s += y[static_cast<std::size_t>(r)] * v;
    return s;
  }

  // w = B^{-1} A_col
  void ftran(int col, std::vector<double>& w) const {
    std::fill(w.begin(), w.end(), 0.0);
    for (const auto& [r, v] : cols_[static_cast<std::size_t>(col)])
      for (int i = 0; i < m_; ++i)
        w[static_cast<std::size_t>(i)] += binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(r)] * v;
  }

  void refactorize() {
    // Gauss-Jordan inversion of the current basis matrix with partial pivoting.
    std::vector<double> a(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int k = 0; k < m_; ++k)
      for (const auto& [r, v] : cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])])
        a[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] = v;
    std::vector<double>& inv = binv_;
    inv.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)] = 1.0;
    for (int c = 0; c < m_; ++c) {
      int piv = -1;
      double best = 0.0;
      for (int r = c; r < m_; ++r) {
        double v = std::fabs(a[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(c)]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (piv < 0 || best < 1e-12) throw SolverError("singular basis during refactorization");
      if (piv != c)
        for (int k = 0; k < m_; ++k) {
          std::swap(a[static_cast<std::size_t>(piv) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)],
                    a[static_cast<std::size_t>(c) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)]);
          std::swap(inv[static_cast<std::size_t>(piv) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)],
                    inv[static_cast<std::size_t>(c) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)]);
        }
      double p = a[static_cast<std::size_t>(c) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(c)];
      for (int k = 0; k < m_; ++k) {
        a[static_cast<std::size_t>(c) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] /= p;
        inv[static_cast<std::size_t>(c) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] /= p;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == c) continue;
        double f = a[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(c)];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          a[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] -= f * a[static_cast<std::size_t>(c) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)];
          inv[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] -= f * inv[static_cast<std::size_t>(c) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)];
        }
      }
    }
  }

  void recompute_basics() {
    std::vector<double> r = b_;
    for (int j = 0; j < n_total(); ++j) {
      if (st_[static_cast<std::size_t>(j)] == St::Basic) continue;
      double v = x_[static_cast<std::size_t>(j)];
      if (v == 0.0) continue;
      for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)]) r[static_cast<std::size_t>(row)] -= coef * v;
    }
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)];
      x_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = s;
    }
  }

  int n_total() const { return n_struct_ + 2 * m_; }

  double current_objective(const std::vector<double>& cost) const {
    double s = 0.0;
    for (int j = 0; j < n_total(); ++j) s += cost[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
    return s;
  }

  // Core loop for one phase. Returns false on unboundedness. An objective at
  // or below `stop_below` ends the phase early (used by warm-start repair,
  // which only needs to pull a value back across a bound, not to optimality).
  bool iterate(const std::vector<double>& cost, long long& iters, long long max_iters,
               double stop_below = -kInf) {
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> w(static_cast<std::size_t>(m_));
    bool bland = bland_start_;
    long long stall = 0;
    double last_obj = current_objective(cost);
    int since_refactor = 0;

    for (;;) {
      if (iters++ > max_iters)
        throw SolverError("simplex iteration limit exceeded (" + std::to_string(max_iters) + ")");
      if (++since_refactor >= refactor_interval_) {
        refactorize();
        recompute_basics();
        since_refactor = 0;
      }

      for (int i = 0; i < m_; ++i) {
        double s = 0.0;
        for (int k = 0; k < m_; ++k)
          s += cost[static_cast<std::size_t>(basis_[static_cast<std::size_t>(k)])] * binv_[static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(i)] = s;
      }

      int enter = -1, dir = 0;
      double best_score = opts_.opt_tol;
      for (int j = 0; j < n_total(); ++j) {
        St st = st_[static_cast<std::size_t>(j)];
        if (st == St::Basic) continue;
        if (ub_[static_cast<std::size_t>(j)] - lb_[static_cast<std::size_t>(j)] <= 0.0) continue;  // fixed
        double d = cost[static_cast<std::size_t>(j)] - col_dot(j, y);
        int cand_dir = 0;
        if (st == St::AtLower && d < -opts_.opt_tol)
          cand_dir = 1;
        else if (st == St::AtUpper && d > opts_.opt_tol)
          cand_dir = -1;
        else if (st == St::FreeZero && std::fabs(d) > opts_.opt_tol)
          cand_dir = d < 0 ? 1 : -1;
        if (cand_dir == 0) continue;
        if (bland) {
          enter = j;
          dir = cand_dir;
          break;
        }
        if (std::fabs(d) > best_score) {
          best_score = std::fabs(d);
          enter = j;
          dir = cand_dir;
        }
      }
      if (enter < 0) return true;  // phase optimal

      ftran(enter, w);

      double t_limit = kInf;
      int leave_row = -1;
      double bound_flip = kInf;
      if (std::isfinite(ub_[static_cast<std::size_t>(enter)]) && std::isfinite(lb_[static_cast<std::size_t>(enter)]))
        bound_flip = ub_[static_cast<std::size_t>(enter)] - lb_[static_cast<std::size_t>(enter)];
      const double eps = 1e-9;
      for (int i = 0; i < m_; ++i) {
        double coef = dir * w[static_cast<std::size_t>(i)];
        int bc = basis_[static_cast<std::size_t>(i)];
        double xv = x_[static_cast<std::size_t>(bc)];
        double lim = kInf;
        if (coef > eps && std::isfinite(lb_[static_cast<std::size_t>(bc)]))
          lim = (xv - lb_[static_cast<std::size_t>(bc)]) / coef;
        else if (coef < -eps && std::isfinite(ub_[static_cast<std::size_t>(bc)]))
          lim = (ub_[static_cast<std::size_t>(bc)] - xv) / (-coef);
        if (lim < -1e-9) lim = 0.0;  // slight bound violation: degenerate step
        if (lim < 0) lim = 0.0;
        if (lim < t_limit - 1e-12 ||
            (leave_row >= 0 && lim < t_limit + 1e-12 &&
             (bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave_row)]
                    : std::fabs(w[static_cast<std::size_t>(i)]) >
                          std::fabs(w[static_cast<std::size_t>(leave_row)])))) {
          if (lim < t_limit) t_limit = lim;
          leave_row = i;
        }
      }

      double t = std::min(t_limit, bound_flip);
      if (std::isinf(t)) return false;  // unbounded direction

      // move
      for (int i = 0; i < m_; ++i) {
        int bc = basis_[static_cast<std::size_t>(i)];
        x_[static_cast<std::size_t>(bc)] -= t * dir * w[static_cast<std::size_t>(i)];
      }
      x_[static_cast<std::size_t>(enter)] += t * dir;

      if (bound_flip <= t_limit) {
        st_[static_cast<std::size_t>(enter)] =
            st_[static_cast<std::size_t>(enter)] == St::AtLower ? St::AtUpper : St::AtLower;
        x_[static_cast<std::size_t>(enter)] =
            st_[static_cast<std::size_t>(enter)] == St::AtLower ? lb_[static_cast<std::size_t>(enter)]
                                                                : ub_[static_cast<std::size_t>(enter)];
      } else {
        int leave = basis_[static_cast<std::size_t>(leave_row)];
        double coef = dir * w[static_cast<std::size_t>(leave_row)];
        if (coef > 0) {
          st_[static_cast<std::size_t>(leave)] = St::AtLower;
          x_[static_cast<std::size_t>(leave)] = lb_[static_cast<std::size_t>(leave)];
        } else {
          st_[static_cast<std::size_t>(leave)] = St::AtUpper;
          x_[static_cast<std::size_t>(leave)] = ub_[static_cast<std::size_t>(leave)];
        }
        // inverse update: replace basis column leave_row with `enter`
        double p = w[static_cast<std::size_t>(leave_row)];
        if (std::fabs(p) < 1e-11) {
          refactorize();
          recompute_basics();
          ftran(enter, w);
          p = w[static_cast<std::size_t>(leave_row)];
          if (std::fabs(p) < 1e-11) throw SolverError("degenerate pivot element");
        }
        for (int k = 0; k < m_; ++k)
          binv_[static_cast<std::size_t>(leave_row) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] /= p;
        for (int i = 0; i < m_; ++i) {
          if (i == leave_row) continue;
          double f = w[static_cast<std::size_t>(i)];
          if (f == 0.0) continue;
          for (int k = 0; k < m_; ++k)
            binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] -=
                f * binv_[static_cast<std::size_t>(leave_row) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)];
        }
        basis_[static_cast<std::size_t>(leave_row)] = enter;
        st_[static_cast<std::size_t>(enter)] = St::Basic;
      }

      double obj = current_objective(cost);
      if (obj <= stop_below) return true;
      if (obj < last_obj - 1e-12) {
        last_obj = obj;
        stall = 0;
        bland = false;
      } else if (++stall > 200 + (m_ + n_total()) / 2) {
        bland = true;
      }
    }
  }

  // Residuals of every row at the nonbasic rest point (each structural and
  // slack at its nearest finite bound). They decide the artificial signs.
  std::vector<double> rest_residuals() const {
    std::vector<double> r = b_;
    for (int j = 0; j < n_struct_ + m_; ++j) {
      double v = std::isfinite(lb_[static_cast<std::size_t>(j)])   ? lb_[static_cast<std::size_t>(j)]
                 : std::isfinite(ub_[static_cast<std::size_t>(j)]) ? ub_[static_cast<std::size_t>(j)]
                                                                   : 0.0;
      if (v == 0.0) continue;
      for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)]) r[static_cast<std::size_t>(row)] -= coef * v;
    }
    return r;
  }

  // Everything nonbasic at its rest point; artificial columns rebuilt with
  // signs from the rest residuals, nonbasic at zero. Re-entrant, so a failed
  // warm-start attempt can wipe its partial state by calling this again.
  void reset_start_point(const std::vector<double>& r) {
    st_.assign(static_cast<std::size_t>(n_total()), St::AtLower);
    x_.assign(static_cast<std::size_t>(n_total()), 0.0);
    for (int j = 0; j < n_struct_ + m_; ++j) {
      if (std::isfinite(lb_[static_cast<std::size_t>(j)])) {
        st_[static_cast<std::size_t>(j)] = St::AtLower;
        x_[static_cast<std::size_t>(j)] = lb_[static_cast<std::size_t>(j)];
      } else if (std::isfinite(ub_[static_cast<std::size_t>(j)])) {
        st_[static_cast<std::size_t>(j)] = St::AtUpper;
        x_[static_cast<std::size_t>(j)] = ub_[static_cast<std::size_t>(j)];
      } else {
        st_[static_cast<std::size_t>(j)] = St::FreeZero;
        x_[static_cast<std::size_t>(j)] = 0.0;
      }
    }
    for (int i = 0; i < m_; ++i) {
      int aj = n_struct_ + m_ + i;
      cols_[static_cast<std::size_t>(aj)].clear();
      double s = r[static_cast<std::size_t>(i)] >= 0 ? 1.0 : -1.0;
      cols_[static_cast<std::size_t>(aj)].push_back({i, s});
      lb_[static_cast<std::size_t>(aj)] = 0.0;
      ub_[static_cast<std::size_t>(aj)] = kInf;
      st_[static_cast<std::size_t>(aj)] = St::AtLower;
      x_[static_cast<std::size_t>(aj)] = 0.0;
    }
  }

  // Rebuild the state from a remembered vertex: nonbasics back on their
  // remembered side, remembered columns basic. Bounds may have changed since
  // that vertex was optimal, so basics stranded outside their box are pivoted
  // out against artificials; phase 1 then repairs the leftover infeasibility
  // in a few pivots instead of re-deriving the whole basis. Returns false
  // (state arbitrary, caller resets) when the basis no longer factorizes or
  // the repair does not settle.
  bool try_warm_start(const WarmStart& warm, double b_scale) {
    for (int j = 0; j < n_struct_ + m_; ++j) {
      if (warm.nonbasic_upper[static_cast<std::size_t>(j)] && std::isfinite(ub_[static_cast<std::size_t>(j)])) {
        st_[static_cast<std::size_t>(j)] = St::AtUpper;
        x_[static_cast<std::size_t>(j)] = ub_[static_cast<std::size_t>(j)];
      }
    }
    std::vector<char> used(static_cast<std::size_t>(n_total()), 0);
    for (int i = 0; i < m_; ++i) {
      int j = warm.basis[static_cast<std::size_t>(i)];
      // artificials are restored verbatim too: a degenerate optimum can keep
      // them basic at zero, and substituting a different unit column would
      // change the vertex wholesale
      if (j >= 0 && j < n_total() && !used[static_cast<std::size_t>(j)]) {
        used[static_cast<std::size_t>(j)] = 1;
        basis_[static_cast<std::size_t>(i)] = j;
        st_[static_cast<std::size_t>(j)] = St::Basic;
      } else {  // junk entry: fall back to the row's artificial
        int aj = n_struct_ + m_ + i;
        if (used[static_cast<std::size_t>(aj)]) return false;
        used[static_cast<std::size_t>(aj)] = 1;
        basis_[static_cast<std::size_t>(i)] = aj;
        st_[static_cast<std::size_t>(aj)] = St::Basic;
      }
    }
    try {
      refactorize();
    } catch (const SolverError&) {
      return false;
    }
    recompute_basics();

    double eps = 1e-9 * b_scale;
    // make basic artificials nonnegative: flipping a basis column's sign
    // turns B into B*D with D diagonal +-1, so one row of the inverse and
    // the basic value flip with it
    for (int i = 0; i < m_; ++i) {
      int bc = basis_[static_cast<std::size_t>(i)];
      if (bc < n_struct_ + m_ || x_[static_cast<std::size_t>(bc)] >= 0.0) continue;
      cols_[static_cast<std::size_t>(bc)][0].second = -cols_[static_cast<std::size_t>(bc)][0].second;
      for (int k = 0; k < m_; ++k)
        binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] =
            -binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)];
      x_[static_cast<std::size_t>(bc)] = -x_[static_cast<std::size_t>(bc)];
    }

    // basics stranded outside the (possibly tightened) box — usually just the
    // variable whose bound the caller moved
    std::vector<int> stranded;
    for (int i = 0; i < m_; ++i) {
      int bc = basis_[static_cast<std::size_t>(i)];
      if (bc >= n_struct_ + m_) continue;
      double v = x_[static_cast<std::size_t>(bc)];
      if (v < lb_[static_cast<std::size_t>(bc)] - eps || v > ub_[static_cast<std::size_t>(bc)] + eps)
        stranded.push_back(bc);
    }
    if (stranded.empty()) return true;

    // widen each offender's box to its current value so the restored vertex
    // is feasible for the relaxed problem, then pull the offenders back one
    // at a time by minimizing the violated direction, stopping the moment the
    // value re-enters its true box. Ratio tests keep everything else inside
    // its true bounds throughout. Any hitch: restore the boxes and go cold.
    std::vector<std::pair<int, std::pair<double, double>>> saved;
    saved.reserve(stranded.size());
    for (int bc : stranded) {
      saved.push_back({bc, {lb_[static_cast<std::size_t>(bc)], ub_[static_cast<std::size_t>(bc)]}});
      lb_[static_cast<std::size_t>(bc)] = std::min(lb_[static_cast<std::size_t>(bc)], x_[static_cast<std::size_t>(bc)]);
      ub_[static_cast<std::size_t>(bc)] = std::max(ub_[static_cast<std::size_t>(bc)], x_[static_cast<std::size_t>(bc)]);
    }
    auto restore = [&]() {
      for (auto& [bc, box] : saved) {
        lb_[static_cast<std::size_t>(bc)] = box.first;
        ub_[static_cast<std::size_t>(bc)] = box.second;
      }
    };

    std::vector<double> dir(static_cast<std::size_t>(n_total()), 0.0);
    for (std::size_t k = 0; k < stranded.size(); ++k) {
      int bc = stranded[k];
      double true_lb = saved[k].second.first;
      double true_ub = saved[k].second.second;
      double v = x_[static_cast<std::size_t>(bc)];
      if (v >= true_lb - eps && v <= true_ub + eps) {  // drifted back on its own
        lb_[static_cast<std::size_t>(bc)] = true_lb;
        ub_[static_cast<std::size_t>(bc)] = true_ub;
        continue;
      }
      double sign = v > true_ub ? 1.0 : -1.0;
      double target = sign > 0 ? true_ub : -true_lb;
      dir[static_cast<std::size_t>(bc)] = sign;
      long long reps = 0;
      bool bounded = true;
      try {
        bounded = iterate(dir, reps, 4000 + m_, target);
      } catch (const SolverError&) {  // repair budget exhausted
        dir[static_cast<std::size_t>(bc)] = 0.0;
        restore();
        return false;
      }
      dir[static_cast<std::size_t>(bc)] = 0.0;
      v = x_[static_cast<std::size_t>(bc)];
      if (!bounded || v < true_lb - eps || v > true_ub + eps) {
        restore();
        return false;  // could not pull it back; the cold start will decide
      }
      lb_[static_cast<std::size_t>(bc)] = true_lb;
      ub_[static_cast<std::size_t>(bc)] = true_ub;
      saved[k].second = {true_lb, true_ub};
      // later offenders may have moved meanwhile; keep their boxes honest
      for (std::size_t k2 = k + 1; k2 < stranded.size(); ++k2) {
        int c2 = stranded[k2];
        lb_[static_cast<std::size_t>(c2)] = std::min(lb_[static_cast<std::size_t>(c2)], x_[static_cast<std::size_t>(c2)]);
        ub_[static_cast<std::size_t>(c2)] = std::max(ub_[static_cast<std::size_t>(c2)], x_[static_cast<std::size_t>(c2)]);
      }
    }
    return true;
  }

  LpSolution run_once(int attempt, const WarmStart* warm) {
    // Retries must not replay the failing pivot path: later attempts switch to
    // Bland's rule outright and refactorize often enough that the basis
    // inverse stays honest, trading speed for a provably terminating walk.
    bland_start_ = attempt > 0;
    refactor_interval_ = attempt == 0 ? 256 : attempt == 1 ? 64 : 16;

    const std::vector<double> r = rest_residuals();
    basis_.assign(static_cast<std::size_t>(m_), 0);
    double b_scale = 1.0;
    for (int i = 0; i < m_; ++i) b_scale = std::max(b_scale, std::fabs(b_[static_cast<std::size_t>(i)]));

    reset_start_point(r);
    bool warmed = warm && static_cast<int>(warm->basis.size()) == m_ &&
                  static_cast<int>(warm->nonbasic_upper.size()) == n_struct_ + m_ &&
                  try_warm_start(*warm, b_scale);
    if (!warmed) {
      reset_start_point(r);
      // Crash: where the slack's own bounds absorb the row residual, start
      // from the slack and keep the artificial nonbasic at zero. Rows with a
      // zero residual (the bulk of a flow model) then carry no phase-1 cost.
      for (int i = 0; i < m_; ++i) {
        int sj = n_struct_ + i;
        int aj = n_struct_ + m_ + i;
        if (r[static_cast<std::size_t>(i)] >= lb_[static_cast<std::size_t>(sj)] &&
            r[static_cast<std::size_t>(i)] <= ub_[static_cast<std::size_t>(sj)]) {
          st_[static_cast<std::size_t>(sj)] = St::Basic;
          x_[static_cast<std::size_t>(sj)] = r[static_cast<std::size_t>(i)];
          basis_[static_cast<std::size_t>(i)] = sj;
        } else {
          st_[static_cast<std::size_t>(aj)] = St::Basic;
          x_[static_cast<std::size_t>(aj)] = std::fabs(r[static_cast<std::size_t>(i)]);
          basis_[static_cast<std::size_t>(i)] = aj;
        }
      }
      binv_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
      for (int i = 0; i < m_; ++i)
        binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)] =
            cols_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])][0].second;
    }

    long long iters = 0;
    long long max_iters = opts_.max_iterations > 0
                              ? opts_.max_iterations
                              : (20000 + 500LL * (m_ + n_total())) * (attempt > 0 ? 4 : 1);

    std::vector<double> phase1(static_cast<std::size_t>(n_total()), 0.0);
    for (int i = 0; i < m_; ++i) phase1[static_cast<std::size_t>(n_struct_ + m_ + i)] = 1.0;
    if (!iterate(phase1, iters, max_iters))
      throw SolverError("phase-1 objective unbounded (internal inconsistency)");

    LpSolution out;
    out.iterations = iters;
    double infeas = current_objective(phase1);
    if (infeas > opts_.feas_tol * b_scale) {
      out.status = LpStatus::Infeasible;
      return out;
    }

    // pin artificials to zero; drive remaining basic ones out where possible
    for (int i = 0; i < m_; ++i) ub_[static_cast<std::size_t>(n_struct_ + m_ + i)] = 0.0;
    for (int i = 0; i < m_; ++i) {
      int bc = basis_[static_cast<std::size_t>(i)];
      if (bc < n_struct_ + m_) continue;
      for (int j = 0; j < n_struct_ + m_; ++j) {
        if (st_[static_cast<std::size_t>(j)] == St::Basic) continue;
        double alpha = 0.0;
        for (const auto& [row, coef] : cols_[static_cast<std::size_t>(j)]) {
          double rowi = binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(row)];
          alpha += rowi * coef;
        }
        if (std::fabs(alpha) > 1e-7) {
          // degenerate exchange at t = 0
          std::vector<double> w(static_cast<std::size_t>(m_));
          ftran(j, w);
          double p = w[static_cast<std::size_t>(i)];
          if (std::fabs(p) < 1e-9) continue;
          for (int k = 0; k < m_; ++k)
            binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] /= p;
          for (int r2 = 0; r2 < m_; ++r2) {
            if (r2 == i) continue;
            double f = w[static_cast<std::size_t>(r2)];
            if (f == 0.0) continue;
            for (int k = 0; k < m_; ++k)
              binv_[static_cast<std::size_t>(r2) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)] -=
                  f * binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(k)];
          }
          st_[static_cast<std::size_t>(bc)] = St::AtLower;
          x_[static_cast<std::size_t>(bc)] = 0.0;
          basis_[static_cast<std::size_t>(i)] = j;
          st_[static_cast<std::size_t>(j)] = St::Basic;
          break;
        }
      }
    }
    refactorize();
    recompute_basics();

    if (!iterate(cost_, iters, max_iters)) {
      out.iterations = iters;
      out.status = LpStatus::Unbounded;
      return out;
    }
    out.iterations = iters;

    // final polish and feasibility audit
    refactorize();
    recompute_basics();
    double viol = 0.0;
    for (int i = 0; i < m_; ++i) {
      int bc = basis_[static_cast<std::size_t>(i)];
      double v = x_[static_cast<std::size_t>(bc)];
      if (std::isfinite(lb_[static_cast<std::size_t>(bc)]))
        viol = std::max(viol, lb_[static_cast<std::size_t>(bc)] - v);
      if (std::isfinite(ub_[static_cast<std::size_t>(bc)]))
        viol = std::max(viol, v - ub_[static_cast<std::size_t>(bc)]);
    }
    if (viol > opts_.feas_tol * b_scale)
      throw SolverError("optimal basis violates bounds by " + std::to_string(viol));

    out.status = LpStatus::Optimal;
    out.values.assign(static_cast<std::size_t>(n_struct_), 0.0);
    for (int j = 0; j < n_struct_; ++j) out.values[static_cast<std::size_t>(j)] = x_[static_cast<std::size_t>(j)];
    out.objective = 0.0;
    for (int j = 0; j < n_struct_; ++j)
      out.objective += cost_[static_cast<std::size_t>(j)] * x_[static_cast<std::size_t>(j)];
    out.warm.basis = basis_;
    out.warm.nonbasic_upper.assign(static_cast<std::size_t>(n_struct_ + m_), 0);
    for (int j = 0; j < n_struct_ + m_; ++j)
      if (st_[static_cast<std::size_t>(j)] == St::AtUpper) out.warm.nonbasic_upper[static_cast<std::size_t>(j)] = 1;
    return out;
  }

  SimplexOptions opts_;
  int n_struct_ = 0;
  int m_ = 0;
  bool empty_box_ = false;
  bool bland_start_ = false;     // retry attempts pivot by Bland's rule throughout
  int refactor_interval_ = 256;  // pivots between basis-inverse rebuilds
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lb_, ub_, cost_, b_;
  std::vector<double> x_;
  std::vector<double> binv_;
  std::vector<int> basis_;
  std::vector<St> st_;
};

}  // namespace detail

// Solves the LP relaxation (integrality dropped) with explicit bound
// overrides for the structural variables — the branch-and-bound entry point.
// A basis remembered from a previous solve of the same model (under nearby
// bounds) warm-starts the search; it is advisory and falls back to a cold
// start whenever it cannot be restored.
inline LpSolution solve_lp_bounded(const MilpModel& model, const std::vector<double>& lb,
                                   const std::vector<double>& ub,
                                   const SimplexOptions& opts = {},
                                   const WarmStart* warm = nullptr) {
  if (lb.size() != model.variables.size() || ub.size() != model.variables.size())
    throw SolverError("bound override arrays do not match the variable count");
  detail::Simplex s(model, lb, ub, opts);
  return s.run(warm);
}

inline LpSolution solve_lp(const MilpModel& model, const SimplexOptions& opts = {}) {
  std::vector<double> lb, ub;
  lb.reserve(model.variables.size());
  ub.reserve(model.variables.size());
  for (const Variable& v : model.variables) {
    lb.push_back(v.lb);
    ub.push_back(v.ub);
  }
  return solve_lp_bounded(model, lb, ub, opts);
}

}  // namespace cbpp
