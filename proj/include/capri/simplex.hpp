#pragma once

#include <algorithm>
#include <vector>

#include "capri/errors.hpp"
#include "capri/numeric.hpp"

namespace capri {

enum class RowSense { LE, EQ, GE };
enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpDirection { Maximize, Minimize };

/// Dense two-phase primal simplex over an ordered field. Bland's pivoting
/// rule is used throughout, so the rational instantiation terminates and is
/// exact; the double instantiation uses a small pivot epsilon and an
/// iteration cap.
///
/// Variables are nonnegative. Duals are normalized so that
///   objective_value() == sum_i dual(i) * rhs(i)
/// always holds at optimality; for a maximization problem dual(i) >= 0 on LE
/// rows and <= 0 on GE rows (signs flip for minimization), EQ rows are free.
template <class T>
class LinearProgram {
 public:
  int add_variable(T objective_coeff) {
    obj_.push_back(std::move(objective_coeff));
    for (auto& row : coeff_) row.emplace_back(0);
    return int(obj_.size()) - 1;
  }

  int add_row(RowSense sense, T rhs) {
    sense_.push_back(sense);
    rhs_.push_back(std::move(rhs));
    coeff_.emplace_back(obj_.size(), T(0));
    return int(rhs_.size()) - 1;
  }

  void add_coeff(int row, int var, const T& a) { coeff_[row][var] += a; }

  int num_vars() const { return int(obj_.size()); }
  int num_rows() const { return int(rhs_.size()); }

  LpStatus solve(LpDirection dir) {
    dir_ = dir;
    build_tableau();
    if (has_artificial_) {
      price_out(phase1_cost_);
      LpStatus st = iterate(/*phase1=*/true);
      if (st == LpStatus::Unbounded) throw NumericFailure("phase 1 unbounded");
      if (!is_zero(obj_val_)) {
        status_ = LpStatus::Infeasible;
        return status_;
      }
      expel_artificials();
    }
    price_out(phase2_cost_);
    status_ = iterate(/*phase1=*/false);
    if (status_ == LpStatus::Optimal) extract_solution();
    return status_;
  }

  /// Throwing convenience wrapper.
  void solve_or_throw(LpDirection dir) {
    switch (solve(dir)) {
      case LpStatus::Optimal: return;
      case LpStatus::Infeasible: throw LpInfeasible("LP infeasible");
      case LpStatus::Unbounded: throw LpUnbounded("LP unbounded");
    }
  }

  LpStatus status() const { return status_; }
  const T& objective_value() const { return objective_value_; }
  const std::vector<T>& primal() const { return primal_; }
  const std::vector<T>& duals() const { return duals_; }

 private:
  // --- problem data
  std::vector<T> obj_;
  std::vector<RowSense> sense_;
  std::vector<T> rhs_;
  std::vector<std::vector<T>> coeff_;
  LpDirection dir_ = LpDirection::Maximize;

  // --- tableau
  std::vector<std::vector<T>> tab_;  // rows x (total columns)
  std::vector<T> tab_rhs_;
  std::vector<T> cost_row_;  // reduced costs
  T obj_val_ = T(0);
  std::vector<int> basis_;
  std::vector<T> phase1_cost_, phase2_cost_;
  std::vector<bool> artificial_col_;
  std::vector<int> ref_col_;   // per row: column whose original form is +e_i
  std::vector<int> row_sign_;  // +1, or -1 when the row was negated to get rhs >= 0
  bool has_artificial_ = false;
  int total_cols_ = 0;

  // --- results
  LpStatus status_ = LpStatus::Optimal;
  T objective_value_ = T(0);
  std::vector<T> primal_;
  std::vector<T> duals_;

  static bool is_pos(const T& v) { return v > NumericTraits<T>::pivot_eps(); }
  static bool is_neg(const T& v) { return v < -NumericTraits<T>::pivot_eps(); }
  static bool is_zero(const T& v) { return !is_pos(v) && !is_neg(v); }

  void build_tableau() {
    const int m = num_rows(), n = num_vars();
    // Effective objective: always maximize internally.
    std::vector<T> c = obj_;
    if (dir_ == LpDirection::Minimize)
      for (auto& v : c) v = -v;

    // Count auxiliary columns.
    int slack_count = 0, artificial_count = 0;
    row_sign_.assign(m, 1);
    std::vector<RowSense> sense = sense_;
    for (int r = 0; r < m; ++r) {
      if (rhs_[r] < T(0)) {
        row_sign_[r] = -1;
        if (sense[r] == RowSense::LE)
          sense[r] = RowSense::GE;
        else if (sense[r] == RowSense::GE)
          sense[r] = RowSense::LE;
      }
      if (sense[r] != RowSense::EQ) ++slack_count;
      if (sense[r] != RowSense::LE) ++artificial_count;
    }
    total_cols_ = n + slack_count + artificial_count;
    has_artificial_ = artificial_count > 0;

    tab_.assign(m, std::vector<T>(total_cols_, T(0)));
    tab_rhs_.assign(m, T(0));
    basis_.assign(m, -1);
    artificial_col_.assign(total_cols_, false);
    ref_col_.assign(m, -1);
    phase1_cost_.assign(total_cols_, T(0));
    phase2_cost_.assign(total_cols_, T(0));
    for (int j = 0; j < n; ++j) phase2_cost_[j] = c[j];

    int aux = n;
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j)
        tab_[r][j] = (row_sign_[r] < 0) ? T(-coeff_[r][j]) : coeff_[r][j];
      tab_rhs_[r] = (row_sign_[r] < 0) ? T(-rhs_[r]) : rhs_[r];
      switch (sense[r]) {
        case RowSense::LE:
          tab_[r][aux] = T(1);
          basis_[r] = aux;
          ref_col_[r] = aux;
          ++aux;
          break;
        case RowSense::GE:
          tab_[r][aux] = T(-1);  // surplus
          ++aux;
          break;
        case RowSense::EQ:
          break;
      }
    }
    for (int r = 0; r < m; ++r) {
      if (basis_[r] >= 0) continue;
      tab_[r][aux] = T(1);  // artificial
      artificial_col_[aux] = true;
      phase1_cost_[aux] = T(-1);
      basis_[r] = aux;
      ref_col_[r] = aux;
      ++aux;
    }
  }

  /// Recomputes reduced costs and the objective cell for the given cost row.
  void price_out(const std::vector<T>& cost) {
    cost_row_ = cost;
    obj_val_ = T(0);
    const int m = num_rows();
    for (int r = 0; r < m; ++r) {
      const T& cb = cost[basis_[r]];
      if (cb == T(0)) continue;
      for (int j = 0; j < total_cols_; ++j)
        if (tab_[r][j] != T(0)) cost_row_[j] -= cb * tab_[r][j];
      obj_val_ += cb * tab_rhs_[r];
    }
  }

  void pivot(int r, int s) {
    const int m = num_rows();
    T inv = tab_[r][s];
    for (int j = 0; j < total_cols_; ++j)
      if (tab_[r][j] != T(0)) tab_[r][j] /= inv;
    tab_rhs_[r] /= inv;
    tab_[r][s] = T(1);
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      T f = tab_[i][s];
      if (f == T(0)) continue;
      for (int j = 0; j < total_cols_; ++j)
        if (tab_[r][j] != T(0)) tab_[i][j] -= f * tab_[r][j];
      tab_[i][s] = T(0);
      tab_rhs_[i] -= f * tab_rhs_[r];
    }
    {
      T f = cost_row_[s];
      if (f != T(0)) {
        for (int j = 0; j < total_cols_; ++j)
          if (tab_[r][j] != T(0)) cost_row_[j] -= f * tab_[r][j];
        cost_row_[s] = T(0);
        obj_val_ += f * tab_rhs_[r];
      }
    }
    basis_[r] = s;
  }

  LpStatus iterate(bool phase1) {
    const int m = num_rows();
    long max_iters = NumericTraits<T>::exact ? -1 : 50000;
    for (long it = 0; max_iters < 0 || it < max_iters; ++it) {
      // Bland: lowest-index improving column.
      int s = -1;
      for (int j = 0; j < total_cols_; ++j) {
        if (!phase1 && artificial_col_[j]) continue;
        if (is_pos(cost_row_[j])) {
          s = j;
          break;
        }
      }
      if (s < 0) return LpStatus::Optimal;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (!is_pos(tab_[i][s])) continue;
        if (r < 0) {
          r = i;
          continue;
        }
        T lhs = tab_rhs_[i] * tab_[r][s];
        T rhs = tab_rhs_[r] * tab_[i][s];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[r])) r = i;
      }
      if (r < 0) return LpStatus::Unbounded;
      pivot(r, s);
    }
    throw NumericFailure("simplex iteration limit hit");
  }

  /// After a successful phase 1, pivot artificial variables out of the basis
  /// where possible. Rows that stay artificial-basic are redundant (all-zero
  /// over real columns) and never pivot again.
  void expel_artificials() {
    const int m = num_rows();
    for (int r = 0; r < m; ++r) {
      if (!artificial_col_[basis_[r]]) continue;
      for (int j = 0; j < total_cols_; ++j) {
        if (artificial_col_[j]) continue;
        if (!is_zero(tab_[r][j])) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  void extract_solution() {
    const int m = num_rows(), n = num_vars();
    primal_.assign(n, T(0));
    for (int r = 0; r < m; ++r)
      if (basis_[r] < n) primal_[basis_[r]] = tab_rhs_[r];
    objective_value_ = (dir_ == LpDirection::Minimize) ? T(-obj_val_) : obj_val_;
    // y_i = -reduced_cost(reference column of row i), undoing the row flip;
    // minimization flips the sign once more.
    duals_.assign(m, T(0));
    for (int r = 0; r < m; ++r) {
      T y = -cost_row_[ref_col_[r]];
      if (row_sign_[r] < 0) y = -y;
      if (dir_ == LpDirection::Minimize) y = -y;
      duals_[r] = y;
    }
  }
};

/// Packing-LP entry point: max w.x subject to A x <= b, x >= 0 with A, b >= 0.
template <class T>
struct PackingLpResult {
  std::vector<T> primal;
  std::vector<T> duals;
  T objective;
};

template <class T>
PackingLpResult<T> solve_packing_lp(const std::vector<std::vector<T>>& a,
                                    const std::vector<T>& b, const std::vector<T>& w) {
  LinearProgram<T> lp;
  for (const auto& wj : w) lp.add_variable(wj);
  for (size_t r = 0; r < a.size(); ++r) {
    int row = lp.add_row(RowSense::LE, b[r]);
    for (size_t j = 0; j < a[r].size(); ++j)
      if (a[r][j] != T(0)) lp.add_coeff(row, int(j), a[r][j]);
  }
  lp.solve_or_throw(LpDirection::Maximize);
  return {lp.primal(), lp.duals(), lp.objective_value()};
}

}  // namespace capri
