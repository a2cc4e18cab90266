#pragma once

// Self-contained bounded-variable primal simplex, templated on the scalar
// type in the style of a dense-matrix library.  Problems at the intended
// scale have tens of variables, so each iteration refactorizes the basis;
// there is no tableau to drift and no sparse machinery.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "tcrrgu/errors.hpp"

namespace tcrrgu {

enum class LpStatus { optimal, infeasible, unbounded };

// Maximization problem
//
//   max  objective . x
//   s.t. row_lower <= row_coeffs x <= row_upper
//        var_lower <=            x <= var_upper
//
// Bounds may be +/-infinity on either side; a row with equal bounds is an
// equality.  Rows are dense.
template <typename Scalar>
struct LpProblemT {
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector objective;
  Vector var_lower, var_upper;
  Matrix row_coeffs;  // (num_rows x num_vars)
  Vector row_lower, row_upper;

  Eigen::Index num_vars() const { return objective.size(); }
  Eigen::Index num_rows() const { return row_lower.size(); }
};

template <typename Scalar>
struct LpSolutionT {
  LpStatus status = LpStatus::infeasible;
  Eigen::Vector<Scalar, Eigen::Dynamic> values;  // empty unless optimal
  Scalar objective_value = Scalar(0);
};

using LpProblem = LpProblemT<double>;
using LpSolution = LpSolutionT<double>;

namespace lp_detail {

enum class VarState { basic, at_lower, at_upper, free_at_zero };

template <typename Scalar>
bool finite(Scalar v) {
  return std::isfinite(static_cast<double>(v));
}

// Deterministic two-phase simplex over the augmented system
//   [A | -I | D] (x, s, r) = 0,
// where s are row-activity variables bounded by the row bounds and r are
// phase-one artificials (D diagonal +/-1, one active per initially violated
// row).  Variable indices are ordered x, s, r and every tie in the pivot
// rules is broken toward the smallest index (Bland), which guarantees
// termination and reproducibility.
template <typename Scalar>
class Simplex {
  using Vector = Eigen::Vector<Scalar, Eigen::Dynamic>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

 public:
  explicit Simplex(const LpProblemT<Scalar>& p)
      : n_(p.num_vars()), m_(p.num_rows()), total_(n_ + 2 * m_) {
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    cols_ = Matrix::Zero(m_, total_);
    cols_.leftCols(n_) = p.row_coeffs;
    lo_ = Vector::Constant(total_, -inf);
    up_ = Vector::Constant(total_, inf);
    lo_.head(n_) = p.var_lower;
    up_.head(n_) = p.var_upper;
    lo_.segment(n_, m_) = p.row_lower;
    up_.segment(n_, m_) = p.row_upper;
    for (Eigen::Index i = 0; i < m_; ++i) cols_(i, n_ + i) = Scalar(-1);

    state_.assign(static_cast<size_t>(total_), VarState::at_lower);
    val_ = Vector::Zero(total_);
    for (Eigen::Index j = 0; j < n_; ++j) init_nonbasic(j);

    // Row variables start basic where the initial activity already sits
    // inside the row bounds; otherwise the activity variable parks at the
    // violated bound and an artificial carries the (positive) residual.
    basis_.resize(static_cast<size_t>(m_));
    Vector activity = cols_.leftCols(n_) * val_.head(n_);
    phase1_needed_ = false;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index s = n_ + i;
      const Eigen::Index r = n_ + m_ + i;
      lo_[r] = Scalar(0);
      up_[r] = Scalar(0);
      state_[static_cast<size_t>(r)] = VarState::at_lower;
      val_[r] = Scalar(0);
      if (activity[i] >= lo_[s] && activity[i] <= up_[s]) {
        basis_[static_cast<size_t>(i)] = s;
        state_[static_cast<size_t>(s)] = VarState::basic;
      } else {
        val_[s] = activity[i] < lo_[s] ? lo_[s] : up_[s];
        state_[static_cast<size_t>(s)] =
            activity[i] < lo_[s] ? VarState::at_lower : VarState::at_upper;
        // Row equation is A x - s + D r = 0 with s parked at the violated
        // bound, so D must oppose the residual for r to start at |residual|.
        // No upper bound: an artificial may only ever leave the basis at 0,
        // keeping the end-of-phase-one infeasibility equal to the basic sum.
        const Scalar residual = activity[i] - val_[s];
        cols_(i, r) = residual > Scalar(0) ? Scalar(-1) : Scalar(1);
        up_[r] = std::numeric_limits<Scalar>::infinity();
        basis_[static_cast<size_t>(i)] = r;
        state_[static_cast<size_t>(r)] = VarState::basic;
        phase1_needed_ = true;
      }
    }
  }

  LpSolutionT<Scalar> solve(const Vector& objective) {
    if (phase1_needed_) {
      Vector w = Vector::Zero(total_);
      w.tail(m_).setConstant(Scalar(-1));
      if (!iterate(w)) throw Error("lp: phase one reported unbounded");
      Scalar infeas = Scalar(0);
      for (Eigen::Index i = 0; i < m_; ++i) {
        const Eigen::Index b = basis_[static_cast<size_t>(i)];
        if (b >= n_ + m_) infeas += std::abs(basic_val_[i]);
      }
      if (infeas > Scalar(1e-7)) return {LpStatus::infeasible, {}, Scalar(0)};
      // pin artificials to zero for phase two
      for (Eigen::Index i = 0; i < m_; ++i) up_[n_ + m_ + i] = Scalar(0);
    }

    Vector w = Vector::Zero(total_);
    w.head(n_) = objective;
    if (!iterate(w)) return {LpStatus::unbounded, {}, Scalar(0)};

    Vector x(total_);
    for (Eigen::Index j = 0; j < total_; ++j) x[j] = val_[j];
    for (Eigen::Index i = 0; i < m_; ++i)
      x[basis_[static_cast<size_t>(i)]] = basic_val_[i];
    LpSolutionT<Scalar> out;
    out.status = LpStatus::optimal;
    out.values = x.head(n_);
    out.objective_value = objective.dot(out.values);
    return out;
  }

 private:
  void init_nonbasic(Eigen::Index j) {
    if (finite(lo_[j])) {
      state_[static_cast<size_t>(j)] = VarState::at_lower;
      val_[j] = lo_[j];
    } else if (finite(up_[j])) {
      state_[static_cast<size_t>(j)] = VarState::at_upper;
      val_[j] = up_[j];
    } else {
      state_[static_cast<size_t>(j)] = VarState::free_at_zero;
      val_[j] = Scalar(0);
    }
  }

  // Value vector of the current basis: B v = -N val_N.
  void refresh_basics(const Eigen::FullPivLU<Matrix>& lu) {
    Vector rhs = Vector::Zero(m_);
    for (Eigen::Index j = 0; j < total_; ++j)
      if (state_[static_cast<size_t>(j)] != VarState::basic && val_[j] != Scalar(0))
        rhs -= cols_.col(j) * val_[j];
    basic_val_ = m_ > 0 ? Vector(lu.solve(rhs)) : Vector();
  }

  // Runs Bland-rule pivoting to optimality for the given (maximized)
  // objective.  Returns false when the objective is unbounded above.
  bool iterate(const Vector& w) {
    constexpr Scalar dtol = Scalar(1e-9);
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    const long max_iters = 2000 + 200L * static_cast<long>(total_);

    for (long iter = 0; iter < max_iters; ++iter) {
      Matrix b_mat(m_, m_);
      for (Eigen::Index i = 0; i < m_; ++i)
        b_mat.col(i) = cols_.col(basis_[static_cast<size_t>(i)]);
      Eigen::FullPivLU<Matrix> lu(b_mat);
      if (m_ > 0 && !lu.isInvertible())
        throw Error("lp: singular basis matrix");
      refresh_basics(lu);

      // reduced costs via the dual solve B^T y = w_B
      Vector y;
      if (m_ > 0) {
        Vector wb(m_);
        for (Eigen::Index i = 0; i < m_; ++i)
          wb[i] = w[basis_[static_cast<size_t>(i)]];
        y = Eigen::FullPivLU<Matrix>(b_mat.transpose()).solve(wb);
      }

      Eigen::Index entering = -1;
      Scalar dir = Scalar(1);
      for (Eigen::Index j = 0; j < total_; ++j) {
        const VarState st = state_[static_cast<size_t>(j)];
        if (st == VarState::basic) continue;
        if (lo_[j] == up_[j]) continue;  // fixed variables never move
        const Scalar d = w[j] - (m_ > 0 ? y.dot(cols_.col(j)) : Scalar(0));
        if (st == VarState::at_lower && d > dtol) { entering = j; dir = Scalar(1); break; }
        if (st == VarState::at_upper && d < -dtol) { entering = j; dir = Scalar(-1); break; }
        if (st == VarState::free_at_zero && std::abs(d) > dtol) {
          entering = j;
          dir = d > Scalar(0) ? Scalar(1) : Scalar(-1);
          break;
        }
      }
      if (entering < 0) return true;  // optimal for this phase

      // ratio test: entering moves by t >= 0 in direction dir
      Scalar t_flip = inf;
      if (finite(lo_[entering]) && finite(up_[entering]))
        t_flip = up_[entering] - lo_[entering];
      Vector g = m_ > 0 ? Vector(lu.solve(cols_.col(entering))) : Vector();

      Scalar t_best = t_flip;
      Eigen::Index block = -1;  // basis position that blocks first
      for (Eigen::Index i = 0; i < m_; ++i) {
        const Scalar move = dir * g[i];  // basic i changes by -move * t
        const Eigen::Index bi = basis_[static_cast<size_t>(i)];
        Scalar t_i = inf;
        if (move > dtol && finite(lo_[bi]))
          t_i = (basic_val_[i] - lo_[bi]) / move;
        else if (move < -dtol && finite(up_[bi]))
          t_i = (up_[bi] - basic_val_[i]) / (-move);
        else
          continue;
        if (t_i < Scalar(0)) t_i = Scalar(0);
        if (t_i < t_best - Scalar(1e-12)) {
          t_best = t_i;
          block = i;
        } else if (block >= 0 && t_i <= t_best + Scalar(1e-12) &&
                   bi < basis_[static_cast<size_t>(block)]) {
          block = i;  // Bland tie-break on the leaving variable index
        }
      }

      if (!finite(t_best)) return false;  // unbounded ray

      if (block < 0) {
        // bound flip: the entering variable crosses to its opposite bound
        state_[static_cast<size_t>(entering)] =
            dir > Scalar(0) ? VarState::at_upper : VarState::at_lower;
        val_[entering] = dir > Scalar(0) ? up_[entering] : lo_[entering];
      } else {
        const Eigen::Index leaving = basis_[static_cast<size_t>(block)];
        const Scalar move = dir * g[block];
        state_[static_cast<size_t>(leaving)] =
            move > Scalar(0) ? VarState::at_lower : VarState::at_upper;
        val_[leaving] = move > Scalar(0) ? lo_[leaving] : up_[leaving];
        // entering value: from its departure point, t_best along dir
        const Scalar depart =
            state_[static_cast<size_t>(entering)] == VarState::free_at_zero
                ? Scalar(0)
                : val_[entering];
        val_[entering] = depart + dir * t_best;
        state_[static_cast<size_t>(entering)] = VarState::basic;
        basis_[static_cast<size_t>(block)] = entering;
      }
    }
    throw Error("lp: pivot limit exceeded");
  }

  Eigen::Index n_, m_, total_;
  Matrix cols_;
  Vector lo_, up_, val_, basic_val_;
  std::vector<VarState> state_;
  std::vector<Eigen::Index> basis_;
  bool phase1_needed_ = false;
};

}  // namespace lp_detail

// Solves the problem to proven optimality, infeasibility or unboundedness.
// Deterministic: identical inputs produce identical pivot sequences and
// bit-identical solutions.
template <typename Scalar>
LpSolutionT<Scalar> solve_lp(const LpProblemT<Scalar>& problem) {
  const Eigen::Index n = problem.num_vars();
  const Eigen::Index m = problem.num_rows();
  if (problem.var_lower.size() != n || problem.var_upper.size() != n)
    throw DimensionError("lp: variable bound vectors must match objective size");
  if (problem.row_coeffs.rows() != m ||
      (m > 0 && problem.row_coeffs.cols() != n) || problem.row_upper.size() != m)
    throw DimensionError("lp: row matrix/bound dimensions disagree");
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(problem.var_lower[j] <= problem.var_upper[j]) ||
        problem.var_lower[j] == inf || problem.var_upper[j] == -inf)
      return {LpStatus::infeasible, {}, Scalar(0)};
  for (Eigen::Index i = 0; i < m; ++i)
    if (!(problem.row_lower[i] <= problem.row_upper[i]) ||
        problem.row_lower[i] == inf || problem.row_upper[i] == -inf)
      return {LpStatus::infeasible, {}, Scalar(0)};

  lp_detail::Simplex<Scalar> simplex(problem);
  return simplex.solve(problem.objective);
}

}  // namespace tcrrgu
