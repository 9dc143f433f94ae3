// Copyright 2026 The bellqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bellqkd/simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bellqkd {

namespace {

using Real = long double;

constexpr Real kInf = std::numeric_limits<Real>::infinity();
constexpr Real kPivotTol = 1e-13L;
constexpr Real kPrimalTol = 1e-14L;
constexpr Real kDualTol = 1e-14L;
constexpr int kBlandAfter = 60;

// LU factorization with partial pivoting of a dense square matrix.
class DenseLu {
   public:
    void factor(std::vector<Real> m, int n) {
        n_ = n;
        lu_ = std::move(m);
        perm_.resize(n);
        for (int i = 0; i < n; i++) perm_[i] = i;
        for (int k = 0; k < n; k++) {
            int p = k;
            Real best = std::abs(lu_[k * n + k]);
            for (int i = k + 1; i < n; i++) {
                Real v = std::abs(lu_[i * n + k]);
                if (v > best) best = v, p = i;
            }
            if (best == 0) throw std::runtime_error("singular basis");
            if (p != k) {
                for (int j = 0; j < n; j++) std::swap(lu_[k * n + j], lu_[p * n + j]);
                std::swap(perm_[k], perm_[p]);
            }
            Real inv = 1 / lu_[k * n + k];
            for (int i = k + 1; i < n; i++) {
                Real f = lu_[i * n + k] * inv;
                lu_[i * n + k] = f;
                if (f == 0) continue;
                for (int j = k + 1; j < n; j++) lu_[i * n + j] -= f * lu_[k * n + j];
            }
        }
    }

    // B x = b
    std::vector<Real> solve(const std::vector<Real> &b) const {
        const int n = n_;
        std::vector<Real> x(n);
        for (int i = 0; i < n; i++) x[i] = b[perm_[i]];
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < i; j++) x[i] -= lu_[i * n + j] * x[j];
        }
        for (int i = n - 1; i >= 0; i--) {
            for (int j = i + 1; j < n; j++) x[i] -= lu_[i * n + j] * x[j];
            x[i] /= lu_[i * n + i];
        }
        return x;
    }

    // B^T y = c
    std::vector<Real> solve_transpose(const std::vector<Real> &c) const {
        const int n = n_;
        std::vector<Real> z(c);
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < i; j++) z[i] -= lu_[j * n + i] * z[j];
            z[i] /= lu_[i * n + i];
        }
        for (int i = n - 1; i >= 0; i--) {
            for (int j = i + 1; j < n; j++) z[i] -= lu_[j * n + i] * z[j];
        }
        std::vector<Real> y(n);
        for (int i = 0; i < n; i++) y[perm_[i]] = z[i];
        return y;
    }

   private:
    int n_ = 0;
    std::vector<Real> lu_;
    std::vector<int> perm_;
};

// Columns: structural x (n), row activities r (m) with A x - r = 0, and
// artificials t (m) with sign d_i on row i.
class Simplex {
   public:
    Simplex(const LpProblem &p, const SimplexOptions &opt) : opt_(opt), m_(p.num_rows), n_(p.num_cols) {
        const int total = n_ + 2 * m_;
        a_.assign(static_cast<size_t>(m_) * n_, 0);
        lo_.assign(total, 0);
        hi_.assign(total, 0);
        cost_.assign(total, 0);
        art_sign_.assign(m_, 1);
        value_.assign(total, 0);
        basic_pos_.assign(total, -1);

        for (int i = 0; i < m_; i++) {
            Real scale = std::max(std::abs(static_cast<Real>(p.row_lo[i])), std::abs(static_cast<Real>(p.row_hi[i])));
            if (scale == 0) {
                for (int j = 0; j < n_; j++) scale = std::max(scale, std::abs(static_cast<Real>(p.at(i, j))));
            }
            if (scale == 0) scale = 1;
            for (int j = 0; j < n_; j++) a_[static_cast<size_t>(i) * n_ + j] = p.at(i, j) / scale;
            lo_[n_ + i] = p.row_lo[i] / scale;
            hi_[n_ + i] = p.row_hi[i] / scale;
        }
        for (int j = 0; j < n_; j++) {
            lo_[j] = p.col_lo[j];
            hi_[j] = p.col_hi[j];
            cost_[j] = p.cost[j];
            value_[j] = lo_[j];
        }

        basis_.resize(m_);
        for (int i = 0; i < m_; i++) {
            Real activity = 0;
            for (int j = 0; j < n_; j++) activity += a_[static_cast<size_t>(i) * n_ + j] * value_[j];
            // Nonbasic variables must sit on a bound; the artificial absorbs the gap.
            Real r = std::abs(activity - lo_[n_ + i]) <= std::abs(hi_[n_ + i] - activity) ? lo_[n_ + i] : hi_[n_ + i];
            value_[n_ + i] = r;
            Real residual = activity - r;
            art_sign_[i] = residual > 0 ? -1 : 1;
            int t = n_ + m_ + i;
            lo_[t] = 0;
            hi_[t] = kInf;
            basis_[i] = t;
            basic_pos_[t] = i;
        }
    }

    LpSolution run() {
        LpSolution sol;
        // Phase one: drive artificials to zero.
        std::vector<Real> phase_one(n_ + 2 * m_, 0);
        for (int i = 0; i < m_; i++) phase_one[n_ + m_ + i] = 1;
        LpStatus st = iterate(phase_one, true);
        sol.iterations = iterations_;
        if (st == LpStatus::iteration_limit) return finish(sol, st);
        Real infeasibility = 0;
        for (int i = 0; i < m_; i++) infeasibility += current(n_ + m_ + i);
        if (infeasibility > opt_.infeasibility_tolerance) return finish(sol, LpStatus::infeasible);

        for (int i = 0; i < m_; i++) {
            int t = n_ + m_ + i;
            hi_[t] = 0;
            if (basic_pos_[t] < 0) value_[t] = 0;
        }
        st = iterate(cost_, false);
        return finish(sol, st);
    }

   private:
    Real column_entry(int var, int row) const {
        if (var < n_) return a_[static_cast<size_t>(row) * n_ + var];
        if (var < n_ + m_) return var - n_ == row ? -1 : 0;
        return var - n_ - m_ == row ? static_cast<Real>(art_sign_[row]) : 0;
    }

    std::vector<Real> column(int var) const {
        std::vector<Real> c(m_);
        for (int i = 0; i < m_; i++) c[i] = column_entry(var, i);
        return c;
    }

    Real current(int var) const { return basic_pos_[var] >= 0 ? xb_[basic_pos_[var]] : value_[var]; }

    void refactor() {
        std::vector<Real> b(static_cast<size_t>(m_) * m_);
        for (int k = 0; k < m_; k++) {
            for (int i = 0; i < m_; i++) b[static_cast<size_t>(i) * m_ + k] = column_entry(basis_[k], i);
        }
        lu_.factor(std::move(b), m_);
        std::vector<Real> rhs(m_, 0);
        const int total = n_ + 2 * m_;
        for (int j = 0; j < total; j++) {
            if (basic_pos_[j] >= 0 || value_[j] == 0) continue;
            for (int i = 0; i < m_; i++) rhs[i] -= column_entry(j, i) * value_[j];
        }
        xb_ = lu_.solve(rhs);
    }

    LpStatus iterate(const std::vector<Real> &cost, bool phase_one) {
        const int total = n_ + 2 * m_;
        int degenerate_run = 0;
        while (true) {
            if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
            refactor();
            std::vector<Real> cb(m_);
            for (int k = 0; k < m_; k++) cb[k] = cost[basis_[k]];
            std::vector<Real> y = lu_.solve_transpose(cb);

            const bool bland = degenerate_run > kBlandAfter;
            int enter = -1;
            Real best = 0;
            for (int j = 0; j < total; j++) {
                if (basic_pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
                if (!phase_one && j >= n_ + m_) continue;
                Real d = cost[j];
                for (int i = 0; i < m_; i++) d -= y[i] * column_entry(j, i);
                bool at_lower = value_[j] == lo_[j];
                Real gain = at_lower ? -d : d;
                if (gain <= kDualTol) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (gain > best) best = gain, enter = j;
            }
            if (enter < 0) return LpStatus::optimal;
            iterations_++;

            const Real dir = value_[enter] == lo_[enter] ? 1 : -1;
            std::vector<Real> w = lu_.solve(column(enter));
            // Basic variable i moves at rate -dir * w_i per unit step.
            Real step = hi_[enter] - lo_[enter];
            int leave = -1;
            // Harris pass one: largest step allowed with a relaxed bound.
            Real relaxed = step;
            for (int i = 0; i < m_; i++) {
                Real rate = -dir * w[i];
                int v = basis_[i];
                if (rate < -kPivotTol) {
                    relaxed = std::min(relaxed, (xb_[i] - lo_[v] + kPrimalTol) / -rate);
                } else if (rate > kPivotTol && hi_[v] < kInf) {
                    relaxed = std::min(relaxed, (hi_[v] - xb_[i] + kPrimalTol) / rate);
                }
            }
            // Pass two: among rows blocking within the relaxed step, the largest pivot.
            Real pivot = 0;
            for (int i = 0; i < m_; i++) {
                Real rate = -dir * w[i];
                int v = basis_[i];
                Real limit;
                if (rate < -kPivotTol) {
                    limit = (xb_[i] - lo_[v]) / -rate;
                } else if (rate > kPivotTol && hi_[v] < kInf) {
                    limit = (hi_[v] - xb_[i]) / rate;
                } else {
                    continue;
                }
                if (limit > relaxed) continue;
                bool take = bland ? (leave < 0 || basis_[i] < basis_[leave]) : std::abs(rate) > pivot;
                if (take) {
                    pivot = std::abs(rate);
                    leave = i;
                    step = std::max<Real>(limit, 0);
                }
            }
            if (leave < 0 && step == kInf) throw std::logic_error("unbounded direction with finite bounds");

            degenerate_run = step <= kPrimalTol ? degenerate_run + 1 : 0;
            if (leave < 0) {
                value_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
                continue;
            }
            int out = basis_[leave];
            Real rate = -dir * w[leave];
            value_[out] = rate < 0 ? lo_[out] : hi_[out];
            basic_pos_[out] = -1;
            basis_[leave] = enter;
            basic_pos_[enter] = leave;
            value_[enter] = 0;
        }
    }

    LpSolution &finish(LpSolution &sol, LpStatus st) {
        sol.status = st;
        sol.iterations = iterations_;
        sol.x.resize(n_);
        Real obj = 0;
        for (int j = 0; j < n_; j++) {
            Real v = std::clamp(current(j), lo_[j], hi_[j]);
            sol.x[j] = static_cast<double>(v);
            obj += cost_[j] * v;
        }
        sol.objective = static_cast<double>(obj);
        return sol;
    }

    SimplexOptions opt_;
    int m_, n_;
    std::vector<Real> a_;
    std::vector<Real> lo_, hi_, cost_, value_;
    std::vector<int> art_sign_;
    std::vector<int> basis_, basic_pos_;
    std::vector<Real> xb_;
    DenseLu lu_;
    int iterations_ = 0;
};

}  // namespace

LpProblem::LpProblem(int rows, int cols)
    : num_rows(rows),
      num_cols(cols),
      a(static_cast<size_t>(rows) * cols, 0.0),
      row_lo(rows, 0.0),
      row_hi(rows, 0.0),
      col_lo(cols, 0.0),
      col_hi(cols, 1.0),
      cost(cols, 0.0) {
}

const char *to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal:
            return "optimal";
        case LpStatus::infeasible:
            return "infeasible";
        case LpStatus::iteration_limit:
            return "iteration_limit";
    }
    return "?";
}

LpSolution solve_lp(const LpProblem &problem, const SimplexOptions &options) {
    const int m = problem.num_rows, n = problem.num_cols;
    if (m < 1 || n < 1 || problem.a.size() != static_cast<size_t>(m) * n || problem.row_lo.size() != size_t(m) ||
        problem.row_hi.size() != size_t(m) || problem.col_lo.size() != size_t(n) ||
        problem.col_hi.size() != size_t(n) || problem.cost.size() != size_t(n)) {
        throw std::invalid_argument("LpProblem dimensions are inconsistent");
    }
    for (int i = 0; i < m; i++) {
        if (!std::isfinite(problem.row_lo[i]) || !std::isfinite(problem.row_hi[i])) {
            throw std::invalid_argument("row bounds must be finite");
        }
        if (problem.row_lo[i] > problem.row_hi[i]) {
            LpSolution s;
            s.status = LpStatus::infeasible;
            return s;
        }
    }
    for (int j = 0; j < n; j++) {
        if (!std::isfinite(problem.col_lo[j]) || !std::isfinite(problem.col_hi[j])) {
            throw std::invalid_argument("column bounds must be finite");
        }
        if (problem.col_lo[j] > problem.col_hi[j]) {
            LpSolution s;
            s.status = LpStatus::infeasible;
            return s;
        }
    }
    Simplex s(problem, options);
    return s.run();
}

}  // namespace bellqkd
