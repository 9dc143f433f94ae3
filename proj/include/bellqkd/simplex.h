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

#ifndef BELLQKD_SIMPLEX_H
#define BELLQKD_SIMPLEX_H

#include <vector>

namespace bellqkd {

/// minimize cost . x  subject to  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi.
/// All bounds must be finite. A is dense, row-major, rows() x cols().
struct LpProblem {
    int num_rows = 0;
    int num_cols = 0;
    std::vector<double> a;
    std::vector<double> row_lo, row_hi;
    std::vector<double> col_lo, col_hi;
    std::vector<double> cost;

    LpProblem(int rows, int cols);
    double &at(int row, int col) { return a[static_cast<size_t>(row) * num_cols + col]; }
    double at(int row, int col) const { return a[static_cast<size_t>(row) * num_cols + col]; }
};

enum class LpStatus { optimal, infeasible, iteration_limit };

const char *to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    double objective = 0;
    std::vector<double> x;
    int iterations = 0;
};

struct SimplexOptions {
    int max_iterations = 100000;
    /// Phase-one residual (in row-scaled units) above which the problem is infeasible.
    double infeasibility_tolerance = 1e-11;
};

/// Dense bounded-variable two-phase primal simplex in extended precision.
/// Rows are scaled by the magnitude of their bounds; the basis is refactored
/// from scratch every iteration, which is cheap at the sizes used here.
LpSolution solve_lp(const LpProblem &problem, const SimplexOptions &options = {});

}  // namespace bellqkd

#endif
