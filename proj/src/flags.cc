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

#include "bellqkd/flags.h"

namespace bellqkd {

std::string flag_string(unsigned bits) {
    static const struct {
        unsigned bit;
        const char *name;
    } kNames[] = {
        {flags::kIntervalLowerClamped, "interval_lower_clamped"},
        {flags::kY11LowerClamped, "y11_lower_clamped"},
        {flags::kE11LowerClamped, "e11_lower_clamped"},
        {flags::kPairYieldClamped, "pair_yield_clamped"},
        {flags::kDegenerate, "degenerate"},
        {flags::kS11Clamped, "s11_clamped"},
        {flags::kPhaseErrorClamped, "phase_error_clamped"},
        {flags::kInfeasible, "infeasible"},
        {flags::kSolverFailure, "solver_failure"},
    };
    std::string out;
    for (const auto &n : kNames) {
        if (!(bits & n.bit)) continue;
        if (!out.empty()) out += ';';
        out += n.name;
    }
    return out;
}

}  // namespace bellqkd
