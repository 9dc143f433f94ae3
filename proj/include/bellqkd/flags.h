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

#ifndef BELLQKD_FLAGS_H
#define BELLQKD_FLAGS_H

#include <string>

namespace bellqkd {

/// Bit flags attached to estimates, rates and scan rows.
namespace flags {
inline constexpr unsigned kIntervalLowerClamped = 1u << 0;  ///< a fluctuated interval hit 0
inline constexpr unsigned kY11LowerClamped = 1u << 1;       ///< negative Y11 lower bound set to 0
inline constexpr unsigned kE11LowerClamped = 1u << 2;       ///< e11 lower bound clamped into [0, 1/2]
inline constexpr unsigned kPairYieldClamped = 1u << 3;      ///< a pair-yield lower bound was negative
inline constexpr unsigned kDegenerate = 1u << 4;            ///< zero denominator in a ratio
inline constexpr unsigned kS11Clamped = 1u << 5;            ///< S11 clamped into [0, 2 sqrt 2]
inline constexpr unsigned kPhaseErrorClamped = 1u << 6;     ///< 1 - e11 - S/(2 sqrt 2) outside [0, 1/2]
inline constexpr unsigned kInfeasible = 1u << 7;            ///< LP constraints inconsistent
inline constexpr unsigned kSolverFailure = 1u << 8;         ///< LP did not converge
}  // namespace flags

/// Semicolon-separated flag names, empty for 0.
std::string flag_string(unsigned bits);

}  // namespace bellqkd

#endif
