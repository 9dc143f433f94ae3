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

#ifndef BELLQKD_DECOY_H
#define BELLQKD_DECOY_H

#include <array>
#include <stdexcept>
#include <string>

#include "bellqkd/detection.h"
#include "bellqkd/flags.h"
#include "bellqkd/params.h"
#include "bellqkd/simplex.h"

namespace bellqkd {

/// Values indexed by (Alice intensity index, Bob intensity index).
template <typename T>
using IntensityGrid = std::array<std::array<T, kNumIntensities>, kNumIntensities>;

/// Everything the estimators see: Z-basis gains and error-weighted gains,
/// and the psi- gain of every Bell channel, over the 3x3 intensity grid.
struct ObservationSet {
    IntensitySet intensities;
    IntensityGrid<double> z_gain{};        ///< Q^Z
    IntensityGrid<double> z_error_gain{};  ///< E^Z Q^Z
    std::array<IntensityGrid<double>, kNumBellChannels> pair_gain{};
};

struct Interval {
    double lo = 0;
    double hi = 0;

    bool operator==(const Interval &) const = default;
};

enum class DataMode { exact, fluctuated };
const char *to_string(DataMode mode);

struct ObservationIntervals {
    IntensitySet intensities;
    DataMode mode = DataMode::exact;
    IntensityGrid<Interval> z_gain{};
    IntensityGrid<Interval> z_error_gain{};
    std::array<IntensityGrid<Interval>, kNumBellChannels> pair_gain{};
    unsigned flags = 0;

    /// Point intervals, lo = hi = observed value.
    static ObservationIntervals exact(const ObservationSet &obs);
};

/// Forward model: fills every entry from the closed-form detection statistics.
ObservationSet observe(const SystemParams &params, const IntensitySet &intensities);

/// n with erfc(n / sqrt 2) = epsilon, by bisection.
double n_sigma_from_epsilon(double epsilon);

struct FluctuationOptions {
    bool fluctuate_pair_gains = true;
};

/// Q -> [Q - n sqrt(Q/N), Q + n sqrt(Q/N)] truncated to [0, 1]. n comes from
/// finite.n_sigma, or from epsilon when that is unset.
ObservationIntervals fluctuate(
    const ObservationSet &obs, const FiniteDataParams &finite, double epsilon, const FluctuationOptions &options = {});

class EstimationError : public std::runtime_error {
   public:
    enum class Kind { infeasible, solver_failure, degenerate };
    EstimationError(Kind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

   private:
    Kind kind_;
};

enum class Method { analytic, lp };
const char *to_string(Method method);

struct SinglePhotonEstimates {
    double y11_lower = 0;
    double y11_upper = 0;
    double e11_lower = 0;
    double s11_lower = 0;
    /// Bounds on the four canonical pair yields, indexed by PairForm.
    std::array<Interval, kNumPairForms> pair_yields{};
    Method method = Method::analytic;
    DataMode data_mode = DataMode::exact;
    unsigned flags = 0;
};

/// Two-decoy bounds on the (1,1) yield of one observable. The lower bound is
/// returned unclamped; each interval end is picked by the sign of its weight.
Interval analytic_yield(const IntensityGrid<Interval> &grid, const IntensitySet &intensities);

/// Y11 bounds and e11 lower bound (E Q lower bound over Y11 upper bound).
/// s11_lower and pair_yields are left empty.
SinglePhotonEstimates analytic_bounds(const ObservationIntervals &obs);

/// Lower bound on S11 from the A1B1 and A2B1 pair-yield bounds. Throws
/// EstimationError(degenerate) on a zero denominator.
double analytic_s11_lower(const ObservationIntervals &obs, double e_d);

/// 2(1 - 2 e_d) sum over the A1B1 and A2B1 families of
/// (Y^L_HV - Y^U_HH) / (Y^U_HH + Y^U_HV).
double s11_from_pair_bounds(const std::array<Interval, kNumPairForms> &pair_yields, double e_d);

enum class Sense { min, max };

struct LpOptions {
    int cutoff = 12;         ///< photon numbers 0..cutoff per party
    bool full_grid = false;  ///< constrain all 9 intensity pairs instead of the 7 the analytic bounds use
    SimplexOptions simplex;
};

struct LpTarget {
    enum class Kind { z_yield, z_error_yield, pair_yield };
    Kind kind = Kind::z_yield;
    PairForm form = PairForm::A1B1_HH;  ///< for pair_yield
};

/// Optimizes the (1,1) variable over yields Y_nm in [0, 1], n, m <= cutoff.
/// z_error_yield optimizes b_11 subject to the E Q rows and b_nm <= Y_nm.
double lp_bound(const ObservationIntervals &obs, const LpTarget &target, Sense sense, const LpOptions &options = {});

double lp_s11_lower(const ObservationIntervals &obs, double e_d, const LpOptions &options = {});

/// Full estimate by either method. Negative lower bounds are clamped to 0 and
/// flagged; degenerate S11 gives s11_lower = 0 with the degenerate flag.
/// Infeasibility and solver failure propagate as EstimationError.
SinglePhotonEstimates estimate(
    const ObservationIntervals &obs, double e_d, Method method, const LpOptions &options = {});

}  // namespace bellqkd

#endif
