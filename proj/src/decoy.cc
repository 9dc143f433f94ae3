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

#include "bellqkd/decoy.h"

#include <cmath>
#include <vector>

namespace bellqkd {

namespace {

using Grid = IntensityGrid<Interval>;

Interval clamp_unit(double lo, double hi) {
    return {lo < 0 ? 0.0 : lo, hi > 1 ? 1.0 : hi};
}

// sum_ij w_ij Q_ij with each Q_ij taken at the end that pushes the sum down
// (lower) or up (upper).
double worst_case(const Grid &grid, const IntensityGrid<double> &w, bool lower) {
    double sum = 0;
    for (int i = 0; i < kNumIntensities; i++) {
        for (int j = 0; j < kNumIntensities; j++) {
            if (w[i][j] == 0) continue;
            bool take_lo = (w[i][j] > 0) == lower;
            sum += w[i][j] * (take_lo ? grid[i][j].lo : grid[i][j].hi);
        }
    }
    return sum;
}

void check_ladder(const IntensitySet &in) {
    if (!(in.mu2 > in.mu1 && in.mu1 > 0 && in.mu0 == 0)) {
        throw std::invalid_argument("decoy bounds need 0 = mu0 < mu1 < mu2");
    }
}

double poisson(int n, double mu) {
    if (mu == 0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
}

// Poisson mass above the cutoff, summed directly so it is not lost to 1 - sum.
double poisson_tail(int cutoff, double mu) {
    double tail = 0;
    for (int n = cutoff + 1; n < cutoff + 200; n++) {
        double p = poisson(n, mu);
        tail += p;
        if (p < 1e-30 * tail || p == 0) break;
    }
    return tail;
}

std::vector<std::pair<int, int>> constraint_pairs(bool full_grid) {
    if (full_grid) {
        std::vector<std::pair<int, int>> all;
        for (int i = 0; i < kNumIntensities; i++) {
            for (int j = 0; j < kNumIntensities; j++) all.emplace_back(i, j);
        }
        return all;
    }
    return {{0, 0}, {1, 1}, {1, 0}, {0, 1}, {2, 2}, {2, 0}, {0, 2}};
}

// Decoy rows  lo - tail <= sum P_n(mu_i) P_m(nu_j) Y_nm <= hi, written into
// `lp` starting at row `row0`, column `col0`.
void add_decoy_rows(
    LpProblem &lp, int row0, int col0, const Grid &grid, const IntensitySet &in, const LpOptions &opt) {
    const int dim = opt.cutoff + 1;
    int row = row0;
    for (auto [i, j] : constraint_pairs(opt.full_grid)) {
        double mu = in.at(i), nu = in.at(j);
        for (int n = 0; n < dim; n++) {
            double pn = poisson(n, mu);
            for (int m = 0; m < dim; m++) lp.at(row, col0 + n * dim + m) = pn * poisson(m, nu);
        }
        double ta = poisson_tail(opt.cutoff, mu), tb = poisson_tail(opt.cutoff, nu);
        double tail = ta + tb - ta * tb;
        lp.row_lo[row] = grid[i][j].lo - tail;
        lp.row_hi[row] = grid[i][j].hi;
        row++;
    }
}

int num_decoy_rows(const LpOptions &opt) {
    return opt.full_grid ? 9 : 7;
}

LpSolution checked_solve(const LpProblem &lp, const LpOptions &opt, const char *what) {
    LpSolution s = solve_lp(lp, opt.simplex);
    if (s.status == LpStatus::infeasible) {
        throw EstimationError(EstimationError::Kind::infeasible, std::string(what) + ": decoy constraints are inconsistent");
    }
    if (s.status != LpStatus::optimal) {
        throw EstimationError(
            EstimationError::Kind::solver_failure, std::string(what) + ": simplex stopped with " + to_string(s.status));
    }
    return s;
}

LpSolution lp_single(const Grid &grid, const IntensitySet &in, Sense sense, const LpOptions &opt, const char *what) {
    const int dim = opt.cutoff + 1;
    LpProblem lp(num_decoy_rows(opt), dim * dim);
    add_decoy_rows(lp, 0, 0, grid, in, opt);
    lp.cost[dim + 1] = sense == Sense::min ? 1.0 : -1.0;
    return checked_solve(lp, opt, what);
}

// b_11 bound under the E Q rows and the coupling b_nm <= Y_nm, where Y must
// satisfy the Q rows. The coupling is checked lazily: the relaxed optimum b*
// is kept when some feasible Y dominates it, otherwise the joint program is solved.
double lp_error_yield(const ObservationIntervals &obs, Sense sense, const LpOptions &opt) {
    const int dim = opt.cutoff + 1;
    const int vars = dim * dim;
    const IntensitySet &in = obs.intensities;
    LpSolution relaxed = lp_single(obs.z_error_gain, in, sense, opt, "error-weighted yield");

    LpProblem feas(num_decoy_rows(opt), vars);
    add_decoy_rows(feas, 0, 0, obs.z_gain, in, opt);
    for (int k = 0; k < vars; k++) feas.col_lo[k] = relaxed.x[k];
    if (solve_lp(feas, opt.simplex).status == LpStatus::optimal) return relaxed.x[dim + 1];

    const int rows = 2 * num_decoy_rows(opt);
    LpProblem joint(rows + vars, 2 * vars);
    add_decoy_rows(joint, 0, 0, obs.z_gain, in, opt);
    add_decoy_rows(joint, num_decoy_rows(opt), vars, obs.z_error_gain, in, opt);
    for (int k = 0; k < vars; k++) {
        joint.at(rows + k, k) = 1.0;
        joint.at(rows + k, vars + k) = -1.0;
        joint.row_lo[rows + k] = 0.0;
        joint.row_hi[rows + k] = 1.0;
    }
    joint.cost[vars + dim + 1] = sense == Sense::min ? 1.0 : -1.0;
    return checked_solve(joint, opt, "coupled error-weighted yield").x[vars + dim + 1];
}

const Grid &pair_grid(const ObservationIntervals &obs, PairForm form) {
    return obs.pair_gain[bell_channel_index(canonical_channel(form))];
}

}  // namespace

const char *to_string(DataMode mode) {
    return mode == DataMode::exact ? "exact" : "fluctuated";
}

const char *to_string(Method method) {
    return method == Method::analytic ? "analytic" : "lp";
}

ObservationIntervals ObservationIntervals::exact(const ObservationSet &obs) {
    ObservationIntervals out;
    out.intensities = obs.intensities;
    out.mode = DataMode::exact;
    for (int i = 0; i < kNumIntensities; i++) {
        for (int j = 0; j < kNumIntensities; j++) {
            out.z_gain[i][j] = {obs.z_gain[i][j], obs.z_gain[i][j]};
            out.z_error_gain[i][j] = {obs.z_error_gain[i][j], obs.z_error_gain[i][j]};
            for (int c = 0; c < kNumBellChannels; c++) {
                out.pair_gain[c][i][j] = {obs.pair_gain[c][i][j], obs.pair_gain[c][i][j]};
            }
        }
    }
    return out;
}

ObservationSet observe(const SystemParams &params, const IntensitySet &intensities) {
    ObservationSet obs;
    obs.intensities = intensities;
    const auto channels = all_bell_channels();
    for (int i = 0; i < kNumIntensities; i++) {
        for (int j = 0; j < kNumIntensities; j++) {
            double mu = intensities.at(i), nu = intensities.at(j);
            ZGains z = z_gains(mu, nu, params);
            obs.z_gain[i][j] = z.q_total;
            obs.z_error_gain[i][j] = z.error_gain(params.e_d);
            for (int c = 0; c < kNumBellChannels; c++) {
                obs.pair_gain[c][i][j] = pair_gain_closed(channels[c], mu, nu, params).value;
            }
        }
    }
    return obs;
}

double n_sigma_from_epsilon(double epsilon) {
    if (!(epsilon > 0 && epsilon < 1)) throw std::domain_error("epsilon must lie in (0, 1)");
    double lo = 0, hi = 40;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; k++) {
        double mid = 0.5 * (lo + hi);
        (std::erfc(mid / std::sqrt(2.0)) > epsilon ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ObservationIntervals fluctuate(
    const ObservationSet &obs, const FiniteDataParams &finite, double epsilon, const FluctuationOptions &options) {
    validate(finite);
    const double n = finite.n_sigma ? *finite.n_sigma : n_sigma_from_epsilon(epsilon);
    const double pulses = finite.pulses_per_channel;
    ObservationIntervals out = ObservationIntervals::exact(obs);
    out.mode = DataMode::fluctuated;
    auto widen = [&](double q) {
        double half = n * std::sqrt(q / pulses);
        if (q > 0 && q - half < 0) out.flags |= flags::kIntervalLowerClamped;
        return clamp_unit(q - half, q + half);
    };
    for (int i = 0; i < kNumIntensities; i++) {
        for (int j = 0; j < kNumIntensities; j++) {
            out.z_gain[i][j] = widen(obs.z_gain[i][j]);
            out.z_error_gain[i][j] = widen(obs.z_error_gain[i][j]);
            if (!options.fluctuate_pair_gains) continue;
            for (int c = 0; c < kNumBellChannels; c++) out.pair_gain[c][i][j] = widen(obs.pair_gain[c][i][j]);
        }
    }
    return out;
}

Interval analytic_yield(const Grid &grid, const IntensitySet &in) {
    check_ladder(in);
    const double m1 = in.mu1, m2 = in.mu2;
    const double d = m1 * m1 * m2 * m2 * (m2 - m1);
    const double m1c = m1 * m1 * m1, m2c = m2 * m2 * m2;
    // [m2^3 G(m1) - m1^3 G(m2)] / (m1^2 m2^2 (m2 - m1)),
    // G(m) = e^{2m} Q_mm + Q_00 - e^m (Q_m0 + Q_0m)
    IntensityGrid<double> wl{};
    wl[1][1] = m2c * std::exp(2 * m1) / d;
    wl[1][0] = wl[0][1] = -m2c * std::exp(m1) / d;
    wl[2][2] = -m1c * std::exp(2 * m2) / d;
    wl[2][0] = wl[0][2] = m1c * std::exp(m2) / d;
    wl[0][0] = (m2c - m1c) / d;
    // G(m1) / m1^2
    IntensityGrid<double> wu{};
    wu[1][1] = std::exp(2 * m1) / (m1 * m1);
    wu[1][0] = wu[0][1] = -std::exp(m1) / (m1 * m1);
    wu[0][0] = 1 / (m1 * m1);
    return {worst_case(grid, wl, true), worst_case(grid, wu, false)};
}

SinglePhotonEstimates analytic_bounds(const ObservationIntervals &obs) {
    SinglePhotonEstimates est;
    est.method = Method::analytic;
    est.data_mode = obs.mode;
    est.flags = obs.flags;
    Interval y = analytic_yield(obs.z_gain, obs.intensities);
    est.y11_lower = y.lo;
    if (y.lo < 0) {
        est.y11_lower = 0;
        est.flags |= flags::kY11LowerClamped;
    }
    est.y11_upper = y.hi;
    double b = analytic_yield(obs.z_error_gain, obs.intensities).lo;
    if (b < 0) {
        b = 0;
        est.flags |= flags::kE11LowerClamped;
    }
    if (!(y.hi > 0)) {
        est.y11_upper = std::max(y.hi, 0.0);
        est.e11_lower = 0;
        est.flags |= flags::kDegenerate;
        return est;
    }
    est.e11_lower = b / y.hi;
    if (est.e11_lower > 0.5) {
        est.e11_lower = 0.5;
        est.flags |= flags::kE11LowerClamped;
    }
    return est;
}

double s11_from_pair_bounds(const std::array<Interval, kNumPairForms> &y, double e_d) {
    auto family = [&](PairForm hh, PairForm hv) {
        const Interval &a = y[static_cast<int>(hh)];
        const Interval &b = y[static_cast<int>(hv)];
        double den = a.hi + b.hi;
        if (!(den > 0)) {
            throw EstimationError(
                EstimationError::Kind::degenerate, std::string("zero pair-yield sum for ") + to_string(hh));
        }
        return (b.lo - a.hi) / den;
    };
    return 2 * (1 - 2 * e_d) *
           (family(PairForm::A1B1_HH, PairForm::A1B1_HV) + family(PairForm::A2B1_HH, PairForm::A2B1_HV));
}

double analytic_s11_lower(const ObservationIntervals &obs, double e_d) {
    std::array<Interval, kNumPairForms> y;
    for (int f = 0; f < kNumPairForms; f++) {
        y[f] = analytic_yield(pair_grid(obs, PairForm(f)), obs.intensities);
        if (y[f].lo < 0) y[f].lo = 0;
    }
    return s11_from_pair_bounds(y, e_d);
}

double lp_bound(const ObservationIntervals &obs, const LpTarget &target, Sense sense, const LpOptions &options) {
    check_ladder(obs.intensities);
    if (options.cutoff < 2) throw std::invalid_argument("LP photon-number cutoff must be >= 2");
    const int idx = options.cutoff + 2;
    switch (target.kind) {
        case LpTarget::Kind::z_yield:
            return lp_single(obs.z_gain, obs.intensities, sense, options, "Z yield").x[idx];
        case LpTarget::Kind::z_error_yield:
            return lp_error_yield(obs, sense, options);
        case LpTarget::Kind::pair_yield:
            return lp_single(pair_grid(obs, target.form), obs.intensities, sense, options, to_string(target.form)).x[idx];
    }
    throw std::logic_error("unknown LP target");
}

namespace {

std::array<Interval, kNumPairForms> lp_pair_yields(const ObservationIntervals &obs, const LpOptions &options) {
    std::array<Interval, kNumPairForms> y;
    for (int f = 0; f < kNumPairForms; f++) {
        LpTarget t{LpTarget::Kind::pair_yield, PairForm(f)};
        y[f] = {lp_bound(obs, t, Sense::min, options), lp_bound(obs, t, Sense::max, options)};
    }
    return y;
}

}  // namespace

double lp_s11_lower(const ObservationIntervals &obs, double e_d, const LpOptions &options) {
    return s11_from_pair_bounds(lp_pair_yields(obs, options), e_d);
}

SinglePhotonEstimates estimate(const ObservationIntervals &obs, double e_d, Method method, const LpOptions &options) {
    SinglePhotonEstimates est;
    if (method == Method::analytic) {
        est = analytic_bounds(obs);
        for (int f = 0; f < kNumPairForms; f++) {
            est.pair_yields[f] = analytic_yield(pair_grid(obs, PairForm(f)), obs.intensities);
            if (est.pair_yields[f].lo < 0) {
                est.pair_yields[f].lo = 0;
                est.flags |= flags::kPairYieldClamped;
            }
        }
    } else {
        est.method = Method::lp;
        est.data_mode = obs.mode;
        est.flags = obs.flags;
        est.y11_lower = lp_bound(obs, {LpTarget::Kind::z_yield}, Sense::min, options);
        est.y11_upper = lp_bound(obs, {LpTarget::Kind::z_yield}, Sense::max, options);
        double b = lp_bound(obs, {LpTarget::Kind::z_error_yield}, Sense::min, options);
        if (est.y11_upper > 0) {
            est.e11_lower = b / est.y11_upper;
            if (est.e11_lower > 0.5) {
                est.e11_lower = 0.5;
                est.flags |= flags::kE11LowerClamped;
            }
        } else {
            est.flags |= flags::kDegenerate;
        }
        est.pair_yields = lp_pair_yields(obs, options);
    }
    try {
        est.s11_lower = s11_from_pair_bounds(est.pair_yields, e_d);
    } catch (const EstimationError &e) {
        if (e.kind() != EstimationError::Kind::degenerate) throw;
        est.s11_lower = 0;
        est.flags |= flags::kDegenerate;
    }
    return est;
}

}  // namespace bellqkd
