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

#include "bellqkd/key_rate.h"

#include <cmath>
#include <stdexcept>

#include "bellqkd/flags.h"

namespace bellqkd {

using constants::kTwoSqrt2;

double binary_entropy(double p) {
    if (!(p >= 0 && p <= 1)) throw std::domain_error("binary_entropy needs p in [0, 1]");
    if (p == 0 || p == 1) return 0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

PhaseError phase_error_from_bell(double e11, double s11) {
    double v = 1 - e11 - s11 / kTwoSqrt2;
    if (v < 0) return {0, true};
    if (v > 0.5) return {0.5, true};
    return {v, false};
}

double rate_p1(double q11, double e11, double s11, double q_mu_nu, double e_mu_nu, double f) {
    return q11 * (1 - binary_entropy(phase_error_from_bell(e11, s11).value)) - q_mu_nu * f * binary_entropy(e_mu_nu);
}

double rate_p2(double q11, double s11, double q_mu_nu, double e_mu_nu, double f) {
    if (!(s11 >= 0 && s11 <= kTwoSqrt2)) throw std::domain_error("rate_p2 needs s11 in [0, 2 sqrt 2]");
    double root = std::sqrt(std::max(0.0, 2 - s11 * s11 / 4));
    return q11 * (1 - std::log2(1 + root)) - q_mu_nu * f * binary_entropy(e_mu_nu);
}

double guessing_probability(double s) {
    if (!(s >= 0 && s <= kTwoSqrt2)) throw std::domain_error("guessing_probability needs s in [0, 2 sqrt 2]");
    return 0.5 + 0.5 * std::sqrt(std::max(0.0, 2 - s * s / 4));
}

double rate_mdi_baseline(double q11, double e11, double s11, double q_mu_nu, double e_mu_nu, double f) {
    return rate_p1(q11, e11, s11, q_mu_nu, e_mu_nu, f);
}

double holevo_chi(double e_bx) {
    return binary_entropy(e_bx);
}

double edp_rate(double e_bz, double e_bx) {
    return 1 - binary_entropy(e_bz) - holevo_chi(e_bx);
}

KeyRateResult key_rates(double q11, double e11, double s11, double q_mu_nu, double e_mu_nu, double f) {
    KeyRateResult r;
    r.q11_z = q11;
    r.e11 = e11;
    r.q_mu_nu = q_mu_nu;
    r.e_mu_nu = e_mu_nu;
    r.s11 = s11;
    if (s11 < 0) {
        r.s11 = 0;
        r.flags |= flags::kS11Clamped;
    } else if (s11 > kTwoSqrt2) {
        r.s11 = kTwoSqrt2;
        r.flags |= flags::kS11Clamped;
    }
    PhaseError pe = phase_error_from_bell(e11, r.s11);
    r.phase_error = pe.value;
    if (pe.clamped) r.flags |= flags::kPhaseErrorClamped;
    r.r_p1 = rate_p1(q11, e11, r.s11, q_mu_nu, e_mu_nu, f);
    r.r_p2 = rate_p2(q11, r.s11, q_mu_nu, e_mu_nu, f);
    r.r_mdi = rate_mdi_baseline(q11, e11, r.s11, q_mu_nu, e_mu_nu, f);
    return r;
}

}  // namespace bellqkd
