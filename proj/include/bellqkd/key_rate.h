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

#ifndef BELLQKD_KEY_RATE_H
#define BELLQKD_KEY_RATE_H

#include "bellqkd/decoy.h"
#include "bellqkd/params.h"

namespace bellqkd {

/// H(p) = -p log2 p - (1-p) log2(1-p); throws std::domain_error outside [0, 1].
double binary_entropy(double p);

struct PhaseError {
    double value = 0;
    bool clamped = false;
};

/// e^BX = 1 - e11 - s11 / (2 sqrt 2), clamped into [0, 1/2].
PhaseError phase_error_from_bell(double e11, double s11);

/// q11 [1 - H(e^BX)] - q f H(e).
double rate_p1(double q11, double e11, double s11, double q_mu_nu, double e_mu_nu, double f);

/// q11 [1 - log2(1 + sqrt(2 - s11^2/4))] - q f H(e). Throws std::domain_error
/// for s11 outside [0, 2 sqrt 2].
double rate_p2(double q11, double s11, double q_mu_nu, double e_mu_nu, double f);

/// 1/2 + 1/2 sqrt(2 - s^2/4) for s in [0, 2 sqrt 2].
double guessing_probability(double s);

/// Standard MDI-QKD rate, which coincides with rate_p1.
double rate_mdi_baseline(double q11, double e11, double s11, double q_mu_nu, double e_mu_nu, double f);

/// 1 - H(e_bz) - H(e_bx).
double edp_rate(double e_bz, double e_bx);

/// Holevo quantity H(e^BX) bounding Eve's information.
double holevo_chi(double e_bx);

struct KeyRateResult {
    double r_p1 = 0;
    double r_p2 = 0;
    double r_mdi = 0;
    double q11_z = 0;
    double e11 = 0;
    double s11 = 0;  ///< after clamping into [0, 2 sqrt 2]
    double q_mu_nu = 0;
    double e_mu_nu = 0;
    double phase_error = 0;
    unsigned flags = 0;
};

/// Rates from single-photon inputs and the signal-pair gain and QBER. s11 is
/// clamped into [0, 2 sqrt 2] (flagged) before use.
KeyRateResult key_rates(double q11, double e11, double s11, double q_mu_nu, double e_mu_nu, double f);

}  // namespace bellqkd

#endif
