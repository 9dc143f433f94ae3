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

#ifndef BELLQKD_DETECTION_H
#define BELLQKD_DETECTION_H

#include <array>

#include "bellqkd/params.h"

namespace bellqkd {

/// Modified Bessel function I0 for x >= 0. Power series up to x = 15, the
/// Hankel asymptotic expansion above; relative error below 1e-12.
double bessel_i0(double x);

/// I0(x) - 1 without cancellation for small x.
double bessel_i0m1(double x);

/// Z-basis (A1, B0) gains for one intensity pair.
struct ZGains {
    double q_correct = 0;  ///< Q^CZ, orthogonal polarizations
    double q_error = 0;    ///< Q^EZ, equal polarizations
    double q_total = 0;    ///< Q^Z
    double qber = 0;       ///< E^Z; 1/2 when q_total == 0

    /// E^Z * Q^Z = e_d Q^CZ + (1 - e_d) Q^EZ.
    double error_gain(double e_d) const;
};

ZGains z_gains(double mu_i, double nu_j, const SystemParams &params);

/// Mean photon numbers arriving at detectors 1H, 1V, 2H, 2V after the 50:50
/// beam splitter, for relative phase phi between Alice's and Bob's pulses.
struct ModeIntensities {
    double h1 = 0;
    double v1 = 0;
    double h2 = 0;
    double v2 = 0;
};

ModeIntensities mode_intensities(
    const Eigenstate &alice, const Eigenstate &bob, double mu_i, double nu_j, double phi, const SystemParams &params);

/// Threshold-detector click probability 1 - (1 - p_d) exp(-lambda).
double click_probability(double lambda, double p_d);

/// One Bell-test channel: Alice's setting and eigenvalue, Bob's setting and
/// eigenvalue. Alice uses A1/A2, Bob B1/B2.
struct BellChannel {
    SettingLabel alice = SettingLabel::A1;
    int alice_sign = +1;
    SettingLabel bob = SettingLabel::B1;
    int bob_sign = +1;

    bool operator==(const BellChannel &) const = default;
};

inline constexpr int kNumBellChannels = 16;

/// Dense index in [0, 16) and its inverse. Throws std::invalid_argument for
/// settings outside {A1, A2} x {B1, B2}.
int bell_channel_index(const BellChannel &channel);
BellChannel bell_channel_at(int index);
std::array<BellChannel, kNumBellChannels> all_bell_channels();

/// The four distinct psi- gain expressions. Every Bell channel equals one of
/// them under the eigenstate symmetry table.
enum class PairForm { A1B1_HH, A1B1_HV, A2B1_HH, A2B1_HV };
inline constexpr int kNumPairForms = 4;

PairForm pair_form(const BellChannel &channel);
BellChannel canonical_channel(PairForm form);
const char *to_string(PairForm form);

struct PairGain {
    BellChannel channel;
    double mu_i = 0;
    double nu_j = 0;
    double value = 0;  ///< Q^{mu_i nu_j psi-} including the 1/4 eigenstate-pair weight
};

/// Phase-averaged psi- gain from the closed forms, after mapping the channel
/// through the symmetry table.
PairGain pair_gain_closed(const BellChannel &channel, double mu_i, double nu_j, const SystemParams &params);

/// Same quantity by direct numerical phase averaging of the four-detector
/// click model with the channel's actual eigenstates.
PairGain pair_gain_quadrature(const BellChannel &channel, double mu_i, double nu_j, const SystemParams &params);

}  // namespace bellqkd

#endif
