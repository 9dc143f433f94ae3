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

#include "bellqkd/single_photon.h"

#include <cmath>

namespace bellqkd {

namespace {

double sq(double v) {
    return v * v;
}

}  // namespace

SinglePhotonYields y11_e11(const SystemParams &params) {
    auto [ea, eb] = transmittance(params);
    const double p_d = params.p_d;
    const double u = 1.0 - p_d;
    const double e0 = 0.5;
    double y = u * u * (ea * eb / 2 + (2 * ea + 2 * eb - 3 * ea * eb) * p_d + 4 * (1 - ea) * (1 - eb) * p_d * p_d);
    double ey = e0 * y - (e0 - params.e_d) * u * u * (1 - 2 * p_d) * ea * eb / 2;
    return {y, y > 0 ? ey / y : e0};
}

double yield11_states(const Eigenstate &alice, const Eigenstate &bob, const SystemParams &params) {
    auto [ea, eb] = transmittance(params);
    const double u = 1.0 - params.p_d;
    const double ah = alice.c_h, av = alice.c_v, bh = bob.c_h, bv = bob.c_v;
    // Inclusion-exclusion over "1H and 2V click" and "2H and 1V click", each
    // photon lost independently, dark counts on all four detectors. Expanded
    // in powers of p_d so the O(1) terms cancel analytically.
    const double p = (1 + ah * ah) / 2, pc = (1 + av * av) / 2;
    const double q = (1 + bh * bh) / 2, qc = (1 + bv * bv) / 2;
    const double x = sq(ah * bh - av * bv), y2 = sq(av * bv), y3 = sq(ah * bh);
    const double k0 = 1.25 + (x - y2 - y3) / 4 - p * q - pc * qc;
    const double k1 = p * q + pc * qc + (y2 + y3) / 4 - 2;
    const double p_d = params.p_d;
    double v = 0.5 * u * u *
               (ea * eb * k0 + p_d * (ea / 2 + eb / 2 + ea * eb * k1) + p_d * p_d * (1 - ea) * (1 - eb));
    return v < 0 ? 0.0 : v;
}

double yield11_pair(const BellChannel &channel, const SystemParams &params) {
    pair_form(channel);  // rejects non-Bell settings
    return yield11_states(
        eigenstate(channel.alice, channel.alice_sign), eigenstate(channel.bob, channel.bob_sign), params);
}

double correlator(SettingLabel alice, SettingLabel bob, const SystemParams &params) {
    double same = 0, opposite = 0;
    for (int sa : {+1, -1}) {
        for (int sb : {+1, -1}) {
            double y = yield11_pair({alice, sa, bob, sb}, params);
            (sa == sb ? same : opposite) += y;
        }
    }
    double total = same + opposite;
    if (total <= 0) {
        throw DegenerateChannelError(
            std::string("all single-photon yields vanish for ") + to_string(alice) + to_string(bob));
    }
    return (1 - 2 * params.e_d) * (same - opposite) / total;
}

double bell_s11(const SystemParams &params) {
    using S = SettingLabel;
    return correlator(S::A2, S::B2, params) - correlator(S::A2, S::B1, params) - correlator(S::A1, S::B2, params) -
           correlator(S::A1, S::B1, params);
}

SinglePhotonTruth single_photon_truth(const SystemParams &params, const IntensitySet &intensities) {
    SinglePhotonTruth t;
    auto [y, e] = y11_e11(params);
    t.y11_z = y;
    t.e11_bz = e;
    const double mu = intensities.mu2;
    t.q11_z = mu * mu * std::exp(-2 * mu) * y;
    const SettingLabel as[2] = {SettingLabel::A1, SettingLabel::A2};
    const SettingLabel bs[2] = {SettingLabel::B1, SettingLabel::B2};
    for (int k = 0; k < 2; k++) {
        for (int l = 0; l < 2; l++) t.correlators[k][l] = correlator(as[k], bs[l], params);
    }
    t.s11 = t.correlators[1][1] - t.correlators[1][0] - t.correlators[0][1] - t.correlators[0][0];
    for (int f = 0; f < kNumPairForms; f++) t.pair_yields[f] = yield11_pair(canonical_channel(PairForm(f)), params);
    return t;
}

}  // namespace bellqkd
