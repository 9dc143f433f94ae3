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

#ifndef BELLQKD_SINGLE_PHOTON_H
#define BELLQKD_SINGLE_PHOTON_H

#include <array>
#include <stdexcept>
#include <string>

#include "bellqkd/detection.h"
#include "bellqkd/params.h"

namespace bellqkd {

/// All four yields of a Bell channel family are zero, so the correlator is 0/0.
class DegenerateChannelError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct SinglePhotonYields {
    double y11_z = 0;   ///< Y11^Z
    double e11_bz = 0;  ///< e11^BZ
};

/// Z-basis single-photon yield and bit error rate in the infinite-decoy limit.
SinglePhotonYields y11_e11(const SystemParams &params);

/// psi- yield of one Bell channel when Alice and Bob each send exactly one
/// photon. Carries the same 1/4 eigenstate-pair weight as the coherent gains,
/// so it is the mu*nu coefficient of e^{mu+nu} Q^{mu nu psi-}.
double yield11_pair(const BellChannel &channel, const SystemParams &params);

/// Single-photon yield for an arbitrary pair of real polarization states.
double yield11_states(const Eigenstate &alice, const Eigenstate &bob, const SystemParams &params);

/// <A_k B_l> on single-photon psi- events, including the (1 - 2 e_d) factor.
/// Throws DegenerateChannelError when all four yields vanish.
double correlator(SettingLabel alice, SettingLabel bob, const SystemParams &params);

/// S11 = <A2B2> - <A2B1> - <A1B2> - <A1B1>.
double bell_s11(const SystemParams &params);

struct SinglePhotonTruth {
    double y11_z = 0;
    double e11_bz = 0;
    double q11_z = 0;  ///< mu nu e^{-mu-nu} Y11^Z at the signal intensities
    /// correlators[k][l] = <A_{k+1} B_{l+1}>
    std::array<std::array<double, 2>, 2> correlators{};
    double s11 = 0;
    /// Pair yields of the four canonical channels, indexed by PairForm.
    std::array<double, kNumPairForms> pair_yields{};
};

SinglePhotonTruth single_photon_truth(const SystemParams &params, const IntensitySet &intensities);

}  // namespace bellqkd

#endif
