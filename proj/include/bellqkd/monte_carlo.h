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

#ifndef BELLQKD_MONTE_CARLO_H
#define BELLQKD_MONTE_CARLO_H

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bellqkd/decoy.h"
#include "bellqkd/detection.h"
#include "bellqkd/params.h"

namespace bellqkd {

/// Uniform doubles in [0, 1) from a 64-bit Mersenne Twister, 53 random bits each.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bit() { return (engine_() >> 63) != 0; }

   private:
    std::mt19937_64 engine_;
};

/// Seed of the independent stream used by channel `index`.
uint64_t channel_seed(uint64_t session_seed, uint64_t index);

enum class PulseOutcome { none, psi_minus, psi_plus, other };
const char *to_string(PulseOutcome outcome);

/// Source model of a session.
enum class SourceMode {
    coherent,       ///< phase-randomized weak coherent pulses
    single_photon,  ///< exactly one photon from each side
};

/// One coherent pulse pair through the beam splitter and the four threshold
/// detectors, with random phases.
PulseOutcome simulate_pulse(
    const Eigenstate &alice, const Eigenstate &bob, double mu, double nu, const SystemParams &params, Rng &rng);

/// One single-photon pair: independent loss, exact two-photon interference.
PulseOutcome simulate_photon_pair(
    const Eigenstate &alice, const Eigenstate &bob, const SystemParams &params, Rng &rng);

struct McChannel {
    enum class Kind { key, bell };
    Kind kind = Kind::key;
    int alice_intensity = 2;  ///< ladder index
    int bob_intensity = 2;
    SettingLabel alice = SettingLabel::A1;  ///< Bell channels only
    SettingLabel bob = SettingLabel::B1;

    std::string key() const;
};

struct SessionConfig {
    uint64_t pulses = 10000000;
    uint64_t seed = 1;
    SourceMode source = SourceMode::coherent;
    std::vector<McChannel> channels;
    int threads = 1;
};

struct Estimate {
    double value = 0;
    double std_error = 0;
};

struct ChannelCounts {
    McChannel channel;
    uint64_t sent = 0;
    uint64_t psi_minus = 0;
    uint64_t psi_plus = 0;
    uint64_t clicks = 0;  ///< total detector clicks
    /// Key channels: accepted (psi- or psi+) events recorded as bit errors.
    uint64_t errors = 0;
    /// Bell channels, indexed by 2 * (alice_sign < 0) + (bob_sign < 0).
    std::array<uint64_t, 4> pair_sent{};
    std::array<uint64_t, 4> pair_psi_minus{};
    /// Bell channels: psi- events whose recorded eigenvalues agree (after the
    /// misalignment flip) and disagree.
    uint64_t recorded_same = 0;
    uint64_t recorded_opposite = 0;

    /// Key: (psi- + psi+) / sent. Bell: psi- / sent.
    Estimate gain() const;
    /// Key: errors / accepted.
    Estimate qber() const;
    /// Key: errors / sent, the error-weighted gain E Q.
    Estimate error_gain() const;
    /// Joint frequency of psi- with the given eigenvalue pair, n / sent.
    /// Comparable to pair_gain_closed, which carries the 1/4 pair weight.
    Estimate pair_joint(int alice_sign, int bob_sign) const;
    /// Conditional frequency n / pair_sent, four times the joint one on average.
    Estimate pair_conditional(int alice_sign, int bob_sign) const;
    /// (same - opposite) / (same + opposite) of recorded eigenvalues.
    Estimate correlator() const;
};

struct SessionCounts {
    SourceMode source = SourceMode::coherent;
    uint64_t seed = 0;
    std::vector<ChannelCounts> channels;

    /// Throws std::out_of_range when the channel was not simulated.
    const ChannelCounts &find(const McChannel &channel) const;
    /// <A2B2> - <A2B1> - <A1B2> - <A1B1> from the Bell channels at the given intensities.
    Estimate s11(int alice_intensity = 2, int bob_intensity = 2) const;
};

/// Simulates every channel on its own RNG stream; bit-identical for a fixed
/// seed regardless of the thread count.
SessionCounts simulate_session(const SessionConfig &config, const SystemParams &params, const IntensitySet &intensities);

/// Key channels for all 9 intensity pairs and Bell channels for all 4 setting
/// pairs at all 9 intensity pairs.
std::vector<McChannel> full_channel_set();

/// Empirical ObservationSet from a coherent-source session covering
/// full_channel_set(). Throws std::invalid_argument for a missing channel or
/// one with zero pulses.
ObservationSet synthetic_observations(const SessionCounts &counts, const IntensitySet &intensities);

/// JSON document: {"source": ..., "seed": ..., "channels": {key: counts}}.
std::string session_to_json(const SessionCounts &counts);

}  // namespace bellqkd

#endif
