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

#ifndef BELLQKD_PARAMS_H
#define BELLQKD_PARAMS_H

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace bellqkd {

/// Detector, channel and protocol constants. Defaults are the standard
/// simulation set (40% detectors, 0.2 dB/km fiber, 1.5% misalignment).
struct SystemParams {
    double eta_d = 0.4;        ///< detector efficiency
    double beta = 0.2;         ///< fiber loss, dB/km
    double distance_km = 0.0;  ///< total Alice-Bob separation; Charlie sits at the midpoint
    double e_d = 0.015;        ///< misalignment error probability
    double p_d = 3e-6;         ///< background count per detector per gate
    double f = 1.16;           ///< error-correction inefficiency
    double epsilon = 1e-10;    ///< security / failure bound

    bool operator==(const SystemParams &) const = default;
};

/// Vacuum + decoy + signal ladder, shared by Alice and Bob.
struct IntensitySet {
    double mu2 = 0.3;   ///< signal
    double mu1 = 0.01;  ///< decoy
    double mu0 = 0.0;   ///< vacuum

    /// Intensity by ladder index (0 = vacuum, 1 = decoy, 2 = signal).
    double at(int index) const;
    bool operator==(const IntensitySet &) const = default;
};

inline constexpr int kNumIntensities = 3;

struct FiniteDataParams {
    double pulses_per_channel = 1e14;  ///< N, pulse pairs per intensity-and-setting channel
    /// Confidence multiplier; empty means derive it from SystemParams::epsilon.
    std::optional<double> n_sigma;

    bool operator==(const FiniteDataParams &) const = default;
};

/// Full configuration as read from a config file.
struct Config {
    SystemParams system;
    IntensitySet intensities;
    std::optional<FiniteDataParams> finite;

    bool operator==(const Config &) const = default;
};

enum class SettingLabel { A1, A2, B0, B1, B2 };

const char *to_string(SettingLabel s);

/// Half of the Bloch-circle angle of a setting, in units of pi/8. The
/// positive eigenstate is (cos(h), sin(h)) with h = half_angle_eighths * pi/8.
int half_angle_eighths(SettingLabel s);

/// Real polarization amplitudes (c_H, c_V) of one eigenstate.
struct Eigenstate {
    int sign = +1;  ///< +1: H-like (positive eigenvalue), -1: V-like
    double c_h = 1.0;
    double c_v = 0.0;
};

/// Eigenstate of `setting` with eigenvalue `sign`. Components come from a
/// fixed table of pi/8 multiples.
Eigenstate eigenstate(SettingLabel setting, int sign);

namespace constants {
inline constexpr double kCosPi8 = 0.92387953251128675613;   // cos(pi/8)
inline constexpr double kCos3Pi8 = 0.38268343236508977173;  // cos(3pi/8) = sin(pi/8)
inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kTwoSqrt2 = 2.82842712474619009760;  // Tsirelson bound
}  // namespace constants

/// Reported for any violated configuration invariant; carries the line number
/// when the problem came from a configuration document.
class ConfigError : public std::runtime_error {
   public:
    explicit ConfigError(const std::string &message, int line = 0);
    int line() const { return line_; }

   private:
    int line_;
};

/// Total efficiency of each arm, eta_d * 10^(-beta L / 20). Symmetric
/// placement, so both components are equal.
std::pair<double, double> transmittance(const SystemParams &params);

/// Throws ConfigError naming the first violated invariant.
void validate(const SystemParams &params);
void validate(const SystemParams &params, const IntensitySet &intensities);
void validate(const FiniteDataParams &finite);
void validate(const Config &config);

/// Parses the flat key=value format. Missing keys keep their defaults; the
/// finite-data block is present only when pulses_per_channel is given.
Config parse_config(std::string_view text);

/// Inverse of parse_config for every field it understands.
std::string serialize_config(const Config &config);

}  // namespace bellqkd

#endif
