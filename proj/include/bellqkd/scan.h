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

#ifndef BELLQKD_SCAN_H
#define BELLQKD_SCAN_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellqkd/decoy.h"
#include "bellqkd/key_rate.h"
#include "bellqkd/params.h"

namespace bellqkd {

enum class ScanMode { asymptotic_ideal, two_decoy_asymptotic, two_decoy_finite };

const char *to_string(ScanMode mode);
/// Throws ConfigError on an unknown name.
ScanMode parse_scan_mode(std::string_view name);
Method parse_method(std::string_view name);

struct Protocols {
    bool p1 = true;
    bool p2 = true;
    bool mdi = true;
};

/// Comma-separated subset of {p1, p2, mdi}.
Protocols parse_protocols(std::string_view list);

/// "START:STOP:STEP" (inclusive of STOP up to rounding) or a comma-separated list.
std::vector<double> parse_distances(std::string_view text);

/// Replace the closed-form observations by Monte Carlo frequencies.
struct SyntheticSource {
    uint64_t pulses = 1000000;  ///< per channel
    uint64_t seed = 1;
};

struct ScanSpec {
    std::vector<double> distances;
    ScanMode mode = ScanMode::two_decoy_asymptotic;
    Method estimator = Method::analytic;
    Protocols protocols;
    LpOptions lp;
    FluctuationOptions fluctuation;
    std::optional<SyntheticSource> synthetic;
    int threads = 1;
};

struct ScanRow {
    double distance_km = 0;
    double eta = 0;
    double q_mu_nu = 0;
    double e_mu_nu = 0;
    double y11_lower = 0;
    double e11_lower = 0;
    double s11_lower = 0;
    double r_p1 = 0;  ///< max(r_p1_raw, 0)
    double r_p2 = 0;
    double r_mdi = 0;
    double r_p1_raw = 0;
    double r_p2_raw = 0;
    unsigned flags = 0;
    bool infeasible = false;
};

/// One row per distance, in input order. Estimation failures mark the row
/// (flags, NaN estimates) without stopping the scan.
std::vector<ScanRow> run_scan(const ScanSpec &spec, const Config &config);

/// Evaluates a single distance point.
ScanRow scan_point(const ScanSpec &spec, const Config &config, double distance_km);

inline constexpr const char *kCsvHeader =
    "distance_km,eta,q_mu_nu,e_mu_nu,y11_lower,e11_lower,s11_lower,r_p1,r_p2,r_mdi,r_p1_raw,r_p2_raw,flags";

/// Rate columns of protocols not selected are left empty (CSV) or null (JSON).
std::string emit_csv(const std::vector<ScanRow> &rows, const Protocols &protocols = {});
std::string emit_json(const std::vector<ScanRow> &rows, const Protocols &protocols = {});

/// %.17g, or "nan" / "inf" spelled out.
std::string format_double(double v);

}  // namespace bellqkd

#endif
