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

#include "bellqkd/params.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace bellqkd {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void reject(const char *field, double value, const char *why) {
    throw ConfigError(std::string(field) + "=" + fmt(value) + ": " + why);
}

std::string_view trim(std::string_view s) {
    size_t b = 0;
    while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) {
        b++;
    }
    size_t e = s.size();
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
        e--;
    }
    return s.substr(b, e - b);
}

// cos and sin of k*pi/8 for the half angles that occur in the setting table.
struct HalfAngle {
    double c;
    double s;
};

HalfAngle half_angle(int eighths) {
    using namespace constants;
    switch (eighths) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {kCosPi8, kCos3Pi8};
        case -1:
            return {kCosPi8, -kCos3Pi8};
        case 2:
            return {kInvSqrt2, kInvSqrt2};
    }
    throw std::logic_error("no tabulated half angle");
}

}  // namespace

ConfigError::ConfigError(const std::string &message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {
}

double IntensitySet::at(int index) const {
    switch (index) {
        case 0:
            return mu0;
        case 1:
            return mu1;
        case 2:
            return mu2;
    }
    throw std::out_of_range("intensity index must be 0, 1 or 2");
}

const char *to_string(SettingLabel s) {
    switch (s) {
        case SettingLabel::A1:
            return "A1";
        case SettingLabel::A2:
            return "A2";
        case SettingLabel::B0:
            return "B0";
        case SettingLabel::B1:
            return "B1";
        case SettingLabel::B2:
            return "B2";
    }
    return "?";
}

int half_angle_eighths(SettingLabel s) {
    switch (s) {
        case SettingLabel::A1:
        case SettingLabel::B0:
            return 0;
        case SettingLabel::A2:
            return 2;
        case SettingLabel::B1:
            return 1;
        case SettingLabel::B2:
            return -1;
    }
    throw std::logic_error("unknown setting");
}

Eigenstate eigenstate(SettingLabel setting, int sign) {
    HalfAngle h = half_angle(half_angle_eighths(setting));
    if (sign > 0) {
        return {+1, h.c, h.s};
    }
    // Orthogonal partner, rotated by +pi/2 on the amplitude circle.
    return {-1, h.s == 0.0 ? 0.0 : -h.s, h.c};
}

std::pair<double, double> transmittance(const SystemParams &params) {
    double eta = params.eta_d * std::pow(10.0, -params.beta * params.distance_km / 20.0);
    return {eta, eta};
}

void validate(const SystemParams &p) {
    if (!(p.eta_d > 0 && p.eta_d <= 1)) reject("eta_d", p.eta_d, "must lie in (0, 1]");
    if (!(p.beta >= 0 && std::isfinite(p.beta))) reject("beta", p.beta, "must be >= 0");
    if (!(p.distance_km >= 0 && std::isfinite(p.distance_km))) reject("distance_km", p.distance_km, "must be >= 0");
    if (!(p.e_d >= 0 && p.e_d < 0.5)) reject("e_d", p.e_d, "misalignment must lie in [0, 1/2)");
    if (!(p.p_d >= 0 && p.p_d < 1)) reject("p_d", p.p_d, "must lie in [0, 1)");
    if (!(p.f >= 1 && std::isfinite(p.f))) reject("f", p.f, "must be >= 1");
    if (!(p.epsilon > 0 && p.epsilon < 1)) reject("epsilon", p.epsilon, "must lie in (0, 1)");
}

void validate(const SystemParams &params, const IntensitySet &in) {
    validate(params);
    if (in.mu0 != 0.0) reject("mu0", in.mu0, "vacuum intensity must be 0");
    if (!(in.mu1 > in.mu0 && std::isfinite(in.mu1))) reject("nu", in.mu1, "decoy intensity must be > 0");
    if (!(in.mu2 > in.mu1 && std::isfinite(in.mu2))) reject("mu", in.mu2, "signal must exceed decoy (ladder not increasing)");
}

void validate(const FiniteDataParams &finite) {
    if (!(finite.pulses_per_channel >= 1 && std::isfinite(finite.pulses_per_channel))) {
        reject("pulses_per_channel", finite.pulses_per_channel, "must be >= 1");
    }
    if (finite.n_sigma && !(*finite.n_sigma > 0)) reject("n_sigma", *finite.n_sigma, "must be > 0");
}

void validate(const Config &config) {
    validate(config.system, config.intensities);
    if (config.finite) validate(*config.finite);
}

Config parse_config(std::string_view text) {
    Config config;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        line_no++;

        if (size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(line) + "'", line_no);
        std::string_view key = trim(line.substr(0, eq));
        std::string_view raw = trim(line.substr(eq + 1));

        double value = 0;
        auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (raw.empty() || ec != std::errc() || end != raw.data() + raw.size()) {
            throw ConfigError("cannot parse number '" + std::string(raw) + "' for key " + std::string(key), line_no);
        }
        if (!seen.insert(std::string(key)).second) throw ConfigError("duplicate key " + std::string(key), line_no);

        SystemParams &s = config.system;
        if (key == "eta_d") {
            s.eta_d = value;
        } else if (key == "beta") {
            s.beta = value;
        } else if (key == "distance_km") {
            s.distance_km = value;
        } else if (key == "e_d") {
            s.e_d = value;
        } else if (key == "p_d") {
            s.p_d = value;
        } else if (key == "f") {
            s.f = value;
        } else if (key == "epsilon") {
            s.epsilon = value;
        } else if (key == "mu") {
            config.intensities.mu2 = value;
        } else if (key == "nu") {
            config.intensities.mu1 = value;
        } else if (key == "pulses_per_channel") {
            config.finite = FiniteDataParams{value, std::nullopt};
        } else {
            throw ConfigError("unknown key " + std::string(key), line_no);
        }
    }
    return config;
}

std::string serialize_config(const Config &config) {
    std::ostringstream out;
    const SystemParams &s = config.system;
    out << "eta_d=" << fmt(s.eta_d) << "\n";
    out << "beta=" << fmt(s.beta) << "\n";
    out << "distance_km=" << fmt(s.distance_km) << "\n";
    out << "e_d=" << fmt(s.e_d) << "\n";
    out << "p_d=" << fmt(s.p_d) << "\n";
    out << "f=" << fmt(s.f) << "\n";
    out << "epsilon=" << fmt(s.epsilon) << "\n";
    out << "mu=" << fmt(config.intensities.mu2) << "\n";
    out << "nu=" << fmt(config.intensities.mu1) << "\n";
    if (config.finite) out << "pulses_per_channel=" << fmt(config.finite->pulses_per_channel) << "\n";
    return out.str();
}

}  // namespace bellqkd
