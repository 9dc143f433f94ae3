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

#include "bellqkd/detection.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellqkd {

namespace {

using constants::kCos3Pi8;
using constants::kCosPi8;
using constants::kSqrt2;

// 1 - (1 - p_d) e^{-lambda}, accurate when both p_d and lambda are tiny.
double no_click_complement(double p_d, double lambda) {
    return -std::expm1(std::log1p(-p_d) - lambda);
}

// Phase average of the psi- click patterns in the form
//   1/2 u^2 e^{-w/2} [I0(k1) - u e^{-d1} I0(k2) - u e^{-d2} I0(k3) + u^2 e^{-d1-d2}],
// u = 1 - p_d, d1 + d2 = w/2. Evaluated as
//   1/2 u^2 e^{-w/2} [j1 - (1-a) j2 - (1-b) j3 + a b]
// with j = I0 - 1, a = 1 - u e^{-d1}, b = 1 - u e^{-d2}, which is the same
// expression without the O(1) cancellation at low intensity.
struct PhaseAverageTerms {
    double half_omega;
    double k1;
    double d1;
    double k2;
    double d2;
    double k3;
};

double phase_average(const PhaseAverageTerms &t, double p_d) {
    double u = 1.0 - p_d;
    double a = no_click_complement(p_d, t.d1);
    double b = no_click_complement(p_d, t.d2);
    double j1 = bessel_i0m1(t.k1);
    double j2 = bessel_i0m1(t.k2);
    double j3 = bessel_i0m1(t.k3);
    double bracket = j1 - (1.0 - a) * j2 - (1.0 - b) * j3 + a * b;
    return 0.5 * u * u * std::exp(-t.half_omega) * bracket;
}

PhaseAverageTerms form_terms(PairForm form, double mu_eff, double nu_eff) {
    const double c2 = kCosPi8 * kCosPi8;
    const double s2 = kCos3Pi8 * kCos3Pi8;
    const double x = std::sqrt(mu_eff * nu_eff) / 2.0;
    const double half_omega = (mu_eff + nu_eff) / 2.0;
    switch (form) {
        case PairForm::A1B1_HH:
            return {half_omega, 2 * x * kCosPi8, (mu_eff + c2 * nu_eff) / 2, 0.0, s2 * nu_eff / 2, 2 * x * kCosPi8};
        case PairForm::A1B1_HV:
            return {half_omega, 2 * x * kCos3Pi8, (mu_eff + s2 * nu_eff) / 2, 0.0, c2 * nu_eff / 2, 2 * x * kCos3Pi8};
        case PairForm::A2B1_HH:
            return {
                half_omega,
                kSqrt2 * x * (kCosPi8 - kCos3Pi8),
                (mu_eff / 2 + c2 * nu_eff) / 2,
                kSqrt2 * x * kCos3Pi8,
                (mu_eff / 2 + s2 * nu_eff) / 2,
                kSqrt2 * x * kCosPi8};
        case PairForm::A2B1_HV:
            return {
                half_omega,
                kSqrt2 * x * (kCosPi8 + kCos3Pi8),
                (mu_eff / 2 + c2 * nu_eff) / 2,
                kSqrt2 * x * kCos3Pi8,
                (mu_eff / 2 + s2 * nu_eff) / 2,
                kSqrt2 * x * kCosPi8};
    }
    throw std::logic_error("unknown pair form");
}

int alice_slot(SettingLabel s) {
    if (s == SettingLabel::A1) return 0;
    if (s == SettingLabel::A2) return 1;
    throw std::invalid_argument(std::string("Alice setting outside the Bell test: ") + to_string(s));
}

int bob_slot(SettingLabel s) {
    if (s == SettingLabel::B1) return 0;
    if (s == SettingLabel::B2) return 1;
    throw std::invalid_argument(std::string("Bob setting outside the Bell test: ") + to_string(s));
}

}  // namespace

double bessel_i0m1(double x) {
    if (x < 0) throw std::domain_error("bessel_i0 requires x >= 0");
    if (x > 15.0) return bessel_i0(x) - 1.0;
    double q = x * x / 4.0;
    double term = q;
    double sum = 0.0;
    for (int k = 1; k < 200 && term > 1e-17 * sum; k++) {
        if (k > 1) term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term == 0.0) break;
    }
    return sum;
}

double bessel_i0(double x) {
    if (x < 0) throw std::domain_error("bessel_i0 requires x >= 0");
    if (x <= 15.0) return 1.0 + bessel_i0m1(x);
    // e^x / sqrt(2 pi x) * sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; k++) {
        double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * sum;
}

double ZGains::error_gain(double e_d) const {
    return e_d * q_correct + (1.0 - e_d) * q_error;
}

ZGains z_gains(double mu_i, double nu_j, const SystemParams &params) {
    auto [eta_a, eta_b] = transmittance(params);
    const double p_d = params.p_d;
    const double u = 1.0 - p_d;
    const double mu_eff = mu_i * eta_a;
    const double nu_eff = nu_j * eta_b;
    const double half_omega = (mu_eff + nu_eff) / 2.0;
    const double two_x = std::sqrt(mu_eff * nu_eff);

    ZGains g;
    g.q_correct = 2.0 * u * u * std::exp(-half_omega) * no_click_complement(p_d, mu_eff / 2.0) *
                  no_click_complement(p_d, nu_eff / 2.0);
    // I0(2x) - u e^{-w/2} = (I0(2x) - 1) + (1 - u e^{-w/2})
    g.q_error = 2.0 * p_d * u * u * std::exp(-half_omega) *
                (bessel_i0m1(two_x) + no_click_complement(p_d, half_omega));
    g.q_total = g.q_correct + g.q_error;
    g.qber = g.q_total > 0 ? g.error_gain(params.e_d) / g.q_total : 0.5;
    return g;
}

ModeIntensities mode_intensities(
    const Eigenstate &alice, const Eigenstate &bob, double mu_i, double nu_j, double phi, const SystemParams &params) {
    auto [eta_a, eta_b] = transmittance(params);
    const double ma = mu_i * eta_a;
    const double nb = nu_j * eta_b;
    const double cross = 2.0 * std::sqrt(ma * nb) * std::cos(phi);
    auto port = [&](double ca, double cb, double sign) {
        double v = 0.5 * (ma * ca * ca + nb * cb * cb + sign * cross * ca * cb);
        return v < 0 ? 0.0 : v;
    };
    return {
        port(alice.c_h, bob.c_h, +1.0),
        port(alice.c_v, bob.c_v, +1.0),
        port(alice.c_h, bob.c_h, -1.0),
        port(alice.c_v, bob.c_v, -1.0),
    };
}

double click_probability(double lambda, double p_d) {
    return no_click_complement(p_d, lambda);
}

int bell_channel_index(const BellChannel &ch) {
    int a = alice_slot(ch.alice);
    int b = bob_slot(ch.bob);
    return ((a * 2 + b) * 2 + (ch.alice_sign > 0 ? 0 : 1)) * 2 + (ch.bob_sign > 0 ? 0 : 1);
}

BellChannel bell_channel_at(int index) {
    if (index < 0 || index >= kNumBellChannels) throw std::out_of_range("Bell channel index");
    BellChannel ch;
    ch.bob_sign = (index & 1) ? -1 : +1;
    ch.alice_sign = (index & 2) ? -1 : +1;
    ch.bob = (index & 4) ? SettingLabel::B2 : SettingLabel::B1;
    ch.alice = (index & 8) ? SettingLabel::A2 : SettingLabel::A1;
    return ch;
}

std::array<BellChannel, kNumBellChannels> all_bell_channels() {
    std::array<BellChannel, kNumBellChannels> out;
    for (int i = 0; i < kNumBellChannels; i++) out[i] = bell_channel_at(i);
    return out;
}

PairForm pair_form(const BellChannel &ch) {
    int a = alice_slot(ch.alice);
    int b = bob_slot(ch.bob);
    int parity = ch.alice_sign * ch.bob_sign;
    // A2 with B2 swaps which eigenvalue pairing is the "HH" one.
    if (a == 1 && b == 1) parity = -parity;
    if (a == 0) return parity > 0 ? PairForm::A1B1_HH : PairForm::A1B1_HV;
    return parity > 0 ? PairForm::A2B1_HH : PairForm::A2B1_HV;
}

BellChannel canonical_channel(PairForm form) {
    switch (form) {
        case PairForm::A1B1_HH:
            return {SettingLabel::A1, +1, SettingLabel::B1, +1};
        case PairForm::A1B1_HV:
            return {SettingLabel::A1, +1, SettingLabel::B1, -1};
        case PairForm::A2B1_HH:
            return {SettingLabel::A2, +1, SettingLabel::B1, +1};
        case PairForm::A2B1_HV:
            return {SettingLabel::A2, +1, SettingLabel::B1, -1};
    }
    throw std::logic_error("unknown pair form");
}

const char *to_string(PairForm form) {
    switch (form) {
        case PairForm::A1B1_HH:
            return "H_A1 H_B1";
        case PairForm::A1B1_HV:
            return "H_A1 V_B1";
        case PairForm::A2B1_HH:
            return "H_A2 H_B1";
        case PairForm::A2B1_HV:
            return "H_A2 V_B1";
    }
    return "?";
}

PairGain pair_gain_closed(const BellChannel &channel, double mu_i, double nu_j, const SystemParams &params) {
    auto [eta_a, eta_b] = transmittance(params);
    PairForm form = pair_form(channel);
    double v = phase_average(form_terms(form, mu_i * eta_a, nu_j * eta_b), params.p_d);
    return {channel, mu_i, nu_j, v};
}

PairGain pair_gain_quadrature(const BellChannel &channel, double mu_i, double nu_j, const SystemParams &params) {
    pair_form(channel);  // rejects non-Bell settings
    const Eigenstate a = eigenstate(channel.alice, channel.alice_sign);
    const Eigenstate b = eigenstate(channel.bob, channel.bob_sign);
    const double p_d = params.p_d;
    auto integrand = [&](double phi) {
        ModeIntensities m = mode_intensities(a, b, mu_i, nu_j, phi, params);
        double d1h = click_probability(m.h1, p_d);
        double d1v = click_probability(m.v1, p_d);
        double d2h = click_probability(m.h2, p_d);
        double d2v = click_probability(m.v2, p_d);
        return 0.25 * (d1h * d2v * (1 - d2h) * (1 - d1v) + d2h * d1v * (1 - d1h) * (1 - d2v));
    };

    // Periodic trapezoid rule; each refinement adds the midpoints.
    int n = 8;
    double sum = 0.0;
    for (int k = 0; k < n; k++) sum += integrand(2.0 * std::numbers::pi * k / n);
    double estimate = sum / n;
    while (n < (1 << 22)) {
        double mids = 0.0;
        for (int k = 0; k < n; k++) mids += integrand(2.0 * std::numbers::pi * (k + 0.5) / n);
        sum += mids;
        n *= 2;
        double refined = sum / n;
        double diff = std::abs(refined - estimate);
        estimate = refined;
        if (diff < 1e-13 && diff <= 1e-15 * std::abs(refined)) break;
    }
    return {channel, mu_i, nu_j, estimate};
}

}  // namespace bellqkd
