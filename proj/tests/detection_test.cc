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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracles.h"

namespace bellqkd {

namespace {

double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

SystemParams at_distance(double L) {
    SystemParams p;
    p.distance_km = L;
    return p;
}

}  // namespace

TEST(bessel_i0, reference_values) {
    EXPECT_EQ(bessel_i0(0), 1.0);
    EXPECT_LE(rel(bessel_i0(1), 1.2660658777520083356), 1e-15);
    EXPECT_LE(rel(bessel_i0(2), 2.2795853023360672674), 1e-15);
    EXPECT_LE(rel(bessel_i0(0.3), 1.0226268793515969894), 1e-15);
    EXPECT_LE(rel(bessel_i0(20), 43558282.559553533272), 1e-13);
    EXPECT_LE(rel(bessel_i0(50), 2.9325537838493363267e20), 1e-13);
    EXPECT_THROW(bessel_i0(-1), std::domain_error);
}

TEST(bessel_i0, matches_series_and_std_over_range) {
    for (double x = 0; x <= 50; x += 0.37) {
        double ref = static_cast<double>(oracle::series_i0(x));
        EXPECT_LE(rel(bessel_i0(x), ref), 1e-12) << x;
        EXPECT_LE(rel(bessel_i0(x), std::cyl_bessel_i(0.0, x)), 1e-12) << x;
    }
    // Both sides of the branch point.
    EXPECT_LE(rel(bessel_i0(15.0), static_cast<double>(oracle::series_i0(15.0L))), 1e-13);
    EXPECT_LE(rel(bessel_i0(15.000001), static_cast<double>(oracle::series_i0(15.000001L))), 1e-13);
}

TEST(bessel_i0m1, small_arguments_keep_precision) {
    for (double x : {1e-8, 1e-5, 1e-3, 0.1}) {
        long double q = static_cast<long double>(x) * x / 4, term = 1, ref = 0;
        for (int k = 1; k < 20; k++) ref += (term *= q / (static_cast<long double>(k) * k));
        EXPECT_LE(rel(bessel_i0m1(x), static_cast<double>(ref)), 1e-15) << x;
    }
    EXPECT_EQ(bessel_i0m1(0), 0.0);
}

TEST(z_gains, vacuum_is_dark_count_only) {
    SystemParams p;
    ZGains z = z_gains(0, 0, p);
    double u = 1 - p.p_d;
    double expected = 2 * p.p_d * p.p_d * u * u;
    EXPECT_LE(rel(z.q_correct, expected), 1e-14);
    EXPECT_LE(rel(z.q_error, expected), 1e-14);
    EXPECT_DOUBLE_EQ(z.qber, 0.5);
}

TEST(z_gains, no_dark_counts) {
    SystemParams p = at_distance(30);
    p.p_d = 0;
    ZGains z = z_gains(0.3, 0.3, p);
    EXPECT_EQ(z.q_error, 0.0);
    EXPECT_DOUBLE_EQ(z.qber, p.e_d);
    p.e_d = 0;
    EXPECT_EQ(z_gains(0, 0, p).qber, 0.5);  // q_total == 0
}

TEST(z_gains, frozen_values_at_100km) {
    SystemParams p = at_distance(100);
    ZGains z = z_gains(0.3, 0.3, p);
    EXPECT_LE(rel(z.q_correct, 0.000070785903203852239744), 1e-13);
    EXPECT_LE(rel(z.q_error, 7.0946591496235728939e-8), 1e-13);
    EXPECT_LE(rel(z.qber, 0.015971228525542866434), 1e-13);
    ZGains d = z_gains(0.01, 0, p);
    EXPECT_LE(rel(d.q_correct, 1.217625551647622608e-9), 1e-12);
    EXPECT_LE(rel(d.q_error, 1.217625551647622608e-9), 1e-12);
}

TEST(z_gains, invariants_and_oracle) {
    for (double L : {0.0, 50.0, 100.0, 150.0, 200.0}) {
        SystemParams p = at_distance(L);
        double eta = transmittance(p).first;
        for (double mu : {0.0, 0.01, 0.3}) {
            for (double nu : {0.0, 0.01, 0.3}) {
                ZGains z = z_gains(mu, nu, p);
                EXPECT_DOUBLE_EQ(z.q_total, z.q_correct + z.q_error);
                EXPECT_GE(z.qber, 0);
                EXPECT_LE(z.qber, 0.5);
                EXPECT_LE(rel(z.qber * z.q_total, z.error_gain(p.e_d)), 1e-14);
                double qc, qe;
                oracle::z_gains(mu * eta, nu * eta, p.p_d, qc, qe);
                EXPECT_LE(rel(z.q_correct, qc), 1e-9) << L << " " << mu << " " << nu;
                EXPECT_LE(rel(z.q_error, qe), 1e-9) << L << " " << mu << " " << nu;
            }
        }
    }
}

TEST(z_gains, monotone_in_intensity_and_eta) {
    SystemParams p = at_distance(80);
    double prev = 0;
    for (double mu = 0; mu <= 1.0; mu += 0.05) {
        double q = z_gains(mu, 0.2, p).q_total;
        EXPECT_GE(q, prev);
        prev = q;
    }
    prev = 0;
    for (double L = 300; L >= 0; L -= 10) {
        double q = z_gains(0.3, 0.3, at_distance(L)).q_total;
        EXPECT_GE(q, prev);
        prev = q;
    }
}

TEST(z_gains, qber_tends_to_half_at_low_intensity) {
    SystemParams p = at_distance(50);
    EXPECT_NEAR(z_gains(1e-9, 1e-9, p).qber, 0.5, 1e-3);
}

TEST(mode_intensities, reproduces_displayed_h_a1_h_b1_arguments) {
    SystemParams p = at_distance(40);
    double eta = transmittance(p).first;
    const double mu = 0.3, nu = 0.2, phi = 0.7;
    const double c = constants::kCosPi8, s = constants::kCos3Pi8;
    ModeIntensities m =
        mode_intensities(eigenstate(SettingLabel::A1, +1), eigenstate(SettingLabel::B1, +1), mu, nu, phi, p);
    double x2 = 2 * std::sqrt(mu * nu) * eta;
    EXPECT_NEAR(m.h1, (mu * eta + c * c * nu * eta + x2 * c * std::cos(phi)) / 2, 1e-16);
    EXPECT_NEAR(m.v1, s * s * nu * eta / 2, 1e-16);
    EXPECT_NEAR(m.h2, (mu * eta + c * c * nu * eta - x2 * c * std::cos(phi)) / 2, 1e-16);
    EXPECT_NEAR(m.v2, s * s * nu * eta / 2, 1e-16);
}

TEST(mode_intensities, destructive_interference_at_zero_phase) {
    SystemParams p;
    Eigenstate e = eigenstate(SettingLabel::B1, +1);
    ModeIntensities m = mode_intensities(e, e, 0.3, 0.3, 0.0, p);
    EXPECT_NEAR(m.h2, 0, 1e-17);
    EXPECT_NEAR(m.v2, 0, 1e-17);
    EXPECT_GT(m.h1, 0);
}

TEST(mode_intensities, energy_conservation) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    const SettingLabel settings[] = {SettingLabel::A1, SettingLabel::A2, SettingLabel::B0, SettingLabel::B1, SettingLabel::B2};
    for (int k = 0; k < 200; k++) {
        SystemParams p = at_distance(200 * u(rng));
        double eta = transmittance(p).first;
        Eigenstate a = eigenstate(settings[k % 5], k % 2 ? 1 : -1);
        Eigenstate b = eigenstate(settings[(k / 5) % 5], k % 3 ? 1 : -1);
        double mu = u(rng), nu = u(rng), phi = 2 * M_PI * u(rng);
        ModeIntensities m = mode_intensities(a, b, mu, nu, phi, p);
        EXPECT_NEAR(m.h1 + m.h2, mu * eta * a.c_h * a.c_h + nu * eta * b.c_h * b.c_h, 1e-15);
        EXPECT_NEAR(m.v1 + m.v2, mu * eta * a.c_v * a.c_v + nu * eta * b.c_v * b.c_v, 1e-15);
    }
}

TEST(click_probability, limits) {
    EXPECT_EQ(click_probability(0, 0), 0.0);
    EXPECT_NEAR(click_probability(0, 3e-6), 3e-6, 1e-20);
    EXPECT_NEAR(click_probability(1e-9, 0), -std::expm1(-1e-9), 1e-24);
    EXPECT_NEAR(click_probability(50, 0), 1.0, 1e-15);
}

TEST(bell_channels, indexing_round_trip) {
    auto all = all_bell_channels();
    std::set<int> seen;
    for (int i = 0; i < kNumBellChannels; i++) {
        EXPECT_EQ(bell_channel_index(all[i]), i);
        EXPECT_EQ(bell_channel_at(i), all[i]);
        seen.insert(i);
    }
    EXPECT_EQ(seen.size(), 16u);
    EXPECT_THROW(bell_channel_at(16), std::out_of_range);
    EXPECT_THROW(bell_channel_index({SettingLabel::A1, 1, SettingLabel::B0, 1}), std::invalid_argument);
    EXPECT_THROW(bell_channel_index({SettingLabel::B1, 1, SettingLabel::B1, 1}), std::invalid_argument);
}

TEST(pair_form, symmetry_table) {
    using S = SettingLabel;
    // HH-type rows
    EXPECT_EQ(pair_form({S::A1, -1, S::B2, -1}), PairForm::A1B1_HH);
    EXPECT_EQ(pair_form({S::A1, +1, S::B2, +1}), PairForm::A1B1_HH);
    EXPECT_EQ(pair_form({S::A1, -1, S::B1, -1}), PairForm::A1B1_HH);
    EXPECT_EQ(pair_form({S::A1, +1, S::B1, -1}), PairForm::A1B1_HV);
    EXPECT_EQ(pair_form({S::A1, -1, S::B2, +1}), PairForm::A1B1_HV);
    EXPECT_EQ(pair_form({S::A2, -1, S::B1, -1}), PairForm::A2B1_HH);
    EXPECT_EQ(pair_form({S::A2, +1, S::B2, -1}), PairForm::A2B1_HH);
    EXPECT_EQ(pair_form({S::A2, +1, S::B2, +1}), PairForm::A2B1_HV);
    EXPECT_THROW(pair_form({S::A1, 1, S::B0, 1}), std::invalid_argument);
    for (int f = 0; f < kNumPairForms; f++) EXPECT_EQ(pair_form(canonical_channel(PairForm(f))), PairForm(f));
}

TEST(pair_gain, sixteen_channels_four_values) {
    SystemParams p = at_distance(60);
    for (double mu : {0.01, 0.3}) {
        std::map<PairForm, std::set<double>> groups;
        for (const BellChannel &ch : all_bell_channels()) {
            double q = pair_gain_quadrature(ch, mu, 0.3, p).value;
            double closed = pair_gain_closed(ch, mu, 0.3, p).value;
            EXPECT_LE(rel(closed, q), 1e-9);
            groups[pair_form(ch)].insert(q);
        }
        ASSERT_EQ(groups.size(), 4u);
        for (auto &[form, values] : groups) {
            // Channels sharing a closed form agree to quadrature precision.
            EXPECT_LE(rel(*values.begin(), *values.rbegin()), 1e-12) << to_string(form);
        }
    }
}

TEST(pair_gain, frozen_closed_forms_at_50km) {
    SystemParams p = at_distance(50);
    const double expected[] = {
        9.0653785762617265276e-7, 5.0262349935944666164e-6, 0.000044609826013552158442, 0.000048770082623461298125};
    for (int f = 0; f < kNumPairForms; f++) {
        EXPECT_LE(rel(pair_gain_closed(canonical_channel(PairForm(f)), 0.3, 0.01, p).value, expected[f]), 1e-13)
            << to_string(PairForm(f));
    }
}

TEST(pair_gain, vacuum_limit_is_shared) {
    SystemParams p;
    double u = 1 - p.p_d;
    // Only dark counts: 1/4 * 2 p_d^2 u^2
    double expected = 0.5 * p.p_d * p.p_d * u * u;
    for (const BellChannel &ch : all_bell_channels()) {
        EXPECT_LE(rel(pair_gain_closed(ch, 0, 0, p).value, expected), 1e-12);
        EXPECT_LE(rel(pair_gain_quadrature(ch, 0, 0, p).value, expected), 1e-12);
    }
    p.p_d = 0;
    EXPECT_EQ(pair_gain_quadrature(all_bell_channels()[5], 0, 0, p).value, 0.0);
}

TEST(pair_gain, closed_matches_quadrature_on_grid) {
    double worst = 0;
    for (double L : {0.0, 50.0, 100.0, 150.0, 200.0}) {
        SystemParams p = at_distance(L);
        for (const BellChannel &ch : all_bell_channels()) {
            for (double mu : {0.0, 0.01, 0.3}) {
                for (double nu : {0.0, 0.01, 0.3}) {
                    double a = pair_gain_closed(ch, mu, nu, p).value;
                    double b = pair_gain_quadrature(ch, mu, nu, p).value;
                    EXPECT_GE(a, 0);
                    EXPECT_LE(a, 1);
                    worst = std::max(worst, rel(a, b));
                }
            }
        }
    }
    EXPECT_LE(worst, 1e-9);
}

TEST(pair_gain, quadrature_matches_independent_beam_splitter) {
    SystemParams p = at_distance(20);
    double eta = transmittance(p).first;
    for (const BellChannel &ch : all_bell_channels()) {
        Eigenstate a = eigenstate(ch.alice, ch.alice_sign), b = eigenstate(ch.bob, ch.bob_sign);
        double ref = 0.25 * oracle::psi_minus_probability({a.c_h, a.c_v}, {b.c_h, b.c_v}, 0.3 * eta, 0.01 * eta, p.p_d);
        EXPECT_LE(rel(pair_gain_quadrature(ch, 0.3, 0.01, p).value, ref), 1e-10);
    }
}

TEST(pair_gain, half_period_integration) {
    // The integrand is even in phi, so twice the integral over [0, pi] is the
    // full-period average.
    SystemParams p = at_distance(10);
    double eta = transmittance(p).first;
    Eigenstate a = eigenstate(SettingLabel::A2, 1), b = eigenstate(SettingLabel::B1, -1);
    const int n = 2048;
    double sum = 0;
    for (int k = 0; k <= n; k++) {
        double phi = M_PI * k / n;
        ModeIntensities m = mode_intensities(a, b, 0.3, 0.3, phi, p);
        double d1h = click_probability(m.h1, p.p_d), d1v = click_probability(m.v1, p.p_d);
        double d2h = click_probability(m.h2, p.p_d), d2v = click_probability(m.v2, p.p_d);
        double f = 0.25 * (d1h * d2v * (1 - d2h) * (1 - d1v) + d2h * d1v * (1 - d1h) * (1 - d2v));
        sum += (k == 0 || k == n) ? f / 2 : f;
    }
    double half = 2 * (sum * M_PI / n) / (2 * M_PI);
    EXPECT_LE(rel(half, pair_gain_quadrature({SettingLabel::A2, 1, SettingLabel::B1, -1}, 0.3, 0.3, p).value), 1e-12);
    (void)eta;
}

}  // namespace bellqkd
