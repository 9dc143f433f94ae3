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

#include <gtest/gtest.h>

#include <cmath>

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

TEST(y11_e11, frozen_values_at_100km) {
    SinglePhotonYields y = y11_e11(at_distance(100));
    EXPECT_LE(rel(y.y11_z, 8.004608303910051251e-4), 1e-13);
    EXPECT_LE(rel(y.e11_bz, 0.015285034212187567988), 1e-13);
}

TEST(y11_e11, no_dark_counts) {
    for (double L : {0.0, 40.0, 180.0}) {
        SystemParams p = at_distance(L);
        p.p_d = 0;
        auto [ea, eb] = transmittance(p);
        SinglePhotonYields y = y11_e11(p);
        EXPECT_LE(rel(y.y11_z, ea * eb / 2), 1e-15);
        EXPECT_NEAR(y.e11_bz, p.e_d, 1e-15);
    }
}

TEST(y11_e11, matches_enumeration) {
    for (double L : {0.0, 100.0, 250.0}) {
        SystemParams p = at_distance(L);
        auto [ea, eb] = transmittance(p);
        // Z basis: orthogonal inputs give correct events, parallel ones errors.
        // Two of the four state pairs each, and psi+ is as likely as psi-.
        double correct = 4 * oracle::single_photon_pair_yield({1, 0}, {0, 1}, ea, eb, p.p_d);
        double wrong = 4 * oracle::single_photon_pair_yield({1, 0}, {1, 0}, ea, eb, p.p_d);
        SinglePhotonYields y = y11_e11(p);
        EXPECT_LE(rel(y.y11_z, correct + wrong), 1e-12) << L;
        // Misalignment flips a correct event with probability e_d.
        EXPECT_LE(rel(y.e11_bz * y.y11_z, p.e_d * correct + (1 - p.e_d) * wrong), 1e-12) << L;
        EXPECT_GE(y.e11_bz, p.e_d);
        EXPECT_LE(y.e11_bz, 0.5);
    }
}

TEST(y11_e11, dark_count_only_limit) {
    SystemParams p = at_distance(5000);
    SinglePhotonYields y = y11_e11(p);
    EXPECT_NEAR(y.e11_bz, 0.5, 1e-6);
    EXPECT_GT(y.y11_z, 0);
}

TEST(yield11, matches_enumeration_for_every_channel) {
    for (double L : {0.0, 70.0, 200.0}) {
        SystemParams p = at_distance(L);
        auto [ea, eb] = transmittance(p);
        for (const BellChannel &ch : all_bell_channels()) {
            Eigenstate a = eigenstate(ch.alice, ch.alice_sign), b = eigenstate(ch.bob, ch.bob_sign);
            double ref = oracle::single_photon_pair_yield({a.c_h, a.c_v}, {b.c_h, b.c_v}, ea, eb, p.p_d);
            EXPECT_LE(rel(yield11_pair(ch, p), ref), 1e-12) << L << " " << bell_channel_index(ch);
        }
    }
}

TEST(yield11, symmetry_groups) {
    SystemParams p = at_distance(100);
    for (const BellChannel &ch : all_bell_channels()) {
        EXPECT_LE(rel(yield11_pair(ch, p), yield11_pair(canonical_channel(pair_form(ch)), p)), 1e-14);
    }
}

TEST(yield11, frozen_pair_yields) {
    const double at0[] = {0.002929377039820063532, 0.017071342958559924588, 0.0029293346136677503986,
                          0.017071385384712237721};
    const double at100[] = {2.9347774205176335357e-5, 1.7076743339257494592e-4, 2.9347349943653204023e-5,
                            1.7076785765409807725e-4};
    SinglePhotonTruth t0 = single_photon_truth(at_distance(0), IntensitySet{});
    SinglePhotonTruth t100 = single_photon_truth(at_distance(100), IntensitySet{});
    for (int f = 0; f < kNumPairForms; f++) {
        EXPECT_LE(rel(t0.pair_yields[f], at0[f]), 1e-13) << f;
        EXPECT_LE(rel(t100.pair_yields[f], at100[f]), 1e-13) << f;
    }
}

TEST(yield11, no_dark_counts_closed_forms) {
    SystemParams p = at_distance(30);
    p.p_d = 0;
    auto [ea, eb] = transmittance(p);
    const double c2 = constants::kCosPi8 * constants::kCosPi8, s2 = constants::kCos3Pi8 * constants::kCos3Pi8;
    // Two photons in states a and b exit in psi- with probability |<a|b_perp>|^2 / 2.
    EXPECT_LE(rel(yield11_pair(canonical_channel(PairForm::A1B1_HH), p), ea * eb * s2 / 8), 1e-14);
    EXPECT_LE(rel(yield11_pair(canonical_channel(PairForm::A1B1_HV), p), ea * eb * c2 / 8), 1e-14);
}

TEST(correlator, no_dark_counts) {
    for (double e_d : {0.0, 0.015, 0.1}) {
        SystemParams p = at_distance(50);
        p.p_d = 0;
        p.e_d = e_d;
        for (SettingLabel a : {SettingLabel::A1, SettingLabel::A2}) {
            for (SettingLabel b : {SettingLabel::B1, SettingLabel::B2}) {
                EXPECT_NEAR(std::abs(correlator(a, b, p)), (1 - 2 * e_d) * constants::kInvSqrt2, 1e-14);
            }
        }
        EXPECT_NEAR(bell_s11(p), constants::kTwoSqrt2 * (1 - 2 * e_d), 1e-12);
    }
}

TEST(correlator, rejects_non_bell_settings_and_degenerate_channels) {
    SystemParams p;
    EXPECT_THROW(correlator(SettingLabel::A1, SettingLabel::B0, p), std::invalid_argument);
    p.p_d = 0;
    p.distance_km = 1e6;  // transmittance underflows to zero
    EXPECT_THROW(correlator(SettingLabel::A1, SettingLabel::B1, p), DegenerateChannelError);
}

TEST(bell_s11, decreases_with_misalignment_and_dark_counts) {
    SystemParams p = at_distance(120);
    double prev = 3;
    for (double e_d = 0; e_d <= 0.2; e_d += 0.02) {
        p.e_d = e_d;
        double s = bell_s11(p);
        EXPECT_LT(s, prev);
        prev = s;
    }
    p.e_d = 0.015;
    prev = 3;
    for (double p_d : {0.0, 1e-7, 1e-6, 1e-5, 1e-4}) {
        p.p_d = p_d;
        double s = bell_s11(p);
        EXPECT_LT(s, prev);
        prev = s;
    }
}

TEST(single_photon_truth, q11_and_consistency) {
    SystemParams p = at_distance(100);
    IntensitySet in;
    SinglePhotonTruth t = single_photon_truth(p, in);
    EXPECT_DOUBLE_EQ(t.q11_z, in.mu2 * in.mu2 * std::exp(-2 * in.mu2) * t.y11_z);
    EXPECT_DOUBLE_EQ(t.s11, bell_s11(p));
    EXPECT_DOUBLE_EQ(t.correlators[0][0], correlator(SettingLabel::A1, SettingLabel::B1, p));
    in.mu2 = 0;
    EXPECT_EQ(single_photon_truth(p, in).q11_z, 0.0);
}

}  // namespace bellqkd
