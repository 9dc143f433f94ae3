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

// Acceptance checks AC1-AC7. One line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bellqkd/decoy.h"
#include "bellqkd/detection.h"
#include "bellqkd/key_rate.h"
#include "bellqkd/monte_carlo.h"
#include "bellqkd/scan.h"
#include "bellqkd/single_photon.h"

namespace bellqkd {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

Config base_config() {
    return Config{};  // eta_d 0.4, 0.2 dB/km, e_d 0.015, p_d 3e-6, f 1.16, mu 0.3 / 0.01 / 0
}

Outcome ac1() {
    Outcome o;
    ScanSpec spec;
    spec.mode = ScanMode::asymptotic_ideal;
    spec.distances = parse_distances("0:250:1");
    auto t0 = Clock::now();
    std::vector<ScanRow> rows = run_scan(spec, base_config());
    double t = seconds_since(t0);
    double worst = 0;
    for (const ScanRow &r : rows) {
        double d = r.r_p1_raw == 0 && r.r_mdi == 0 ? 0 : std::abs(r.r_p1 - r.r_mdi) / std::abs(r.r_p1_raw);
        worst = std::max(worst, d);
    }
    o.pass = rows.size() == 251 && worst <= 1e-12 && t < 1.0;
    o.detail = "251 points, max |r_p1 - r_mdi|/|r_p1| = " + fmt("%.3g", worst) + ", " + fmt("%.3f", t) + " s";
    return o;
}

Outcome ac2() {
    Outcome o;
    ScanSpec spec;
    spec.mode = ScanMode::two_decoy_asymptotic;
    spec.distances = parse_distances("0:250:1");
    auto t0 = Clock::now();
    for (Method m : {Method::analytic, Method::lp}) {
        spec.estimator = m;
        std::vector<ScanRow> rows = run_scan(spec, base_config());
        int misordered = 0;
        double r1 = NAN, r2 = NAN;
        for (const ScanRow &r : rows) {
            if (r.infeasible || !(r.r_p2_raw <= r.r_p1_raw)) misordered++;
            if (r.distance_km == 200) {
                r1 = r.r_p1_raw;
                r2 = r.r_p2_raw;
            }
        }
        bool ok = r1 > 0 && r2 > 0 && misordered == 0;
        o.pass = o.pass && ok;
        o.detail += std::string(to_string(m)) + ": r_p1(200) = " + fmt("%.4g", r1) + ", r_p2(200) = " +
                    fmt("%.4g", r2) + ", order violations " + std::to_string(misordered) + "; ";
    }
    double t = seconds_since(t0);
    o.pass = o.pass && t < 10;
    o.detail += fmt("%.2f", t) + " s";
    return o;
}

Outcome ac3() {
    Outcome o;
    Config c = base_config();
    c.finite = FiniteDataParams{1e14, std::nullopt};
    ScanSpec spec;
    spec.mode = ScanMode::two_decoy_finite;
    spec.distances = parse_distances("0:250:5");
    auto t0 = Clock::now();
    for (Method m : {Method::lp, Method::analytic}) {
        spec.estimator = m;
        double r1 = NAN, r2 = NAN;
        for (const ScanRow &r : run_scan(spec, c)) {
            if (r.distance_km == 150) r1 = r.r_p1_raw;
            if (r.distance_km == 110) r2 = r.r_p2_raw;
        }
        o.pass = o.pass && r1 > 0 && r2 > 0;
        o.detail += std::string(to_string(m)) + ": r_p1(150) = " + fmt("%.4g", r1) + ", r_p2(110) = " +
                    fmt("%.4g", r2) + "; ";
    }
    double t = seconds_since(t0);
    o.pass = o.pass && t < 30;
    o.detail += fmt("%.2f", t) + " s";
    return o;
}

Outcome ac4() {
    Outcome o;
    double worst = 0;
    int compared = 0;
    for (bool finite : {false, true}) {
        Config c = base_config();
        ScanSpec spec;
        spec.distances = parse_distances("0:250:2");
        if (finite) {
            c.finite = FiniteDataParams{1e14, std::nullopt};
            spec.mode = ScanMode::two_decoy_finite;
        }
        spec.estimator = Method::analytic;
        std::vector<ScanRow> a = run_scan(spec, c);
        spec.estimator = Method::lp;
        std::vector<ScanRow> l = run_scan(spec, c);
        for (size_t k = 0; k < a.size(); k++) {
            const double pairs[2][2] = {{a[k].r_p1_raw, l[k].r_p1_raw}, {a[k].r_p2_raw, l[k].r_p2_raw}};
            for (const auto &p : pairs) {
                if (!(p[0] > 1e-10 || p[1] > 1e-10)) continue;
                worst = std::max(worst, std::abs(p[0] - p[1]) / std::abs(p[1]));
                compared++;
            }
        }
    }
    o.pass = compared > 0 && worst <= 0.05;
    o.detail = std::to_string(compared) + " rate pairs above 1e-10 (asymptotic and N = 1e14), max |r_an - r_lp|/r_lp = " +
               fmt("%.3g", worst);
    return o;
}

Outcome ac5() {
    Outcome o;
    auto t0 = Clock::now();
    IntensitySet in;
    // Closed forms against phase quadrature.
    double worst_q = 0;
    for (double L : {0.0, 50.0, 100.0, 150.0, 200.0}) {
        SystemParams p;
        p.distance_km = L;
        for (const BellChannel &ch : all_bell_channels()) {
            for (double mu : {0.0, 0.01, 0.3}) {
                for (double nu : {0.0, 0.01, 0.3}) {
                    worst_q = std::max(worst_q, rel(pair_gain_closed(ch, mu, nu, p).value,
                                                    pair_gain_quadrature(ch, mu, nu, p).value));
                }
            }
        }
    }
    bool ok_q = worst_q <= 1e-9;

    SystemParams p;
    p.distance_km = 100;
    double worst_sigma = 0;
    int checks = 0;
    int skipped = 0;
    // With zero (or all) successes the empirical standard error vanishes;
    // the model's binomial spread over `trials` is used instead.
    auto check = [&](const Estimate &e, double truth, double trials) {
        if (trials <= 0) {
            skipped++;
            return;
        }
        double sigma = e.std_error > 0 ? e.std_error : std::sqrt(truth * (1 - truth) / trials);
        double z = sigma > 0 ? std::abs(e.value - truth) / sigma : (e.value == truth ? 0 : INFINITY);
        worst_sigma = std::max(worst_sigma, z);
        checks++;
    };
    const SettingLabel as[2] = {SettingLabel::A1, SettingLabel::A2};
    const SettingLabel bs[2] = {SettingLabel::B1, SettingLabel::B2};

    SessionConfig coh;
    coh.pulses = 10000000;
    coh.seed = 20260101;
    for (int i = 0; i < kNumIntensities; i++) {
        for (int j = 0; j < kNumIntensities; j++) coh.channels.push_back({McChannel::Kind::key, i, j});
    }
    for (SettingLabel a : as) {
        for (SettingLabel b : bs) coh.channels.push_back({McChannel::Kind::bell, 2, 2, a, b});
    }
    SessionCounts cs = simulate_session(coh, p, in);
    for (const ChannelCounts &c : cs.channels) {
        const McChannel &ch = c.channel;
        double mu = in.at(ch.alice_intensity), nu = in.at(ch.bob_intensity);
        if (ch.kind == McChannel::Kind::key) {
            ZGains z = z_gains(mu, nu, p);
            check(c.gain(), z.q_total, c.sent);
            check(c.qber(), z.qber, static_cast<double>(c.psi_minus + c.psi_plus));
            continue;
        }
        double same = 0, opposite = 0;
        for (int sa : {1, -1}) {
            for (int sb : {1, -1}) {
                double g = pair_gain_closed({ch.alice, sa, ch.bob, sb}, mu, nu, p).value;
                int q = 2 * (sa < 0) + (sb < 0);
                check(c.pair_joint(sa, sb), g, c.sent);
                check(c.pair_conditional(sa, sb), 4 * g, c.pair_sent[q]);  // 1/4 eigenstate-pair weight removed
                (sa == sb ? same : opposite) += g;
            }
        }
        check(c.correlator(), (1 - 2 * p.e_d) * (same - opposite) / (same + opposite), 1);
    }

    SessionConfig sp = coh;
    sp.source = SourceMode::single_photon;
    sp.channels.clear();
    for (SettingLabel a : as) {
        for (SettingLabel b : bs) sp.channels.push_back({McChannel::Kind::bell, 2, 2, a, b});
    }
    SessionCounts ss = simulate_session(sp, p, in);
    for (const ChannelCounts &c : ss.channels) check(c.correlator(), correlator(c.channel.alice, c.channel.bob, p), 1);
    check(ss.s11(), bell_s11(p), 1);

    double t = seconds_since(t0);
    o.pass = ok_q && worst_sigma <= 4 && t < 120;
    o.detail = "closed vs quadrature max rel " + fmt("%.3g", worst_q) + "; Monte Carlo 1e7 pulses/channel, " +
               std::to_string(checks) + " statistics (" + std::to_string(skipped) + " without events), max deviation " +
               fmt("%.2f", worst_sigma) + " sigma; " +
               fmt("%.1f", t) + " s";
    return o;
}

Outcome ac6() {
    Outcome o;
    int violations = 0, lp_below = 0;
    IntensitySet in;
    for (int k = 0; k < 9; k++) {
        SystemParams p;
        p.distance_km = 25.0 * k;
        SinglePhotonTruth t = single_photon_truth(p, in);
        ObservationIntervals obs = ObservationIntervals::exact(observe(p, in));
        SinglePhotonEstimates a = estimate(obs, p.e_d, Method::analytic);
        SinglePhotonEstimates l = estimate(obs, p.e_d, Method::lp);
        for (const SinglePhotonEstimates &e : {a, l}) {
            if (!(e.y11_lower <= t.y11_z && t.y11_z <= e.y11_upper)) violations++;
            if (!(e.e11_lower <= t.e11_bz)) violations++;
            if (!(e.s11_lower <= t.s11)) violations++;
        }
        if (!(l.y11_lower >= a.y11_lower - 1e-9)) lp_below++;
        if (!(l.e11_lower >= a.e11_lower - 1e-9)) lp_below++;
        if (!(l.s11_lower >= a.s11_lower - 1e-9)) lp_below++;
    }
    o.pass = violations == 0 && lp_below == 0;
    o.detail = "9 distances x 2 estimators: " + std::to_string(violations) + " sandwich violations, " +
               std::to_string(lp_below) + " LP lower bounds below analytic";
    return o;
}

Outcome ac7() {
    Outcome o;
    double h = 0;
    for (int k = 0; k <= 1000; k++) {
        double x = k / 1000.0;
        h = std::max(h, std::abs(binary_entropy(x) - binary_entropy(1 - x)));
    }
    double s = 0, pe = 0;
    for (double e_d : {0.0, 0.005, 0.015, 0.05, 0.1, 0.25}) {
        for (double L : {0.0, 100.0, 200.0}) {
            SystemParams p;
            p.distance_km = L;
            p.p_d = 0;
            p.e_d = e_d;
            double target = constants::kTwoSqrt2 * (1 - 2 * e_d);
            s = std::max(s, std::abs(bell_s11(p) - target));
            pe = std::max(pe, std::abs(phase_error_from_bell(e_d, bell_s11(p)).value - e_d));
        }
    }
    bool g = guessing_probability(constants::kTwoSqrt2) == 0.5 && guessing_probability(2) == 1.0;
    o.pass = h <= 1e-14 && s <= 1e-12 && pe <= 1e-12 && g;
    o.detail = "H symmetry " + fmt("%.2g", h) + ", S(p_d=0) " + fmt("%.2g", s) + ", phase error " + fmt("%.2g", pe) +
               ", guessing probability endpoints " + (g ? "exact" : "wrong");
    return o;
}

}  // namespace
}  // namespace bellqkd

int main() {
    using bellqkd::Outcome;
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"AC1 P1 equals MDI baseline in asymptotic-ideal mode", bellqkd::ac1},
        {"AC2 two-decoy asymptotic rates positive at 200 km, P2 <= P1", bellqkd::ac2},
        {"AC3 finite-data rates: P1 at 150 km, P2 at 110 km", bellqkd::ac3},
        {"AC4 analytic and LP rates within 5%", bellqkd::ac4},
        {"AC5 closed forms vs quadrature and Monte Carlo", bellqkd::ac5},
        {"AC6 sandwich of single-photon quantities", bellqkd::ac6},
        {"AC7 identities", bellqkd::ac7},
    };
    int failures = 0;
    for (const auto &[name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures;
}
