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

#include "bellqkd/monte_carlo.h"

#include <bit>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace bellqkd {

namespace {

constexpr unsigned k1H = 1, k1V = 2, k2H = 4, k2V = 8;

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

PulseOutcome classify(unsigned mask) {
    if (mask == 0) return PulseOutcome::none;
    if (mask == (k1H | k2V) || mask == (k2H | k1V)) return PulseOutcome::psi_minus;
    if (mask == (k1H | k1V) || mask == (k2H | k2V)) return PulseOutcome::psi_plus;
    return PulseOutcome::other;
}

unsigned dark_counts(double p_d, Rng &rng) {
    unsigned mask = 0;
    for (unsigned bit : {k1H, k1V, k2H, k2V}) {
        if (rng.uniform() < p_d) mask |= bit;
    }
    return mask;
}

Estimate binomial(uint64_t k, uint64_t n) {
    if (n == 0) return {0, 0};
    double p = static_cast<double>(k) / n;
    return {p, std::sqrt(p * (1 - p) / n)};
}

int pair_index(int alice_sign, int bob_sign) {
    return 2 * (alice_sign < 0) + (bob_sign < 0);
}

const char *intensity_name(int index) {
    static const char *kNames[] = {"mu0", "mu1", "mu2"};
    if (index < 0 || index >= kNumIntensities) throw std::out_of_range("intensity index");
    return kNames[index];
}

// lambda_{1P} = mean_P + swing_P cos(phi), lambda_{2P} = mean_P - swing_P cos(phi),
// read off the detection model once per eigenstate pair.
struct CoherentPair {
    double mean_h, swing_h, mean_v, swing_v;
    double no_dark;  // 1 - p_d
};

CoherentPair coherent_pair(const Eigenstate &a, const Eigenstate &b, double mu, double nu, const SystemParams &params) {
    ModeIntensities m = mode_intensities(a, b, mu, nu, 0.0, params);
    return {(m.h1 + m.h2) / 2, (m.h1 - m.h2) / 2, (m.v1 + m.v2) / 2, (m.v1 - m.v2) / 2, 1 - params.p_d};
}

unsigned coherent_mask(const CoherentPair &c, Rng &rng);
unsigned photon_pair_mask(
    const Eigenstate &alice, const Eigenstate &bob, double eta_a, double eta_b, double p_d, Rng &rng);

ChannelCounts run_channel(
    const McChannel &ch, uint64_t seed, const SessionConfig &config, const SystemParams &params,
    const IntensitySet &intensities) {
    ChannelCounts c;
    c.channel = ch;
    Rng rng(seed);
    const double mu = intensities.at(ch.alice_intensity);
    const double nu = intensities.at(ch.bob_intensity);
    const bool key = ch.kind == McChannel::Kind::key;
    const SettingLabel as = key ? SettingLabel::A1 : ch.alice;
    const SettingLabel bs = key ? SettingLabel::B0 : ch.bob;
    if (!key) pair_form({as, +1, bs, +1});  // rejects non-Bell settings
    const Eigenstate states_a[2] = {eigenstate(as, +1), eigenstate(as, -1)};
    const Eigenstate states_b[2] = {eigenstate(bs, +1), eigenstate(bs, -1)};
    CoherentPair pairs[2][2];
    for (int x = 0; x < 2; x++) {
        for (int y = 0; y < 2; y++) pairs[x][y] = coherent_pair(states_a[x], states_b[y], mu, nu, params);
    }
    auto [eta_a, eta_b] = transmittance(params);

    for (uint64_t k = 0; k < config.pulses; k++) {
        int ia = rng.bit() ? 1 : 0;
        int ib = rng.bit() ? 1 : 0;
        unsigned mask = config.source == SourceMode::coherent
                            ? coherent_mask(pairs[ia][ib], rng)
                            : photon_pair_mask(states_a[ia], states_b[ib], eta_a, eta_b, params.p_d, rng);
        PulseOutcome out = classify(mask);
        c.sent++;
        c.clicks += std::popcount(mask);
        const int sa = ia ? -1 : +1, sb = ib ? -1 : +1;
        if (!key) c.pair_sent[pair_index(sa, sb)]++;
        if (out == PulseOutcome::psi_minus) c.psi_minus++;
        if (out == PulseOutcome::psi_plus) c.psi_plus++;
        if (key) {
            if (out != PulseOutcome::psi_minus && out != PulseOutcome::psi_plus) continue;
            // Bob flips his bit, so equal inputs are recorded as an error.
            bool error = sa == sb;
            if (rng.uniform() < params.e_d) error = !error;
            if (error) c.errors++;
        } else {
            if (out != PulseOutcome::psi_minus) continue;
            c.pair_psi_minus[pair_index(sa, sb)]++;
            bool same = sa == sb;
            if (rng.uniform() < params.e_d) same = !same;
            (same ? c.recorded_same : c.recorded_opposite)++;
        }
    }
    return c;
}

unsigned coherent_mask(const CoherentPair &c, Rng &rng) {
    const double two_pi = 2 * std::numbers::pi;
    double phi_a = two_pi * rng.uniform();
    double phi_b = two_pi * rng.uniform();
    double cos_phi = std::cos(phi_a - phi_b);
    // A detector stays silent with probability (1 - p_d) e^{-lambda}.
    auto click = [&](double lambda) { return rng.uniform() >= c.no_dark * std::exp(-lambda); };
    unsigned mask = 0;
    if (click(c.mean_h + c.swing_h * cos_phi)) mask |= k1H;
    if (click(c.mean_v + c.swing_v * cos_phi)) mask |= k1V;
    if (click(c.mean_h - c.swing_h * cos_phi)) mask |= k2H;
    if (click(c.mean_v - c.swing_v * cos_phi)) mask |= k2V;
    return mask;
}

unsigned photon_pair_mask(
    const Eigenstate &alice, const Eigenstate &bob, double eta_a, double eta_b, double p_d, Rng &rng) {
    const double r = constants::kInvSqrt2;
    // Output-mode amplitudes over (1H, 1V, 2H, 2V).
    const double va[4] = {r * alice.c_h, r * alice.c_v, r * alice.c_h, r * alice.c_v};
    const double vb[4] = {r * bob.c_h, r * bob.c_v, -r * bob.c_h, -r * bob.c_v};
    const unsigned bits[4] = {k1H, k1V, k2H, k2V};

    bool a_arrives = rng.uniform() < eta_a;
    bool b_arrives = rng.uniform() < eta_b;
    unsigned mask = 0;
    if (a_arrives && b_arrives) {
        double u = rng.uniform();
        double acc = 0;
        bool chosen = false;
        for (int i = 0; i < 4 && !chosen; i++) {
            for (int j = i; j < 4; j++) {
                double amp = va[i] * vb[j] + va[j] * vb[i];
                acc += i == j ? amp * amp / 2 : amp * amp;
                mask = bits[i] | bits[j];
                if (u < acc) {
                    chosen = true;
                    break;
                }
            }
        }
    } else if (a_arrives || b_arrives) {
        const double *v = a_arrives ? va : vb;
        double u = rng.uniform();
        double acc = 0;
        for (int i = 0; i < 4; i++) {
            acc += v[i] * v[i];
            mask = bits[i];
            if (u < acc) break;
        }
    }
    return mask | dark_counts(p_d, rng);
}

}  // namespace

uint64_t channel_seed(uint64_t session_seed, uint64_t index) {
    return splitmix64(session_seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

const char *to_string(PulseOutcome outcome) {
    switch (outcome) {
        case PulseOutcome::none:
            return "none";
        case PulseOutcome::psi_minus:
            return "psi-";
        case PulseOutcome::psi_plus:
            return "psi+";
        case PulseOutcome::other:
            return "other";
    }
    return "?";
}

PulseOutcome simulate_pulse(
    const Eigenstate &alice, const Eigenstate &bob, double mu, double nu, const SystemParams &params, Rng &rng) {
    return classify(coherent_mask(coherent_pair(alice, bob, mu, nu, params), rng));
}

PulseOutcome simulate_photon_pair(const Eigenstate &alice, const Eigenstate &bob, const SystemParams &params, Rng &rng) {
    auto [eta_a, eta_b] = transmittance(params);
    return classify(photon_pair_mask(alice, bob, eta_a, eta_b, params.p_d, rng));
}

std::string McChannel::key() const {
    std::string s = kind == Kind::key ? "key" : std::string("bell_") + to_string(alice) + to_string(bob);
    return s + "_" + intensity_name(alice_intensity) + "_" + intensity_name(bob_intensity);
}

Estimate ChannelCounts::gain() const {
    uint64_t k = channel.kind == McChannel::Kind::key ? psi_minus + psi_plus : psi_minus;
    return binomial(k, sent);
}

Estimate ChannelCounts::qber() const {
    return binomial(errors, psi_minus + psi_plus);
}

Estimate ChannelCounts::error_gain() const {
    return binomial(errors, sent);
}

Estimate ChannelCounts::pair_joint(int alice_sign, int bob_sign) const {
    return binomial(pair_psi_minus[pair_index(alice_sign, bob_sign)], sent);
}

Estimate ChannelCounts::pair_conditional(int alice_sign, int bob_sign) const {
    int k = pair_index(alice_sign, bob_sign);
    return binomial(pair_psi_minus[k], pair_sent[k]);
}

Estimate ChannelCounts::correlator() const {
    uint64_t n = recorded_same + recorded_opposite;
    Estimate p = binomial(recorded_same, n);
    return {2 * p.value - 1, 2 * p.std_error};
}

const ChannelCounts &SessionCounts::find(const McChannel &channel) const {
    for (const ChannelCounts &c : channels) {
        const McChannel &m = c.channel;
        if (m.kind != channel.kind || m.alice_intensity != channel.alice_intensity ||
            m.bob_intensity != channel.bob_intensity) {
            continue;
        }
        if (m.kind == McChannel::Kind::bell && (m.alice != channel.alice || m.bob != channel.bob)) continue;
        return c;
    }
    throw std::out_of_range("channel " + channel.key() + " was not simulated");
}

Estimate SessionCounts::s11(int alice_intensity, int bob_intensity) const {
    using S = SettingLabel;
    auto corr = [&](S a, S b) {
        return find({McChannel::Kind::bell, alice_intensity, bob_intensity, a, b}).correlator();
    };
    Estimate c22 = corr(S::A2, S::B2), c21 = corr(S::A2, S::B1), c12 = corr(S::A1, S::B2), c11 = corr(S::A1, S::B1);
    double var = c22.std_error * c22.std_error + c21.std_error * c21.std_error + c12.std_error * c12.std_error +
                 c11.std_error * c11.std_error;
    return {c22.value - c21.value - c12.value - c11.value, std::sqrt(var)};
}

SessionCounts simulate_session(const SessionConfig &config, const SystemParams &params, const IntensitySet &intensities) {
    validate(params, intensities);
    if (config.pulses < 1) throw std::invalid_argument("pulses must be >= 1");
    SessionCounts out;
    out.source = config.source;
    out.seed = config.seed;
    out.channels.resize(config.channels.size());
    const int n = static_cast<int>(config.channels.size());
    const int workers = std::max(1, std::min(config.threads, n));
    auto work = [&](int w) {
        for (int k = w; k < n; k += workers) {
            out.channels[k] = run_channel(config.channels[k], channel_seed(config.seed, k), config, params, intensities);
        }
    };
    if (workers == 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                work(w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<McChannel> full_channel_set() {
    std::vector<McChannel> out;
    for (int i = 0; i < kNumIntensities; i++) {
        for (int j = 0; j < kNumIntensities; j++) out.push_back({McChannel::Kind::key, i, j});
    }
    for (SettingLabel a : {SettingLabel::A1, SettingLabel::A2}) {
        for (SettingLabel b : {SettingLabel::B1, SettingLabel::B2}) {
            for (int i = 0; i < kNumIntensities; i++) {
                for (int j = 0; j < kNumIntensities; j++) out.push_back({McChannel::Kind::bell, i, j, a, b});
            }
        }
    }
    return out;
}

ObservationSet synthetic_observations(const SessionCounts &counts, const IntensitySet &intensities) {
    if (counts.source != SourceMode::coherent) {
        throw std::invalid_argument("synthetic observations need a coherent-source session");
    }
    ObservationSet obs;
    obs.intensities = intensities;
    auto lookup = [&](const McChannel &ch) -> const ChannelCounts & {
        const ChannelCounts *c;
        try {
            c = &counts.find(ch);
        } catch (const std::out_of_range &e) {
            throw std::invalid_argument(e.what());
        }
        if (c->sent == 0) throw std::invalid_argument("channel " + ch.key() + " has zero pulses");
        return *c;
    };
    for (int i = 0; i < kNumIntensities; i++) {
        for (int j = 0; j < kNumIntensities; j++) {
            const ChannelCounts &z = lookup({McChannel::Kind::key, i, j});
            obs.z_gain[i][j] = z.gain().value;
            obs.z_error_gain[i][j] = z.error_gain().value;
            for (int c = 0; c < kNumBellChannels; c++) {
                BellChannel bc = bell_channel_at(c);
                const ChannelCounts &b = lookup({McChannel::Kind::bell, i, j, bc.alice, bc.bob});
                obs.pair_gain[c][i][j] = b.pair_joint(bc.alice_sign, bc.bob_sign).value;
            }
        }
    }
    return obs;
}

std::string session_to_json(const SessionCounts &counts) {
    nlohmann::ordered_json doc;
    doc["source"] = counts.source == SourceMode::coherent ? "coherent" : "single_photon";
    doc["seed"] = counts.seed;
    nlohmann::ordered_json chans = nlohmann::ordered_json::object();
    for (const ChannelCounts &c : counts.channels) {
        nlohmann::ordered_json rec;
        rec["sent"] = c.sent;
        rec["psi_minus"] = c.psi_minus;
        rec["psi_plus"] = c.psi_plus;
        rec["clicks"] = c.clicks;
        Estimate g = c.gain();
        rec["gain"] = {{"value", g.value}, {"std_error", g.std_error}};
        if (c.channel.kind == McChannel::Kind::key) {
            rec["errors"] = c.errors;
            Estimate e = c.qber();
            rec["qber"] = {{"value", e.value}, {"std_error", e.std_error}};
        } else {
            rec["pair_sent"] = c.pair_sent;
            rec["pair_psi_minus"] = c.pair_psi_minus;
            rec["recorded_same"] = c.recorded_same;
            rec["recorded_opposite"] = c.recorded_opposite;
            Estimate k = c.correlator();
            rec["correlator"] = {{"value", k.value}, {"std_error", k.std_error}};
        }
        chans[c.channel.key()] = rec;
    }
    doc["channels"] = chans;
    return doc.dump(2) + "\n";
}

}  // namespace bellqkd
