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

#include "bellqkd/scan.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "bellqkd/monte_carlo.h"
#include "bellqkd/single_photon.h"

namespace bellqkd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double parse_number(std::string_view s, const char *what) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size()) {
        throw ConfigError(std::string("cannot parse ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (true) {
        size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

ScanRow infeasible_row(double distance, double eta, unsigned bits) {
    ScanRow row;
    row.distance_km = distance;
    row.eta = eta;
    row.q_mu_nu = row.e_mu_nu = kNaN;
    row.y11_lower = row.e11_lower = row.s11_lower = kNaN;
    row.r_p1 = row.r_p2 = row.r_mdi = row.r_p1_raw = row.r_p2_raw = kNaN;
    row.flags = bits;
    row.infeasible = true;
    return row;
}

}  // namespace

const char *to_string(ScanMode mode) {
    switch (mode) {
        case ScanMode::asymptotic_ideal:
            return "asymptotic-ideal";
        case ScanMode::two_decoy_asymptotic:
            return "two-decoy-asymptotic";
        case ScanMode::two_decoy_finite:
            return "two-decoy-finite";
    }
    return "?";
}

ScanMode parse_scan_mode(std::string_view name) {
    for (ScanMode m : {ScanMode::asymptotic_ideal, ScanMode::two_decoy_asymptotic, ScanMode::two_decoy_finite}) {
        if (name == to_string(m)) return m;
    }
    throw ConfigError("unknown mode '" + std::string(name) + "'");
}

Method parse_method(std::string_view name) {
    if (name == "analytic") return Method::analytic;
    if (name == "lp") return Method::lp;
    throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

Protocols parse_protocols(std::string_view list) {
    Protocols p{false, false, false};
    for (std::string_view item : split(list, ',')) {
        if (item == "p1") {
            p.p1 = true;
        } else if (item == "p2") {
            p.p2 = true;
        } else if (item == "mdi") {
            p.mdi = true;
        } else {
            throw ConfigError("unknown protocol '" + std::string(item) + "'");
        }
    }
    return p;
}

std::vector<double> parse_distances(std::string_view text) {
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3) throw ConfigError("distances must be START:STOP:STEP");
        double start = parse_number(parts[0], "distance start");
        double stop = parse_number(parts[1], "distance stop");
        double step = parse_number(parts[2], "distance step");
        if (!(step > 0)) throw ConfigError("distance step must be > 0");
        if (!(stop >= start)) throw ConfigError("distance stop must be >= start");
        long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 10000000) throw ConfigError("too many distance points");
        for (long k = 0; k < count; k++) out.push_back(start + k * step);
    } else {
        for (std::string_view item : split(text, ',')) out.push_back(parse_number(item, "distance"));
    }
    for (double d : out) {
        if (!(d >= 0 && std::isfinite(d))) throw ConfigError("distances must be >= 0");
    }
    if (out.empty()) throw ConfigError("empty distance list");
    return out;
}

ScanRow scan_point(const ScanSpec &spec, const Config &config, double distance_km) {
    SystemParams params = config.system;
    params.distance_km = distance_km;
    validate(params, config.intensities);
    const IntensitySet &in = config.intensities;
    const double mu = in.mu2;

    ScanRow row;
    row.distance_km = distance_km;
    row.eta = transmittance(params).first;

    ZGains signal = z_gains(mu, mu, params);
    double q_signal = signal.q_total, e_signal = signal.qber;
    double q11 = 0, e11 = 0, s11 = 0;
    unsigned bits = 0;
    if (spec.mode == ScanMode::asymptotic_ideal) {
        if (spec.synthetic) throw ConfigError("asymptotic-ideal mode does not use observations");
        SinglePhotonTruth t = single_photon_truth(params, in);
        row.y11_lower = t.y11_z;
        row.e11_lower = t.e11_bz;
        row.s11_lower = t.s11;
        q11 = t.q11_z;
        e11 = t.e11_bz;
        s11 = t.s11;
    } else {
        ObservationSet obs;
        if (spec.synthetic) {
            SessionConfig session;
            session.pulses = spec.synthetic->pulses;
            session.seed = channel_seed(spec.synthetic->seed, std::bit_cast<uint64_t>(distance_km));
            session.channels = full_channel_set();
            obs = synthetic_observations(simulate_session(session, params, in), in);
            q_signal = obs.z_gain[2][2];
            e_signal = q_signal > 0 ? obs.z_error_gain[2][2] / q_signal : 0.5;
        } else {
            obs = observe(params, in);
        }
        ObservationIntervals data;
        if (spec.mode == ScanMode::two_decoy_finite) {
            if (!config.finite) throw ConfigError("two-decoy-finite mode needs pulses_per_channel");
            data = fluctuate(obs, *config.finite, params.epsilon, spec.fluctuation);
        } else {
            data = ObservationIntervals::exact(obs);
        }
        SinglePhotonEstimates est;
        try {
            est = estimate(data, params.e_d, spec.estimator, spec.lp);
        } catch (const EstimationError &e) {
            unsigned kind = e.kind() == EstimationError::Kind::infeasible       ? flags::kInfeasible
                            : e.kind() == EstimationError::Kind::solver_failure ? flags::kSolverFailure
                                                                                : flags::kDegenerate;
            return infeasible_row(distance_km, row.eta, data.flags | kind);
        }
        row.y11_lower = est.y11_lower;
        row.e11_lower = est.e11_lower;
        row.s11_lower = est.s11_lower;
        q11 = mu * mu * std::exp(-2 * mu) * est.y11_lower;
        e11 = est.e11_lower;
        s11 = est.s11_lower;
        bits = est.flags;
    }
    row.q_mu_nu = q_signal;
    row.e_mu_nu = e_signal;
    KeyRateResult r = key_rates(q11, e11, s11, q_signal, e_signal, params.f);
    row.r_p1_raw = r.r_p1;
    row.r_p2_raw = r.r_p2;
    row.r_p1 = std::max(r.r_p1, 0.0);
    row.r_p2 = std::max(r.r_p2, 0.0);
    row.r_mdi = std::max(r.r_mdi, 0.0);
    row.flags = bits | r.flags;
    return row;
}

std::vector<ScanRow> run_scan(const ScanSpec &spec, const Config &config) {
    validate(config);
    if (spec.distances.empty()) throw ConfigError("empty distance list");
    if (spec.mode == ScanMode::two_decoy_finite && !config.finite) {
        throw ConfigError("two-decoy-finite mode needs pulses_per_channel");
    }
    std::vector<ScanRow> rows(spec.distances.size());
    const int workers = std::max(1, std::min<int>(spec.threads, static_cast<int>(rows.size())));
    if (workers == 1) {
        for (size_t k = 0; k < rows.size(); k++) rows[k] = scan_point(spec, config, spec.distances[k]);
        return rows;
    }
    // Strided assignment; each row is written by exactly one worker.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                for (size_t k = w; k < rows.size(); k += workers) rows[k] = scan_point(spec, config, spec.distances[k]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

struct Column {
    const char *name;
    double ScanRow::*field;
    bool shown;
};

std::vector<Column> columns(const Protocols &p) {
    return {
        {"distance_km", &ScanRow::distance_km, true},
        {"eta", &ScanRow::eta, true},
        {"q_mu_nu", &ScanRow::q_mu_nu, true},
        {"e_mu_nu", &ScanRow::e_mu_nu, true},
        {"y11_lower", &ScanRow::y11_lower, true},
        {"e11_lower", &ScanRow::e11_lower, true},
        {"s11_lower", &ScanRow::s11_lower, true},
        {"r_p1", &ScanRow::r_p1, p.p1},
        {"r_p2", &ScanRow::r_p2, p.p2},
        {"r_mdi", &ScanRow::r_mdi, p.mdi},
        {"r_p1_raw", &ScanRow::r_p1_raw, p.p1},
        {"r_p2_raw", &ScanRow::r_p2_raw, p.p2},
    };
}

}  // namespace

std::string emit_csv(const std::vector<ScanRow> &rows, const Protocols &protocols) {
    std::string out = kCsvHeader;
    out += '\n';
    auto cols = columns(protocols);
    for (const ScanRow &row : rows) {
        for (const Column &c : cols) {
            if (c.shown) out += format_double(row.*c.field);
            out += ',';
        }
        out += flag_string(row.flags);
        out += '\n';
    }
    return out;
}

std::string emit_json(const std::vector<ScanRow> &rows, const Protocols &protocols) {
    std::string out = "[";
    auto cols = columns(protocols);
    for (size_t k = 0; k < rows.size(); k++) {
        out += k == 0 ? "\n  {" : ",\n  {";
        for (const Column &c : cols) {
            double v = rows[k].*c.field;
            out += '"';
            out += c.name;
            out += "\": ";
            out += c.shown && std::isfinite(v) ? format_double(v) : "null";
            out += ", ";
        }
        out += "\"flags\": \"" + flag_string(rows[k].flags) + "\"}";
    }
    out += rows.empty() ? "]\n" : "\n]\n";
    return out;
}

}  // namespace bellqkd
