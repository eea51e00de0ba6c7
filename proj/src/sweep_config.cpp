/*
 * Copyright 2026 The ltechest Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>

#include "ltechest/sim_harness.hpp"

namespace ltechest {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view s) {
    s = trim(s);
    std::string buf(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(buf, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (buf.empty() || used != buf.size()) throw std::invalid_argument("not a number: '" + buf + "'");
    return v;
}

template <typename Int>
Int to_int(std::string_view s) {
    s = trim(s);
    Int v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return v;
}

}  // namespace

std::vector<double> parse_snr_grid(std::string_view text) {
    text = trim(text);
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw std::invalid_argument("SNR range must be a:b:step");
        const double a = to_double(parts[0]);
        const double b = to_double(parts[1]);
        const double step = to_double(parts[2]);
        if (!(step > 0.0)) throw std::invalid_argument("SNR step must be positive");
        if (b < a) throw std::invalid_argument("SNR range end is below its start");
        std::vector<double> out;
        const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
        return out;
    }
    std::vector<double> out;
    for (auto p : split(text, ',')) out.push_back(to_double(p));
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for (auto p : split(trim(text), ',')) out.push_back(to_int<int>(p));
    return out;
}

std::vector<EstimatorChoice> parse_estimator_list(std::string_view text) {
    std::vector<EstimatorChoice> out;
    for (auto p : split(trim(text), ',')) out.push_back(parse_estimator(p));
    return out;
}

SweepConfig parse_sweep_config(std::istream& in, const std::string& origin) {
    std::map<std::string, std::string> entries;
    std::map<std::string, int> lines;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = line;
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key(trim(v.substr(0, eq)));
        entries[key] = std::string(trim(v.substr(eq + 1)));
        lines[key] = lineno;
    }

    SweepConfig cfg;
    // A bandwidth profile sets n_fft/n_used defaults before explicit keys apply.
    if (auto it = entries.find("bandwidth"); it != entries.end()) {
        cfg.system = make_config(parse_bandwidth(it->second));
    }
    for (const auto& [key, value] : entries) {
        try {
            auto& s = cfg.system;
            if (key == "bandwidth") continue;
            else if (key == "n_fft") s.n_fft = to_int<int>(value);
            else if (key == "n_used") s.n_used = to_int<int>(value);
            else if (key == "cp_len") s.cp_len = to_int<int>(value);
            else if (key == "n_symbols_per_slot") s.n_symbols_per_slot = to_int<int>(value);
            else if (key == "n_tx") s.n_tx = to_int<int>(value);
            else if (key == "n_rx") s.n_rx = to_int<int>(value);
            else if (key == "constellation") s.constellation = parse_constellation(value);
            else if (key == "channel_lengths") cfg.channel_lengths = parse_int_list(value);
            else if (key == "snr_grid_db") cfg.snr_grid_db = parse_snr_grid(value);
            else if (key == "n_frames") cfg.n_frames = to_int<int>(value);
            else if (key == "seed") cfg.seed = to_int<std::uint64_t>(value);
            else if (key == "estimators") cfg.estimators = parse_estimator_list(value);
            else if (key == "threshold_override_db") {
                if (value.empty() || value == "none") cfg.threshold_override_db.reset();
                else cfg.threshold_override_db = to_double(value);
            }
            else if (key == "lmmse_model") cfg.lmmse_model = parse_lmmse_model(value);
            else if (key == "calibration_frames") cfg.calibration_frames = to_int<int>(value);
            else if (key == "workers") cfg.workers = to_int<int>(value);
            else throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(origin + ":" + std::to_string(lines[key]) + ": " + e.what());
        }
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_sweep_config(f, path);
}

}  // namespace ltechest
