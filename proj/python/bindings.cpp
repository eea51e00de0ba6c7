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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ltechest/sim_harness.hpp"

namespace py = pybind11;
using namespace ltechest;

namespace {

std::vector<int> pilot_subcarriers(const SystemConfig& cfg, int port) {
    const auto pattern = build_pilot_pattern(cfg);
    if (port < 0 || port >= pattern.n_ports()) throw py::index_error("no such port");
    std::vector<int> out;
    for (const auto& p : pattern.positions(port)) out.push_back(p.subcarrier);
    return out;
}

py::dict record_to_dict(const SweepRecord& r) {
    py::dict d;
    d["snr_db"] = r.snr_db;
    d["channel_len"] = r.channel_len;
    d["estimator"] = to_string(r.estimator);
    d["mse_all_subcarriers"] = r.mse_all_subcarriers;
    d["mse_pilot_subcarriers"] = r.mse_pilot_subcarriers;
    d["ber"] = r.ber;
    d["n_trials"] = r.n_trials;
    d["branch_fraction_ls"] = r.branch_fraction_ls ? py::cast(*r.branch_fraction_ls) : py::none();
    d["seed"] = r.seed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_ltechest, m) {
    m.doc() = "LTE downlink channel estimation core";

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_static("for_bandwidth", [](const std::string& bw) { return make_config(parse_bandwidth(bw)); })
        .def_readwrite("n_fft", &SystemConfig::n_fft)
        .def_readwrite("n_used", &SystemConfig::n_used)
        .def_readwrite("cp_len", &SystemConfig::cp_len)
        .def_readwrite("n_symbols_per_slot", &SystemConfig::n_symbols_per_slot)
        .def_readwrite("n_tx", &SystemConfig::n_tx)
        .def_readwrite("n_rx", &SystemConfig::n_rx)
        .def_property(
            "constellation", [](const SystemConfig& c) { return to_string(c.constellation); },
            [](SystemConfig& c, const std::string& s) { c.constellation = parse_constellation(s); })
        .def("validate", &SystemConfig::validate);

    py::class_<PowerDelayProfile>(m, "PowerDelayProfile")
        .def(py::init<std::vector<int>, std::vector<double>>(), py::arg("delays"), py::arg("powers"))
        .def_static("uniform", &PowerDelayProfile::uniform, py::arg("n_taps"))
        .def_property_readonly("delays", &PowerDelayProfile::delays)
        .def_property_readonly("powers", &PowerDelayProfile::powers)
        .def_property_readonly("span", &PowerDelayProfile::span);

    m.def("unitary_dft", &unitary_dft, py::arg("x"));
    m.def("unitary_idft", &unitary_idft, py::arg("x"));
    m.def("channel_frequency_response",
          py::overload_cast<const CVector&, const std::vector<int>&, int>(&channel_frequency_response),
          py::arg("taps"), py::arg("delays"), py::arg("n_fft"));
    m.def("pilot_subcarriers", &pilot_subcarriers, py::arg("config"), py::arg("port"));

    m.def("ls_estimate", &ls_estimate, py::arg("y_p"), py::arg("x_p"));
    m.def("interpolate_ls",
          [](const CVector& h_p, const std::vector<int>& pos, int n_used) {
              return interpolate_ls(h_p, pos, n_used).h_hat;
          },
          py::arg("h_p"), py::arg("pilot_subcarriers"), py::arg("n_used"));
    m.def("correlation_model",
          [](const PowerDelayProfile& pdp, const std::vector<int>& pilots, int n_fft, int n_used) {
              auto c = build_correlation_model(pdp, pilots, SubcarrierMap(n_fft, n_used));
              return py::make_tuple(c.r_hh_p, c.r_hp_hp);
          },
          py::arg("pdp"), py::arg("pilot_subcarriers"), py::arg("n_fft"), py::arg("n_used"),
          "Returns (R_HHp, R_HpHp).");
    m.def("lmmse_estimate_full",
          [](const CVector& h_ls, const CMatrix& r_hh_p, const CMatrix& r_hp_hp, const CVector& x_p,
             double sigma_w2) { return lmmse_estimate_full(h_ls, {r_hh_p, r_hp_hp}, x_p, sigma_w2).h_hat; },
          py::arg("h_ls"), py::arg("r_hh_p"), py::arg("r_hp_hp"), py::arg("x_p"), py::arg("sigma_w2"));
    m.def("lmmse_estimate_simplified",
          [](const CVector& h_ls, const CMatrix& r_hh_p, const CMatrix& r_hp_hp, double snr_linear, double beta) {
              return lmmse_estimate_simplified(h_ls, {r_hh_p, r_hp_hp}, snr_linear, beta).h_hat;
          },
          py::arg("h_ls"), py::arg("r_hh_p"), py::arg("r_hp_hp"), py::arg("snr_linear"), py::arg("beta"));
    m.def("beta_for_constellation",
          [](const std::string& c) { return beta_for_constellation(parse_constellation(c)); },
          py::arg("constellation"));
    m.def("crossover_threshold", &crossover_threshold, py::arg("snr_db"), py::arg("mse_ls"),
          py::arg("mse_lmmse"));

    m.def("qpsk_map", &qpsk_map, py::arg("bits"));
    m.def("qpsk_demap", &qpsk_demap, py::arg("symbols"));
    m.def("zf_detect",
          [](const CVector& y, const CMatrix& h) {
              auto r = zf_detect(y, h);
              return py::make_tuple(r.x, r.erased);
          },
          py::arg("y"), py::arg("h"), "Returns (x, erased).");

    m.def(
        "run_sweep",
        [](const std::vector<int>& channel_lengths, const std::vector<double>& snr_db, int frames,
           std::uint64_t seed, const std::vector<std::string>& estimators, std::optional<double> threshold_db,
           const std::string& lmmse_model, int workers, const SystemConfig& system) {
            SweepConfig c;
            c.system = system;
            c.channel_lengths = channel_lengths;
            c.snr_grid_db = snr_db;
            c.n_frames = frames;
            c.seed = seed;
            c.estimators.clear();
            for (const auto& e : estimators) c.estimators.push_back(parse_estimator(e));
            c.threshold_override_db = threshold_db;
            c.lmmse_model = parse_lmmse_model(lmmse_model);
            c.workers = workers;

            std::map<int, double> thresholds;
            std::vector<SweepRecord> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(c, &thresholds);
            }
            py::list out;
            for (const auto& r : rows) out.append(record_to_dict(r));
            std::ostringstream csv;
            emit_csv(rows, csv);
            return py::make_tuple(out, thresholds, csv.str());
        },
        py::arg("channel_lengths") = std::vector<int>{6, 10, 20, 40},
        py::arg("snr_db") = std::vector<double>{0, 5, 10, 15, 20, 25, 30}, py::arg("frames") = 100,
        py::arg("seed") = 42, py::arg("estimators") = std::vector<std::string>{"ls", "lmmse", "hybrid", "perfect"},
        py::arg("threshold_db") = py::none(), py::arg("lmmse_model") = "cp", py::arg("workers") = 0,
        py::arg("system") = SystemConfig{},
        "Monte Carlo sweep. Returns (rows, thresholds, csv_text).");
}
