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

#include "ltechest/resource_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ltechest/rng.hpp"

namespace ltechest {

namespace {

constexpr int kPilotSpacing = 6;
constexpr int kCombShift = 3;

}  // namespace

PilotPattern::PilotPattern(std::vector<PilotEntry> entries, int pilot_spacing, int n_used,
                           int n_symbols, int n_ports)
    : entries_(std::move(entries)),
      owner_(static_cast<std::size_t>(n_used) * n_symbols, -1),
      spacing_(pilot_spacing),
      n_used_(n_used),
      n_symbols_(n_symbols),
      n_ports_(n_ports) {
    std::sort(entries_.begin(), entries_.end(), [](const PilotEntry& a, const PilotEntry& b) {
        if (a.port != b.port) return a.port < b.port;
        if (a.symbol != b.symbol) return a.symbol < b.symbol;
        return a.subcarrier < b.subcarrier;
    });
    for (const auto& e : entries_) {
        if (e.subcarrier < 0 || e.subcarrier >= n_used || e.symbol < 0 || e.symbol >= n_symbols ||
            e.port < 0 || e.port >= n_ports)
            throw std::invalid_argument("PilotPattern: entry out of grid bounds");
        int& o = owner_[static_cast<std::size_t>(e.symbol) * n_used + e.subcarrier];
        if (o >= 0) throw std::invalid_argument("PilotPattern: two ports share a resource element");
        o = e.port;
    }
}

int PilotPattern::owner(int subcarrier, int symbol) const {
    return owner_[static_cast<std::size_t>(symbol) * n_used_ + subcarrier];
}

std::vector<GridPosition> PilotPattern::positions(int port) const {
    std::vector<GridPosition> out;
    for (const auto& e : entries_) {
        if (e.port == port) out.push_back({e.subcarrier, e.symbol});
    }
    return out;
}

std::vector<GridPosition> PilotPattern::data_positions() const {
    std::vector<GridPosition> out;
    for (int l = 0; l < n_symbols_; ++l) {
        for (int k = 0; k < n_used_; ++k) {
            if (!is_pilot(k, l)) out.push_back({k, l});
        }
    }
    return out;
}

PilotPattern build_pilot_pattern(const SystemConfig& config) {
    config.validate();
    if (!config.short_cp())
        throw std::invalid_argument("build_pilot_pattern: long-CP (6-symbol) slots are not supported");

    // Pilot-bearing symbols and the comb offset of port 0 in each.
    constexpr int kSymbols[2] = {0, 4};
    constexpr int kSymbolOffset[2] = {0, kCombShift};

    std::vector<PilotEntry> entries;
    for (int port = 0; port < config.n_tx; ++port) {
        for (int s = 0; s < 2; ++s) {
            const int offset = (kSymbolOffset[s] + port * kCombShift) % kPilotSpacing;
            for (int k = offset; k < config.n_used; k += kPilotSpacing)
                entries.push_back({k, kSymbols[s], port});
        }
    }
    return PilotPattern(std::move(entries), kPilotSpacing, config.n_used,
                        config.n_symbols_per_slot, config.n_tx);
}

ResourceGrid::ResourceGrid(int n_used, int n_symbols, int n_antennas)
    : n_used_(n_used), n_symbols_(n_symbols) {
    cells_.assign(n_antennas, CMatrix::Zero(n_used, n_symbols));
    labels_.assign(n_antennas, std::vector<CellLabel>(static_cast<std::size_t>(n_used) * n_symbols,
                                                      CellLabel::Data));
}

CellLabel ResourceGrid::label(int subcarrier, int symbol, int antenna) const {
    return labels_[antenna][static_cast<std::size_t>(symbol) * n_used_ + subcarrier];
}

void ResourceGrid::set_label(int subcarrier, int symbol, int antenna, CellLabel l) {
    labels_[antenna][static_cast<std::size_t>(symbol) * n_used_ + subcarrier] = l;
}

int ResourceGrid::count(CellLabel l, int antenna) const {
    return static_cast<int>(std::count(labels_[antenna].begin(), labels_[antenna].end(), l));
}

int data_capacity(const PilotPattern& pattern) {
    return pattern.n_used() * pattern.n_symbols() - static_cast<int>(pattern.entries().size());
}

ResourceGrid map_to_grid(const SystemConfig& config, const PilotPattern& pattern,
                         const std::vector<CVector>& data_symbols, const CVector& pilot_seq) {
    if (pattern.n_used() != config.n_used || pattern.n_symbols() != config.n_symbols_per_slot)
        throw std::invalid_argument("map_to_grid: pattern does not match config dimensions");
    if (static_cast<int>(data_symbols.size()) != config.n_tx)
        throw std::invalid_argument("map_to_grid: expected " + std::to_string(config.n_tx) +
                                    " data streams, got " + std::to_string(data_symbols.size()));

    const auto data_cells = pattern.data_positions();
    for (int a = 0; a < config.n_tx; ++a) {
        const auto have = data_symbols[a].size();
        if (have < static_cast<Eigen::Index>(data_cells.size()))
            throw std::invalid_argument("map_to_grid: antenna " + std::to_string(a) + " is short " +
                                        std::to_string(data_cells.size() - have) + " data symbols");
    }
    const auto n_pilots = static_cast<Eigen::Index>(pattern.entries().size());
    if (pilot_seq.size() < n_pilots)
        throw std::invalid_argument("map_to_grid: pilot sequence is short " +
                                    std::to_string(n_pilots - pilot_seq.size()) + " values");

    ResourceGrid grid(config.n_used, config.n_symbols_per_slot, config.n_tx);
    Eigen::Index next = 0;
    for (const auto& e : pattern.entries()) {
        for (int a = 0; a < config.n_tx; ++a) {
            if (a == e.port) {
                grid.at(e.subcarrier, e.symbol, a) = pilot_seq[next];
                grid.set_label(e.subcarrier, e.symbol, a, CellLabel::Pilot);
            } else {
                grid.at(e.subcarrier, e.symbol, a) = 0.0;
                grid.set_label(e.subcarrier, e.symbol, a, CellLabel::Null);
            }
        }
        ++next;
    }
    for (int a = 0; a < config.n_tx; ++a) {
        Eigen::Index i = 0;
        for (const auto& p : data_cells) grid.at(p.subcarrier, p.symbol, a) = data_symbols[a][i++];
    }
    return grid;
}

std::vector<CVector> extract_data(const ResourceGrid& grid, const PilotPattern& pattern) {
    const auto cells = pattern.data_positions();
    std::vector<CVector> out(grid.n_antennas(), CVector(static_cast<Eigen::Index>(cells.size())));
    for (int a = 0; a < grid.n_antennas(); ++a) {
        Eigen::Index i = 0;
        for (const auto& p : cells) out[a][i++] = grid.at(p.subcarrier, p.symbol, a);
    }
    return out;
}

PilotObservation extract_pilots(const CMatrix& rx_grid, const PilotPattern& pattern, int port) {
    if (port < 0 || port >= pattern.n_ports())
        throw std::invalid_argument("extract_pilots: port " + std::to_string(port) +
                                    " is not in the pilot pattern");
    if (rx_grid.rows() != pattern.n_used() || rx_grid.cols() != pattern.n_symbols())
        throw std::invalid_argument("extract_pilots: grid dimensions do not match the pattern");
    PilotObservation obs;
    obs.positions = pattern.positions(port);
    obs.values.resize(static_cast<Eigen::Index>(obs.positions.size()));
    for (std::size_t i = 0; i < obs.positions.size(); ++i)
        obs.values[static_cast<Eigen::Index>(i)] = rx_grid(obs.positions[i].subcarrier, obs.positions[i].symbol);
    return obs;
}

CVector pilot_values(const ResourceGrid& grid, const PilotPattern& pattern, int port) {
    const auto pos = pattern.positions(port);
    CVector out(static_cast<Eigen::Index>(pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = grid.at(pos[i].subcarrier, pos[i].symbol, port);
    return out;
}

CVector make_pilot_sequence(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    const double a = 1.0 / std::sqrt(2.0);
    CVector out(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
        const auto r = rng();
        out[static_cast<Eigen::Index>(i)] = cplx((r & 1) ? -a : a, (r & 2) ? -a : a);
    }
    return out;
}

}  // namespace ltechest
