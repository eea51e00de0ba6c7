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

#pragma once

#include <cstdint>
#include <vector>

#include "ltechest/config.hpp"

namespace ltechest {

enum class CellLabel : std::uint8_t { Data, Pilot, Null };

struct GridPosition {
    int subcarrier;
    int symbol;
    friend bool operator==(const GridPosition&, const GridPosition&) = default;
};

struct PilotEntry {
    int subcarrier;
    int symbol;
    int port;
};

/// Cell-specific reference signal layout for one slot.
///
/// Entries are sorted by (port, symbol, subcarrier), which is also the order
/// in which a pilot sequence is consumed by map_to_grid().
class PilotPattern {
public:
    PilotPattern(std::vector<PilotEntry> entries, int pilot_spacing, int n_used,
                 int n_symbols, int n_ports);

    const std::vector<PilotEntry>& entries() const { return entries_; }
    int pilot_spacing() const { return spacing_; }
    int n_used() const { return n_used_; }
    int n_symbols() const { return n_symbols_; }
    int n_ports() const { return n_ports_; }

    /// Port owning the pilot at (subcarrier, symbol), or -1.
    int owner(int subcarrier, int symbol) const;
    bool is_pilot(int subcarrier, int symbol) const { return owner(subcarrier, symbol) >= 0; }

    /// Positions of `port`'s pilots, ascending subcarrier within ascending symbol.
    std::vector<GridPosition> positions(int port) const;
    /// Cells that carry data on every antenna, symbol by symbol.
    std::vector<GridPosition> data_positions() const;

private:
    std::vector<PilotEntry> entries_;
    std::vector<int> owner_;  // n_used * n_symbols, subcarrier fastest
    int spacing_;
    int n_used_;
    int n_symbols_;
    int n_ports_;
};

/// LTE comb: symbols 0 and 4, every 6th subcarrier, the symbol-4 comb and
/// port 1 each shifted by 3.
PilotPattern build_pilot_pattern(const SystemConfig& config);

/// Per-antenna (subcarrier x symbol) lattice with Data/Pilot/Null labels.
class ResourceGrid {
public:
    ResourceGrid(int n_used, int n_symbols, int n_antennas);

    int n_used() const { return n_used_; }
    int n_symbols() const { return n_symbols_; }
    int n_antennas() const { return static_cast<int>(cells_.size()); }

    cplx& at(int subcarrier, int symbol, int antenna) { return cells_[antenna](subcarrier, symbol); }
    cplx at(int subcarrier, int symbol, int antenna) const { return cells_[antenna](subcarrier, symbol); }
    CellLabel label(int subcarrier, int symbol, int antenna) const;
    void set_label(int subcarrier, int symbol, int antenna, CellLabel l);

    /// Frequency-domain content of one antenna, n_used x n_symbols.
    const CMatrix& antenna(int a) const { return cells_[a]; }

    int count(CellLabel l, int antenna) const;

private:
    int n_used_;
    int n_symbols_;
    std::vector<CMatrix> cells_;
    std::vector<std::vector<CellLabel>> labels_;
};

/// Number of data cells per antenna for this pattern.
int data_capacity(const PilotPattern& pattern);

/// Fills data cells symbol by symbol (subcarrier fastest), pilots from
/// `pilot_seq` in pattern order and zeros on other ports' pilot cells.
/// Throws std::invalid_argument when data or pilots run short.
ResourceGrid map_to_grid(const SystemConfig& config, const PilotPattern& pattern,
                         const std::vector<CVector>& data_symbols, const CVector& pilot_seq);

/// Inverse of map_to_grid on the data payload.
std::vector<CVector> extract_data(const ResourceGrid& grid, const PilotPattern& pattern);

struct PilotObservation {
    CVector values;
    std::vector<GridPosition> positions;
};

/// Reads `port`'s pilot cells out of one received (n_used x n_symbols) grid.
PilotObservation extract_pilots(const CMatrix& rx_grid, const PilotPattern& pattern, int port);

/// Transmitted pilot values of `port`, parallel to extract_pilots().
CVector pilot_values(const ResourceGrid& grid, const PilotPattern& pattern, int port);

/// Unit-modulus QPSK pilot sequence drawn from `seed`.
CVector make_pilot_sequence(std::size_t count, std::uint64_t seed);

}  // namespace ltechest
