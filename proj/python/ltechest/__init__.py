# Copyright 2026 The ltechest Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""LTE downlink LS / LMMSE / hybrid channel estimation."""

from ._ltechest import (
    PowerDelayProfile,
    SystemConfig,
    beta_for_constellation,
    channel_frequency_response,
    correlation_model,
    crossover_threshold,
    interpolate_ls,
    lmmse_estimate_full,
    lmmse_estimate_simplified,
    ls_estimate,
    pilot_subcarriers,
    qpsk_demap,
    qpsk_map,
    run_sweep,
    unitary_dft,
    unitary_idft,
    zf_detect,
)

__all__ = [
    "PowerDelayProfile",
    "SystemConfig",
    "beta_for_constellation",
    "channel_frequency_response",
    "correlation_model",
    "crossover_threshold",
    "interpolate_ls",
    "lmmse_estimate_full",
    "lmmse_estimate_simplified",
    "ls_estimate",
    "pilot_subcarriers",
    "qpsk_demap",
    "qpsk_map",
    "run_sweep",
    "unitary_dft",
    "unitary_idft",
    "zf_detect",
]
