// SPDX-License-Identifier: Apache-2.0
//
// fadesum  Sum statistics of generalized fading channels for multi-antenna links
// Copyright (C) 2026 fadesum contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Physical scenario to mean branch SNR translation, and the grid sweep
// evaluator that feeds CSV emission. Sweep points evaluate independently
// (OpenMP) and assemble into rows by grid index, so threading is
// observationally invisible.

#ifndef FADESUM_LINKBUDGET_HPP
#define FADESUM_LINKBUDGET_HPP

#include <optional>
#include <string>
#include <vector>

#include "fadesum/metrics.hpp"

namespace fadesum
{

inline constexpr double speed_of_light = 299792458.0; // m/s, exact

struct LinkScenario
{
    double f_c = 15e9;     // carrier frequency, Hz
    double d = 100.0;      // distance, m
    double beta = 3.0;     // path loss exponent
    double p_t_dbm = 30.0; // transmit power, dBm
    std::optional<double> bw_fraction;
    std::optional<double> bw_hz;
    double noise_figure_db = 5.0;
    double alpha = 0.0; // channel estimation accuracy, 0 = perfect
    int n_antennas = 1;

    void validate() const;
    double bandwidth_hz() const;

    // Mid-band preset: bandwidth 3% of carrier.
    static LinkScenario fr3(double f_c = 15e9, double d = 100.0);
    // Sub-THz preset: bandwidth 1% of carrier, free-space-like exponent.
    static LinkScenario sub_thz(double f_c = 140e9, double d = 100.0);
};

// phi = (c / (4 pi f_c))^2, linear power gain at 1 m reference.
double path_loss_factor(double f_c);

// sigma^2 [dBm] = -174 + 10 log10(bandwidth) + noise figure.
double noise_power_dbm(const LinkScenario &scenario);

// Effective per-branch mean SNR: (1 - alpha^2) (P_t / sigma^2) phi d^-beta.
// Throws for alpha = 1 (zero SNR is degenerate everywhere downstream).
double mean_branch_snr(const LinkScenario &scenario);

inline double db_from_linear(double x) { return 10.0 * std::log10(x); }
inline double linear_from_db(double x_db) { return std::pow(10.0, x_db / 10.0); }

enum class SweepVariable
{
    distance,
    p_t_dbm,
    f_c,
    n_antennas,
    modulation_order
};

enum class MetricKind
{
    outage,
    coverage,
    bep,
    sep_psk,
    sep_qam,
    pdf,
    cdf
};

struct MetricSpec
{
    MetricKind kind = MetricKind::bep;
    double gamma_th = 1.0; // linear threshold (outage/coverage)
    BinaryModulation binary = BinaryModulation::bpsk();
    int mary_order = 4; // PSK/QAM order; grid overrides it for modulation_order sweeps
    double eval_point = 1.0; // w for pdf/cdf kinds
    ApproachMode approach = ApproachMode::two;
    TruncationControl ctl{};
};

struct SweepRow
{
    double grid_value = 0.0;
    double w_hat_db = 0.0;
    double value = 0.0;
    double log_value = 0.0;
    int terms_used = 0;
    int approach_used = 0;
    std::string status = "ok"; // ok | underflow | convergence_failure |
                               // outside_approach1_domain | invalid
};

struct SweepTable
{
    std::string grid_var;
    std::string metric_name;
    std::vector<SweepRow> rows;
};

std::string to_string(SweepVariable v);
std::string to_string(MetricKind k);

// One row per grid point, ordered as the grid. Per-point failures land in
// the row status, they never abort the sweep. `max_threads` <= 0 means use
// the OpenMP default.
SweepTable sweep(const ModelParams &model, const LinkScenario &scenario_template,
                 SweepVariable variable, const std::vector<double> &grid,
                 const MetricSpec &metric, int max_threads = 0);

// Single-threaded reference with identical semantics, kept for testing and
// for the benchmark comparison.
SweepTable sweep_serial(const ModelParams &model, const LinkScenario &scenario_template,
                        SweepVariable variable, const std::vector<double> &grid,
                        const MetricSpec &metric);

} // namespace fadesum

#endif
