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
// Link-level metrics on top of the sum-series engine: outage/coverage, bit
// error probability for coherent binary modulations, symbol error
// probability for M-PSK and M-QAM, with high-SNR asymptotics and truncation
// bounds. Approach-1 metric series are convergence-gated; `automatic`
// evaluates the gate and picks the representation.

#ifndef FADESUM_METRICS_HPP
#define FADESUM_METRICS_HPP

#include <optional>

#include "fadesum/sum_series.hpp"

namespace fadesum
{

enum class ApproachMode
{
    one,
    two,
    automatic
};

// Values below exp(hard_zero_log) are reported as underflowed hard zeros;
// everything above survives in log domain for CSV emission.
inline constexpr double hard_zero_log = -740.0;

// Coherent binary modulation constant g_b.
struct BinaryModulation
{
    double g_b;

    static BinaryModulation bpsk() { return {1.0}; }
    static BinaryModulation bfsk() { return {0.5}; }
    static BinaryModulation bfsk_min_corr() { return {0.715}; }
    static BinaryModulation custom(double g_b)
    {
        if (!(g_b > 0.0) || g_b > 1.0)
            throw std::domain_error("BinaryModulation: g_b must lie in (0, 1]");
        return {g_b};
    }
};

enum class MaryFamily
{
    psk,
    qam
};

// M-ary constellation. M must be a power of two, M >= 4. PSK uses
// g = sin^2(pi/M); QAM uses g = 3/(2(M-1)) and admits non-square M
// (rectangular constellations keep sqrt(M) real in the formulas).
struct MaryModulation
{
    MaryFamily family;
    int order;
    double g;

    static MaryModulation psk(int order);
    static MaryModulation qam(int order);
};

struct MetricResult
{
    double value = 0.0;     // linear value; 0.0 when underflowed
    double log_value = 0.0; // natural log of the value
    int terms_used = 0;
    Approach approach_used = Approach::two;
    bool underflow = false;
};

// P(W < gamma_th); equals cdf_sum at gamma_th. coverage = 1 - outage.
MetricResult outage(const SumDistribution &dist, double gamma_th, const TruncationControl &ctl,
                    ApproachMode mode = ApproachMode::two);
double coverage(const SumDistribution &dist, double gamma_th, const TruncationControl &ctl,
                ApproachMode mode = ApproachMode::two);

// First-term high-SNR law; log-log slope in w_hat is exactly -N*mu.
double outage_asymptotic(const SumDistribution &dist, double gamma_th);

// Average BEP of a coherent binary modulation.
MetricResult bep(const SumDistribution &dist, const BinaryModulation &mod, ApproachMode mode,
                 const TruncationControl &ctl);
double bep_asymptotic(const SumDistribution &dist, const BinaryModulation &mod);

// Tail bound beyond eps terms of the approach-1 BEP series; nullopt when the
// coefficient envelope rate reaches g_b * w_hat, where the dominating series
// diverges and no finite bound exists.
std::optional<double> bep_truncation_bound(const SumDistribution &dist,
                                           const BinaryModulation &mod, int eps);

// Average SEP of M-PSK / M-QAM.
MetricResult sep_psk(const SumDistribution &dist, const MaryModulation &mod, ApproachMode mode,
                     const TruncationControl &ctl);
double sep_psk_asymptotic(const SumDistribution &dist, const MaryModulation &mod);

MetricResult sep_qam(const SumDistribution &dist, const MaryModulation &mod, ApproachMode mode,
                     const TruncationControl &ctl);
double sep_qam_asymptotic(const SumDistribution &dist, const MaryModulation &mod);

// Gate quantity of the approach-1 metric series (|.| < 1 required):
// xi p / (eta g w_hat) for eta-mu, k_bound / (g w_hat) for kappa-mu.
double approach1_gate(const SumDistribution &dist, double g);

// `automatic` picks approach 1 when the gate is below this margin.
inline constexpr double auto_gate_threshold = 0.9;

} // namespace fadesum

#endif
