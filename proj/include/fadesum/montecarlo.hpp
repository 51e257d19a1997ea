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
// Stochastic oracle. Both models admit exact structural samplers:
//   eta-mu branch power  = Gamma(mu p/(1+p), scale eta w_hat/(xi p))
//                        + Gamma(mu/(1+p),   scale w_hat/xi)
//   kappa-mu branch power = Gamma(mu + Poisson(kappa mu), scale w_hat/rate)
// Sums of N branches collapse by gamma/Poisson additivity, so sum samples
// cost O(1) regardless of N. Sampling is driven by a counter-based
// generator; sample i consumes only stream i, which makes every estimate
// bit-reproducible under any thread partition.

#ifndef FADESUM_MONTECARLO_HPP
#define FADESUM_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "fadesum/metrics.hpp"
#include "fadesum/sum_series.hpp"

namespace fadesum
{

struct SimConfig
{
    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 1;
    std::uint64_t batch = 65536; // samples per accumulation block (jackknife unit)

    void validate() const
    {
        if (n_samples < 1)
            throw std::domain_error("SimConfig: n_samples must be >= 1");
        if (batch < 1)
            throw std::domain_error("SimConfig: batch must be >= 1");
    }
};

// Philox 4x32-10 counter generator. One instance serves one sample index;
// uniforms are drawn by advancing the in-sample counter, so rejection loops
// consume a variable count without disturbing any other sample.
class CounterRng
{
  public:
    CounterRng(std::uint64_t seed, std::uint64_t sample_index)
        : key0_(static_cast<std::uint32_t>(seed)), key1_(static_cast<std::uint32_t>(seed >> 32)),
          sample_(sample_index)
    {
    }

    // Uniform on (0, 1), never exactly 0 or 1.
    double next_u01();
    // Standard normal (Box-Muller, two uniforms per pair, cached).
    double next_normal();
    // Gamma(shape, scale), shape > 0 (squeeze/rejection, sub-unit shapes boosted).
    double next_gamma(double shape, double scale);
    // Poisson(lambda), lambda >= 0 (chop-down for small, transformed rejection
    // for large lambda).
    std::uint64_t next_poisson(double lambda);

  private:
    void refill();

    std::uint32_t key0_, key1_;
    std::uint64_t sample_;
    std::uint64_t ctr_ = 0;
    std::uint32_t buf_[4] = {0, 0, 0, 0};
    int buf_pos_ = 4;
    bool have_normal_ = false;
    double cached_normal_ = 0.0;
};

// Single-branch power samples (one branch draw per sample index).
std::vector<double> sample_eta_mu_power(const EtaMuParams &params, double w_hat,
                                        const SimConfig &config);
std::vector<double> sample_kappa_mu_power(const KappaMuParams &params, double w_hat,
                                          const SimConfig &config);

// Samples of W = sum over N branches, via the additivity collapse.
std::vector<double> sample_sum(const SumDistribution &dist, const SimConfig &config);

struct McEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Semi-analytic BEP: mean of (1/2) erfc(sqrt(g_b W)) over sampled W with a
// delete-one jackknife over batch means for the standard error.
McEstimate empirical_bep(const SumDistribution &dist, const BinaryModulation &mod,
                         const SimConfig &config);

// Same conditional-averaging estimator for the other metrics (used by the
// figure-level cross-validation): averages the exact conditional
// metric-given-W over sampled W.
McEstimate empirical_outage(const SumDistribution &dist, double gamma_th, const SimConfig &config);
McEstimate empirical_sep_psk(const SumDistribution &dist, const MaryModulation &mod,
                             const SimConfig &config);
McEstimate empirical_sep_qam(const SumDistribution &dist, const MaryModulation &mod,
                             const SimConfig &config);

// sup_x |F_emp(x) - F(x)| over the sorted samples. Requires >= 100 samples.
double ks_distance(std::vector<double> samples, const std::function<double(double)> &analytic_cdf);

} // namespace fadesum

#endif
