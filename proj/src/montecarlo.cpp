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

#include "fadesum/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fadesum/quadrature.hpp"

namespace fadesum
{

namespace
{

// Philox 4x32-10 round constants.
constexpr std::uint32_t philox_m0 = 0xD2511F53u;
constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;
constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
constexpr std::uint32_t philox_w1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1)
{
    std::uint64_t p0 = static_cast<std::uint64_t>(philox_m0) * c[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(philox_m1) * c[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    std::uint32_t n0 = hi1 ^ c[1] ^ k0;
    std::uint32_t n1 = lo1;
    std::uint32_t n2 = hi0 ^ c[3] ^ k1;
    std::uint32_t n3 = lo0;
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
}

} // namespace

void CounterRng::refill()
{
    std::uint32_t c[4] = {static_cast<std::uint32_t>(ctr_), static_cast<std::uint32_t>(ctr_ >> 32),
                          static_cast<std::uint32_t>(sample_),
                          static_cast<std::uint32_t>(sample_ >> 32)};
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int r = 0; r < 10; ++r)
    {
        philox_round(c, k0, k1);
        k0 += philox_w0;
        k1 += philox_w1;
    }
    buf_[0] = c[0];
    buf_[1] = c[1];
    buf_[2] = c[2];
    buf_[3] = c[3];
    buf_pos_ = 0;
    ++ctr_;
}

double CounterRng::next_u01()
{
    if (buf_pos_ >= 4)
        refill();
    std::uint32_t w = buf_[buf_pos_++];
    return (static_cast<double>(w) + 0.5) * 0x1p-32;
}

double CounterRng::next_normal()
{
    if (have_normal_)
    {
        have_normal_ = false;
        return cached_normal_;
    }
    double u1 = next_u01();
    double u2 = next_u01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(t);
    have_normal_ = true;
    return r * std::cos(t);
}

double CounterRng::next_gamma(double shape, double scale)
{
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::domain_error("next_gamma: shape and scale must be positive");
    if (shape < 1.0)
    {
        // Boost: G(shape) = G(shape+1) * U^(1/shape).
        double g = next_gamma(shape + 1.0, 1.0);
        double u = next_u01();
        return scale * g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;)
    {
        double x, v;
        do
        {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = next_u01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return scale * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return scale * d * v;
    }
}

std::uint64_t CounterRng::next_poisson(double lambda)
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::domain_error("next_poisson: lambda must be finite and >= 0");
    if (lambda == 0.0)
        return 0;
    if (lambda < 10.0)
    {
        // Chop-down inversion.
        double p = std::exp(-lambda);
        double u = next_u01();
        std::uint64_t k = 0;
        while (u > p && k < 2000)
        {
            u -= p;
            ++k;
            p *= lambda / static_cast<double>(k);
        }
        return k;
    }
    // Transformed-rejection sampler for large lambda.
    const double smu = std::sqrt(lambda);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;)
    {
        double u = next_u01() - 0.5;
        double v = next_u01();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            -lambda + kf * std::log(lambda) - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

namespace
{

// One branch-sum draw, exact in distribution for any N by additivity.
double draw_sum(const ModelParams &model, int n, double w_hat, CounterRng &rng)
{
    if (std::holds_alternative<EtaMuParams>(model))
    {
        const auto &p = std::get<EtaMuParams>(model);
        double scale_ip = w_hat * p.eta / (p.xi * p.p);
        double scale_q = w_hat / p.xi;
        return rng.next_gamma(n * p.a_ip, scale_ip) + rng.next_gamma(n * p.a_q, scale_q);
    }
    const auto &p = std::get<KappaMuParams>(model);
    double m = static_cast<double>(rng.next_poisson(n * p.kappa * p.mu));
    return rng.next_gamma(n * p.mu + m, w_hat / p.rate);
}

template <typename Draw>
std::vector<double> sample_vector(const SimConfig &config, Draw &&draw)
{
    config.validate();
    std::vector<double> out(config.n_samples);
    const std::int64_t n = static_cast<std::int64_t>(config.n_samples);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
    {
        CounterRng rng(config.seed, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = draw(rng);
    }
    return out;
}

// Batch-blocked conditional averaging with a delete-one jackknife over batch
// means. Per-batch sums are accumulated in sample order, so the estimate is
// bit-identical under any thread partition over whole batches.
template <typename Conditional>
McEstimate estimate_conditional(const SumDistribution &dist, const SimConfig &config,
                                Conditional &&conditional)
{
    config.validate();
    const std::uint64_t n = config.n_samples;
    const std::uint64_t bsz = std::min(config.batch, n);
    const std::uint64_t nb = (n + bsz - 1) / bsz;
    std::vector<double> bsum(nb, 0.0);
    std::vector<double> bsumsq(nb, 0.0);
    std::vector<std::uint64_t> bcount(nb, 0);
    const std::int64_t nbi = static_cast<std::int64_t>(nb);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < nbi; ++j)
    {
        std::uint64_t lo = static_cast<std::uint64_t>(j) * bsz;
        std::uint64_t hi = std::min(n, lo + bsz);
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = lo; i < hi; ++i)
        {
            CounterRng rng(config.seed, i);
            double x = conditional(draw_sum(dist.model, dist.n_branches, dist.w_hat, rng));
            s += x;
            s2 += x * x;
        }
        bsum[static_cast<std::size_t>(j)] = s;
        bsumsq[static_cast<std::size_t>(j)] = s2;
        bcount[static_cast<std::size_t>(j)] = hi - lo;
    }
    double total = 0.0, total_sq = 0.0;
    for (std::uint64_t j = 0; j < nb; ++j)
    {
        total += bsum[j];
        total_sq += bsumsq[j];
    }
    McEstimate est;
    est.n_samples = n;
    est.seed = config.seed;
    est.mean = total / static_cast<double>(n);
    if (nb >= 2)
    {
        // Delete-one jackknife over batches.
        double acc = 0.0, accsq = 0.0;
        for (std::uint64_t j = 0; j < nb; ++j)
        {
            double mj = (total - bsum[j]) / static_cast<double>(n - bcount[j]);
            acc += mj;
            accsq += mj * mj;
        }
        double mbar = acc / static_cast<double>(nb);
        double var = (accsq / static_cast<double>(nb) - mbar * mbar) *
                     static_cast<double>(nb - 1);
        est.std_error = std::sqrt(std::max(0.0, var));
    }
    else if (n >= 2)
    {
        double var = (total_sq - total * total / static_cast<double>(n)) /
                     static_cast<double>(n - 1);
        est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(n));
    }
    return est;
}

} // namespace

std::vector<double> sample_eta_mu_power(const EtaMuParams &params, double w_hat,
                                        const SimConfig &config)
{
    if (!(w_hat > 0.0))
        throw std::domain_error("sample_eta_mu_power: w_hat must be positive");
    double scale_ip = w_hat * params.eta / (params.xi * params.p);
    double scale_q = w_hat / params.xi;
    return sample_vector(config, [&](CounterRng &rng) {
        return rng.next_gamma(params.a_ip, scale_ip) + rng.next_gamma(params.a_q, scale_q);
    });
}

std::vector<double> sample_kappa_mu_power(const KappaMuParams &params, double w_hat,
                                          const SimConfig &config)
{
    if (!(w_hat > 0.0))
        throw std::domain_error("sample_kappa_mu_power: w_hat must be positive");
    return sample_vector(config, [&](CounterRng &rng) {
        double m = static_cast<double>(rng.next_poisson(params.kappa * params.mu));
        return rng.next_gamma(params.mu + m, w_hat / params.rate);
    });
}

std::vector<double> sample_sum(const SumDistribution &dist, const SimConfig &config)
{
    return sample_vector(config, [&](CounterRng &rng) {
        return draw_sum(dist.model, dist.n_branches, dist.w_hat, rng);
    });
}

McEstimate empirical_bep(const SumDistribution &dist, const BinaryModulation &mod,
                         const SimConfig &config)
{
    const double g = mod.g_b;
    if (!(g > 0.0))
        throw std::domain_error("empirical_bep: g_b must be positive");
    return estimate_conditional(dist, config,
                                [g](double w) { return 0.5 * std::erfc(std::sqrt(g * w)); });
}

McEstimate empirical_outage(const SumDistribution &dist, double gamma_th, const SimConfig &config)
{
    if (!(gamma_th > 0.0))
        throw std::domain_error("empirical_outage: gamma_th must be positive");
    return estimate_conditional(dist, config,
                                [gamma_th](double w) { return w < gamma_th ? 1.0 : 0.0; });
}

McEstimate empirical_sep_psk(const SumDistribution &dist, const MaryModulation &mod,
                             const SimConfig &config)
{
    if (mod.family != MaryFamily::psk)
        throw std::domain_error("empirical_sep_psk: modulation is not PSK");
    // Conditional SEP given W: (1/pi) integral of exp(-g W / sin^2) over
    // (0, (M-1)pi/M], fixed 64-node quadrature reused for every sample.
    const double theta_hi = M_PI * (mod.order - 1) / mod.order;
    auto nodes = gauss_legendre(64);
    std::vector<std::pair<double, double>> rate_weight;
    rate_weight.reserve(nodes.size());
    for (auto [t, w] : nodes)
    {
        double theta = 0.5 * theta_hi * (t + 1.0);
        double s = std::sin(theta);
        rate_weight.emplace_back(mod.g / (s * s), w * 0.5 * theta_hi / M_PI);
    }
    return estimate_conditional(dist, config, [&rate_weight](double w) {
        double acc = 0.0;
        for (auto [rate, wt] : rate_weight)
            acc += wt * std::exp(-rate * w);
        return acc;
    });
}

McEstimate empirical_sep_qam(const SumDistribution &dist, const MaryModulation &mod,
                             const SimConfig &config)
{
    if (mod.family != MaryFamily::qam)
        throw std::domain_error("empirical_sep_qam: modulation is not QAM");
    const double b = 1.0 - 1.0 / std::sqrt(static_cast<double>(mod.order));
    const double g = mod.g;
    return estimate_conditional(dist, config, [b, g](double w) {
        double q = 0.5 * std::erfc(std::sqrt(g * w));
        return 4.0 * b * q - 4.0 * b * b * q * q;
    });
}

double ks_distance(std::vector<double> samples, const std::function<double(double)> &analytic_cdf)
{
    if (samples.size() < 100)
        throw std::domain_error("ks_distance: needs at least 100 samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        double f = analytic_cdf(samples[i]);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(f - lo, hi - f));
    }
    return d;
}

} // namespace fadesum
