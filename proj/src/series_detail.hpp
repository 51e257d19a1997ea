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
// Internal helpers shared by the series engine and the metric layer. Not
// part of the public headers.

#ifndef FADESUM_SERIES_DETAIL_HPP
#define FADESUM_SERIES_DETAIL_HPP

#include <cmath>

#include "fadesum/fading.hpp"

namespace fadesum::detail
{

inline double model_mu(const ModelParams &params)
{
    if (std::holds_alternative<EtaMuParams>(params))
        return std::get<EtaMuParams>(params).mu;
    return std::get<KappaMuParams>(params).mu;
}

// log of the approach-1 prefactor multiplying every series term.
inline double log_prefactor_a1(const ModelParams &params, int n)
{
    if (std::holds_alternative<EtaMuParams>(params))
    {
        const auto &p = std::get<EtaMuParams>(params);
        return n *
               (p.mu * std::log(p.xi) + p.a_ip * std::log(p.p / p.eta) - std::lgamma(p.a_ip));
    }
    const auto &p = std::get<KappaMuParams>(params);
    return n * p.mu * (std::log(p.rate) - p.kappa);
}

// log of the approach-2 prefactor (without any w-dependent kernel).
inline double log_prefactor_a2(const ModelParams &params, int n)
{
    if (std::holds_alternative<EtaMuParams>(params))
    {
        const auto &p = std::get<EtaMuParams>(params);
        return n * (p.a_ip * std::log(p.p / p.eta) - std::lgamma(p.a_ip));
    }
    const auto &p = std::get<KappaMuParams>(params);
    return -static_cast<double>(n) * p.kappa * p.mu;
}

// Rate r of the approach-2 rational kernel r/(r + s*w_hat).
inline double a2_rate(const ModelParams &params)
{
    if (std::holds_alternative<EtaMuParams>(params))
        return std::get<EtaMuParams>(params).xi;
    return std::get<KappaMuParams>(params).rate;
}

// First-term scale of the high-SNR laws: (p/eta)^{p/(1+p)} xi for eta-mu,
// (kappa+1) mu e^{-kappa} for kappa-mu; every asymptote is
// (scale * x / w_hat)^{N mu} over a Gamma-ratio front factor.
inline double asymptote_scale(const ModelParams &params)
{
    if (std::holds_alternative<EtaMuParams>(params))
    {
        const auto &p = std::get<EtaMuParams>(params);
        return std::pow(p.p / p.eta, p.p / (1.0 + p.p)) * p.xi;
    }
    const auto &p = std::get<KappaMuParams>(params);
    return p.rate * std::exp(-p.kappa);
}

} // namespace fadesum::detail

#endif
