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

#ifndef FADESUM_FADING_HPP
#define FADESUM_FADING_HPP

#include <stdexcept>
#include <variant>

namespace fadesum
{

// Non-line-of-sight model with in-phase/quadrature power imbalance.
//   eta : in-phase to quadrature power ratio, > 0
//   mu  : number of multipath clusters, > 0
//   p   : in-phase to quadrature cluster-count ratio, > 0
// Derived constants are fixed at construction; every series reads them.
//   xi   = mu (1 + eta) / (1 + p)
//   a_ip = mu p / (1 + p)   (in-phase gamma shape)
//   a_q  = mu / (1 + p)     (quadrature gamma shape), a_ip + a_q = mu
struct EtaMuParams
{
    double eta;
    double mu;
    double p;
    double xi;
    double a_ip;
    double a_q;

    EtaMuParams(double eta_, double mu_, double p_) : eta(eta_), mu(mu_), p(p_)
    {
        if (!(eta > 0.0) || !(mu > 0.0) || !(p > 0.0))
            throw std::domain_error("EtaMuParams: eta, mu, p must all be > 0");
        xi = mu * (1.0 + eta) / (1.0 + p);
        a_ip = mu * p / (1.0 + p);
        a_q = mu / (1.0 + p);
    }
};

// Line-of-sight model.
//   kappa : dominant to scattered power ratio, > 0
//   mu    : number of multipath clusters, > 0
// Derived:
//   rate    = (1 + kappa) mu   (exponential rate of the shifted series)
//   k_bound = mu (kappa+1)(kappa mu + 1), used only inside the convergence
//             and truncation bounds, never in distribution formulas.
struct KappaMuParams
{
    double kappa;
    double mu;
    double rate;
    double k_bound;

    KappaMuParams(double kappa_, double mu_) : kappa(kappa_), mu(mu_)
    {
        if (!(kappa > 0.0) || !(mu > 0.0))
            throw std::domain_error("KappaMuParams: kappa, mu must be > 0");
        rate = (1.0 + kappa) * mu;
        k_bound = mu * (kappa + 1.0) * (kappa * mu + 1.0);
    }
};

using ModelParams = std::variant<EtaMuParams, KappaMuParams>;

// Single-branch densities. w_hat is the mean of the squared envelope.
double envelope_pdf_eta_mu(const EtaMuParams &params, double w_hat, double r);
double power_pdf_eta_mu_single(const EtaMuParams &params, double w_hat, double w);
double envelope_pdf_kappa_mu(const KappaMuParams &params, double w_hat, double r);
double power_pdf_kappa_mu_single(const KappaMuParams &params, double w_hat, double w);

} // namespace fadesum

#endif
