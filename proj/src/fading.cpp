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

#include "fadesum/fading.hpp"

#include <cmath>
#include <stdexcept>

#include "fadesum/signed_log.hpp"
#include "fadesum/specfun.hpp"

namespace fadesum
{

namespace
{

void check_positive(double v, const char *name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string("fading: ") + name + " must be positive and finite");
}

// Shared log-domain core of the two-format densities. Power density of a
// single branch, evaluated at w > 0; the envelope form is 2 r f_W(r^2).
double log_power_pdf_eta_mu(const EtaMuParams &p, double w_hat, double w)
{
    double x = p.xi * (p.eta - p.p) * w / (p.eta * w_hat);
    SignedLogValue f = specfun::hyp1f1(p.a_ip, p.mu, x);
    if (f.sign <= 0)
        throw std::runtime_error("fading: confluent factor lost positivity");
    double lg = p.mu * std::log(p.xi) + (p.mu - 1.0) * std::log(w) +
                p.a_ip * std::log(p.p / p.eta) - specfun::ln_gamma(p.mu) -
                p.mu * std::log(w_hat) - p.xi * w / w_hat;
    return lg + f.log_mag;
}

double log_power_pdf_kappa_mu(const KappaMuParams &p, double w_hat, double w)
{
    double bz = 2.0 * p.mu * std::sqrt(p.kappa * (1.0 + p.kappa) * w / w_hat);
    // Subnormal w can underflow the Bessel argument; the leading order of
    // I_{mu-1} then gives the density in closed form.
    if (bz == 0.0)
        return p.mu * (std::log(p.mu) + std::log1p(p.kappa) - std::log(w_hat)) -
               p.kappa * p.mu - specfun::ln_gamma(p.mu) + (p.mu - 1.0) * std::log(w);
    SignedLogValue bi = specfun::bessel_i(p.mu - 1.0, bz);
    double lg = std::log(p.mu) + 0.5 * (p.mu + 1.0) * std::log1p(p.kappa) +
                0.5 * (p.mu - 1.0) * (std::log(w) - std::log(p.kappa) - std::log(w_hat)) -
                std::log(w_hat) - p.kappa * p.mu - (1.0 + p.kappa) * p.mu * w / w_hat;
    return lg + bi.log_mag;
}

// Limit of t^e as t -> 0+ packaged for the density edge cases.
double origin_limit(double exponent, double finite_value)
{
    if (exponent > 0.0)
        return 0.0;
    if (exponent == 0.0)
        return finite_value;
    return std::numeric_limits<double>::infinity();
}

} // namespace

double power_pdf_eta_mu_single(const EtaMuParams &params, double w_hat, double w)
{
    check_positive(w_hat, "w_hat");
    if (w < 0.0)
        throw std::domain_error("fading: power argument must be nonnegative");
    if (w == 0.0)
    {
        double lim = std::exp(params.mu * std::log(params.xi) +
                              params.a_ip * std::log(params.p / params.eta) -
                              specfun::ln_gamma(params.mu) - params.mu * std::log(w_hat));
        return origin_limit(params.mu - 1.0, lim);
    }
    return std::exp(log_power_pdf_eta_mu(params, w_hat, w));
}

double envelope_pdf_eta_mu(const EtaMuParams &params, double w_hat, double r)
{
    check_positive(w_hat, "w_hat");
    if (r < 0.0)
        throw std::domain_error("fading: envelope argument must be nonnegative");
    // r*r == 0 covers both the exact origin and r small enough that the
    // squared envelope underflows; the limit formula is correct for both.
    if (r * r == 0.0)
    {
        double lim = 2.0 * std::exp(params.mu * std::log(params.xi) +
                                    params.a_ip * std::log(params.p / params.eta) -
                                    specfun::ln_gamma(params.mu) - params.mu * std::log(w_hat));
        return origin_limit(2.0 * params.mu - 1.0, lim);
    }
    return std::exp(std::log(2.0 * r) + log_power_pdf_eta_mu(params, w_hat, r * r));
}

double power_pdf_kappa_mu_single(const KappaMuParams &params, double w_hat, double w)
{
    check_positive(w_hat, "w_hat");
    if (w < 0.0)
        throw std::domain_error("fading: power argument must be nonnegative");
    if (w == 0.0)
    {
        // Leading order of I_{mu-1} cancels the kappa^{(mu-1)/2} scale; the
        // density behaves as (mu(1+kappa)/w_hat)^mu w^{mu-1}/(Gamma(mu) e^{kappa mu}).
        double lim = std::exp(params.mu * (std::log(params.mu) + std::log1p(params.kappa) -
                                           std::log(w_hat)) -
                              params.kappa * params.mu - specfun::ln_gamma(params.mu));
        return origin_limit(params.mu - 1.0, lim);
    }
    return std::exp(log_power_pdf_kappa_mu(params, w_hat, w));
}

double envelope_pdf_kappa_mu(const KappaMuParams &params, double w_hat, double r)
{
    check_positive(w_hat, "w_hat");
    if (r < 0.0)
        throw std::domain_error("fading: envelope argument must be nonnegative");
    if (r * r == 0.0)
    {
        double lim = 2.0 * std::exp(params.mu * (std::log(params.mu) + std::log1p(params.kappa) -
                                                 std::log(w_hat)) -
                                    params.kappa * params.mu - specfun::ln_gamma(params.mu));
        return origin_limit(2.0 * params.mu - 1.0, lim);
    }
    return std::exp(std::log(2.0 * r) + log_power_pdf_kappa_mu(params, w_hat, r * r));
}

} // namespace fadesum
