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

#include <catch2/catch_amalgamated.hpp>

#include "fadesum/fading.hpp"

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "oracle_util.hpp"

using namespace fadesum;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

const double w_grid[] = {0.04, 0.3, 0.9, 1.7, 3.2, 6.5};

void check_close(double got, double want, double rel, double abs = 0.0)
{
    if (abs > 0.0 && std::fabs(want) < abs)
        REQUIRE_THAT(got, WithinAbs(want, abs));
    else
        REQUIRE_THAT(got, WithinRel(want, rel));
}

} // namespace

TEST_CASE("imbalance-model power density matches a two-gamma convolution")
{
    const double cfgs[][3] = {{1.5, 2.0, 0.5}, {0.3, 0.5, 2.2}, {4.0, 1.3, 4.0}, {2.0, 0.7, 2.0}};
    for (auto [eta, mu, p] : cfgs)
    {
        EtaMuParams prm(eta, mu, p);
        for (double w_hat : {1.0, 2.8576e-2})
            for (double t : w_grid)
            {
                double w = t * w_hat;
                double ref = oracle::eta_mu_sum_pdf(prm, 1, w_hat, w);
                check_close(power_pdf_eta_mu_single(prm, w_hat, w), ref, 5e-10);
            }
    }
}

TEST_CASE("line-of-sight power density matches a scaled noncentral chi-square")
{
    const double cfgs[][2] = {{1.5, 1.5}, {0.5, 0.5}, {3.0, 2.7}, {0.2, 4.0}};
    for (auto [kappa, mu] : cfgs)
    {
        KappaMuParams prm(kappa, mu);
        for (double w_hat : {1.0, 1.83e-2})
            for (double t : w_grid)
            {
                double w = t * w_hat;
                double ref = oracle::kappa_mu_sum_pdf(prm, 1, w_hat, w);
                check_close(power_pdf_kappa_mu_single(prm, w_hat, w), ref, 2e-11);
            }
    }
}

TEST_CASE("envelope density is the change of variables of the power density")
{
    EtaMuParams em(1.8, 1.4, 0.6);
    KappaMuParams km(2.3, 1.1);
    for (double w_hat : {1.0, 0.37})
        for (double r : {0.1, 0.45, 0.8, 1.3, 2.1})
        {
            check_close(envelope_pdf_eta_mu(em, w_hat, r),
                        2.0 * r * oracle::eta_mu_sum_pdf(em, 1, w_hat, r * r), 5e-10);
            check_close(envelope_pdf_kappa_mu(km, w_hat, r),
                        2.0 * r * oracle::kappa_mu_sum_pdf(km, 1, w_hat, r * r), 2e-11);
        }
}

TEST_CASE("power densities integrate to one with mean w_hat")
{
    boost::math::quadrature::exp_sinh<double> integ;
    const double w_hat = 1.7;

    EtaMuParams em(0.9, 0.6, 1.8);
    double mass = integ.integrate([&](double w) { return power_pdf_eta_mu_single(em, w_hat, w); });
    double mean =
        integ.integrate([&](double w) { return w * power_pdf_eta_mu_single(em, w_hat, w); });
    REQUIRE_THAT(mass, WithinRel(1.0, 1e-10));
    REQUIRE_THAT(mean, WithinRel(w_hat, 1e-10));

    KappaMuParams km(1.2, 0.8);
    mass = integ.integrate([&](double w) { return power_pdf_kappa_mu_single(km, w_hat, w); });
    mean = integ.integrate([&](double w) { return w * power_pdf_kappa_mu_single(km, w_hat, w); });
    REQUIRE_THAT(mass, WithinRel(1.0, 1e-10));
    REQUIRE_THAT(mean, WithinRel(w_hat, 1e-10));

    // Envelope format: mass one, second moment w_hat.
    mass = integ.integrate([&](double r) { return envelope_pdf_kappa_mu(km, w_hat, r); });
    double m2 = integ.integrate([&](double r) { return r * r * envelope_pdf_kappa_mu(km, w_hat, r); });
    REQUIRE_THAT(mass, WithinRel(1.0, 1e-10));
    REQUIRE_THAT(m2, WithinRel(w_hat, 1e-10));
}

TEST_CASE("density value at the origin follows the cluster count")
{
    const double w_hat = 0.8;

    // mu < 1: the w^{mu-1} factor diverges.
    REQUIRE(std::isinf(power_pdf_eta_mu_single(EtaMuParams(1.5, 0.5, 0.75), w_hat, 0.0)));
    REQUIRE(std::isinf(power_pdf_kappa_mu_single(KappaMuParams(0.5, 0.5), w_hat, 0.0)));

    // mu = 1: finite limits, xi (p/eta)^{a_ip} / w_hat and (1+kappa) e^{-kappa} / w_hat.
    {
        EtaMuParams em(2.0, 1.0, 0.5);
        double want = em.xi * std::pow(em.p / em.eta, em.a_ip) / w_hat;
        check_close(power_pdf_eta_mu_single(em, w_hat, 0.0), want, 1e-13);
        KappaMuParams km(1.7, 1.0);
        double want_k = (1.0 + km.kappa) * std::exp(-km.kappa) / w_hat;
        check_close(power_pdf_kappa_mu_single(km, w_hat, 0.0), want_k, 1e-13);
        // Continuity: the w -> 0 trend approaches the same limit.
        check_close(power_pdf_eta_mu_single(em, w_hat, 1e-9), want, 1e-6);
        check_close(power_pdf_kappa_mu_single(km, w_hat, 1e-9), want_k, 1e-6);
    }

    // mu > 1: zero.
    REQUIRE(power_pdf_eta_mu_single(EtaMuParams(1.5, 2.0, 0.5), w_hat, 0.0) == 0.0);
    REQUIRE(power_pdf_kappa_mu_single(KappaMuParams(1.5, 1.5), w_hat, 0.0) == 0.0);

    // Envelope format switches branches at mu = 1/2.
    REQUIRE(std::isinf(envelope_pdf_eta_mu(EtaMuParams(1.0, 0.3, 1.0), w_hat, 0.0)));
    REQUIRE(envelope_pdf_kappa_mu(KappaMuParams(1.0, 0.8), w_hat, 0.0) == 0.0);
}

TEST_CASE("densities reject negative arguments and bad scales")
{
    EtaMuParams em(1.5, 2.0, 0.5);
    KappaMuParams km(1.5, 1.5);
    REQUIRE_THROWS_AS(power_pdf_eta_mu_single(em, 1.0, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(envelope_pdf_eta_mu(em, 1.0, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(power_pdf_kappa_mu_single(km, 1.0, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(envelope_pdf_kappa_mu(km, 1.0, -0.1), std::domain_error);
    REQUIRE_THROWS_AS(power_pdf_eta_mu_single(em, 0.0, 0.5), std::domain_error);
    REQUIRE_THROWS_AS(power_pdf_kappa_mu_single(km, -1.0, 0.5), std::domain_error);

    REQUIRE_THROWS_AS(EtaMuParams(0.0, 1.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(EtaMuParams(1.0, -2.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(EtaMuParams(1.0, 1.0, 0.0), std::domain_error);
    REQUIRE_THROWS_AS(KappaMuParams(0.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(KappaMuParams(1.0, 0.0), std::domain_error);
}

TEST_CASE("swapping in-phase and quadrature roles leaves the density unchanged")
{
    // (eta, mu, p) and (1/eta, mu, 1/p) describe the same channel with the
    // component labels exchanged.
    const double cfgs[][3] = {{1.5, 2.0, 0.5}, {0.3, 0.5, 2.2}, {4.0, 1.3, 4.0}};
    for (auto [eta, mu, p] : cfgs)
    {
        EtaMuParams fwd(eta, mu, p);
        EtaMuParams swp(1.0 / eta, mu, 1.0 / p);
        for (double w : w_grid)
        {
            check_close(power_pdf_eta_mu_single(swp, 1.0, w),
                        power_pdf_eta_mu_single(fwd, 1.0, w), 1e-12);
            double r = std::sqrt(w);
            check_close(envelope_pdf_eta_mu(swp, 1.0, r), envelope_pdf_eta_mu(fwd, 1.0, r), 1e-12);
        }
    }
}

TEST_CASE("balanced cluster ratio collapses to a gamma density")
{
    // p = eta makes the two gamma components share one scale.
    EtaMuParams prm(1.8, 2.4, 1.8);
    const double w_hat = 0.93;
    boost::math::gamma_distribution<double> gd(prm.mu, w_hat / prm.xi);
    for (double w : w_grid)
        check_close(power_pdf_eta_mu_single(prm, w_hat, w), boost::math::pdf(gd, w), 1e-12);
}
