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
// Test-only reference implementations. Everything here is deliberately
// independent of the library's series machinery:
//   - hypergeometric / Appell references through Boost pFq and Euler-type
//     integrals in 50-digit arithmetic,
//   - sum-distribution references through the exact structure of the models
//     (two-gamma convolution, scaled noncentral chi-square),
//   - error-metric references through the defining MGF angular integrals
//     evaluated on the closed-form product MGF.

#ifndef FADESUM_TESTS_ORACLE_UTIL_HPP
#define FADESUM_TESTS_ORACLE_UTIL_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fadesum/fading.hpp"

namespace oracle
{

using mp50 = boost::multiprecision::cpp_bin_float_50;

inline double to_d(const mp50 &x) { return static_cast<double>(x); }

// ----------------------------------------------------------------- pFq ----

inline double pfq(const std::vector<double> &a, const std::vector<double> &b, double z)
{
    std::vector<mp50> am(a.begin(), a.end()), bm(b.begin(), b.end());
    return to_d(boost::math::hypergeometric_pFq(am, bm, mp50(z)));
}

inline double hyp1f1(double a, double b, double z) { return pfq({a}, {b}, z); }

// Euler integral, valid for c > b > 0 and z < 1; independent of any series
// continuation logic.
inline double hyp2f1_euler(double a, double b, double c, double z)
{
    if (!(c > b) || !(b > 0.0) || !(z < 1.0))
        throw std::invalid_argument("hyp2f1_euler: needs c > b > 0, z < 1");
    boost::math::quadrature::tanh_sinh<mp50> integ;
    mp50 am(a), bm(b), cm(c), zm(z);
    mp50 val = integ.integrate(
        [&](const mp50 &t) {
            return pow(t, bm - 1) * pow(1 - t, cm - bm - 1) * pow(1 - zm * t, -am);
        },
        mp50(0), mp50(1));
    mp50 front = boost::math::tgamma(cm) / (boost::math::tgamma(bm) * boost::math::tgamma(cm - bm));
    return to_d(front * val);
}

// Appell F1 Euler integral, valid for c > a > 0, x < 1, y < 1.
inline double appell_f1_euler(double a, double b1, double b2, double c, double x, double y)
{
    if (!(c > a) || !(a > 0.0) || !(x < 1.0) || !(y < 1.0))
        throw std::invalid_argument("appell_f1_euler: needs c > a > 0, x < 1, y < 1");
    boost::math::quadrature::tanh_sinh<mp50> integ;
    mp50 am(a), b1m(b1), b2m(b2), cm(c), xm(x), ym(y);
    mp50 val = integ.integrate(
        [&](const mp50 &t) {
            return pow(t, am - 1) * pow(1 - t, cm - am - 1) * pow(1 - xm * t, -b1m) *
                   pow(1 - ym * t, -b2m);
        },
        mp50(0), mp50(1));
    mp50 front = boost::math::tgamma(cm) / (boost::math::tgamma(am) * boost::math::tgamma(cm - am));
    return to_d(front * val);
}

// ------------------------------------------------- series coefficients ----

// Truncated product of two power series.
inline std::vector<mp50> poly_mul(const std::vector<mp50> &a, const std::vector<mp50> &b,
                                  std::size_t m)
{
    std::vector<mp50> out(m + 1, mp50(0));
    for (std::size_t i = 0; i <= m && i < a.size(); ++i)
        for (std::size_t j = 0; i + j <= m && j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

// N-th power by repeated squaring (schoolbook products only, so the result
// does not share structure with the library's logarithmic-derivative
// recursions).
inline std::vector<mp50> poly_pow(const std::vector<mp50> &base, int n, std::size_t m)
{
    std::vector<mp50> result(m + 1, mp50(0));
    result[0] = 1;
    std::vector<mp50> sq = base;
    while (n > 0)
    {
        if (n & 1)
            result = poly_mul(result, sq, m);
        sq = poly_mul(sq, sq, m);
        n >>= 1;
    }
    return result;
}

// Coefficients of (1 + alpha t)^(-A).
inline std::vector<mp50> binom_series(const mp50 &A, const mp50 &alpha, std::size_t m)
{
    std::vector<mp50> c(m + 1);
    c[0] = 1;
    for (std::size_t i = 1; i <= m; ++i)
        c[i] = -c[i - 1] * (A + mp50(i - 1)) * alpha / mp50(i);
    return c;
}

// Per-branch tail-series coefficients of the two models, i.e. the expansion
// of the branch MGF around s = infinity with the leading power and prefactor
// stripped (t = 1/(s w_hat)):
//   eta-mu:   (1 + xi p t / eta)^(-a_ip) (1 + xi t)^(-a_q)
//   kappa-mu: sum_l ((kappa mu A t)^l / l!) (1 + A t)^(-(mu + l))
inline std::vector<mp50> eta_mu_branch_tail(const fadesum::EtaMuParams &p, std::size_t m)
{
    return poly_mul(binom_series(mp50(p.a_ip), mp50(p.xi) * mp50(p.p) / mp50(p.eta), m),
                    binom_series(mp50(p.a_q), mp50(p.xi), m), m);
}

inline std::vector<mp50> kappa_mu_branch_tail(const fadesum::KappaMuParams &p, std::size_t m)
{
    std::vector<mp50> total(m + 1, mp50(0));
    mp50 lam = mp50(p.kappa) * mp50(p.mu);
    mp50 A(p.rate);
    mp50 pref(1);
    for (std::size_t l = 0; l <= m; ++l)
    {
        std::vector<mp50> bin = binom_series(mp50(p.mu) + mp50(l), A, m - l);
        for (std::size_t j = 0; l + j <= m; ++j)
            total[l + j] += pref * bin[j];
        pref *= lam * A / mp50(l + 1);
    }
    return total;
}

// ------------------------------------------- exact sum-structure oracles ----

// Log of the closed-form product MGF E[exp(-s W)] of the N-branch sum.
inline double log_mgf_closed(const fadesum::ModelParams &model, int n, double w_hat, double s)
{
    if (std::holds_alternative<fadesum::EtaMuParams>(model))
    {
        const auto &p = std::get<fadesum::EtaMuParams>(model);
        return n * (-p.a_ip * std::log1p(s * w_hat * p.eta / (p.xi * p.p)) -
                    p.a_q * std::log1p(s * w_hat / p.xi));
    }
    const auto &p = std::get<fadesum::KappaMuParams>(model);
    double A = p.rate;
    return n * (p.mu * (std::log(A) - std::log(A + s * w_hat)) -
                p.kappa * p.mu * s * w_hat / (A + s * w_hat));
}

// Exact CDF / PDF of the kappa-mu N-branch sum: scaled noncentral chi-square
// with 2 N mu degrees of freedom and noncentrality 2 N kappa mu.
inline double kappa_mu_sum_cdf(const fadesum::KappaMuParams &p, int n, double w_hat, double w)
{
    if (w <= 0.0)
        return 0.0;
    boost::math::non_central_chi_squared_distribution<double> d(2.0 * n * p.mu,
                                                                2.0 * n * p.kappa * p.mu);
    return boost::math::cdf(d, 2.0 * p.rate * w / w_hat);
}

inline double kappa_mu_sum_pdf(const fadesum::KappaMuParams &p, int n, double w_hat, double w)
{
    if (w <= 0.0)
        return 0.0;
    boost::math::non_central_chi_squared_distribution<double> d(2.0 * n * p.mu,
                                                                2.0 * n * p.kappa * p.mu);
    return boost::math::pdf(d, 2.0 * p.rate * w / w_hat) * 2.0 * p.rate / w_hat;
}

// Exact CDF / PDF of the eta-mu N-branch sum: convolution of
// Gamma(N a_ip, th1) and Gamma(N a_q, th2), th1 = w_hat eta/(xi p),
// th2 = w_hat/xi, done with Boost incomplete gammas under tanh_sinh.
inline double eta_mu_sum_cdf(const fadesum::EtaMuParams &p, int n, double w_hat, double w)
{
    if (w <= 0.0)
        return 0.0;
    const double k1 = n * p.a_ip, th1 = w_hat * p.eta / (p.xi * p.p);
    const double k2 = n * p.a_q, th2 = w_hat / p.xi;
    // P(X+Y <= w) split at w/2 so each density sees its own variable:
    // int_0^{w/2} [f1 P2(w-x) + f2 P1(w-x)] dx - P1(w/2) P2(w/2).
    boost::math::quadrature::tanh_sinh<double> integ;
    const double h = 0.5 * w;
    const double tiny = std::numeric_limits<double>::min();
    double val = integ.integrate(
        [&](double v) {
            double x = std::max(v * h, tiny); // keep the singular factor finite
            double y = w - x;
            return h * (boost::math::gamma_p_derivative(k1, x / th1) / th1 *
                            boost::math::gamma_p(k2, y / th2) +
                        boost::math::gamma_p_derivative(k2, x / th2) / th2 *
                            boost::math::gamma_p(k1, y / th1));
        },
        0.0, 1.0, 1e-12);
    return val - boost::math::gamma_p(k1, h / th1) * boost::math::gamma_p(k2, h / th2);
}

inline double eta_mu_sum_pdf(const fadesum::EtaMuParams &p, int n, double w_hat, double w)
{
    if (w <= 0.0)
        return 0.0;
    const double k1 = n * p.a_ip, th1 = w_hat * p.eta / (p.xi * p.p);
    const double k2 = n * p.a_q, th2 = w_hat / p.xi;
    // Split the convolution at w/2 and fold the halves so each singular
    // factor is evaluated in its own variable, never through w - x.
    boost::math::quadrature::tanh_sinh<double> integ;
    const double h = 0.5 * w;
    const double tiny = std::numeric_limits<double>::min();
    double val = integ.integrate(
        [&](double v) {
            double x = std::max(v * h, tiny); // keep the singular factor finite
            double y = w - x;                 // >= w/2, no singular amplification
            return h * (boost::math::gamma_p_derivative(k1, x / th1) / th1 *
                            boost::math::gamma_p_derivative(k2, y / th2) / th2 +
                        boost::math::gamma_p_derivative(k2, x / th2) / th2 *
                            boost::math::gamma_p_derivative(k1, y / th1) / th1);
        },
        0.0, 1.0, 1e-12);
    return val;
}

inline double sum_cdf(const fadesum::ModelParams &model, int n, double w_hat, double w)
{
    if (std::holds_alternative<fadesum::EtaMuParams>(model))
        return eta_mu_sum_cdf(std::get<fadesum::EtaMuParams>(model), n, w_hat, w);
    return kappa_mu_sum_cdf(std::get<fadesum::KappaMuParams>(model), n, w_hat, w);
}

inline double sum_pdf(const fadesum::ModelParams &model, int n, double w_hat, double w)
{
    if (std::holds_alternative<fadesum::EtaMuParams>(model))
        return eta_mu_sum_pdf(std::get<fadesum::EtaMuParams>(model), n, w_hat, w);
    return kappa_mu_sum_pdf(std::get<fadesum::KappaMuParams>(model), n, w_hat, w);
}

// ------------------------------------------ defining metric integrals ----

// Average EP of a scheme whose conditional EP is (1/pi) * integral over
// (0, theta_hi) of exp(-g W / sin^2 theta): equals the same angular integral
// of the closed-form MGF. Binary coherent schemes use theta_hi = pi/2,
// M-PSK uses theta_hi = (M-1) pi / M.
inline double ep_angular_integral(const fadesum::ModelParams &model, int n, double w_hat, double g,
                                  double theta_hi)
{
    boost::math::quadrature::gauss_kronrod<double, 61> integ;
    double val = integ.integrate(
        [&](double th) {
            double s = std::sin(th);
            return std::exp(log_mgf_closed(model, n, w_hat, g / (s * s)));
        },
        0.0, theta_hi, 12, 1e-13);
    return val / M_PI;
}

inline double bep_oracle(const fadesum::ModelParams &model, int n, double w_hat, double g_b)
{
    return ep_angular_integral(model, n, w_hat, g_b, M_PI / 2.0);
}

inline double sep_psk_oracle(const fadesum::ModelParams &model, int n, double w_hat, int order,
                             double g)
{
    return ep_angular_integral(model, n, w_hat, g, M_PI * (order - 1) / order);
}

inline double sep_qam_oracle(const fadesum::ModelParams &model, int n, double w_hat, int order,
                             double g)
{
    double b = 1.0 - 1.0 / std::sqrt(static_cast<double>(order));
    return 4.0 * b * ep_angular_integral(model, n, w_hat, g, M_PI / 2.0) -
           4.0 * b * b * ep_angular_integral(model, n, w_hat, g, M_PI / 4.0);
}

} // namespace oracle

#endif
