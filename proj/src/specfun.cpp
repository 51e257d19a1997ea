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

#include "fadesum/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fadesum/errors.hpp"
#include "fadesum/quadrature.hpp"

namespace fadesum::specfun
{

namespace
{

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
const double log_series_tol = std::log(series_tol);

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Gamma(x) as a signed log value for any non-pole real x (reflection below 0).
SignedLogValue gamma_slv(double x)
{
    if (x > 0.0)
        return SignedLogValue::from_log(std::lgamma(x), 1);
    if (is_nonpositive_integer(x))
        throw std::domain_error("gamma: pole at nonpositive integer " + std::to_string(x));
    double s = std::sin(M_PI * x);
    double lm = std::log(M_PI) - std::log(std::fabs(s)) - std::lgamma(1.0 - x);
    return SignedLogValue::from_log(lm, s > 0.0 ? 1 : -1);
}

// 1/Gamma(x); exact zero at the poles.
SignedLogValue recip_gamma_slv(double x)
{
    if (is_nonpositive_integer(x))
        return SignedLogValue::zero();
    SignedLogValue g = gamma_slv(x);
    return SignedLogValue::one() / g;
}

// Generalized hypergeometric series sum_k prod(a_i)_k / prod(b_j)_k * z^k/k!
// with the standard stall rule. Terms are marched by their exact ratio; a
// numerator hitting a nonpositive integer terminates the series exactly.
SignedLogValue pfq_series(const double *as, int np, const double *bs, int nq, double z,
                          const char *name)
{
    for (int j = 0; j < nq; ++j)
        if (is_nonpositive_integer(bs[j]))
            throw std::domain_error(std::string(name) +
                                    ": lower parameter is a nonpositive integer");
    if (z == 0.0)
        return SignedLogValue::one();

    SignedLogAccumulator acc;
    SignedLogValue term = SignedLogValue::one();
    acc.add(term);
    int stall = 0;
    double log_az = std::log(std::fabs(z));
    int sign_z = z < 0.0 ? -1 : 1;
    for (int k = 0; k < series_max_terms; ++k)
    {
        double lm = term.log_mag + log_az - std::log1p(static_cast<double>(k));
        int sg = term.sign * sign_z;
        bool zero = false;
        for (int i = 0; i < np; ++i)
        {
            double f = as[i] + k;
            if (f == 0.0)
            {
                zero = true;
                break;
            }
            lm += std::log(std::fabs(f));
            if (f < 0.0)
                sg = -sg;
        }
        if (zero)
            return acc.total(); // terminating (polynomial) case
        for (int j = 0; j < nq; ++j)
        {
            double f = bs[j] + k;
            lm -= std::log(std::fabs(f));
            if (f < 0.0)
                sg = -sg;
        }
        term = SignedLogValue::from_log(lm, sg);
        acc.add(term);
        SignedLogValue partial = acc.total();
        double ref = partial.is_zero() ? neg_inf : partial.log_mag;
        if (term.log_mag < log_series_tol + ref)
        {
            if (++stall >= series_stall_count)
                return partial;
        }
        else
        {
            stall = 0;
        }
    }
    throw ConvergenceFailure(std::string(name) + ": series exceeded " +
                                 std::to_string(series_max_terms) + " terms",
                             series_max_terms, term.log_mag);
}

SignedLogValue hyp2f1_direct(double a, double b, double c, double z)
{
    double as[2] = {a, b};
    double bs[1] = {c};
    return pfq_series(as, 2, bs, 1, z, "hyp2f1");
}

// Connection formula in powers of 1-z; requires c-a-b non-integer.
SignedLogValue hyp2f1_near_one(double a, double b, double c, double z)
{
    double s = c - a - b;
    if (std::fabs(s - std::nearbyint(s)) < 1e-9)
        return hyp2f1_direct(a, b, c, z); // may be slow; honest fallback
    double omz = 1.0 - z;
    SignedLogValue t1 = gamma_slv(c) * gamma_slv(s) * recip_gamma_slv(c - a) *
                        recip_gamma_slv(c - b) * hyp2f1_direct(a, b, 1.0 - s, omz);
    SignedLogValue pw = SignedLogValue::from_log(s * std::log(omz), 1);
    SignedLogValue t2 = pw * gamma_slv(c) * gamma_slv(-s) * recip_gamma_slv(a) *
                        recip_gamma_slv(b) * hyp2f1_direct(c - a, c - b, 1.0 + s, omz);
    return t1 + t2;
}

// Large-argument expansion of 1F1 for z >> max(|a|, |b|); terms are summed
// to their smallest magnitude (asymptotic, error below the stopping term).
SignedLogValue hyp1f1_asymptotic(double a, double b, double z)
{
    SignedLogValue prefix = gamma_slv(b) * recip_gamma_slv(a) *
                            SignedLogValue::from_log(z + (a - b) * std::log(z), 1);
    SignedLogAccumulator acc;
    SignedLogValue u = SignedLogValue::one();
    acc.add(u);
    double prev_mag = 0.0;
    for (int k = 0; k < 400; ++k)
    {
        double f1 = b - a + k;
        double f2 = 1.0 - a + k;
        if (f1 == 0.0 || f2 == 0.0)
            break; // expansion terminates
        double lm = u.log_mag + std::log(std::fabs(f1)) + std::log(std::fabs(f2)) -
                    std::log1p(static_cast<double>(k)) - std::log(z);
        int sg = u.sign;
        if (f1 < 0.0)
            sg = -sg;
        if (f2 < 0.0)
            sg = -sg;
        if (k > 0 && lm >= prev_mag)
            break; // divergent turn of the asymptotic series
        u = SignedLogValue::from_log(lm, sg);
        prev_mag = lm;
        acc.add(u);
        if (lm < -40.0) // relative to the leading 1
            break;
    }
    return prefix * acc.total();
}

// Integral form of the metric-family Appell function,
//   F1(1/2; 1/2-c, c; 3/2; x, y) = int_0^1 (1-x u^2)^(c-1/2) (1-y u^2)^(-c) du
// for c > 0 and x >= y >= 0. The integrand lies in (0, (1-x)^(-1/2)] so plain
// double arithmetic suffices; adaptive bisection with fixed-order panels.
struct AppellIntegrand
{
    double c, x, y;
    double operator()(double u) const
    {
        double u2 = u * u;
        return std::exp((c - 0.5) * std::log1p(-x * u2) - c * std::log1p(-y * u2));
    }
};

double adapt_gl(const AppellIntegrand &f, double lo, double hi, double whole, double tol_abs,
                int depth)
{
    double mid = 0.5 * (lo + hi);
    double left = gauss_legendre_integrate(f, lo, mid, 32);
    double right = gauss_legendre_integrate(f, mid, hi, 32);
    double delta = left + right - whole;
    if (std::fabs(delta) < tol_abs || depth >= 48)
        return left + right;
    return adapt_gl(f, lo, mid, left, 0.5 * tol_abs, depth + 1) +
           adapt_gl(f, mid, hi, right, 0.5 * tol_abs, depth + 1);
}

SignedLogValue appell_family_integral(double c, double x, double y)
{
    AppellIntegrand f{c, x, y};
    double whole = gauss_legendre_integrate(f, 0.0, 1.0, 32);
    double value = adapt_gl(f, 0.0, 1.0, whole, std::max(whole, 1.0) * 5e-15, 0);
    return SignedLogValue::from_double(value);
}

// Diagonal-ordered double series for Appell F1. Pochhammer columns are
// grown incrementally as signed log values so zero factors terminate rows
// exactly.
SignedLogValue appell_diagonal(double a, double b1, double b2, double c, double x, double y)
{
    std::vector<SignedLogValue> pb1{SignedLogValue::one()}; // (b1)_r
    std::vector<SignedLogValue> pb2{SignedLogValue::one()}; // (b2)_s
    std::vector<SignedLogValue> px{SignedLogValue::one()};  // x^r / r!
    std::vector<SignedLogValue> py{SignedLogValue::one()};  // y^s / s!

    SignedLogValue an = SignedLogValue::one(); // (a)_n / (c)_n
    SignedLogAccumulator acc;
    acc.add(SignedLogValue::one()); // n = 0 diagonal
    int stall = 0;
    for (int n = 1; n <= series_max_terms; ++n)
    {
        int r = n;
        pb1.push_back(pb1.back() * SignedLogValue::from_double(b1 + (r - 1)));
        pb2.push_back(pb2.back() * SignedLogValue::from_double(b2 + (r - 1)));
        px.push_back(px.back() * SignedLogValue::from_double(x / r));
        py.push_back(py.back() * SignedLogValue::from_double(y / r));
        double fa = a + (n - 1);
        double fc = c + (n - 1);
        an = an * SignedLogValue::from_double(fa) / SignedLogValue::from_double(fc);
        if (an.is_zero())
            break; // (a)_n hit zero: all later diagonals vanish

        SignedLogAccumulator diag;
        for (int i = 0; i <= n; ++i)
            diag.add(pb1[static_cast<std::size_t>(i)] * px[static_cast<std::size_t>(i)] *
                     pb2[static_cast<std::size_t>(n - i)] * py[static_cast<std::size_t>(n - i)]);
        SignedLogValue tn = an * diag.total();
        acc.add(tn);

        SignedLogValue partial = acc.total();
        double ref = partial.is_zero() ? neg_inf : partial.log_mag;
        double tn_mag = tn.is_zero() ? neg_inf : tn.log_mag;
        if (tn_mag < log_series_tol + ref)
        {
            if (++stall >= series_stall_count)
                return partial;
        }
        else
        {
            stall = 0;
        }
        if (n == series_max_terms)
            throw ConvergenceFailure("appell_f1: diagonal series exceeded budget",
                                     static_cast<std::size_t>(n), tn_mag);
    }
    return acc.total();
}

} // namespace

double ln_gamma(double x)
{
    if (!(x > 0.0))
        throw std::domain_error("ln_gamma: requires x > 0");
    return std::lgamma(x);
}

double erfc(double x) { return std::erfc(x); }

double ln_erfc(double x)
{
    if (x < 8.0)
        return std::log(std::erfc(x));
    // erfc(x) = exp(-x^2) / (x sqrt(pi)) * S(x), asymptotic S summed to its
    // smallest term.
    double inv2x2 = 1.0 / (2.0 * x * x);
    double t = 1.0, s = 1.0;
    for (int k = 1; k <= 60; ++k)
    {
        double tn = -t * (2.0 * k - 1.0) * inv2x2;
        if (std::fabs(tn) >= std::fabs(t))
            break;
        t = tn;
        s += t;
        if (std::fabs(t) < 1e-18 * s)
            break;
    }
    return -x * x - std::log(x) - 0.5 * std::log(M_PI) + std::log(s);
}

namespace
{

// log P(a,x) via the ascending series, valid branch x < a + 1.
double log_gamma_p_series(double a, double x)
{
    double sum = 1.0, term = 1.0;
    for (int n = 1; n < 100000; ++n)
    {
        term *= x / (a + n);
        sum += term;
        if (term < 1e-17 * sum)
            break;
    }
    return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
}

// log Q(a,x) via the Lentz continued fraction, valid branch x >= a + 1.
double log_gamma_q_cf(double a, double x)
{
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i)
    {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16)
            break;
    }
    return a * std::log(x) - x - std::lgamma(a) + std::log(h);
}

} // namespace

double reg_lower_inc_gamma_log(double a, double x)
{
    if (!(a > 0.0) || !(x >= 0.0))
        throw std::domain_error("reg_inc_gamma: requires a > 0 and x >= 0");
    if (x == 0.0)
        return neg_inf;
    if (x < a + 1.0)
        return log_gamma_p_series(a, x);
    double lq = log_gamma_q_cf(a, x);
    return std::log1p(-std::exp(lq));
}

double reg_upper_inc_gamma_log(double a, double x)
{
    if (!(a > 0.0) || !(x >= 0.0))
        throw std::domain_error("reg_inc_gamma: requires a > 0 and x >= 0");
    if (x == 0.0)
        return 0.0;
    if (x >= a + 1.0)
        return log_gamma_q_cf(a, x);
    double lp = log_gamma_p_series(a, x);
    return std::log1p(-std::exp(lp));
}

double reg_lower_inc_gamma(double a, double x) { return std::exp(reg_lower_inc_gamma_log(a, x)); }

double reg_upper_inc_gamma(double a, double x) { return std::exp(reg_upper_inc_gamma_log(a, x)); }

IncBetaResult inc_beta(double z, double a, double b)
{
    if (!(a > 0.0))
        throw std::domain_error("inc_beta: requires a > 0");
    if (z > 1.0)
        throw std::domain_error("inc_beta: requires z <= 1");
    IncBetaResult res;
    if (z == 0.0)
    {
        res.magnitude = SignedLogValue::zero();
        return res;
    }
    if (z == 1.0)
    {
        if (!(b > 0.0))
            throw std::domain_error("inc_beta: complete Beta requires b > 0");
        res.magnitude = SignedLogValue::from_log(
            std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b), 1);
        return res;
    }
    if (z < 0.0)
    {
        // Principal branch: z^a = |z|^a exp(i pi a); the modulus series is
        // B(z;a,b)/z^a * |z|^a, evaluated through the (Pfaff-stabilized) 2F1.
        SignedLogValue f = hyp2f1(a, 1.0 - b, a + 1.0, z);
        res.magnitude =
            f * SignedLogValue::from_log(a * std::log(-z) - std::log(a), 1);
        res.phase = M_PI * a;
        return res;
    }
    // 0 < z < 1.
    if (b < 1.0)
    {
        // Representation route; the 2F1 series has nonnegative coefficients
        // here (1-b >= 0), so it is cancellation-free for any a.
        SignedLogValue f = hyp2f1(a, 1.0 - b, a + 1.0, z);
        res.magnitude = f * SignedLogValue::from_log(a * std::log(z) - std::log(a), 1);
        return res;
    }
    // Large positive b: the representation cancels; use the regularized
    // continued fraction (log domain).
    auto log_bx_direct = [](double aa, double bb, double zz) {
        const double tiny = 1e-300;
        double qab = aa + bb, qap = aa + 1.0, qam = aa - 1.0;
        double c = 1.0, d = 1.0 - qab * zz / qap;
        if (std::fabs(d) < tiny)
            d = tiny;
        d = 1.0 / d;
        double h = d;
        for (int m = 1; m < 100000; ++m)
        {
            int m2 = 2 * m;
            double an = m * (bb - m) * zz / ((qam + m2) * (aa + m2));
            d = 1.0 + an * d;
            if (std::fabs(d) < tiny)
                d = tiny;
            c = 1.0 + an / c;
            if (std::fabs(c) < tiny)
                c = tiny;
            d = 1.0 / d;
            h *= d * c;
            an = -(aa + m) * (qab + m) * zz / ((aa + m2) * (qap + m2));
            d = 1.0 + an * d;
            if (std::fabs(d) < tiny)
                d = tiny;
            c = 1.0 + an / c;
            if (std::fabs(c) < tiny)
                c = tiny;
            d = 1.0 / d;
            double delta = d * c;
            h *= delta;
            if (std::fabs(delta - 1.0) < 1e-16)
                break;
        }
        // log of the unregularized B(z;a,b)
        return aa * std::log(zz) + bb * std::log1p(-zz) - std::log(aa) + std::log(h);
    };
    if (z < (a + 1.0) / (a + b + 2.0))
    {
        res.magnitude = SignedLogValue::from_log(log_bx_direct(a, b, z), 1);
    }
    else
    {
        SignedLogValue complete = SignedLogValue::from_log(
            std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b), 1);
        SignedLogValue tail = SignedLogValue::from_log(log_bx_direct(b, a, 1.0 - z), 1);
        res.magnitude = complete - tail;
    }
    return res;
}

SignedLogValue hyp1f1(double a, double b, double z)
{
    if (is_nonpositive_integer(b))
        throw std::domain_error("hyp1f1: b is a nonpositive integer");
    if (z == 0.0)
        return SignedLogValue::one();
    if (z < 0.0)
    {
        // Kummer transformation removes the cancellation of the alternating
        // series.
        SignedLogValue r = hyp1f1(b - a, b, -z);
        return SignedLogValue::from_log(r.log_mag + z, r.sign);
    }
    if (z > 8000.0 && z > 3.0 * (std::fabs(a) + std::fabs(b)) + 1000.0)
        return hyp1f1_asymptotic(a, b, z);
    double as[1] = {a};
    double bs[1] = {b};
    return pfq_series(as, 1, bs, 1, z, "hyp1f1");
}

SignedLogValue hyp2f1(double a, double b, double c, double z)
{
    if (is_nonpositive_integer(c))
        throw std::domain_error("hyp2f1: c is a nonpositive integer");
    if (z == 0.0)
        return SignedLogValue::one();
    if (z >= 1.0)
        throw std::domain_error("hyp2f1: requires z < 1");
    if (z < 0.0)
    {
        // Pfaff maps (-inf, 0) into (0, 1).
        SignedLogValue pw = SignedLogValue::from_log(-a * std::log1p(-z), 1);
        return pw * hyp2f1(a, c - b, c, z / (z - 1.0));
    }
    if (z < 0.95)
        return hyp2f1_direct(a, b, c, z);
    return hyp2f1_near_one(a, b, c, z);
}

SignedLogValue hyp2f2(double a1, double a2, double b1, double b2, double z)
{
    double as[2] = {a1, a2};
    double bs[2] = {b1, b2};
    return pfq_series(as, 2, bs, 2, z, "hyp2f2");
}

SignedLogValue hyp3f2(double a1, double a2, double a3, double b1, double b2, double z)
{
    if (std::fabs(z) >= 1.0)
        throw std::domain_error("hyp3f2: requires |z| < 1");
    double as[3] = {a1, a2, a3};
    double bs[2] = {b1, b2};
    return pfq_series(as, 3, bs, 2, z, "hyp3f2");
}

SignedLogValue appell_f1(double a, double b1, double b2, double c, double x, double y)
{
    if (std::fabs(x) >= 1.0 || std::fabs(y) >= 1.0)
        throw std::domain_error("appell_f1: requires |x| < 1 and |y| < 1");
    if (is_nonpositive_integer(c))
        throw std::domain_error("appell_f1: c is a nonpositive integer");
    if (y == 0.0)
        return hyp2f1(a, b1, c, x);
    if (x == 0.0)
        return hyp2f1(a, b2, c, y);
    bool metric_family = a == 0.5 && c == 1.5 && b2 > 0.0 &&
                         std::fabs(b1 + b2 - 0.5) < 1e-9 * (1.0 + std::fabs(b2)) && x >= y &&
                         y > 0.0;
    if (metric_family && b2 > 40.0)
        return appell_family_integral(b2, x, y);
    return appell_diagonal(a, b1, b2, c, x, y);
}

SignedLogValue bessel_i(double nu, double z)
{
    if (z < 0.0)
        throw std::domain_error("bessel_i: requires z >= 0");
    if (z == 0.0)
    {
        if (nu == 0.0)
            return SignedLogValue::one();
        if (nu > 0.0)
            return SignedLogValue::zero();
        throw std::domain_error("bessel_i: z = 0 with nu < 0");
    }
    if (!(nu > -1.0))
        throw std::domain_error("bessel_i: requires nu > -1");
    if (z > 4000.0)
    {
        // Large-argument expansion, summed to the smallest term.
        double mu4 = 4.0 * nu * nu;
        double t = 1.0, s = 1.0;
        for (int k = 1; k <= 40; ++k)
        {
            double num = mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0);
            double tn = -t * num / (8.0 * k * z);
            if (std::fabs(tn) >= std::fabs(t))
                break;
            t = tn;
            s += t;
            if (std::fabs(t) < 1e-18 * std::fabs(s))
                break;
        }
        return SignedLogValue::from_log(z - 0.5 * std::log(2.0 * M_PI * z) + std::log(s), 1);
    }
    SignedLogAccumulator acc;
    double lhz = std::log(0.5 * z);
    SignedLogValue term = SignedLogValue::from_log(nu * lhz - std::lgamma(nu + 1.0), 1);
    acc.add(term);
    double qz = 0.25 * z * z;
    int stall = 0;
    for (int k = 0; k < series_max_terms; ++k)
    {
        term = SignedLogValue::from_log(
            term.log_mag + std::log(qz) - std::log1p(static_cast<double>(k)) -
                std::log(nu + k + 1.0),
            1);
        acc.add(term);
        double ref = acc.total().log_mag;
        if (term.log_mag < log_series_tol + ref)
        {
            if (++stall >= series_stall_count)
                return acc.total();
        }
        else
        {
            stall = 0;
        }
    }
    throw ConvergenceFailure("bessel_i: series exceeded budget", series_max_terms, term.log_mag);
}

} // namespace fadesum::specfun
