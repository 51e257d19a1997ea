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

#include "fadesum/sum_series.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>

#include "fadesum/errors.hpp"
#include "fadesum/specfun.hpp"
#include "series_detail.hpp"

namespace fadesum
{

namespace
{

constexpr double neg_inf = -std::numeric_limits<double>::infinity();
const double log_stall_tol = std::log(specfun::series_tol);
// Totals more than twelve digits under the largest term are summation noise.
const double log_noise_floor = std::log(1e-12);

using detail::a2_rate;
using detail::log_prefactor_a1;
using detail::log_prefactor_a2;
using detail::model_mu;

} // namespace

// ---------------------------------------------------------------- cache ---
//
// The defining recursions convolve signed sequences and are numerically
// unstable: rounding errors grow at a faster geometric rate than the
// coefficients themselves, overtaking them by m of a few hundred. Every
// sequence below is therefore evaluated through an equivalent cancellation-
// free form of the same values:
//   h:       (-1)^m Gamma(a)^N [t^m](1-t xi p/eta)^{-N a_ip}(1-t xi)^{-N a_q},
//            a positive convolution of two negative-binomial sequences;
//   h_tilde: Gamma(a)^N (N a_ip)_m (1-p/eta)^m / m!, a single ratio step;
//   k:       (-A)^m L_m^{(N mu - 1)}(N kappa mu), the generalized-Laguerre
//            three-term recurrence (stable in its oscillatory regime);
//   k_tilde: (N kappa mu)^m / m!, a single ratio step.

namespace
{

// Appends log[(shape)_i rate^i / i!] up to index upto.
void extend_nb_log(std::vector<double> &seq, double shape, double log_rate, int upto)
{
    if (seq.empty())
        seq.push_back(0.0);
    for (int i = static_cast<int>(seq.size()); i <= upto; ++i)
        seq.push_back(seq[static_cast<std::size_t>(i - 1)] + log_rate +
                      std::log(shape + (i - 1.0)) - std::log(static_cast<double>(i)));
}

// log of sum_i exp(c1[i] + c2[m-i]); every term is a positive product.
double log_conv(const std::vector<double> &c1, const std::vector<double> &c2, int m)
{
    double mx = neg_inf;
    for (int i = 0; i <= m; ++i)
        mx = std::max(mx, c1[static_cast<std::size_t>(i)] +
                              c2[static_cast<std::size_t>(m - i)]);
    double sum = 0.0;
    for (int i = 0; i <= m; ++i)
        sum += std::exp(c1[static_cast<std::size_t>(i)] +
                        c2[static_cast<std::size_t>(m - i)] - mx);
    return mx + std::log(sum);
}

double log_alpha_ip(const EtaMuParams &p) { return std::log(p.xi * p.p / p.eta); }

// Advances (L_{m-1}, L_m) to (L_m, L_{m+1}) for L^{(nmu-1)}(x), rescaling by
// a power of two whenever the raw pair leaves the comfortable double range.
// L_{-1} = 0 makes the m = 0 step produce L_1 without a special case.
void laguerre_step(double &prev, double &curr, double &log_scale, int m, double nmu, double x)
{
    double next = ((2.0 * m + nmu - x) * curr - (m + nmu - 1.0) * prev) / (m + 1.0);
    prev = curr;
    curr = next;
    double mag = std::max(std::fabs(prev), std::fabs(curr));
    if (mag > 0x1p+500 || (mag > 0.0 && mag < 0x1p-500))
    {
        int e = std::ilogb(mag);
        prev = std::scalbn(prev, -e);
        curr = std::scalbn(curr, -e);
        log_scale += static_cast<double>(e) * M_LN2;
    }
}

SignedLogValue laguerre_coeff(double curr, double log_scale, int m, double log_rate)
{
    SignedLogValue v = SignedLogValue::from_double(curr);
    if (v.is_zero())
        return v;
    return SignedLogValue::from_log(v.log_mag + log_scale + m * log_rate,
                                    (m % 2 == 0) ? v.sign : -v.sign);
}

SignedLogValue h_tilde_step(const SignedLogValue &prev, double shape, double q, int m)
{
    if (q == 0.0 || prev.is_zero())
        return SignedLogValue::zero();
    return SignedLogValue::from_log(prev.log_mag + std::log(std::fabs(q)) +
                                        std::log(shape + (m - 1.0)) -
                                        std::log(static_cast<double>(m)),
                                    q > 0.0 ? prev.sign : -prev.sign);
}

SignedLogValue k_tilde_step(const SignedLogValue &prev, double x, int m)
{
    return SignedLogValue::from_log(
        prev.log_mag + std::log(x) - std::log(static_cast<double>(m)), 1);
}

} // namespace

CoefficientCache::CoefficientCache(const ModelParams &params, int n_branches)
    : params_(params), n_(n_branches)
{
    if (n_branches < 1)
        throw std::domain_error("CoefficientCache: n_branches must be >= 1");
}

void CoefficientCache::extend_h(int upto)
{
    const auto &p = std::get<EtaMuParams>(params_);
    const double shape_ip = n_ * p.a_ip;
    const double shape_q = n_ * p.a_q;
    extend_nb_log(nb_ip_log_, shape_ip, log_alpha_ip(p), upto);
    extend_nb_log(nb_q_log_, shape_q, std::log(p.xi), upto);
    const double lgn = n_ * std::lgamma(p.a_ip);
    for (int m = static_cast<int>(h_.size()); m <= upto; ++m)
    {
        steps_.fetch_add(static_cast<std::uint64_t>(m) + 1, std::memory_order_relaxed);
        h_.push_back(SignedLogValue::from_log(lgn + log_conv(nb_ip_log_, nb_q_log_, m),
                                              (m % 2 == 0) ? 1 : -1));
    }
}

void CoefficientCache::extend_h_tilde(int upto)
{
    const auto &p = std::get<EtaMuParams>(params_);
    const double q = 1.0 - p.p / p.eta;
    const double shape = n_ * p.a_ip;
    if (h_tilde_.empty())
        h_tilde_.push_back(SignedLogValue::from_log(n_ * std::lgamma(p.a_ip), 1));
    for (int m = static_cast<int>(h_tilde_.size()); m <= upto; ++m)
    {
        steps_.fetch_add(1, std::memory_order_relaxed);
        h_tilde_.push_back(h_tilde_step(h_tilde_.back(), shape, q, m));
    }
}

void CoefficientCache::extend_k(int upto)
{
    const auto &p = std::get<KappaMuParams>(params_);
    const double nmu = n_ * p.mu;
    const double x = n_ * p.kappa * p.mu;
    const double log_rate = std::log(p.rate);
    if (k_.empty())
        k_.push_back(SignedLogValue::one());
    for (int m = static_cast<int>(k_.size()); m <= upto; ++m)
    {
        steps_.fetch_add(1, std::memory_order_relaxed);
        laguerre_step(lag_prev_, lag_curr_, lag_scale_, m - 1, nmu, x);
        k_.push_back(laguerre_coeff(lag_curr_, lag_scale_, m, log_rate));
    }
}

void CoefficientCache::extend_k_tilde(int upto)
{
    const auto &p = std::get<KappaMuParams>(params_);
    const double x = n_ * p.kappa * p.mu;
    if (k_tilde_.empty())
        k_tilde_.push_back(SignedLogValue::one());
    for (int m = static_cast<int>(k_tilde_.size()); m <= upto; ++m)
    {
        steps_.fetch_add(1, std::memory_order_relaxed);
        k_tilde_.push_back(k_tilde_step(k_tilde_.back(), x, m));
    }
}

namespace
{

template <typename Vec, typename Extend>
SignedLogValue cached_at(std::shared_mutex &mutex, const Vec &vec, Extend &&extend, int m)
{
    if (m < 0)
        throw std::domain_error("coefficient index must be >= 0");
    {
        std::shared_lock lk(mutex);
        if (static_cast<std::size_t>(m) < vec.size())
            return vec[static_cast<std::size_t>(m)];
    }
    std::unique_lock lk(mutex);
    if (static_cast<std::size_t>(m) >= vec.size())
        extend(m);
    return vec[static_cast<std::size_t>(m)];
}

} // namespace

SignedLogValue CoefficientCache::h(int m)
{
    if (!std::holds_alternative<EtaMuParams>(params_))
        throw std::domain_error("coefficient h: cache holds a kappa-mu model");
    return cached_at(mutex_, h_, [this](int u) { extend_h(u); }, m);
}

SignedLogValue CoefficientCache::h_tilde(int m)
{
    if (!std::holds_alternative<EtaMuParams>(params_))
        throw std::domain_error("coefficient h_tilde: cache holds a kappa-mu model");
    return cached_at(mutex_, h_tilde_, [this](int u) { extend_h_tilde(u); }, m);
}

SignedLogValue CoefficientCache::k(int m)
{
    if (!std::holds_alternative<KappaMuParams>(params_))
        throw std::domain_error("coefficient k: cache holds an eta-mu model");
    return cached_at(mutex_, k_, [this](int u) { extend_k(u); }, m);
}

SignedLogValue CoefficientCache::k_tilde(int m)
{
    if (!std::holds_alternative<KappaMuParams>(params_))
        throw std::domain_error("coefficient k_tilde: cache holds an eta-mu model");
    return cached_at(mutex_, k_tilde_, [this](int u) { extend_k_tilde(u); }, m);
}

SignedLogValue CoefficientCache::coeff(Approach approach, int m)
{
    if (std::holds_alternative<EtaMuParams>(params_))
        return approach == Approach::one ? h(m) : h_tilde(m);
    return approach == Approach::one ? k(m) : k_tilde(m);
}

void CoefficientCache::warm(Approach approach, int upto) { (void)coeff(approach, upto); }

std::size_t CoefficientCache::size(Approach approach) const
{
    std::shared_lock lk(mutex_);
    if (std::holds_alternative<EtaMuParams>(params_))
        return approach == Approach::one ? h_.size() : h_tilde_.size();
    return approach == Approach::one ? k_.size() : k_tilde_.size();
}

// ---------------------------------------------------- uncached reference ---
// Same helper calls in the same order as the cache, so values are bitwise
// identical; only the prefix state is rebuilt on every call.

SignedLogValue coeff_h_nocache(const EtaMuParams &params, int n_branches, int m)
{
    if (m < 0)
        throw std::domain_error("coefficient index must be >= 0");
    std::vector<double> c1, c2;
    extend_nb_log(c1, n_branches * params.a_ip, log_alpha_ip(params), m);
    extend_nb_log(c2, n_branches * params.a_q, std::log(params.xi), m);
    return SignedLogValue::from_log(n_branches * std::lgamma(params.a_ip) +
                                        log_conv(c1, c2, m),
                                    (m % 2 == 0) ? 1 : -1);
}

SignedLogValue coeff_h_tilde_nocache(const EtaMuParams &params, int n_branches, int m)
{
    if (m < 0)
        throw std::domain_error("coefficient index must be >= 0");
    const double q = 1.0 - params.p / params.eta;
    const double shape = n_branches * params.a_ip;
    SignedLogValue v = SignedLogValue::from_log(n_branches * std::lgamma(params.a_ip), 1);
    for (int i = 1; i <= m; ++i)
        v = h_tilde_step(v, shape, q, i);
    return v;
}

SignedLogValue coeff_k_nocache(const KappaMuParams &params, int n_branches, int m)
{
    if (m < 0)
        throw std::domain_error("coefficient index must be >= 0");
    if (m == 0)
        return SignedLogValue::one();
    const double nmu = n_branches * params.mu;
    const double x = n_branches * params.kappa * params.mu;
    double prev = 0.0, curr = 1.0, log_scale = 0.0;
    for (int i = 0; i < m; ++i)
        laguerre_step(prev, curr, log_scale, i, nmu, x);
    return laguerre_coeff(curr, log_scale, m, std::log(params.rate));
}

SignedLogValue coeff_k_tilde_nocache(const KappaMuParams &params, int n_branches, int m)
{
    if (m < 0)
        throw std::domain_error("coefficient index must be >= 0");
    const double x = n_branches * params.kappa * params.mu;
    SignedLogValue v = SignedLogValue::one();
    for (int i = 1; i <= m; ++i)
        v = k_tilde_step(v, x, i);
    return v;
}

// ------------------------------------------------------------- registry ---

namespace
{

struct CacheKey
{
    bool eta_mu;
    double p0, p1, p2; // (eta, mu, p) or (kappa, mu, 0)
    int n;

    bool operator==(const CacheKey &o) const
    {
        return eta_mu == o.eta_mu && p0 == o.p0 && p1 == o.p1 && p2 == o.p2 && n == o.n;
    }
};

CacheKey make_key(const ModelParams &params, int n)
{
    if (std::holds_alternative<EtaMuParams>(params))
    {
        const auto &p = std::get<EtaMuParams>(params);
        return {true, p.eta, p.mu, p.p, n};
    }
    const auto &p = std::get<KappaMuParams>(params);
    return {false, p.kappa, p.mu, 0.0, n};
}

std::mutex registry_mutex;
std::vector<std::pair<CacheKey, std::shared_ptr<CoefficientCache>>> &registry()
{
    static std::vector<std::pair<CacheKey, std::shared_ptr<CoefficientCache>>> r;
    return r;
}

} // namespace

std::shared_ptr<CoefficientCache> shared_cache_for(const ModelParams &params, int n_branches)
{
    CacheKey key = make_key(params, n_branches);
    std::lock_guard lk(registry_mutex);
    for (auto &entry : registry())
        if (entry.first == key)
            return entry.second;
    auto cache = std::make_shared<CoefficientCache>(params, n_branches);
    registry().emplace_back(key, cache);
    return cache;
}

// ------------------------------------------------------ sum distribution ---

SumDistribution::SumDistribution(const ModelParams &model_, int n_branches_, double w_hat_)
    : model(model_), n_branches(n_branches_), w_hat(w_hat_)
{
    if (n_branches < 1)
        throw std::domain_error("SumDistribution: n_branches must be >= 1");
    if (!(w_hat > 0.0) || !std::isfinite(w_hat))
        throw std::domain_error("SumDistribution: w_hat must be positive and finite");
    cache = shared_cache_for(model, n_branches);
}

double SumDistribution::total_shape() const { return n_branches * model_mu(model); }

double SumDistribution::approach1_rate() const
{
    if (is_eta_mu())
    {
        const auto &p = eta_mu();
        return p.xi * std::max(1.0, p.p / p.eta);
    }
    return kappa_mu().rate;
}

SignedLogValue coeff_h(const SumDistribution &dist, int m) { return dist.cache->h(m); }
SignedLogValue coeff_h_tilde(const SumDistribution &dist, int m)
{
    return dist.cache->h_tilde(m);
}
SignedLogValue coeff_k(const SumDistribution &dist, int m) { return dist.cache->k(m); }
SignedLogValue coeff_k_tilde(const SumDistribution &dist, int m)
{
    return dist.cache->k_tilde(m);
}

// ------------------------------------------------------ series evaluation ---

namespace
{

enum class Kind
{
    mgf,
    pdf,
    cdf
};

struct RawSeries
{
    SignedLogValue sum;        // series sum, prefactor excluded
    double log_prefactor = 0;  // model prefactor and w-dependent kernel
    int terms_summed = 0;
    int last_significant = 0;  // index of the last term above the stall level
    double max_term_log = neg_inf;
    double last_term_log = neg_inf;
};

// Core loop shared by MGF/PDF/CDF in both representations. `x` is s for the
// MGF and w otherwise. Terminates on the 3-term stall rule; `min_terms`
// forces continuation past an early stall (used by bound certification).
RawSeries eval_series(const SumDistribution &dist, Approach approach, Kind kind, double x,
                      int max_terms, int min_terms)
{
    const double nmu = dist.total_shape();
    const double w_hat = dist.w_hat;
    const double rate2 = a2_rate(dist.model);

    RawSeries out;
    out.log_prefactor = approach == Approach::one
                            ? log_prefactor_a1(dist.model, dist.n_branches)
                            : log_prefactor_a2(dist.model, dist.n_branches);
    if (approach == Approach::two && kind == Kind::pdf)
        out.log_prefactor -= rate2 * x / w_hat;

    // Per-kind constants.
    const double log_x = std::log(x);
    const double log_w_hat = std::log(w_hat);
    const double log_sw = kind == Kind::mgf ? std::log(x * w_hat) : 0.0;
    const double log_x2 = kind == Kind::mgf ? std::log(rate2) - std::log(rate2 + x * w_hat)
                                            : std::log(rate2) + log_x - log_w_hat;

    SignedLogAccumulator acc;
    int stall = 0;
    for (int m = 0; m < max_terms; ++m)
    {
        const double c = nmu + m;
        SignedLogValue coef = dist.cache->coeff(approach, m);
        double lf;
        if (approach == Approach::one)
        {
            switch (kind)
            {
            case Kind::mgf:
                lf = -c * log_sw;
                break;
            case Kind::pdf:
                lf = (c - 1.0) * log_x - c * log_w_hat - std::lgamma(c);
                break;
            default:
                lf = c * (log_x - log_w_hat) - std::lgamma(c + 1.0);
                break;
            }
        }
        else
        {
            switch (kind)
            {
            case Kind::mgf:
                lf = c * log_x2;
                break;
            case Kind::pdf:
                lf = c * log_x2 - log_x - std::lgamma(c);
                break;
            default:
                // Regularized lower incomplete gamma of the shifted shape.
                lf = specfun::reg_lower_inc_gamma_log(c, rate2 * x / w_hat);
                break;
            }
        }
        SignedLogValue term = coef * slv_from_log(lf);
        acc.add(term);
        out.terms_summed = m + 1;
        double term_mag = term.is_zero() ? neg_inf : term.log_mag;
        out.last_term_log = term_mag;
        out.max_term_log = std::max(out.max_term_log, term_mag);

        SignedLogValue partial = acc.total();
        double ref = partial.is_zero() ? neg_inf : partial.log_mag;
        // Cancellation floor: once the total sits more than twelve digits
        // under the largest term, further terms only move summation noise.
        ref = std::max(ref, out.max_term_log + log_noise_floor);
        if (term_mag < log_stall_tol + ref)
        {
            ++stall;
            if (stall >= specfun::series_stall_count && out.terms_summed >= min_terms)
            {
                out.sum = partial;
                return out;
            }
        }
        else
        {
            stall = 0;
            out.last_significant = m;
        }
    }
    throw ConvergenceFailure("sum series: no stall within the term budget",
                             static_cast<std::size_t>(max_terms), out.last_term_log);
}

SeriesEval finish_eval(const RawSeries &raw, Approach approach)
{
    SeriesEval ev;
    ev.terms_used = raw.terms_summed;
    ev.approach = approach;
    SignedLogValue total = raw.sum * slv_from_log(raw.log_prefactor);
    // A residual below the cancellation floor carries no reliable digits
    // whatever its sign; report an exact zero rather than rounding noise.
    if (!raw.sum.is_zero() && raw.sum.log_mag < raw.max_term_log + log_noise_floor)
        total = SignedLogValue::zero();
    ev.value = total.to_double();
    ev.log_abs = total.is_zero() ? neg_inf : total.log_mag;
    ev.sign = total.sign;
    return ev;
}

SeriesMode kind_mode(Kind kind) { return kind == Kind::cdf ? SeriesMode::cdf : SeriesMode::pdf; }

// Evaluate with post-hoc certification for approach 1: after a stall, the
// tail bound (when it can be computed) must come down to target_tol, else the
// evaluation is extended. The bound is loose far in the tail, so exhausting
// max_terms with a passed stall test is not an error.
SeriesEval eval_with_certification(const SumDistribution &dist, Approach approach, Kind kind,
                                   double x, const TruncationControl &ctl)
{
    ctl.validate();
    RawSeries raw = eval_series(dist, approach, kind, x, ctl.max_terms, 0);
    SeriesEval ev = finish_eval(raw, approach);
    if (approach != Approach::one || kind == Kind::mgf)
        return ev;
    // A noise-floored total is already dominated by rounding, which the
    // truncation bound does not cover: certifying it would be misleading.
    auto noise_floored = [](const RawSeries &r) {
        if (r.max_term_log == neg_inf)
            return false;
        return r.sum.is_zero() || r.sum.log_mag < r.max_term_log + log_noise_floor;
    };
    if (noise_floored(raw))
        return ev;
    const double no_bound = std::numeric_limits<double>::quiet_NaN();
    auto tail_bound = [&](int eps) {
        try
        {
            return truncation_bound(dist, x, kind_mode(kind), eps);
        }
        catch (const ConvergenceFailure &)
        {
            return no_bound;
        }
    };
    double bound = tail_bound(raw.terms_summed);
    while (!std::isnan(bound) && bound > ctl.target_tol && raw.terms_summed < ctl.max_terms)
    {
        int want = std::min(ctl.max_terms,
                            raw.terms_summed + std::max(50, raw.terms_summed / 2));
        raw = eval_series(dist, approach, kind, x, ctl.max_terms, want);
        ev = finish_eval(raw, approach);
        if (noise_floored(raw))
            return ev;
        bound = tail_bound(raw.terms_summed);
    }
    if (!std::isnan(bound))
    {
        ev.bound_checked = true;
        ev.bound = bound;
    }
    return ev;
}

} // namespace

SeriesEval mgf_sum_ex(const SumDistribution &dist, double s, Approach approach,
                      const TruncationControl &ctl)
{
    ctl.validate();
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::domain_error("mgf_sum: requires finite s > 0");
    if (approach == Approach::one && !(s * dist.w_hat > dist.approach1_rate()))
        throw OutsideApproach1Domain(
            "mgf_sum: approach 1 requires s*w_hat > " + std::to_string(dist.approach1_rate()) +
            ", got " + std::to_string(s * dist.w_hat));
    RawSeries raw = eval_series(dist, approach, Kind::mgf, s, ctl.max_terms, 0);
    return finish_eval(raw, approach);
}

double mgf_sum(const SumDistribution &dist, double s, Approach approach,
               const TruncationControl &ctl)
{
    return mgf_sum_ex(dist, s, approach, ctl).value;
}

SeriesEval pdf_sum_ex(const SumDistribution &dist, double w, Approach approach,
                      const TruncationControl &ctl)
{
    ctl.validate();
    if (!(w >= 0.0) || !std::isfinite(w))
        throw std::domain_error("pdf_sum: requires finite w >= 0");
    const double nmu = dist.total_shape();
    if (w == 0.0)
    {
        if (nmu < 1.0)
            throw std::domain_error("pdf_sum: density pole at w = 0 for N*mu < 1");
        SeriesEval ev;
        ev.approach = approach;
        ev.terms_used = 1;
        if (nmu > 1.0)
        {
            ev.sign = 0;
            ev.log_abs = neg_inf;
            return ev;
        }
        // N*mu == 1: only the m = 0 term survives at the origin.
        double lp = approach == Approach::one ? log_prefactor_a1(dist.model, dist.n_branches)
                                              : log_prefactor_a2(dist.model, dist.n_branches);
        SignedLogValue coef = dist.cache->coeff(approach, 0);
        double lf = approach == Approach::one
                        ? -std::log(dist.w_hat)
                        : std::log(a2_rate(dist.model)) - std::log(dist.w_hat);
        SignedLogValue total = coef * slv_from_log(lp + lf);
        ev.value = total.to_double();
        ev.log_abs = total.log_mag;
        ev.sign = total.sign;
        return ev;
    }
    return eval_with_certification(dist, approach, Kind::pdf, w, ctl);
}

double pdf_sum(const SumDistribution &dist, double w, Approach approach,
               const TruncationControl &ctl)
{
    return pdf_sum_ex(dist, w, approach, ctl).value;
}

SeriesEval cdf_sum_ex(const SumDistribution &dist, double w, Approach approach,
                      const TruncationControl &ctl)
{
    ctl.validate();
    if (!(w >= 0.0) || !std::isfinite(w))
        throw std::domain_error("cdf_sum: requires finite w >= 0");
    if (w == 0.0)
    {
        SeriesEval ev;
        ev.approach = approach;
        ev.terms_used = 1;
        ev.sign = 0;
        ev.log_abs = neg_inf;
        return ev;
    }
    SeriesEval ev = eval_with_certification(dist, approach, Kind::cdf, w, ctl);
    if (ev.sign > 0 && ev.log_abs > 0.0)
    {
        // Probability: the series resolves 1 - F only down to summation
        // precision; excess above 1 at that scale is clipped.
        ev.value = 1.0;
        ev.log_abs = 0.0;
    }
    return ev;
}

double cdf_sum(const SumDistribution &dist, double w, Approach approach,
               const TruncationControl &ctl)
{
    return cdf_sum_ex(dist, w, approach, ctl).value;
}

// ---------------------------------------------------------------- bounds ---

namespace
{

// log of sum_{m >= start} y^m / m! = e^y * P(start, y), the Poisson tail.
double log_poisson_tail(int start, double y)
{
    if (start <= 0)
        return y;
    return y + specfun::reg_lower_inc_gamma_log(static_cast<double>(start), y);
}

// log upper bound on sum_{m >= eps} |c_m| (w/w_hat)^m / Gamma(N mu + m + zeta)
// over the normalized approach-1 coefficients c_m, model prefactor excluded.
//
// Eta-mu: |c_m| is exactly the coefficient of (1 - t xi p/eta)^{-N a_ip}
// (1 - t xi)^{-N a_q} (the generating function is alternating factor by
// factor), dominated termwise by (N mu)_m alpha^m / m! at the worse rate
// alpha = xi max(1, p/eta). Against 1/Gamma(N mu + m + zeta) the tail then
// collapses to a single Poisson tail in y = alpha w / w_hat.
//
// Kappa-mu: the coefficients alternate in sign (scaled Laguerre values);
// their magnitudes are dominated termwise by the all-positive expansion of
// (1 - A t)^{-N mu} exp(N kappa mu A t / (1 - A t)). Expanding the
// exponential gives a sum over j of Poisson tails in y = A w / w_hat
// weighted by (N kappa mu y)^j / (j! Gamma(N mu + j)), which converges
// factorially fast.
double log_tail_bound(const SumDistribution &dist, double w, double zeta, int eps)
{
    const double nmu = dist.total_shape();
    const double n = dist.n_branches;
    double log_front = (nmu - 1.0 + zeta) * std::log(w) - nmu * std::log(dist.w_hat);
    if (zeta > 0.0)
        log_front -= std::log(nmu + static_cast<double>(eps));
    if (dist.is_eta_mu())
    {
        const auto &p = dist.eta_mu();
        const double y = w * p.xi * std::max(1.0, p.p / p.eta) / dist.w_hat;
        const double log_scale = n * (p.a_ip * std::log(p.p / p.eta) + p.mu * std::log(p.xi));
        return log_scale + log_front - std::lgamma(nmu) + log_poisson_tail(eps, y);
    }
    const auto &p = dist.kappa_mu();
    const double y = p.rate * w / dist.w_hat;
    const double log_scale = nmu * (std::log(p.rate) - p.kappa);
    const double nk = n * p.kappa * p.mu;
    const double log_ky = std::log(nk) + std::log(y);
    SignedLogAccumulator acc;
    for (int j = 0;; ++j)
    {
        double lt = j * log_ky - std::lgamma(j + 1.0) - std::lgamma(nmu + j) +
                    log_poisson_tail(eps - j, y);
        acc.add(slv_from_log(lt));
        // Past eps the Poisson factor is frozen and successive term ratios
        // are nk y / ((j+1)(nmu+j)), decreasing; once below 1/2 the whole
        // remainder fits in one extra term.
        if (j >= eps && nk * y < 0.5 * (j + 1.0) * (nmu + j) &&
            lt < acc.total().log_mag - 45.0)
        {
            acc.add(slv_from_log(lt));
            break;
        }
        if (j > 500000)
            throw ConvergenceFailure("series tail bound: majorant sum did not settle",
                                     static_cast<std::size_t>(j), lt);
    }
    return log_scale + log_front + acc.total().log_mag;
}

} // namespace

double convergence_bound(const SumDistribution &dist, double w, SeriesMode mode)
{
    if (!(w > 0.0) || !std::isfinite(w))
        throw std::domain_error("convergence_bound: requires finite w > 0");
    const double zeta = mode == SeriesMode::cdf ? 1.0 : 0.0;
    return std::exp(log_tail_bound(dist, w, zeta, 0));
}

double truncation_bound(const SumDistribution &dist, double w, SeriesMode mode, int eps)
{
    if (!(w > 0.0) || !std::isfinite(w))
        throw std::domain_error("truncation_bound: requires finite w > 0");
    if (eps < 1)
        throw std::domain_error("truncation_bound: requires eps >= 1");
    const double zeta = mode == SeriesMode::cdf ? 1.0 : 0.0;
    return std::exp(log_tail_bound(dist, w, zeta, eps));
}

int choose_truncation(const SumDistribution &dist, const std::vector<double> &w_grid,
                      SeriesMode mode, double target_tol, Approach approach, int max_terms)
{
    if (w_grid.empty())
        throw std::domain_error("choose_truncation: empty evaluation grid");
    if (!(target_tol > 0.0))
        throw std::domain_error("choose_truncation: target_tol must be > 0");
    if (max_terms < 1)
        throw std::domain_error("choose_truncation: max_terms must be >= 1");
    for (double w : w_grid)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::domain_error("choose_truncation: grid points must be finite and > 0");

    if (approach == Approach::one)
    {
        // Bound-driven selection; nullopt marks an unavailable bound.
        auto bound_max = [&](int eps) -> std::optional<double> {
            double mx = 0.0;
            for (double w : w_grid)
            {
                try
                {
                    mx = std::max(mx, truncation_bound(dist, w, mode, eps));
                }
                catch (const ConvergenceFailure &)
                {
                    return std::nullopt;
                }
            }
            return mx;
        };
        std::optional<double> b1 = bound_max(1);
        if (b1)
        {
            if (*b1 <= target_tol)
                return 1;
            bool available = true;
            int lo = 1, hi = 2;
            while (hi < max_terms)
            {
                std::optional<double> b = bound_max(hi);
                if (!b)
                {
                    available = false;
                    break;
                }
                if (*b <= target_tol)
                    break;
                lo = hi;
                hi = std::min(max_terms, hi * 2);
            }
            if (available && hi >= max_terms)
            {
                std::optional<double> b = bound_max(max_terms);
                if (b && *b > target_tol)
                    throw ConvergenceFailure(
                        "choose_truncation: bound above target at max_terms",
                        static_cast<std::size_t>(max_terms), std::log(*b));
                if (!b)
                    available = false;
                hi = max_terms;
            }
            if (available)
            {
                // Smallest eps in (lo, hi] with bound <= target_tol; an
                // unavailable probe is treated as above-target.
                while (lo + 1 < hi)
                {
                    int mid = lo + (hi - lo) / 2;
                    std::optional<double> b = bound_max(mid);
                    if (b && *b <= target_tol)
                        hi = mid;
                    else
                        lo = mid;
                }
                return hi;
            }
        }
    }

    // Stall-driven selection: number of terms through the last significant
    // one, at the worst grid point.
    Kind kind = mode == SeriesMode::cdf ? Kind::cdf : Kind::pdf;
    int worst = 1;
    for (double w : w_grid)
    {
        RawSeries raw = eval_series(dist, approach, kind, w, max_terms, 0);
        worst = std::max(worst, raw.last_significant + 1);
    }
    return worst;
}

} // namespace fadesum
