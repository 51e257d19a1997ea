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

#include "fadesum/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
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
const double log_2sqrtpi = std::log(2.0) + 0.5 * std::log(M_PI);

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

double require_positive(double v, const char *what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string("metrics: ") + what + " must be positive and finite");
    return v;
}

Approach resolve_approach(const SumDistribution &dist, double g, ApproachMode mode)
{
    if (mode == ApproachMode::two)
        return Approach::two;
    double gate = approach1_gate(dist, g);
    if (mode == ApproachMode::one)
    {
        if (!(gate < 1.0))
            throw OutsideApproach1Domain(
                "metrics: approach-1 series requires gate < 1, got gate = " +
                std::to_string(gate));
        return Approach::one;
    }
    return gate < auto_gate_threshold ? Approach::one : Approach::two;
}

MetricResult make_result(const SignedLogValue &total, int terms, Approach approach)
{
    MetricResult res;
    res.terms_used = terms;
    res.approach_used = approach;
    if (total.sign <= 0 || total.log_mag < hard_zero_log)
    {
        res.value = 0.0;
        res.log_value = total.sign > 0 ? total.log_mag : neg_inf;
        res.underflow = true;
        return res;
    }
    res.value = std::exp(total.log_mag);
    res.log_value = total.log_mag;
    return res;
}

// Generic gated metric series: sum coef(m) * factor(m) with the stall rule,
// then scale by exp(log_prefix).
MetricResult metric_series(const SumDistribution &dist, Approach approach, double log_prefix,
                           const TruncationControl &ctl,
                           const std::function<SignedLogValue(int, double)> &factor)
{
    ctl.validate();
    const double nmu = dist.total_shape();
    SignedLogAccumulator acc;
    int stall = 0;
    double last_term_log = neg_inf;
    double max_term_log = neg_inf;
    for (int m = 0; m < ctl.max_terms; ++m)
    {
        const double c = nmu + m;
        SignedLogValue term = dist.cache->coeff(approach, m) * factor(m, c);
        acc.add(term);
        double term_mag = term.is_zero() ? neg_inf : term.log_mag;
        last_term_log = term_mag;
        max_term_log = std::max(max_term_log, term_mag);
        SignedLogValue partial = acc.total();
        double ref = partial.is_zero() ? neg_inf : partial.log_mag;
        // Cancellation floor: once the total sits more than twelve digits
        // under the largest term, further terms only move summation noise.
        ref = std::max(ref, max_term_log + log_noise_floor);
        if (term_mag < log_stall_tol + ref)
        {
            if (++stall >= specfun::series_stall_count)
            {
                if (!partial.is_zero() && partial.log_mag < max_term_log + log_noise_floor)
                    partial = SignedLogValue::zero();
                return make_result(partial * slv_from_log(log_prefix), m + 1, approach);
            }
        }
        else
        {
            stall = 0;
        }
    }
    throw ConvergenceFailure("metric series: no stall within the term budget",
                             static_cast<std::size_t>(ctl.max_terms), last_term_log);
}

// Marching evaluator for J(c) = 2F1(c, 1/2; c+1; z) / c, the kernel of every
// approach-2 Gauss term. The contiguous relation
//   J(c+1) = (c J(c) - sqrt(1-z)) / (z (c + 1/2))
// advances m in O(1); its relative error grows like (1/z) per step, so it is
// used only for z >= 0.9 and re-anchored by a full summation every 50 steps.
class F21March
{
  public:
    F21March(double nmu, double z) : nmu_(nmu), z_(z), sqrt1mz_(std::sqrt(1.0 - z)) {}

    double value(int m)
    {
        const double c = nmu_ + m;
        if (z_ < 0.9)
            return resum(c);
        if (m == 0 || m != last_m_ + 1 || steps_since_anchor_ >= 50)
        {
            j_ = resum(c);
            steps_since_anchor_ = 0;
        }
        else
        {
            j_ = ((c - 1.0) * j_ - sqrt1mz_) / (z_ * (c - 0.5));
            ++steps_since_anchor_;
        }
        last_m_ = m;
        return j_;
    }

  private:
    double resum(double c) const
    {
        SignedLogValue f = specfun::hyp2f1(c, 0.5, c + 1.0, z_);
        return f.to_double() / c;
    }

    double nmu_, z_, sqrt1mz_;
    double j_ = 0.0;
    int last_m_ = -2;
    int steps_since_anchor_ = 0;
};

// log of sum_{i >= start} (v)_i z^i / i!, the tail of (1-z)^{-v} past index
// start, for 0 < z < 1. Term ratios approach z monotonically from whichever
// side, so once a ratio falls below (1+z)/2 the remainder after the scan is
// covered by a single geometric step.
double log_nb_tail(double v, int start, double z)
{
    if (start <= 0)
        return -v * std::log1p(-z);
    double scale = std::lgamma(v + start) - std::lgamma(v) - std::lgamma(start + 1.0) +
                   start * std::log(z);
    double sum = 1.0, term = 1.0;
    const double r_stop = 0.5 * (1.0 + z);
    for (long i = 0;; ++i)
    {
        double r = z * (v + start + i) / (start + i + 1.0);
        term *= r;
        sum += term;
        if (r <= r_stop && term <= 1e-18 * sum)
        {
            sum += term * r_stop / (1.0 - r_stop);
            break;
        }
        if (sum > 1e280)
        {
            scale += std::log(sum);
            term /= sum;
            sum = 1.0;
        }
        if (i > 2000000)
            throw ConvergenceFailure("bep truncation bound: tail sum did not settle",
                                     static_cast<std::size_t>(i), scale + std::log(sum));
    }
    return scale + std::log(sum);
}

// Real part of (-1)^{-c} B_{-v}(c, 1/2-c) with both phases tracked
// independently; a residual imaginary part flags a branch-convention bug.
SignedLogValue real_part_of_signed_beta(double v, double c)
{
    specfun::IncBetaResult b = specfun::inc_beta(-v, c, 0.5 - c);
    const double power_phase = -M_PI * c; // principal branch of (-1)^{-c}
    const double theta = b.phase + power_phase;
    const double s = std::sin(theta);
    const double cv = std::cos(theta);
    if (std::fabs(s) > 1e-9 * std::max(std::fabs(cv), 1e-300))
        throw std::logic_error("metrics: complex pairing left a nonreal residue");
    return b.magnitude * SignedLogValue::from_double(cv);
}

} // namespace

MaryModulation MaryModulation::psk(int order)
{
    if (order < 2 || !is_power_of_two(order))
        throw std::domain_error("MaryModulation: PSK order must be a power of two >= 2");
    double s = std::sin(M_PI / order);
    return {MaryFamily::psk, order, s * s};
}

MaryModulation MaryModulation::qam(int order)
{
    if (order < 4 || !is_power_of_two(order))
        throw std::domain_error("MaryModulation: QAM order must be a power of two >= 4");
    return {MaryFamily::qam, order, 1.5 / (order - 1)};
}

double approach1_gate(const SumDistribution &dist, double g)
{
    require_positive(g, "modulation constant g");
    if (dist.is_eta_mu())
    {
        const auto &p = dist.eta_mu();
        return p.xi * p.p / (p.eta * g * dist.w_hat);
    }
    return dist.kappa_mu().k_bound / (g * dist.w_hat);
}

// ---------------------------------------------------------------- outage ---

MetricResult outage(const SumDistribution &dist, double gamma_th, const TruncationControl &ctl,
                    ApproachMode mode)
{
    require_positive(gamma_th, "gamma_th");
    Approach ap = mode == ApproachMode::one ? Approach::one : Approach::two;
    TruncationControl cdf_ctl = ctl;
    cdf_ctl.mode = SeriesMode::cdf;
    SeriesEval ev = cdf_sum_ex(dist, gamma_th, ap, cdf_ctl);
    MetricResult res = make_result(SignedLogValue::from_log(ev.log_abs, ev.sign),
                                   ev.terms_used, ap);
    return res;
}

double coverage(const SumDistribution &dist, double gamma_th, const TruncationControl &ctl,
                ApproachMode mode)
{
    return 1.0 - outage(dist, gamma_th, ctl, mode).value;
}

double outage_asymptotic(const SumDistribution &dist, double gamma_th)
{
    require_positive(gamma_th, "gamma_th");
    const double nmu = dist.total_shape();
    double lx = std::log(detail::asymptote_scale(dist.model) * gamma_th / dist.w_hat);
    return std::exp(nmu * lx - std::lgamma(nmu + 1.0));
}

// ------------------------------------------------------------------- bep ---

MetricResult bep(const SumDistribution &dist, const BinaryModulation &mod, ApproachMode mode,
                 const TruncationControl &ctl)
{
    require_positive(mod.g_b, "g_b");
    Approach ap = resolve_approach(dist, mod.g_b, mode);
    const double gw = mod.g_b * dist.w_hat;
    if (ap == Approach::one)
    {
        double log_prefix = detail::log_prefactor_a1(dist.model, dist.n_branches) - log_2sqrtpi;
        return metric_series(dist, ap, log_prefix, ctl, [&](int, double c) {
            return slv_from_log(-c * std::log(gw) + std::lgamma(c + 0.5) -
                                std::lgamma(c + 1.0));
        });
    }
    const double r = detail::a2_rate(dist.model);
    const double z = r / (r + gw);
    const double log_z = std::log(r) - std::log(r + gw);
    F21March march(dist.total_shape(), z);
    double log_prefix = detail::log_prefactor_a2(dist.model, dist.n_branches) - log_2sqrtpi;
    return metric_series(dist, ap, log_prefix, ctl, [&](int m, double c) {
        double j = march.value(m);
        return slv_from_log(c * log_z + std::lgamma(c + 0.5) - std::lgamma(c)) *
               SignedLogValue::from_double(j);
    });
}

double bep_asymptotic(const SumDistribution &dist, const BinaryModulation &mod)
{
    require_positive(mod.g_b, "g_b");
    const double nmu = dist.total_shape();
    double lx = std::log(detail::asymptote_scale(dist.model) / (mod.g_b * dist.w_hat));
    return std::exp(std::lgamma(nmu + 0.5) - log_2sqrtpi - std::lgamma(nmu + 1.0) + nmu * lx);
}

// Tail of the approach-1 series past eps terms, bounded with the same
// coefficient envelopes as the pdf/cdf bounds: eta-mu coefficients are
// dominated by (N mu)_m alpha^m / m! with alpha = xi max(1, p/eta), kappa-mu
// magnitudes by the all-positive expansion of their generating function with
// the sign flips removed. Against the Gamma-ratio kernel the tail needs the
// envelope argument below 1 to converge at all; outside that the bound does
// not exist and nullopt is returned.
std::optional<double> bep_truncation_bound(const SumDistribution &dist,
                                           const BinaryModulation &mod, int eps)
{
    require_positive(mod.g_b, "g_b");
    if (eps < 1)
        throw std::domain_error("bep_truncation_bound: requires eps >= 1");
    const double gw = mod.g_b * dist.w_hat;
    const double nmu = dist.total_shape();
    const double log_front =
        nmu * std::log(detail::asymptote_scale(dist.model) / gw) - log_2sqrtpi;
    if (dist.is_eta_mu())
    {
        const auto &p = dist.eta_mu();
        const double y = p.xi * std::max(1.0, p.p / p.eta) / gw;
        if (!(y < 1.0))
            return std::nullopt;
        double lr = std::lgamma(nmu + eps + 0.5) - std::lgamma(nmu + eps + 1.0);
        return std::exp(log_front + lr + log_nb_tail(nmu, eps, y));
    }
    const auto &p = dist.kappa_mu();
    const double y = p.rate / gw;
    if (!(y < 1.0))
        return std::nullopt;
    const double nk = dist.n_branches * p.kappa * p.mu;
    const double log_ky = std::log(nk) + std::log(y);
    SignedLogAccumulator acc;
    for (int j = 0;; ++j)
    {
        const int start = std::max(0, eps - j);
        const double v = nmu + j;
        double lt = j * log_ky - std::lgamma(j + 1.0) + std::lgamma(v + start + 0.5) -
                    std::lgamma(v + start + 1.0) + log_nb_tail(v, start, y);
        acc.add(slv_from_log(lt));
        // Past eps successive term ratios are below nk y / ((j+1)(1-y));
        // once under 1/2 one extra term covers the remainder.
        if (j >= eps && nk * y < 0.5 * (j + 1.0) * (1.0 - y) &&
            lt < acc.total().log_mag - 45.0)
        {
            acc.add(slv_from_log(lt));
            break;
        }
        if (j > 500000)
            throw ConvergenceFailure("bep truncation bound: majorant sum did not settle",
                                     static_cast<std::size_t>(j), lt);
    }
    return std::exp(log_front + acc.total().log_mag);
}

// ------------------------------------------------------------------- sep ---

MetricResult sep_psk(const SumDistribution &dist, const MaryModulation &mod, ApproachMode mode,
                     const TruncationControl &ctl)
{
    if (mod.family != MaryFamily::psk)
        throw std::domain_error("sep_psk: modulation is not PSK");
    Approach ap = resolve_approach(dist, mod.g, mode);
    const double gw = mod.g * dist.w_hat;
    const double sin2 = mod.g; // sin^2(pi/M)
    if (ap == Approach::one)
    {
        double log_prefix =
            detail::log_prefactor_a1(dist.model, dist.n_branches) - std::log(2.0 * M_PI);
        return metric_series(dist, ap, log_prefix, ctl, [&](int, double c) {
            SignedLogValue complete =
                slv_from_log(log_2sqrtpi + std::lgamma(c + 0.5) - std::lgamma(c + 1.0));
            SignedLogValue partial = specfun::inc_beta(sin2, c + 0.5, 0.5).magnitude;
            return slv_from_log(-c * std::log(gw)) * (complete - partial);
        });
    }
    const double r = detail::a2_rate(dist.model);
    const double z = r / (r + gw);
    const double log_z = std::log(r) - std::log(r + gw);
    const double cos2 = 1.0 - sin2; // cos^2(pi/M)
    const double cosa = std::sqrt(cos2);
    F21March march(dist.total_shape(), z);
    double log_prefix = detail::log_prefactor_a2(dist.model, dist.n_branches);
    return metric_series(dist, ap, log_prefix, ctl, [&](int m, double c) {
        // (1/pi) * integral over (0, pi/2]: Gauss kernel.
        double j = march.value(m);
        SignedLogValue half = slv_from_log(std::lgamma(c + 0.5) - std::lgamma(c) -
                                           log_2sqrtpi) *
                              SignedLogValue::from_double(j);
        if (cos2 == 0.0)
            return slv_from_log(c * log_z) * half;
        // Remainder over (pi/2, (M-1)pi/M]: Appell kernel.
        SignedLogValue f1 = specfun::appell_f1(0.5, 0.5 - c, c, 1.5, cos2, z * cos2);
        SignedLogValue rest =
            SignedLogValue::from_double(cosa / M_PI) * f1;
        return slv_from_log(c * log_z) * (half + rest);
    });
}

double sep_psk_asymptotic(const SumDistribution &dist, const MaryModulation &mod)
{
    if (mod.family != MaryFamily::psk)
        throw std::domain_error("sep_psk_asymptotic: modulation is not PSK");
    const double nmu = dist.total_shape();
    SignedLogValue complete =
        slv_from_log(log_2sqrtpi + std::lgamma(nmu + 0.5) - std::lgamma(nmu + 1.0));
    SignedLogValue partial = specfun::inc_beta(mod.g, nmu + 0.5, 0.5).magnitude;
    double lx = std::log(detail::asymptote_scale(dist.model) / (mod.g * dist.w_hat));
    SignedLogValue v =
        slv_from_log(nmu * lx - std::log(2.0 * M_PI)) * (complete - partial);
    return v.to_double();
}

MetricResult sep_qam(const SumDistribution &dist, const MaryModulation &mod, ApproachMode mode,
                     const TruncationControl &ctl)
{
    if (mod.family != MaryFamily::qam)
        throw std::domain_error("sep_qam: modulation is not QAM");
    Approach ap = resolve_approach(dist, mod.g, mode);
    const double gw = mod.g * dist.w_hat;
    const double sqm = std::sqrt(static_cast<double>(mod.order));
    const double b = 1.0 - 1.0 / sqm;
    if (ap == Approach::one)
    {
        double log_prefix = detail::log_prefactor_a1(dist.model, dist.n_branches) +
                            std::log(2.0 * b) - 0.5 * std::log(M_PI);
        return metric_series(dist, ap, log_prefix, ctl, [&](int, double c) {
            SignedLogValue complete =
                slv_from_log(std::lgamma(c + 0.5) - std::lgamma(c + 1.0));
            SignedLogValue partial =
                SignedLogValue::from_double(b / std::sqrt(M_PI)) *
                specfun::inc_beta(0.5, c + 0.5, 0.5).magnitude;
            return slv_from_log(-c * std::log(gw)) * (complete - partial);
        });
    }
    const double r = detail::a2_rate(dist.model);
    const double v = r / gw;
    const double z = v / (1.0 + v);
    const double log_z = std::log(v) - std::log1p(v);
    double log_prefix = detail::log_prefactor_a2(dist.model, dist.n_branches) +
                        std::log(2.0 * (sqm - 1.0) / (mod.order * M_PI));
    return metric_series(dist, ap, log_prefix, ctl, [&](int, double c) {
        // Negative-argument Beta paired with (-1)^{-c}, kept in the printed
        // form with explicit phase tracking.
        SignedLogValue beta_neg = real_part_of_signed_beta(v, c);
        SignedLogValue beta_pos = specfun::inc_beta(z, c, 0.5).magnitude;
        SignedLogValue first =
            slv_from_log(0.5 * std::log(M_PI) + std::lgamma(c + 0.5) - std::lgamma(c)) *
            (SignedLogValue::from_double(sqm) * beta_neg -
             SignedLogValue::from_double(sqm - 1.0) * beta_pos);
        SignedLogValue f1 = specfun::appell_f1(0.5, 0.5 - c, c, 1.5, 0.5, 0.5 * z);
        SignedLogValue second =
            slv_from_log(0.5 * std::log(2.0) + std::log(sqm - 1.0) + c * log_z) * f1;
        return first + second;
    });
}

double sep_qam_asymptotic(const SumDistribution &dist, const MaryModulation &mod)
{
    if (mod.family != MaryFamily::qam)
        throw std::domain_error("sep_qam_asymptotic: modulation is not QAM");
    const double nmu = dist.total_shape();
    const double b = 1.0 - 1.0 / std::sqrt(static_cast<double>(mod.order));
    SignedLogValue complete = slv_from_log(std::lgamma(nmu + 0.5) - std::lgamma(nmu + 1.0));
    SignedLogValue partial = SignedLogValue::from_double(b / std::sqrt(M_PI)) *
                             specfun::inc_beta(0.5, nmu + 0.5, 0.5).magnitude;
    double lx = std::log(detail::asymptote_scale(dist.model) / (mod.g * dist.w_hat));
    SignedLogValue v = slv_from_log(nmu * lx + std::log(2.0 * b) - 0.5 * std::log(M_PI)) *
                       (complete - partial);
    return v.to_double();
}

} // namespace fadesum
