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
// Exact series representations for W = sum of N i.i.d. squared fading
// envelopes. Two representations exist for each model:
//   approach 1: power series in 1/(s*w_hat); density/CDF series in w
//               converge everywhere, metric series built on it are gated.
//   approach 2: series in a shifted rational kernel; converges everywhere.
// Coefficients of both are memoized per (model parameters, N) since the
// mean power w_hat never enters them.

#ifndef FADESUM_SUM_SERIES_HPP
#define FADESUM_SUM_SERIES_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "fadesum/fading.hpp"
#include "fadesum/signed_log.hpp"

namespace fadesum
{

enum class Approach
{
    one = 1,
    two = 2
};

// zeta selector of the bound formulas: pdf -> zeta = 0, cdf -> zeta = 1.
enum class SeriesMode
{
    pdf = 0,
    cdf = 1
};

struct TruncationControl
{
    int max_terms = 10000;     // epsilon cap
    double target_tol = 1e-12; // absolute tolerance on the evaluated quantity
    SeriesMode mode = SeriesMode::pdf;

    void validate() const
    {
        if (max_terms < 1)
            throw std::domain_error("TruncationControl: max_terms must be >= 1");
        if (!(target_tol > 0.0))
            throw std::domain_error("TruncationControl: target_tol must be > 0");
    }
};

// Memoized coefficient sequences. Entry m, once computed, is never
// recomputed or mutated; computing entry m forces entries 0..m-1. Growth is
// serialized internally; after warm-up all reads are lock-free-equivalent
// shared reads, so a cache may be shared across sweep threads.
class CoefficientCache
{
  public:
    CoefficientCache(const ModelParams &params, int n_branches);

    SignedLogValue h(int m);       // eta-mu, approach 1
    SignedLogValue h_tilde(int m); // eta-mu, approach 2
    SignedLogValue k(int m);       // kappa-mu, approach 1
    SignedLogValue k_tilde(int m); // kappa-mu, approach 2

    // Approach-resolved accessor for the model this cache was built for.
    SignedLogValue coeff(Approach approach, int m);

    void warm(Approach approach, int upto);

    std::size_t size(Approach approach) const;

    // Number of recursion-step evaluations performed so far. The memoization
    // cost model is at most O(eps^2) for eps coefficients (quadratic for the
    // two-sequence eta-mu convolution, linear for the other three).
    std::uint64_t recursion_steps() const { return steps_.load(std::memory_order_relaxed); }

    const ModelParams &params() const { return params_; }
    int n_branches() const { return n_; }

  private:
    void extend_h(int upto);
    void extend_h_tilde(int upto);
    void extend_k(int upto);
    void extend_k_tilde(int upto);

    ModelParams params_;
    int n_;

    std::vector<SignedLogValue> h_, h_tilde_, k_, k_tilde_;
    // eta-mu approach-1 prefix sequences: log[(N a)_i rate^i / i!].
    std::vector<double> nb_ip_log_, nb_q_log_;
    // kappa-mu approach-1 three-term recurrence state (L_{m-1}, L_m, scale).
    double lag_prev_ = 0.0, lag_curr_ = 1.0, lag_scale_ = 0.0;
    mutable std::shared_mutex mutex_;
    std::atomic<std::uint64_t> steps_{0};
};

// Uncached reference evaluation (exponential-time recursion), kept to
// validate that memoization changes cost only, never values.
SignedLogValue coeff_h_nocache(const EtaMuParams &params, int n_branches, int m);
SignedLogValue coeff_h_tilde_nocache(const EtaMuParams &params, int n_branches, int m);
SignedLogValue coeff_k_nocache(const KappaMuParams &params, int n_branches, int m);
SignedLogValue coeff_k_tilde_nocache(const KappaMuParams &params, int n_branches, int m);

// The central object every series evaluates against: model parameters,
// antenna count N, and per-branch mean power w_hat (linear SNR units).
// Construction attaches a process-wide shared coefficient cache keyed by
// exact parameter equality.
struct SumDistribution
{
    ModelParams model;
    int n_branches;
    double w_hat;
    std::shared_ptr<CoefficientCache> cache;

    SumDistribution(const ModelParams &model_, int n_branches_, double w_hat_);

    bool is_eta_mu() const { return std::holds_alternative<EtaMuParams>(model); }
    const EtaMuParams &eta_mu() const { return std::get<EtaMuParams>(model); }
    const KappaMuParams &kappa_mu() const { return std::get<KappaMuParams>(model); }

    // Total cluster shape N*mu, the diversity order of every metric.
    double total_shape() const;

    // Coefficient growth rate rho: approach-1 MGF series requires
    // s*w_hat > rho.
    double approach1_rate() const;
};

// Shared cache registry access (exposed for cache-behavior tests).
std::shared_ptr<CoefficientCache> shared_cache_for(const ModelParams &params, int n_branches);

// Coefficient operations on a distribution.
SignedLogValue coeff_h(const SumDistribution &dist, int m);
SignedLogValue coeff_h_tilde(const SumDistribution &dist, int m);
SignedLogValue coeff_k(const SumDistribution &dist, int m);
SignedLogValue coeff_k_tilde(const SumDistribution &dist, int m);

// A total that cancels to more than twelve digits below the largest series
// term carries no reliable digits; it is floored to an uncertified zero
// (value 0, sign 0, bound_checked false). The bound covers truncation of the
// exact series only, never summation rounding.
struct SeriesEval
{
    double value = 0.0;
    double log_abs = 0.0; // log |value|; -inf for exact zero
    int sign = 0;
    int terms_used = 0;
    Approach approach = Approach::two;
    bool bound_checked = false; // truncation bound was evaluable at terms_used
    double bound = 0.0;
};

// MGF of W at s > 0. Approach 1 throws OutsideApproach1Domain unless
// s*w_hat > approach1_rate().
SeriesEval mgf_sum_ex(const SumDistribution &dist, double s, Approach approach,
                      const TruncationControl &ctl);
double mgf_sum(const SumDistribution &dist, double s, Approach approach,
               const TruncationControl &ctl);

// Density of W at w > 0. At w = 0: returns 0 when N*mu > 1, the finite limit
// when N*mu == 1, and throws std::domain_error (pole) when N*mu < 1.
SeriesEval pdf_sum_ex(const SumDistribution &dist, double w, Approach approach,
                      const TruncationControl &ctl);
double pdf_sum(const SumDistribution &dist, double w, Approach approach,
               const TruncationControl &ctl);

// CDF of W at w >= 0.
SeriesEval cdf_sum_ex(const SumDistribution &dist, double w, Approach approach,
                      const TruncationControl &ctl);
double cdf_sum(const SumDistribution &dist, double w, Approach approach,
               const TruncationControl &ctl);

// Upper bound on the absolute-value series of the approach-1 representation
// (model prefactor included), finite for all w. Dominates |pdf| / |cdf|.
double convergence_bound(const SumDistribution &dist, double w, SeriesMode mode);

// Upper bound on |exact - eps-term partial sum| for the approach-1 series,
// valid for every parameter combination. Coefficient magnitudes are
// dominated by an all-positive envelope whose tail against the series
// kernel collapses to Poisson tail probabilities. Nonincreasing in eps.
double truncation_bound(const SumDistribution &dist, double w, SeriesMode mode, int eps);

// Smallest eps meeting target_tol at the worst grid point: bound-driven for
// approach 1 (falling back to the stall test if the bound is unavailable),
// stall-driven for approach 2. Throws ConvergenceFailure if max_terms is hit.
int choose_truncation(const SumDistribution &dist, const std::vector<double> &w_grid,
                      SeriesMode mode, double target_tol, Approach approach,
                      int max_terms = 10000);

} // namespace fadesum

#endif
