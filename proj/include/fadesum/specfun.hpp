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
// Special-function kernel. Every series follows the same termination rule:
// stop once the last 3 consecutive term magnitudes are each below
// 1e-15 * |partial sum|; more than 10,000 terms is a reported
// ConvergenceFailure, never a silent truncation. All Gamma ratios are
// differences of ln_gamma. All functions here are pure and reentrant.

#ifndef FADESUM_SPECFUN_HPP
#define FADESUM_SPECFUN_HPP

#include "fadesum/signed_log.hpp"

namespace fadesum::specfun
{

inline constexpr double series_tol = 1e-15;
inline constexpr int series_max_terms = 10000;
inline constexpr int series_stall_count = 3;

// ln Gamma(x) for x > 0. Throws std::domain_error for x <= 0.
double ln_gamma(double x);

// Regularized incomplete gamma functions, Q(a,x) = Gamma(a,x)/Gamma(a) and
// P(a,x) = 1 - Q(a,x), for a > 0, x >= 0. The _log variants return the
// natural log and stay meaningful deep into the tails where the linear
// value underflows.
double reg_upper_inc_gamma(double a, double x);
double reg_lower_inc_gamma(double a, double x);
double reg_upper_inc_gamma_log(double a, double x);
double reg_lower_inc_gamma_log(double a, double x);

// Complementary error function; ln_erfc stays finite out to x ~ 1e4 where
// erfc itself is far below double range.
double erfc(double x);
double ln_erfc(double x);

// Incomplete Beta B(z; a, b), a > 0, z <= 1, b unrestricted (negative
// non-integer b occurs in the quadrature-free QAM terms). For z < 0 the
// principal branch gives z^a = |z|^a * exp(i*pi*a); `magnitude` is then the
// (positive) modulus series and `phase` = pi*a. For z in [0,1], phase = 0
// and magnitude carries the full signed value.
struct IncBetaResult
{
    SignedLogValue magnitude;
    double phase = 0.0;
};
IncBetaResult inc_beta(double z, double a, double b);

// Kummer confluent 1F1(a; b; z). Kummer transform for z < 0; a large-z
// asymptotic branch covers the bound arguments that reach the thousands.
SignedLogValue hyp1f1(double a, double b, double z);

// Gauss 2F1(a, b; c; z) for z < 1. Pfaff transform maps z < 0 into (0,1);
// near z = 1 the 1-z connection formula is used (requires c-a-b not an
// integer, which holds for every call site in this library).
SignedLogValue hyp2f1(double a, double b, double c, double z);

// 2F2(a1, a2; b1, b2; z): entire in z, direct series.
SignedLogValue hyp2f2(double a1, double a2, double b1, double b2, double z);

// 3F2(a1, a2, a3; b1, b2; z): direct series, |z| < 1 required. No analytic
// continuation on purpose: callers treat an out-of-domain bound as
// unavailable, not as zero.
SignedLogValue hyp3f2(double a1, double a2, double a3, double b1, double b2, double z);

// Appell F1(a; b1, b2; c; x, y), |x| < 1, |y| < 1. Diagonal-ordered double
// series for moderate b1, b2. The metric family
// F1(1/2; 1/2-c, c; 3/2; x, y) with x >= y >= 0 and large c cancels
// catastrophically in series form and is evaluated through its single
// bounded integral representation instead.
SignedLogValue appell_f1(double a, double b1, double b2, double c, double x, double y);

// Modified Bessel I_nu(z), z >= 0, nu > -1. Ascending series with log-domain
// terms; an asymptotic branch takes over for very large z.
SignedLogValue bessel_i(double nu, double z);

} // namespace fadesum::specfun

#endif
