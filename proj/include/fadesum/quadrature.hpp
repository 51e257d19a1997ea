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

#ifndef FADESUM_QUADRATURE_HPP
#define FADESUM_QUADRATURE_HPP

#include <utility>
#include <vector>

namespace fadesum
{

// Gauss-Legendre nodes/weights on [-1, 1], Newton-refined to double
// precision. Deterministic for a given n.
std::vector<std::pair<double, double>> gauss_legendre(int n);

// Fixed-order Gauss-Legendre integral of f over [lo, hi].
template <typename F> double gauss_legendre_integrate(const F &f, double lo, double hi, int n)
{
    static thread_local std::vector<std::pair<double, double>> cache;
    static thread_local int cache_n = 0;
    if (cache_n != n)
    {
        cache = gauss_legendre(n);
        cache_n = n;
    }
    double mid = 0.5 * (lo + hi);
    double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (const auto &[t, w] : cache)
        sum += w * f(mid + half * t);
    return sum * half;
}

} // namespace fadesum

#endif
