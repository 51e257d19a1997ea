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

#include "fadesum/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fadesum
{

std::vector<std::pair<double, double>> gauss_legendre(int n)
{
    if (n < 1)
        throw std::domain_error("gauss_legendre: n must be >= 1");
    std::vector<std::pair<double, double>> nw(static_cast<std::size_t>(n));
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i)
    {
        // Chebyshev-like initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j)
            {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-16 * (1.0 + std::fabs(x)))
                break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nw[static_cast<std::size_t>(i)] = {-x, w};
        nw[static_cast<std::size_t>(n - 1 - i)] = {x, w};
    }
    if (n % 2 == 1)
        nw[static_cast<std::size_t>(n / 2)].first = 0.0;
    return nw;
}

} // namespace fadesum
