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

#ifndef FADESUM_ERRORS_HPP
#define FADESUM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fadesum
{

// A series exceeded its term budget before the stall criterion fired.
// Carries the number of terms consumed and the log-magnitude of the last
// term so callers can report diagnostics instead of fabricating a value.
class ConvergenceFailure : public std::runtime_error
{
  public:
    ConvergenceFailure(const std::string &what, std::size_t terms, double last_term_log_mag)
        : std::runtime_error(what), terms_used(terms), last_term_log_magnitude(last_term_log_mag)
    {
    }

    std::size_t terms_used;
    double last_term_log_magnitude;
};

// A metric was requested through the 1/(s*w_hat) power-series representation
// outside the parameter region where that representation converges.
class OutsideApproach1Domain : public std::domain_error
{
  public:
    explicit OutsideApproach1Domain(const std::string &what) : std::domain_error(what) {}
};

} // namespace fadesum

#endif
