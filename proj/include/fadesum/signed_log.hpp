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

#ifndef FADESUM_SIGNED_LOG_HPP
#define FADESUM_SIGNED_LOG_HPP

#include <cmath>
#include <limits>

namespace fadesum
{

// x = sign * exp(log_mag). sign == 0 represents exact zero; log_mag is then
// ignored. Series coefficients reach magnitudes far beyond double range
// (Gamma(N*mu+m) with N*mu ~ 512), so all coefficient and term algebra runs
// on this type.
struct SignedLogValue
{
    double log_mag = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLogValue zero() { return {}; }

    static SignedLogValue one() { return {0.0, 1}; }

    static SignedLogValue from_log(double log_mag, int sign)
    {
        if (sign == 0)
            return {};
        return {log_mag, sign < 0 ? -1 : 1};
    }

    static SignedLogValue from_double(double x)
    {
        if (x == 0.0)
            return {};
        return {std::log(std::fabs(x)), x < 0.0 ? -1 : 1};
    }

    bool is_zero() const { return sign == 0; }

    double to_double() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

    SignedLogValue operator-() const { return {log_mag, -sign}; }

    SignedLogValue operator*(const SignedLogValue &o) const
    {
        if (sign == 0 || o.sign == 0)
            return {};
        return {log_mag + o.log_mag, sign * o.sign};
    }

    SignedLogValue operator/(const SignedLogValue &o) const
    {
        // Division by exact zero is a caller bug; surface it as +inf magnitude.
        if (sign == 0)
            return {};
        if (o.sign == 0)
            return {std::numeric_limits<double>::infinity(), sign};
        return {log_mag - o.log_mag, sign * o.sign};
    }

    SignedLogValue operator+(const SignedLogValue &o) const
    {
        if (sign == 0)
            return o;
        if (o.sign == 0)
            return *this;
        if (sign == o.sign)
        {
            double hi = log_mag > o.log_mag ? log_mag : o.log_mag;
            double lo = log_mag > o.log_mag ? o.log_mag : log_mag;
            return {hi + std::log1p(std::exp(lo - hi)), sign};
        }
        if (log_mag == o.log_mag)
            return {};
        if (log_mag > o.log_mag)
            return {log_mag + std::log1p(-std::exp(o.log_mag - log_mag)), sign};
        return {o.log_mag + std::log1p(-std::exp(log_mag - o.log_mag)), o.sign};
    }

    SignedLogValue operator-(const SignedLogValue &o) const { return *this + (-o); }

    // Real power. Requires a positive base unless the exponent is an integer.
    SignedLogValue pow(double e) const
    {
        if (sign == 0)
            return e == 0.0 ? one() : zero();
        if (sign > 0)
            return {log_mag * e, 1};
        double r = std::nearbyint(e);
        int s = (static_cast<long long>(r) % 2 == 0) ? 1 : -1;
        return {log_mag * e, s};
    }
};

inline SignedLogValue slv_from_log(double log_mag) { return SignedLogValue::from_log(log_mag, 1); }

// Accumulates signed log-domain terms as two same-sign blocks, each a
// max-anchored compensated sum of exp(term - max). The positive/negative
// split keeps cancellation confined to one final subtraction.
class SignedLogAccumulator
{
  public:
    void add(const SignedLogValue &v)
    {
        if (v.sign == 0)
            return;
        Block &b = v.sign > 0 ? pos_ : neg_;
        b.add(v.log_mag);
    }

    SignedLogValue total() const
    {
        SignedLogValue p = SignedLogValue::from_log(pos_.log_total(), 1);
        SignedLogValue n = SignedLogValue::from_log(neg_.log_total(), 1);
        if (n.is_zero())
            return p;
        if (p.is_zero())
            return -n;
        return p - n;
    }

  private:
    struct Block
    {
        double anchor = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        double comp = 0.0; // Kahan carry, valid relative to the current anchor

        void add(double log_term)
        {
            if (log_term == -std::numeric_limits<double>::infinity())
                return;
            if (log_term > anchor)
            {
                double scale = (sum > 0.0) ? std::exp(anchor - log_term) : 0.0;
                sum *= scale;
                comp *= scale;
                anchor = log_term;
                kahan_add(1.0);
            }
            else
            {
                kahan_add(std::exp(log_term - anchor));
            }
        }

        void kahan_add(double x)
        {
            double y = x - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }

        double log_total() const
        {
            if (sum <= 0.0)
                return -std::numeric_limits<double>::infinity();
            return anchor + std::log(sum);
        }
    };

    Block pos_;
    Block neg_;
};

} // namespace fadesum

#endif
