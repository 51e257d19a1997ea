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

#include "fadesum/linkbudget.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fadesum/errors.hpp"

namespace fadesum
{

void LinkScenario::validate() const
{
    if (!(f_c > 0.0) || !std::isfinite(f_c))
        throw std::domain_error("LinkScenario: f_c must be positive and finite");
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::domain_error("LinkScenario: d must be positive and finite");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::domain_error("LinkScenario: beta must be positive and finite");
    if (!std::isfinite(p_t_dbm))
        throw std::domain_error("LinkScenario: p_t_dbm must be finite");
    if (bw_fraction.has_value() == bw_hz.has_value())
        throw std::domain_error("LinkScenario: exactly one of bw_fraction / bw_hz must be set");
    if (bw_fraction && !(*bw_fraction > 0.0 && *bw_fraction < 1.0))
        throw std::domain_error("LinkScenario: bw_fraction must lie in (0, 1)");
    if (bw_hz && !(*bw_hz > 0.0))
        throw std::domain_error("LinkScenario: bw_hz must be positive");
    if (!std::isfinite(noise_figure_db))
        throw std::domain_error("LinkScenario: noise_figure_db must be finite");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("LinkScenario: alpha must lie in [0, 1]");
    if (n_antennas < 1)
        throw std::domain_error("LinkScenario: n_antennas must be >= 1");
}

double LinkScenario::bandwidth_hz() const
{
    if (bw_fraction.has_value() == bw_hz.has_value())
        throw std::domain_error("LinkScenario: exactly one of bw_fraction / bw_hz must be set");
    return bw_hz ? *bw_hz : *bw_fraction * f_c;
}

LinkScenario LinkScenario::fr3(double f_c, double d)
{
    LinkScenario sc;
    sc.f_c = f_c;
    sc.d = d;
    sc.beta = 3.0;
    sc.bw_fraction = 0.03;
    sc.noise_figure_db = 5.0;
    return sc;
}

LinkScenario LinkScenario::sub_thz(double f_c, double d)
{
    LinkScenario sc;
    sc.f_c = f_c;
    sc.d = d;
    sc.beta = 2.0;
    sc.bw_fraction = 0.01;
    sc.noise_figure_db = 5.0;
    return sc;
}

double path_loss_factor(double f_c)
{
    if (!(f_c > 0.0) || !std::isfinite(f_c))
        throw std::domain_error("path_loss_factor: f_c must be positive and finite");
    double x = speed_of_light / (4.0 * M_PI * f_c);
    return x * x;
}

double noise_power_dbm(const LinkScenario &scenario)
{
    return -174.0 + 10.0 * std::log10(scenario.bandwidth_hz()) + scenario.noise_figure_db;
}

double mean_branch_snr(const LinkScenario &scenario)
{
    scenario.validate();
    if (scenario.alpha == 1.0)
        throw std::domain_error("mean_branch_snr: alpha = 1 collapses the SNR to zero");
    double snr_db = scenario.p_t_dbm - noise_power_dbm(scenario);
    double w_hat = (1.0 - scenario.alpha * scenario.alpha) * linear_from_db(snr_db) *
                   path_loss_factor(scenario.f_c) * std::pow(scenario.d, -scenario.beta);
    return w_hat;
}

std::string to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::distance:
        return "distance";
    case SweepVariable::p_t_dbm:
        return "p_t_dbm";
    case SweepVariable::f_c:
        return "f_c";
    case SweepVariable::n_antennas:
        return "n_antennas";
    default:
        return "modulation_order";
    }
}

std::string to_string(MetricKind k)
{
    switch (k)
    {
    case MetricKind::outage:
        return "outage";
    case MetricKind::coverage:
        return "coverage";
    case MetricKind::bep:
        return "bep";
    case MetricKind::sep_psk:
        return "sep_psk";
    case MetricKind::sep_qam:
        return "sep_qam";
    case MetricKind::pdf:
        return "pdf";
    default:
        return "cdf";
    }
}

namespace
{

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Round a grid value to the integer it must represent; rejects non-integers.
int integral_grid_value(double g, const char *what)
{
    double r = std::nearbyint(g);
    if (!std::isfinite(g) || std::fabs(g - r) > 1e-9 || r < 1.0 || r > 1e9)
        throw std::domain_error(std::string("sweep: ") + what +
                                " grid values must be small positive integers");
    return static_cast<int>(r);
}

SweepRow evaluate_point(const ModelParams &model, const LinkScenario &scenario_template,
                        SweepVariable variable, double grid_value, const MetricSpec &metric)
{
    SweepRow row;
    row.grid_value = grid_value;
    try
    {
        LinkScenario sc = scenario_template;
        int order = metric.mary_order;
        switch (variable)
        {
        case SweepVariable::distance:
            sc.d = grid_value;
            break;
        case SweepVariable::p_t_dbm:
            sc.p_t_dbm = grid_value;
            break;
        case SweepVariable::f_c:
            sc.f_c = grid_value;
            break;
        case SweepVariable::n_antennas:
            sc.n_antennas = integral_grid_value(grid_value, "n_antennas");
            break;
        case SweepVariable::modulation_order:
            order = integral_grid_value(grid_value, "modulation_order");
            break;
        }
        double w_hat = mean_branch_snr(sc);
        row.w_hat_db = db_from_linear(w_hat);
        SumDistribution dist(model, sc.n_antennas, w_hat);

        Approach rep = metric.approach == ApproachMode::one ? Approach::one : Approach::two;
        MetricResult r;
        switch (metric.kind)
        {
        case MetricKind::outage:
            r = outage(dist, metric.gamma_th, metric.ctl, metric.approach);
            break;
        case MetricKind::coverage:
        {
            MetricResult out = outage(dist, metric.gamma_th, metric.ctl, metric.approach);
            r.terms_used = out.terms_used;
            r.approach_used = out.approach_used;
            r.value = 1.0 - out.value;
            r.underflow = r.value <= 0.0;
            r.log_value = r.underflow ? neg_inf : std::log(r.value);
            break;
        }
        case MetricKind::bep:
            r = bep(dist, metric.binary, metric.approach, metric.ctl);
            break;
        case MetricKind::sep_psk:
            r = sep_psk(dist, MaryModulation::psk(order), metric.approach, metric.ctl);
            break;
        case MetricKind::sep_qam:
            r = sep_qam(dist, MaryModulation::qam(order), metric.approach, metric.ctl);
            break;
        case MetricKind::pdf:
        {
            SeriesEval ev = pdf_sum_ex(dist, metric.eval_point, rep, metric.ctl);
            r.terms_used = ev.terms_used;
            r.approach_used = rep;
            r.log_value = ev.sign > 0 ? ev.log_abs : neg_inf;
            r.underflow = !(ev.sign > 0) || ev.log_abs < hard_zero_log;
            r.value = r.underflow ? 0.0 : std::exp(r.log_value);
            break;
        }
        case MetricKind::cdf:
        {
            SeriesEval ev = cdf_sum_ex(dist, metric.eval_point, rep, metric.ctl);
            r.terms_used = ev.terms_used;
            r.approach_used = rep;
            r.log_value = ev.sign > 0 ? ev.log_abs : neg_inf;
            r.underflow = !(ev.sign > 0) || ev.log_abs < hard_zero_log;
            r.value = r.underflow ? 0.0 : std::exp(r.log_value);
            break;
        }
        }
        row.value = r.value;
        row.log_value = r.log_value;
        row.terms_used = r.terms_used;
        row.approach_used = static_cast<int>(r.approach_used);
        row.status = r.underflow ? "underflow" : "ok";
    }
    catch (const OutsideApproach1Domain &)
    {
        row.status = "outside_approach1_domain";
    }
    catch (const ConvergenceFailure &)
    {
        row.status = "convergence_failure";
    }
    catch (const std::exception &)
    {
        row.status = "invalid";
    }
    return row;
}

SweepTable make_table(SweepVariable variable, const MetricSpec &metric, std::size_t n)
{
    SweepTable table;
    table.grid_var = to_string(variable);
    table.metric_name = to_string(metric.kind);
    table.rows.resize(n);
    return table;
}

void check_grid(const std::vector<double> &grid)
{
    if (grid.empty())
        throw std::domain_error("sweep: empty grid");
}

} // namespace

SweepTable sweep(const ModelParams &model, const LinkScenario &scenario_template,
                 SweepVariable variable, const std::vector<double> &grid,
                 const MetricSpec &metric, int max_threads)
{
    check_grid(grid);
    metric.ctl.validate();
    SweepTable table = make_table(variable, metric, grid.size());
    // Warm the shared coefficient cache once so parallel points only read.
    // Failures here are reproduced (and recorded) per point.
    try
    {
        auto warm = shared_cache_for(model, scenario_template.n_antennas);
        warm->warm(metric.approach == ApproachMode::one ? Approach::one : Approach::two, 64);
    }
    catch (const std::exception &)
    {
    }
    const int n = static_cast<int>(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(                                         \
        max_threads > 0 ? max_threads : omp_get_max_threads())
    for (int i = 0; i < n; ++i)
        table.rows[static_cast<std::size_t>(i)] =
            evaluate_point(model, scenario_template, variable, grid[static_cast<std::size_t>(i)],
                           metric);
#else
    (void)max_threads;
    for (int i = 0; i < n; ++i)
        table.rows[static_cast<std::size_t>(i)] =
            evaluate_point(model, scenario_template, variable, grid[static_cast<std::size_t>(i)],
                           metric);
#endif
    return table;
}

SweepTable sweep_serial(const ModelParams &model, const LinkScenario &scenario_template,
                        SweepVariable variable, const std::vector<double> &grid,
                        const MetricSpec &metric)
{
    check_grid(grid);
    metric.ctl.validate();
    SweepTable table = make_table(variable, metric, grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        table.rows[i] = evaluate_point(model, scenario_template, variable, grid[i], metric);
    return table;
}

} // namespace fadesum
