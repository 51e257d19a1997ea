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
// fadesum CLI: single evaluations, figure-style sweeps, and Monte Carlo
// validation, all emitted as deterministic CSV.
//
// Exit codes: 0 success, 2 invalid input, 3 convergence failure (rows are
// still emitted, flagged in the status column), 4 I/O failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "fadesum/errors.hpp"
#include "fadesum/fading.hpp"
#include "fadesum/linkbudget.hpp"
#include "fadesum/metrics.hpp"
#include "fadesum/montecarlo.hpp"
#include "fadesum/sum_series.hpp"

namespace
{

using namespace fadesum;

struct ExitWith
{
    int code;
    std::string message;
};

// %.12e with the exponent sign '+' and leading exponent zeros stripped, so
// that 0.0 prints as the exact underflow literal 0.000000000000e0.
std::string fmt_real(double v)
{
    if (v == 0.0)
        v = 0.0; // normalize -0
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    std::string s(buf);
    std::size_t e = s.find('e');
    if (e == std::string::npos)
        return s;
    std::string mant = s.substr(0, e);
    std::string exp = s.substr(e + 1);
    std::size_t i = 0;
    bool neg = false;
    if (exp[0] == '+')
        i = 1;
    else if (exp[0] == '-')
    {
        neg = true;
        i = 1;
    }
    while (i + 1 < exp.size() && exp[i] == '0')
        ++i;
    return mant + "e" + (neg ? "-" : "") + exp.substr(i);
}

struct OutRow
{
    std::string grid_var;
    double grid_value = 0.0;
    double w_hat_db = 0.0;
    std::string metric;
    double value = 0.0;
    int terms_used = 0;
    int approach_used = 0;
    std::string status = "ok";
    // mc-validate extension
    bool has_mc = false;
    double mc_estimate = 0.0;
    double mc_stderr = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double ks = 0.0;
};

std::string render_csv(const std::vector<OutRow> &rows, bool mc_columns)
{
    std::ostringstream out;
    out << "grid_var,grid_value,w_hat_db,metric,value,terms_used,approach,status";
    if (mc_columns)
        out << ",mc_estimate,mc_stderr,n_samples,seed,ks_distance";
    out << "\n";
    for (const auto &r : rows)
    {
        out << r.grid_var << ',' << fmt_real(r.grid_value) << ',' << fmt_real(r.w_hat_db) << ','
            << r.metric << ',' << fmt_real(r.value) << ',' << r.terms_used << ','
            << r.approach_used << ',' << r.status;
        if (mc_columns)
            out << ',' << fmt_real(r.mc_estimate) << ',' << fmt_real(r.mc_stderr) << ','
                << r.n_samples << ',' << r.seed << ',' << fmt_real(r.ks);
        out << "\n";
    }
    return out.str();
}

void write_output(const std::string &text, const std::string &path)
{
    if (path.empty())
    {
        std::fwrite(text.data(), 1, text.size(), stdout);
        if (std::fflush(stdout) != 0 || std::ferror(stdout))
            throw ExitWith{4, "failed writing to standard output"};
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ExitWith{4, "cannot open output file: " + path};
    f << text;
    f.flush();
    if (!f)
        throw ExitWith{4, "failed writing output file: " + path};
}

int exit_code_for(const std::vector<OutRow> &rows)
{
    bool convergence = false;
    for (const auto &r : rows)
    {
        if (r.status == "invalid")
            return 2;
        if (r.status == "convergence_failure" || r.status == "outside_approach1_domain")
            convergence = true;
    }
    return convergence ? 3 : 0;
}

std::string trim(const std::string &s)
{
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Flat key=value config support: keys are long option names without the
// leading dashes, '#' starts a comment. Values already present on the
// command line win; the rest are appended as --key=value tokens.
std::vector<std::string> config_overrides(const std::string &path,
                                          const std::set<std::string> &given)
{
    std::ifstream f(path);
    if (!f)
        throw ExitWith{4, "cannot read config file: " + path};
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line))
    {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ExitWith{2, path + ":" + std::to_string(lineno) + ": expected key = value"};
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ExitWith{2, path + ":" + std::to_string(lineno) + ": empty key"};
        std::string flag = "--" + key;
        if (given.count(flag))
            continue;
        extra.push_back(flag + "=" + value);
    }
    return extra;
}

struct CliOptions
{
    std::string model;
    double eta = 0.0, mu = 0.0, p = 0.0, kappa = 0.0;
    int n = 1;

    double w_hat = 0.0;
    std::string scenario;
    double fc = 15e9, distance = 100.0, beta = 3.0, ptx_dbm = 30.0;
    double bw_frac = 0.0, bw_hz = 0.0, nf_db = 5.0, alpha = 0.0;

    std::string approach = "auto";
    std::string terms = "auto";
    double tol = 1e-12;

    double w = 1.0; // pdf/cdf evaluation point
    double w_min = 0.0, w_max = 0.0;
    int w_count = 0;
    bool log_grid = false;
    double gamma_th_db = 0.0;
    std::string modulation = "bpsk";
    double g_b = 1.0;
    int order = 4;

    std::string var;
    std::string metric;
    double from = 0.0, to = 0.0;
    int steps = 0;
    std::string values;

    std::uint64_t samples = 1000000;
    std::uint64_t seed = 1;
    std::uint64_t batch = 65536;

    std::string output;
    std::string config;
    int threads = 0;
};

void add_common_flags(CLI::App *c, CliOptions &o)
{
    c->add_option("--config", o.config,
                  "flat key=value config file (# comments); explicit flags take precedence");
    c->add_option("--output", o.output, "write CSV to this file instead of standard output");
    c->add_option("--threads", o.threads, "worker thread cap (>= 1)")
        ->envname("FADESUM_THREADS")
        ->check(CLI::Range(1, 1 << 20));
    c->add_option("--approach", o.approach, "series representation: 1, 2, or auto")
        ->check(CLI::IsMember({"1", "2", "auto"}))
        ->capture_default_str();
    c->add_option("--terms", o.terms, "series term cap: positive integer or auto")
        ->capture_default_str();
    c->add_option("--tol", o.tol, "series truncation tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_model_flags(CLI::App *c, CliOptions &o)
{
    c->add_option("--model", o.model, "fading model: eta-mu or kappa-mu")
        ->required()
        ->check(CLI::IsMember({"eta-mu", "kappa-mu"}));
    c->add_option("--eta", o.eta, "eta-mu in-phase/quadrature power imbalance (> 0)")
        ->check(CLI::PositiveNumber);
    c->add_option("--mu", o.mu, "cluster parameter (> 0), used by both models")
        ->check(CLI::PositiveNumber);
    c->add_option("--p", o.p, "eta-mu cluster-count ratio (> 0)")->check(CLI::PositiveNumber);
    c->add_option("--kappa", o.kappa, "kappa-mu dominant-to-scatter power ratio (> 0)")
        ->check(CLI::PositiveNumber);
    c->add_option("--n", o.n, "number of combined branches / antennas (>= 1)")
        ->check(CLI::Range(1, 1000000000))
        ->capture_default_str();
}

void add_gain_flags(CLI::App *c, CliOptions &o)
{
    c->add_option("--w-hat", o.w_hat,
                  "mean branch SNR (linear); mutually exclusive with the link-scenario flags")
        ->check(CLI::PositiveNumber);
    c->add_option("--scenario", o.scenario, "link preset: fr3 or sub-thz")
        ->check(CLI::IsMember({"fr3", "sub-thz"}));
    c->add_option("--fc", o.fc, "carrier frequency [Hz]")->check(CLI::PositiveNumber);
    c->add_option("--distance", o.distance, "link distance [m]")->check(CLI::PositiveNumber);
    c->add_option("--beta", o.beta, "path-loss exponent")->check(CLI::NonNegativeNumber);
    c->add_option("--ptx-dbm", o.ptx_dbm, "transmit power [dBm]");
    c->add_option("--bw-frac", o.bw_frac, "bandwidth as a fraction of the carrier frequency")
        ->check(CLI::PositiveNumber);
    c->add_option("--bw-hz", o.bw_hz, "bandwidth [Hz]")->check(CLI::PositiveNumber);
    c->add_option("--nf-db", o.nf_db, "receiver noise figure [dB]");
    c->add_option("--alpha", o.alpha, "hardware distortion factor in [0, 1)")
        ->check(CLI::Range(0.0, 1.0));
}

bool scenario_flags_given(const CLI::App *c)
{
    static const char *flags[] = {"--scenario", "--fc",    "--distance", "--beta", "--ptx-dbm",
                                  "--bw-frac",  "--bw-hz", "--nf-db",    "--alpha"};
    for (const char *f : flags)
        if (c->count(f) > 0)
            return true;
    return false;
}

ModelParams build_model(const CLI::App *c, const CliOptions &o)
{
    auto need = [&](const char *flag) {
        if (c->count(flag) == 0)
            throw ExitWith{2, std::string("missing required option: ") + flag};
    };
    if (o.model == "eta-mu")
    {
        need("--eta");
        need("--mu");
        need("--p");
        if (c->count("--kappa"))
            throw ExitWith{2, "--kappa does not apply to the eta-mu model"};
        return EtaMuParams(o.eta, o.mu, o.p);
    }
    need("--kappa");
    need("--mu");
    if (c->count("--eta") || c->count("--p"))
        throw ExitWith{2, "--eta / --p do not apply to the kappa-mu model"};
    return KappaMuParams(o.kappa, o.mu);
}

LinkScenario build_scenario(const CLI::App *c, const CliOptions &o)
{
    LinkScenario sc;
    if (o.scenario == "fr3")
        sc = LinkScenario::fr3();
    else if (o.scenario == "sub-thz")
        sc = LinkScenario::sub_thz();
    if (c->count("--fc"))
        sc.f_c = o.fc;
    if (c->count("--distance"))
        sc.d = o.distance;
    if (c->count("--beta"))
        sc.beta = o.beta;
    if (c->count("--ptx-dbm"))
        sc.p_t_dbm = o.ptx_dbm;
    if (c->count("--bw-frac") && c->count("--bw-hz"))
        throw ExitWith{2, "--bw-frac and --bw-hz are mutually exclusive"};
    if (c->count("--bw-frac"))
    {
        sc.bw_fraction = o.bw_frac;
        sc.bw_hz.reset();
    }
    if (c->count("--bw-hz"))
    {
        sc.bw_hz = o.bw_hz;
        sc.bw_fraction.reset();
    }
    if (c->count("--nf-db"))
        sc.noise_figure_db = o.nf_db;
    if (c->count("--alpha"))
        sc.alpha = o.alpha;
    sc.n_antennas = o.n;
    sc.validate();
    return sc;
}

// Mean branch SNR from either --w-hat or the link-scenario flags (exactly one).
double resolve_w_hat(const CLI::App *c, const CliOptions &o)
{
    bool direct = c->count("--w-hat") > 0;
    bool scenario = scenario_flags_given(c);
    if (direct && scenario)
        throw ExitWith{2, "--w-hat and the link-scenario flags are mutually exclusive"};
    if (!direct && !scenario)
        throw ExitWith{2, "either --w-hat or the link-scenario flags (--fc, --distance, ...) "
                          "are required"};
    if (direct)
        return o.w_hat;
    return mean_branch_snr(build_scenario(c, o));
}

ApproachMode parse_approach(const std::string &s)
{
    if (s == "1")
        return ApproachMode::one;
    if (s == "2")
        return ApproachMode::two;
    return ApproachMode::automatic;
}

TruncationControl parse_ctl(const CliOptions &o)
{
    TruncationControl ctl;
    ctl.target_tol = o.tol;
    if (o.terms != "auto")
    {
        std::size_t idx = 0;
        long v = 0;
        try
        {
            v = std::stol(o.terms, &idx);
        }
        catch (const std::exception &)
        {
            idx = 0;
        }
        if (idx != o.terms.size() || v < 1 || v > 10000000)
            throw ExitWith{2, "--terms must be a positive integer or auto"};
        ctl.max_terms = static_cast<int>(v);
    }
    return ctl;
}

BinaryModulation build_binary(const CLI::App *c, const CliOptions &o)
{
    if (o.modulation == "bpsk")
    {
        if (c->count("--g-b"))
            throw ExitWith{2, "--g-b requires --modulation custom"};
        return BinaryModulation::bpsk();
    }
    if (o.modulation == "bfsk")
        return BinaryModulation::bfsk();
    if (o.modulation == "bfsk-min")
        return BinaryModulation::bfsk_min_corr();
    if (o.modulation == "custom")
    {
        if (c->count("--g-b") == 0)
            throw ExitWith{2, "missing required option: --g-b (with --modulation custom)"};
        return BinaryModulation::custom(o.g_b);
    }
    throw ExitWith{2, "unknown binary modulation: " + o.modulation};
}

// Direct single-point evaluation; mirrors the sweep engine's per-row
// error-to-status mapping so both paths emit identical vocabulary.
OutRow single_eval(const ModelParams &model, int n, double w_hat, const MetricSpec &spec,
                   const std::string &grid_var, double grid_value)
{
    OutRow row;
    row.grid_var = grid_var;
    row.grid_value = grid_value;
    row.metric = to_string(spec.kind);
    row.w_hat_db = db_from_linear(w_hat);
    try
    {
        SumDistribution dist(model, n, w_hat);
        Approach rep = spec.approach == ApproachMode::one ? Approach::one : Approach::two;
        MetricResult r;
        switch (spec.kind)
        {
        case MetricKind::outage:
            r = outage(dist, spec.gamma_th, spec.ctl, spec.approach);
            break;
        case MetricKind::coverage:
        {
            MetricResult out = outage(dist, spec.gamma_th, spec.ctl, spec.approach);
            r.terms_used = out.terms_used;
            r.approach_used = out.approach_used;
            r.value = 1.0 - out.value;
            r.underflow = r.value <= 0.0;
            r.log_value = r.underflow ? -std::numeric_limits<double>::infinity()
                                      : std::log(r.value);
            break;
        }
        case MetricKind::bep:
            r = bep(dist, spec.binary, spec.approach, spec.ctl);
            break;
        case MetricKind::sep_psk:
            r = sep_psk(dist, MaryModulation::psk(spec.mary_order), spec.approach, spec.ctl);
            break;
        case MetricKind::sep_qam:
            r = sep_qam(dist, MaryModulation::qam(spec.mary_order), spec.approach, spec.ctl);
            break;
        case MetricKind::pdf:
        case MetricKind::cdf:
        {
            SeriesEval ev = spec.kind == MetricKind::pdf
                                ? pdf_sum_ex(dist, spec.eval_point, rep, spec.ctl)
                                : cdf_sum_ex(dist, spec.eval_point, rep, spec.ctl);
            r.terms_used = ev.terms_used;
            r.approach_used = rep;
            r.underflow = !(ev.sign > 0) || ev.log_abs < hard_zero_log;
            r.value = r.underflow ? 0.0 : ev.value;
            break;
        }
        }
        row.value = r.value;
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
    catch (const ExitWith &)
    {
        throw;
    }
    catch (const std::exception &)
    {
        row.status = "invalid";
    }
    return row;
}

std::vector<double> linear_or_log_grid(double lo, double hi, int count, bool log_spaced,
                                       const char *what)
{
    if (count < 1)
        throw ExitWith{2, std::string(what) + ": grid needs at least one point"};
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw ExitWith{2, std::string(what) + ": grid endpoints must be finite"};
    if (log_spaced && (lo <= 0.0 || hi <= 0.0))
        throw ExitWith{2, std::string(what) + ": log-spaced grid needs positive endpoints"};
    std::vector<double> g(static_cast<std::size_t>(count));
    if (count == 1)
    {
        g[0] = lo;
        return g;
    }
    if (log_spaced)
    {
        double la = std::log(lo), lb = std::log(hi);
        for (int i = 0; i < count; ++i)
            g[static_cast<std::size_t>(i)] =
                std::exp(la + (lb - la) * static_cast<double>(i) / (count - 1));
    }
    else
    {
        for (int i = 0; i < count; ++i)
            g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    return g;
}

std::vector<double> parse_values_list(const std::string &text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
            continue;
        std::size_t idx = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &idx);
        }
        catch (const std::exception &)
        {
            idx = 0;
        }
        if (idx != item.size())
            throw ExitWith{2, "--values: cannot parse '" + item + "' as a number"};
        out.push_back(v);
    }
    if (out.empty())
        throw ExitWith{2, "--values: empty grid"};
    return out;
}

int run_pointwise(const CLI::App *c, const CliOptions &o, MetricKind kind)
{
    ModelParams model = build_model(c, o);
    double w_hat = resolve_w_hat(c, o);
    std::vector<double> grid;
    if (c->count("--w"))
    {
        if (c->count("--w-min") || c->count("--w-max") || c->count("--w-count"))
            throw ExitWith{2, "--w and --w-min/--w-max/--w-count are mutually exclusive"};
        grid.push_back(o.w);
    }
    else
    {
        if (!c->count("--w-min") || !c->count("--w-max") || !c->count("--w-count"))
            throw ExitWith{2, "missing required option: --w (or --w-min/--w-max/--w-count)"};
        grid = linear_or_log_grid(o.w_min, o.w_max, o.w_count, o.log_grid, "--w-count");
    }
    MetricSpec spec;
    spec.kind = kind;
    spec.approach = parse_approach(o.approach);
    spec.ctl = parse_ctl(o);
    std::vector<OutRow> rows;
    rows.reserve(grid.size());
    for (double w : grid)
    {
        spec.eval_point = w;
        rows.push_back(single_eval(model, o.n, w_hat, spec, "w", w));
    }
    write_output(render_csv(rows, false), o.output);
    return exit_code_for(rows);
}

int run_single_metric(const CLI::App *c, const CliOptions &o, MetricKind kind)
{
    ModelParams model = build_model(c, o);
    double w_hat = resolve_w_hat(c, o);
    MetricSpec spec;
    spec.kind = kind;
    spec.approach = parse_approach(o.approach);
    spec.ctl = parse_ctl(o);
    if (kind == MetricKind::outage)
        spec.gamma_th = linear_from_db(o.gamma_th_db);
    else if (kind == MetricKind::bep)
        spec.binary = build_binary(c, o);
    else
        spec.mary_order = o.order;
    std::vector<OutRow> rows{single_eval(model, o.n, w_hat, spec, "w_hat", w_hat)};
    write_output(render_csv(rows, false), o.output);
    return exit_code_for(rows);
}

SweepVariable parse_sweep_var(const std::string &s)
{
    if (s == "distance")
        return SweepVariable::distance;
    if (s == "ptx-dbm")
        return SweepVariable::p_t_dbm;
    if (s == "fc")
        return SweepVariable::f_c;
    if (s == "n")
        return SweepVariable::n_antennas;
    return SweepVariable::modulation_order;
}

MetricKind parse_metric_kind(const std::string &s)
{
    if (s == "outage")
        return MetricKind::outage;
    if (s == "coverage")
        return MetricKind::coverage;
    if (s == "bep")
        return MetricKind::bep;
    if (s == "sep-psk")
        return MetricKind::sep_psk;
    if (s == "sep-qam")
        return MetricKind::sep_qam;
    if (s == "pdf")
        return MetricKind::pdf;
    return MetricKind::cdf;
}

MetricSpec build_metric_spec(const CLI::App *c, const CliOptions &o, MetricKind kind)
{
    MetricSpec spec;
    spec.kind = kind;
    spec.approach = parse_approach(o.approach);
    spec.ctl = parse_ctl(o);
    switch (kind)
    {
    case MetricKind::outage:
    case MetricKind::coverage:
        spec.gamma_th = linear_from_db(o.gamma_th_db);
        break;
    case MetricKind::bep:
        spec.binary = build_binary(c, o);
        break;
    case MetricKind::sep_psk:
    case MetricKind::sep_qam:
        spec.mary_order = o.order;
        break;
    case MetricKind::pdf:
    case MetricKind::cdf:
        if (c->count("--w") == 0)
            throw ExitWith{2, "missing required option: --w (evaluation point)"};
        spec.eval_point = o.w;
        break;
    }
    return spec;
}

int run_sweep(const CLI::App *c, const CliOptions &o)
{
    ModelParams model = build_model(c, o);
    if (c->count("--w-hat"))
        throw ExitWith{2, "sweep derives the branch SNR from the link scenario; "
                          "--w-hat is not accepted here"};
    LinkScenario scenario = build_scenario(c, o);
    SweepVariable var = parse_sweep_var(o.var);
    std::vector<double> grid;
    if (c->count("--values"))
    {
        if (c->count("--from") || c->count("--to") || c->count("--steps"))
            throw ExitWith{2, "--values and --from/--to/--steps are mutually exclusive"};
        grid = parse_values_list(o.values);
    }
    else
    {
        if (!c->count("--from") || !c->count("--to") || !c->count("--steps"))
            throw ExitWith{2, "missing required option: --from/--to/--steps (or --values)"};
        grid = linear_or_log_grid(o.from, o.to, o.steps, o.log_grid, "--steps");
    }
    MetricKind kind = parse_metric_kind(o.metric);
    MetricSpec spec = build_metric_spec(c, o, kind);
    if ((kind == MetricKind::sep_psk || kind == MetricKind::sep_qam) &&
        var != SweepVariable::modulation_order)
    {
        // Validate the fixed order up front; per-point validation covers the
        // modulation_order sweep case.
        if (kind == MetricKind::sep_psk)
            MaryModulation::psk(spec.mary_order);
        else
            MaryModulation::qam(spec.mary_order);
    }
    SweepTable table = sweep(model, scenario, var, grid, spec, o.threads);
    std::vector<OutRow> rows;
    rows.reserve(table.rows.size());
    for (const auto &r : table.rows)
    {
        OutRow row;
        row.grid_var = table.grid_var;
        row.grid_value = r.grid_value;
        row.w_hat_db = r.w_hat_db;
        row.metric = table.metric_name;
        row.value = r.value;
        row.terms_used = r.terms_used;
        row.approach_used = r.approach_used;
        row.status = r.status;
        rows.push_back(std::move(row));
    }
    write_output(render_csv(rows, false), o.output);
    return exit_code_for(rows);
}

int run_mc_validate(const CLI::App *c, const CliOptions &o)
{
    ModelParams model = build_model(c, o);
    double w_hat = resolve_w_hat(c, o);
    MetricKind kind = parse_metric_kind(o.metric);
    MetricSpec spec = build_metric_spec(c, o, kind);
    std::string grid_var = kind == MetricKind::cdf ? "w" : "w_hat";
    double grid_value = kind == MetricKind::cdf ? o.w : w_hat;
    OutRow row = single_eval(model, o.n, w_hat, spec, grid_var, grid_value);
    row.has_mc = true;

    SumDistribution dist(model, o.n, w_hat);
    SimConfig cfg;
    cfg.n_samples = o.samples;
    cfg.seed = o.seed;
    cfg.batch = o.batch;
    McEstimate est;
    switch (kind)
    {
    case MetricKind::cdf:
        est = empirical_outage(dist, spec.eval_point, cfg);
        break;
    case MetricKind::outage:
        est = empirical_outage(dist, spec.gamma_th, cfg);
        break;
    case MetricKind::bep:
        est = empirical_bep(dist, spec.binary, cfg);
        break;
    case MetricKind::sep_psk:
        est = empirical_sep_psk(dist, MaryModulation::psk(spec.mary_order), cfg);
        break;
    case MetricKind::sep_qam:
        est = empirical_sep_qam(dist, MaryModulation::qam(spec.mary_order), cfg);
        break;
    default:
        throw ExitWith{2, "mc-validate supports cdf, outage, bep, sep-psk, sep-qam"};
    }
    row.mc_estimate = est.mean;
    row.mc_stderr = est.std_error;
    row.n_samples = est.n_samples;
    row.seed = est.seed;

    Approach rep = spec.approach == ApproachMode::one ? Approach::one : Approach::two;
    TruncationControl ctl = spec.ctl;
    row.ks = ks_distance(sample_sum(dist, cfg),
                         [&](double x) { return cdf_sum(dist, x, rep, ctl); });

    std::vector<OutRow> rows{std::move(row)};
    write_output(render_csv(rows, true), o.output);
    return exit_code_for(rows);
}

int run(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);

    // Manual config-file pass so values land on whichever subcommand is used.
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (!config_path.empty())
    {
        std::set<std::string> given;
        for (const auto &a : args)
            if (a.rfind("--", 0) == 0)
                given.insert(a.substr(0, a.find('=')));
        for (auto &extra : config_overrides(config_path, given))
            args.push_back(std::move(extra));
    }

    CliOptions o;
    CLI::App app{"Sum statistics of generalized fading channels: exact series evaluation,\n"
                 "link-budget sweeps, and Monte Carlo validation. Output is deterministic CSV.",
                 "fadesum"};
    app.require_subcommand(1);
    app.add_option("--config", o.config,
                   "flat key=value config file (# comments); explicit flags take precedence");

    CLI::App *c_pdf = app.add_subcommand("pdf", "probability density of the branch-power sum");
    CLI::App *c_cdf = app.add_subcommand("cdf", "distribution function of the branch-power sum");
    CLI::App *c_out = app.add_subcommand("outage", "outage probability P(W < gamma_th)");
    CLI::App *c_bep = app.add_subcommand("bep", "average bit error probability");
    CLI::App *c_sep = app.add_subcommand("sep", "average symbol error probability (M-PSK/M-QAM)");
    CLI::App *c_sweep = app.add_subcommand("sweep", "metric sweep over a link-budget variable");
    CLI::App *c_mc = app.add_subcommand("mc-validate",
                                        "analytic metric vs Monte Carlo estimate with KS check");

    for (CLI::App *c : {c_pdf, c_cdf, c_out, c_bep, c_sep, c_sweep, c_mc})
    {
        add_common_flags(c, o);
        add_model_flags(c, o);
        add_gain_flags(c, o);
    }
    for (CLI::App *c : {c_pdf, c_cdf})
    {
        c->add_option("--w", o.w, "evaluation point (sum power, >= 0)")
            ->check(CLI::NonNegativeNumber);
        c->add_option("--w-min", o.w_min, "grid start")->check(CLI::NonNegativeNumber);
        c->add_option("--w-max", o.w_max, "grid end")->check(CLI::NonNegativeNumber);
        c->add_option("--w-count", o.w_count, "number of grid points")
            ->check(CLI::Range(1, 10000000));
        c->add_flag("--log-grid", o.log_grid, "log-spaced grid");
    }
    c_out->add_option("--gamma-th-db", o.gamma_th_db, "outage SNR threshold [dB]")
        ->capture_default_str();
    for (CLI::App *c : {c_bep, c_sweep, c_mc})
    {
        c->add_option("--modulation", o.modulation,
                      "binary scheme for bep: bpsk, bfsk, bfsk-min, custom")
            ->check(CLI::IsMember({"bpsk", "bfsk", "bfsk-min", "custom"}))
            ->capture_default_str();
        c->add_option("--g-b", o.g_b, "conditional-EP argument scale for --modulation custom")
            ->check(CLI::PositiveNumber);
    }
    c_sep->add_option("--modulation", o.modulation, "symbol family: psk or qam")
        ->required()
        ->check(CLI::IsMember({"psk", "qam"}));
    for (CLI::App *c : {c_sep, c_sweep, c_mc})
        c->add_option("--order", o.order, "modulation order M (power of two)")
            ->check(CLI::Range(2, 1 << 20))
            ->capture_default_str();

    c_sweep->add_option("--var", o.var,
                        "sweep variable: distance, ptx-dbm, fc, n, mod-order")
        ->required()
        ->check(CLI::IsMember({"distance", "ptx-dbm", "fc", "n", "mod-order"}));
    c_sweep->add_option("--metric", o.metric,
                        "metric: outage, coverage, bep, sep-psk, sep-qam, pdf, cdf")
        ->required()
        ->check(CLI::IsMember({"outage", "coverage", "bep", "sep-psk", "sep-qam", "pdf", "cdf"}));
    c_sweep->add_option("--from", o.from, "grid start");
    c_sweep->add_option("--to", o.to, "grid end");
    c_sweep->add_option("--steps", o.steps, "number of grid points (inclusive endpoints)")
        ->check(CLI::Range(1, 10000000));
    c_sweep->add_option("--values", o.values, "explicit comma-separated grid");
    c_sweep->add_flag("--log-grid", o.log_grid, "log-spaced grid");
    for (CLI::App *c : {c_sweep, c_mc})
    {
        c->add_option("--gamma-th-db", o.gamma_th_db, "outage SNR threshold [dB]")
            ->capture_default_str();
        c->add_option("--w", o.w, "pdf/cdf evaluation point (sum power, >= 0)")
            ->check(CLI::NonNegativeNumber);
    }
    c_mc->add_option("--metric", o.metric, "metric: cdf, outage, bep, sep-psk, sep-qam")
        ->required()
        ->check(CLI::IsMember({"cdf", "outage", "bep", "sep-psk", "sep-qam"}));
    c_mc->add_option("--samples", o.samples, "Monte Carlo sample count (>= 100)")
        ->check(CLI::Range(static_cast<std::uint64_t>(100), static_cast<std::uint64_t>(1)
                                                                << 40))
        ->capture_default_str();
    c_mc->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    c_mc->add_option("--batch", o.batch, "samples per jackknife batch")
        ->check(CLI::Range(static_cast<std::uint64_t>(1), static_cast<std::uint64_t>(1) << 32))
        ->capture_default_str();

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

#ifdef _OPENMP
    if (o.threads > 0)
        omp_set_num_threads(o.threads);
#endif

    const CLI::App *sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "pdf")
        return run_pointwise(sub, o, MetricKind::pdf);
    if (name == "cdf")
        return run_pointwise(sub, o, MetricKind::cdf);
    if (name == "outage")
        return run_single_metric(sub, o, MetricKind::outage);
    if (name == "bep")
        return run_single_metric(sub, o, MetricKind::bep);
    if (name == "sep")
        return run_single_metric(sub, o,
                                 o.modulation == "qam" ? MetricKind::sep_qam
                                                       : MetricKind::sep_psk);
    if (name == "sweep")
        return run_sweep(sub, o);
    return run_mc_validate(sub, o);
}

} // namespace

int main(int argc, char **argv)
{
    try
    {
        return run(argc, argv);
    }
    catch (const ExitWith &e)
    {
        std::cerr << "fadesum: " << e.message << "\n";
        return e.code;
    }
    catch (const ConvergenceFailure &e)
    {
        std::cerr << "fadesum: convergence failure: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "fadesum: " << e.what() << "\n";
        return 2;
    }
}
