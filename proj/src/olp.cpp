// vlc-precoding: linear precoder design for multi-LED visible-light downlinks
// Copyright (C) 2026 The vlc-precoding contributors
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

#include "vlc/olp.hpp"

#include "vlc/errors.hpp"
#include "vlc/metrics.hpp"
#include "vlc/zf.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <limits>

namespace vlc
{

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace
{

constexpr double kWitnessSlack = 1e-6;

/// Channel view of a vectorized problem; enough for metrics::evaluate.
ChannelState as_channel(const VectorizedProblem &vp)
{
    ChannelState ch;
    ch.H.resize(vp.ues, vp.leds);
    for (Index k = 0; k < vp.ues; ++k)
        for (Index n = 0; n < vp.leds; ++n)
            ch.H(k, n) = vp.selectors(k, n * vp.ues + k);
    ch.sigma = vp.sigma;
    ch.budgets = vp.budgets;
    ch.dc_power = VectorXd::Zero(vp.ues);
    return ch;
}

/// Uniform shrink that brings every LED row inside its budget.
VectorXd clamp_to_budgets(const VectorizedProblem &vp, VectorXd w)
{
    const VectorXd usage = vp.budget_map * w.cwiseAbs();
    double factor = 1.0;
    for (Index n = 0; n < vp.leds; ++n)
        if (usage(n) > vp.budgets(n))
            factor = std::min(factor, vp.budgets(n) / usage(n));
    if (factor < 1.0)
        w *= factor;
    return w;
}

void notify(const FeasibilitySettings &settings, std::string_view stage, const Probe &p)
{
    if (settings.observer)
        settings.observer(stage, p);
}

} // namespace

VectorizedProblem vectorize(const ChannelState &ch)
{
    ch.validate();
    const Index K = ch.num_ues();
    const Index M = ch.num_leds();
    const Index MK = M * K;

    VectorizedProblem vp;
    vp.leds = M;
    vp.ues = K;
    vp.budgets = ch.budgets;
    vp.sigma = ch.sigma;

    vp.selectors = MatrixXd::Zero(K, MK);
    for (Index k = 0; k < K; ++k)
        for (Index n = 0; n < M; ++n)
            vp.selectors(k, n * K + k) = ch.H(k, n);

    // (h_k^T ⊗ I_K^k): row j != k picks w_{n,j} weighted by h_{k,n}.
    vp.interference.reserve(static_cast<std::size_t>(K));
    vp.noise.reserve(static_cast<std::size_t>(K));
    for (Index k = 0; k < K; ++k)
    {
        MatrixXd Bk = MatrixXd::Zero(K + 1, MK);
        for (Index j = 0; j < K; ++j)
        {
            if (j == k)
                continue;
            for (Index n = 0; n < M; ++n)
                Bk(j, n * K + j) = ch.H(k, n);
        }
        vp.interference.push_back(std::move(Bk));
        VectorXd noise = VectorXd::Zero(K + 1);
        noise(K) = ch.sigma(k);
        vp.noise.push_back(std::move(noise));
    }

    vp.budget_map = MatrixXd::Zero(M, MK);
    for (Index n = 0; n < M; ++n)
        vp.budget_map.block(n, n * K, 1, K).setOnes();
    return vp;
}

VectorXd stack_precoder(const MatrixXd &W)
{
    const MatrixXd Wt = W.transpose();
    return Eigen::Map<const VectorXd>(Wt.data(), Wt.size());
}

MatrixXd unstack_precoder(const VectorXd &w, Index leds, Index ues)
{
    if (w.size() != leds * ues)
        throw std::invalid_argument("unstack_precoder: length must be M*K");
    return Eigen::Map<const MatrixXd>(w.data(), ues, leds).transpose();
}

VectorXd precoder_column(const VectorXd &w, Index leds, Index ues, Index k)
{
    VectorXd col(leds);
    for (Index n = 0; n < leds; ++n)
        col(n) = w(n * ues + k);
    return col;
}

VectorXd MarginProgram::pack(const VectorXd &w, const VectorXd &a, double lambda) const
{
    const Index MK = leds * ues;
    VectorXd x(2 * MK + 1);
    x.head(MK) = w / weight_scale;
    x.segment(MK, MK) = a / weight_scale;
    x(2 * MK) = lambda / margin_scale;
    return x;
}

VectorXd MarginProgram::weights(const VectorXd &x) const
{
    return x.head(leds * ues) * weight_scale;
}

double MarginProgram::margin(const VectorXd &x) const
{
    return x(2 * leds * ues) * margin_scale;
}

MarginProgram margin_program(const VectorizedProblem &vp, double t)
{
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::invalid_argument(fmt::format("margin_program: SINR target must be positive, got {}", t));

    const Index M = vp.leds;
    const Index K = vp.ues;
    const Index MK = M * K;
    const Index N = 2 * MK + 1;
    const Index orthant_rows = 2 * MK + M;
    const Index rows = orthant_rows + K * (K + 2);

    MarginProgram mp;
    mp.t = t;
    mp.leds = M;
    mp.ues = K;
    mp.weight_scale = vp.budgets.maxCoeff();
    mp.margin_scale = vp.sigma.maxCoeff();
    const double gain = mp.weight_scale / mp.margin_scale;

    auto &prog = mp.program;
    prog.c = VectorXd::Zero(N);
    prog.c(N - 1) = -1.0;
    prog.A = MatrixXd::Zero(rows, N);
    prog.b = VectorXd::Zero(rows);

    // Box rows: w' - a' <= 0 and -w' - a' <= 0.
    for (Index i = 0; i < MK; ++i)
    {
        prog.A(i, i) = 1.0;
        prog.A(i, MK + i) = -1.0;
        prog.A(MK + i, i) = -1.0;
        prog.A(MK + i, MK + i) = -1.0;
    }
    // Budget rows: U a' <= p~ / weight_scale.
    prog.A.block(2 * MK, MK, M, MK) = vp.budget_map;
    prog.b.segment(2 * MK, M) = vp.budgets / mp.weight_scale;
    prog.cones.push_back(conic::ConeBlock::orthant(orthant_rows));

    const double inv_sqrt_t = 1.0 / std::sqrt(t);
    for (Index k = 0; k < K; ++k)
    {
        const Index r0 = orthant_rows + k * (K + 2);
        // Radius: gain * h~_k^T w' / sqrt(t) - lambda'.
        prog.A.block(r0, 0, 1, MK) = -gain * inv_sqrt_t * vp.selectors.row(k);
        prog.A(r0, N - 1) = 1.0;
        // Norm part: gain * B_k w' + sigma_k / margin_scale.
        prog.A.block(r0 + 1, 0, K + 1, MK) = -gain * vp.interference[static_cast<std::size_t>(k)];
        prog.b.segment(r0 + 1, K + 1) = vp.noise[static_cast<std::size_t>(k)] / mp.margin_scale;
        prog.cones.push_back(conic::ConeBlock::soc(K + 2));
    }
    return mp;
}

Probe is_feasible(const VectorizedProblem &vp, double t, const FeasibilitySettings &settings)
{
    const MarginProgram mp = margin_program(vp, t);
    const conic::ConicSolution sol = conic::solve(mp.program, settings.solver);

    Probe probe;
    probe.t = t;
    probe.status = sol.status;
    probe.solver_iterations = sol.iterations;
    probe.margin = mp.margin(sol.x);

    if (sol.status == conic::SolveStatus::NumericalFailure)
        throw SolverError(fmt::format("feasibility solve at t = {:.6e} failed after {} iterations", t,
                                      sol.iterations));
    if (sol.status == conic::SolveStatus::MaxIterations)
    {
        std::fprintf(stderr, "olp: solver hit the iteration limit at t = %.6e; treating as infeasible\n", t);
        return probe;
    }

    const double threshold = -settings.feas_margin_rel * mp.margin_scale;
    if (probe.margin < threshold)
        return probe;

    VectorXd w = clamp_to_budgets(vp, mp.weights(sol.x));
    const ChannelState ch = as_channel(vp);
    const Evaluation ev = evaluate(ch, unstack_precoder(w, vp.leds, vp.ues));
    if (ev.min_sinr < t * (1.0 - kWitnessSlack))
    {
        std::fprintf(stderr, "olp: margin %.3e at t = %.6e but witness reaches only %.9e; treating as infeasible\n",
                     probe.margin, t, ev.min_sinr);
        return probe;
    }
    probe.feasible = true;
    probe.w = std::move(w);
    return probe;
}

Bracket bracket(const VectorizedProblem &vp, const FeasibilitySettings &settings, double alpha, double t_lower,
                std::optional<VectorXd> lower_witness)
{
    if (!(alpha > 1.0))
        throw std::invalid_argument(fmt::format("bracket: alpha must exceed 1, got {}", alpha));
    if (!(t_lower > 0.0))
        throw std::invalid_argument("bracket: starting target must be positive");

    Bracket br;
    bool have_witness = lower_witness.has_value();
    if (have_witness)
        br.witness = std::move(*lower_witness);

    for (int growth = 0; growth < kMaxBracketGrowth; ++growth)
    {
        const double t_upper = alpha * t_lower;
        Probe p = is_feasible(vp, t_upper, settings);
        ++br.probes;
        notify(settings, "bracket", p);
        if (p.feasible)
        {
            t_lower = t_upper;
            br.witness = std::move(p.w);
            have_witness = true;
            continue;
        }
        if (!have_witness)
        {
            Probe q = is_feasible(vp, t_lower, settings);
            ++br.probes;
            notify(settings, "bracket", q);
            if (!q.feasible)
                throw DegenerateChannelError(
                    fmt::format("bracket: the starting SINR target {:.3e} is already infeasible", t_lower));
            br.witness = std::move(q.w);
        }
        br.t1 = t_lower;
        br.t2 = t_upper;
        return br;
    }
    throw BracketError(fmt::format("bracket: still feasible after {} growth steps (t = {:.3e})", kMaxBracketGrowth,
                                   t_lower));
}

int bisection_iterations(double width, double eps)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("bisection: precision must be positive");
    int n = 0;
    while (width > eps)
    {
        width /= 2.0;
        ++n;
    }
    return n;
}

MatrixXd normalize_signs(const MatrixXd &H, MatrixXd W)
{
    for (Index k = 0; k < W.cols(); ++k)
        if (H.row(k).dot(W.col(k)) < 0.0)
            W.col(k) *= -1.0;
    return W;
}

BisectionReport bisect(const VectorizedProblem &vp, double t1, double t2, double eps,
                       const FeasibilitySettings &settings, std::optional<VectorXd> t1_witness)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("bisect: precision must be positive");
    if (!(t1 > 0.0 && t1 < t2))
        throw std::invalid_argument(fmt::format("bisect: need 0 < t1 < t2, got [{}, {}]", t1, t2));

    BisectionReport rep;
    if (t1_witness)
    {
        rep.w_tilde = std::move(*t1_witness);
    }
    else
    {
        Probe p = is_feasible(vp, t1, settings);
        ++rep.solves;
        notify(settings, "bisect", p);
        if (!p.feasible)
            throw std::invalid_argument(fmt::format("bisect: lower end t1 = {:.6e} is not feasible", t1));
        rep.w_tilde = std::move(p.w);
    }

    // The width is halved exactly each step; t2 - t1 tracks it up to rounding.
    double width = t2 - t1;
    while (width > eps)
    {
        rep.history.emplace_back(t1, t2);
        const double t = 0.5 * (t1 + t2);
        Probe p = is_feasible(vp, t, settings);
        ++rep.solves;
        ++rep.iterations;
        notify(settings, "bisect", p);
        if (p.feasible)
        {
            t1 = t;
            rep.w_tilde = std::move(p.w);
        }
        else
        {
            t2 = t;
        }
        width /= 2.0;
    }
    rep.history.emplace_back(t1, t2);
    rep.t1 = t1;
    rep.t2 = t2;

    const ChannelState ch = as_channel(vp);
    rep.W = normalize_signs(ch.H, unstack_precoder(rep.w_tilde, vp.leds, vp.ues));
    rep.sinr = evaluate(ch, rep.W).sinr;
    return rep;
}

OlpResult solve_olp(const ChannelState &ch, const OlpOptions &options)
{
    if (!(options.epsilon_rel > 0.0))
        throw std::invalid_argument("solve_olp: epsilon_rel must be positive");
    const VectorizedProblem vp = vectorize(ch);

    OlpResult res;
    res.t_start = kBracketStart;
    std::optional<VectorXd> start_witness;
    if (!options.fidelity)
    {
        try
        {
            const ZfDesign zf = zf_precoder(ch);
            const double warm = 0.99 * zf_min_sinr(zf);
            if (warm > res.t_start)
            {
                res.t_start = warm;
                res.warm_started = true;
                start_witness = stack_precoder(zf.W);
            }
        }
        catch (const IllConditionedError &)
        {
            // No zero-forcing bound; fall back to the blind start.
        }
    }

    res.bracket = bracket(vp, options.feasibility, options.alpha, res.t_start, start_witness);
    res.epsilon = options.epsilon_rel * res.bracket.t1;
    res.report = bisect(vp, res.bracket.t1, res.bracket.t2, res.epsilon, options.feasibility, res.bracket.witness);
    res.total_solves = res.bracket.probes + res.report.solves;
    return res;
}

} // namespace vlc
