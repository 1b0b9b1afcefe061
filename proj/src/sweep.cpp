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

#include "vlc/sweep.hpp"

#include "vlc/channel.hpp"
#include "vlc/errors.hpp"
#include "vlc/metrics.hpp"
#include "vlc/olp.hpp"
#include "vlc/zf.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace vlc
{

namespace
{

struct PointResult
{
    std::vector<SweepRow> rows;
    std::string trace;
};

SweepRow run_zf(const ChannelState &ch, double p_dbm)
{
    SweepRow row;
    row.p_dbm = p_dbm;
    row.precoder = PrecoderKind::Zf;
    const auto start = std::chrono::steady_clock::now();
    try
    {
        const ZfDesign zf = zf_precoder(ch);
        const Evaluation ev = evaluate(ch, zf.W);
        row.ok = true;
        row.min_sinr = ev.min_sinr;
        row.rate_per_ue = ev.rate_per_ue;
        row.sinr = ev.sinr;
        row.audit_pass = audit(ch, zf.W).pass;
    }
    catch (const std::exception &e)
    {
        row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

SweepRow run_olp(const ChannelState &ch, double p_dbm, const SweepSpec &spec, std::string &trace)
{
    SweepRow row;
    row.p_dbm = p_dbm;
    row.precoder = PrecoderKind::Olp;

    OlpOptions opts;
    opts.alpha = spec.alpha;
    opts.epsilon_rel = spec.epsilon_rel;
    opts.fidelity = spec.fidelity;
    opts.feasibility.solver = spec.solver;
    opts.feasibility.observer = [&](std::string_view stage, const Probe &p) {
        trace += fmt::format("{:g}\tolp\t{}\t{:.9e}\t{:.9e}\t{}\t{}\n", p_dbm, stage, p.t, p.margin,
                             p.solver_iterations, p.feasible ? "feasible" : "infeasible");
    };

    const auto start = std::chrono::steady_clock::now();
    try
    {
        const OlpResult res = solve_olp(ch, opts);
        const Evaluation ev = evaluate(ch, res.W());
        row.ok = true;
        row.min_sinr = ev.min_sinr;
        row.rate_per_ue = ev.rate_per_ue;
        row.sinr = ev.sinr;
        row.probes = res.total_solves;
        row.iterations = res.report.iterations;
        row.audit_pass = audit(ch, res.W()).pass;
    }
    catch (const std::exception &e)
    {
        row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

double p_max_for(const SweepSpec &spec, double p_dbm)
{
    return spec.p_max_dbm ? *spec.p_max_dbm : p_dbm + spec.p_max_offset_db;
}

} // namespace

std::string to_string(PrecoderKind kind)
{
    return kind == PrecoderKind::Zf ? "zf" : "olp";
}

void SweepSpec::validate() const
{
    if (!std::isfinite(p_start_dbm) || !std::isfinite(p_end_dbm) || !(p_start_dbm <= p_end_dbm))
        throw std::invalid_argument(fmt::format("sweep: need p_start <= p_end, got {} > {}", p_start_dbm, p_end_dbm));
    if (!(p_step_db > 0.0))
        throw std::invalid_argument(fmt::format("sweep: p_step must be positive, got {}", p_step_db));
    if (precoders.empty())
        throw std::invalid_argument("sweep: no precoder requested");
    if (!(alpha > 1.0))
        throw std::invalid_argument(fmt::format("sweep: alpha must exceed 1, got {}", alpha));
    if (!(epsilon_rel > 0.0))
        throw std::invalid_argument(fmt::format("sweep: epsilon must be positive, got {}", epsilon_rel));
    solver.validate();
}

std::vector<double> SweepSpec::grid() const
{
    std::vector<double> out;
    for (int i = 0;; ++i)
    {
        const double p = p_start_dbm + i * p_step_db;
        if (p > p_end_dbm + 1e-9 * std::max(1.0, std::abs(p_end_dbm)))
            break;
        out.push_back(p);
    }
    return out;
}

Scenario with_power(const Scenario &scenario, double p_dbm, double p_max_dbm)
{
    Scenario out = scenario;
    for (auto &tx : out.transmitters)
    {
        tx.avg_power_dbm = p_dbm;
        tx.max_power_dbm = p_max_dbm;
    }
    out.validate();
    return out;
}

Scenario with_random_receivers(const Scenario &scenario, std::size_t count, std::uint64_t seed, double height)
{
    if (count == 0)
        throw ScenarioError("random receivers: count must be positive");
    Scenario out = scenario;
    out.receivers.clear();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, scenario.room.x);
    std::uniform_real_distribution<double> uy(0.0, scenario.room.y);
    constexpr int kMaxDraws = 10000;
    for (std::size_t k = 0; k < count; ++k)
    {
        int draws = 0;
        for (;; ++draws)
        {
            if (draws >= kMaxDraws)
                throw ScenarioError("random receivers: no position reachable by any LED at this height");
            const Receiver rx{{ux(rng), uy(rng), height}};
            bool seen = false;
            for (const auto &tx : scenario.transmitters)
                if (channel_gain(tx, rx, scenario.params) > 0.0)
                    seen = true;
            if (seen)
            {
                out.receivers.push_back(rx);
                break;
            }
        }
    }
    out.validate();
    return out;
}

SweepResult run_sweep(const Scenario &scenario, const SweepSpec &spec)
{
    spec.validate();
    const std::vector<double> grid = spec.grid();

    // Geometry alone decides degeneracy; surface it before any work.
    (void)build_channel(with_power(scenario, grid.front(), p_max_for(spec, grid.front())));

    std::vector<PointResult> points(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < grid.size(); i = next++)
        {
            const double p = grid[i];
            PointResult &pr = points[i];
            ChannelState ch;
            try
            {
                ch = build_channel(with_power(scenario, p, p_max_for(spec, p)));
            }
            catch (const std::exception &e)
            {
                for (auto kind : spec.precoders)
                {
                    SweepRow row;
                    row.p_dbm = p;
                    row.precoder = kind;
                    row.error = e.what();
                    pr.rows.push_back(row);
                }
                continue;
            }
            for (auto kind : spec.precoders)
                pr.rows.push_back(kind == PrecoderKind::Zf ? run_zf(ch, p) : run_olp(ch, p, spec, pr.trace));
        }
    };

    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
    if (threads <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }

    SweepResult result;
    result.ues = static_cast<Eigen::Index>(scenario.num_receivers());
    result.trace = std::string(kTraceHeader) + "\n";
    for (auto &pr : points)
    {
        result.trace += pr.trace;
        for (auto &row : pr.rows)
        {
            if (!row.ok)
            {
                result.exit_code = 1;
                result.warnings.push_back(
                    fmt::format("p = {:g} dBm, {}: {}", row.p_dbm, to_string(row.precoder), row.error));
            }
            else if (!row.audit_pass)
            {
                result.exit_code = 1;
                result.warnings.push_back(
                    fmt::format("p = {:g} dBm, {}: precoder exceeds an LED budget", row.p_dbm, to_string(row.precoder)));
            }
            result.rows.push_back(std::move(row));
        }
    }

    for (auto kind : spec.precoders)
    {
        double last = -1.0;
        for (const auto &row : result.rows)
        {
            if (row.precoder != kind || !row.ok)
                continue;
            if (row.rate_per_ue < last)
                result.warnings.push_back(fmt::format("{}: rate per UE decreases at p = {:g} dBm", to_string(kind),
                                                      row.p_dbm));
            last = row.rate_per_ue;
        }
    }
    return result;
}

std::string format_csv(const SweepResult &result, bool timing)
{
    std::string out = "p_dbm,precoder,min_sinr,rate_per_ue_bps";
    for (Eigen::Index k = 0; k < result.ues; ++k)
        out += fmt::format(",sinr_{}", k + 1);
    out += ",probes,iters,wall_ms\n";

    for (const auto &row : result.rows)
    {
        out += fmt::format("{:g},{}", row.p_dbm, to_string(row.precoder));
        if (row.ok)
        {
            out += fmt::format(",{:.9e},{:.9e}", row.min_sinr, row.rate_per_ue);
            for (Eigen::Index k = 0; k < result.ues; ++k)
                out += k < row.sinr.size() ? fmt::format(",{:.9e}", row.sinr(k)) : std::string(",");
            out += fmt::format(",{},{}", row.probes, row.iterations);
        }
        else
        {
            out += ",,";
            for (Eigen::Index k = 0; k < result.ues; ++k)
                out += ',';
            out += ",,";
        }
        out += timing ? fmt::format(",{:.3f}\n", row.wall_ms) : std::string(",\n");
    }
    return out;
}

} // namespace vlc
