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

// Batch front end: `sweep` runs ZF/OLP over a power grid and writes CSV,
// `check` validates a scenario and prints its channel and noise budget.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
// VLC_SOLVER_VERBOSE=1|2 makes the conic solver log to stderr.

#include "vlc/channel.hpp"
#include "vlc/errors.hpp"
#include "vlc/scenario.hpp"
#include "vlc/sweep.hpp"
#include "vlc/zf.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int solver_verbosity()
{
    const char *env = std::getenv("VLC_SOLVER_VERBOSE");
    if (!env)
        return 0;
    try
    {
        return std::stoi(env);
    }
    catch (const std::exception &)
    {
        return 0;
    }
}

void note_assumed_layout(const vlc::Scenario &sc)
{
    if (!sc.layout_preset.empty())
        std::cerr << "layout: " << sc.layout_preset << " (ASSUMED transmitter coordinates)\n";
}

bool write_file(const std::string &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        return false;
    out << content;
    return static_cast<bool>(out);
}

int run_check(const std::string &path)
{
    const vlc::Scenario sc = vlc::load_scenario_file(path);
    note_assumed_layout(sc);
    const vlc::ChannelState ch = vlc::build_channel(sc);

    std::cout << fmt::format("scenario: {} LEDs, {} UEs, room {} x {} x {} m\n", sc.num_transmitters(),
                             sc.num_receivers(), sc.room.x, sc.room.y, sc.room.z);
    if (!sc.layout_preset.empty())
        std::cout << "layout: " << sc.layout_preset << " (ASSUMED)\n";
    std::cout << fmt::format("collection area: {:.6e} m^2\n", vlc::collection_area(sc.params));
    vlc::write_channel_csv(std::cout, ch);
    try
    {
        const vlc::ZfDesign zf = vlc::zf_precoder(ch);
        std::cout << fmt::format("zf: mu = {:.9e}, min SINR = {:.9e}, binding LED {}\n", zf.mu, vlc::zf_min_sinr(zf),
                                 zf.binding_row + 1);
    }
    catch (const vlc::IllConditionedError &e)
    {
        std::cout << "zf: unavailable (" << e.what() << ")\n";
    }
    return 0;
}

struct SweepArgs
{
    std::string scenario;
    std::string precoder = "both";
    double p_start = 15.0;
    double p_end = 30.0;
    double p_step = 1.0;
    double epsilon = 1e-3;
    double alpha = 2.0;
    bool fidelity = false;
    std::string trace;
    std::string out;
    bool timing = false;
    unsigned threads = 0;
    double p_max_offset = 20.0;
    std::optional<double> p_max;
    std::size_t random_ues = 0;
    std::uint64_t seed = 1;
    double ue_height = 2.15;
};

int run_sweep_cmd(const SweepArgs &args)
{
    vlc::Scenario sc = vlc::load_scenario_file(args.scenario);
    note_assumed_layout(sc);
    if (args.random_ues > 0)
    {
        sc = vlc::with_random_receivers(sc, args.random_ues, args.seed, args.ue_height);
        std::cerr << fmt::format("random UEs: count {}, seed {}, height {} m\n", args.random_ues, args.seed,
                                 args.ue_height);
    }

    vlc::SweepSpec spec;
    spec.p_start_dbm = args.p_start;
    spec.p_end_dbm = args.p_end;
    spec.p_step_db = args.p_step;
    spec.precoders.clear();
    if (args.precoder == "zf" || args.precoder == "both")
        spec.precoders.push_back(vlc::PrecoderKind::Zf);
    if (args.precoder == "olp" || args.precoder == "both")
        spec.precoders.push_back(vlc::PrecoderKind::Olp);
    spec.epsilon_rel = args.epsilon;
    spec.alpha = args.alpha;
    spec.fidelity = args.fidelity;
    spec.timing = args.timing;
    spec.threads = args.threads;
    spec.p_max_offset_db = args.p_max_offset;
    spec.p_max_dbm = args.p_max;
    spec.solver.verbosity = solver_verbosity();
    spec.validate();

    const vlc::SweepResult res = vlc::run_sweep(sc, spec);
    for (const auto &w : res.warnings)
        std::cerr << "warning: " << w << '\n';
    if (args.timing)
        for (const auto &row : res.rows)
            std::cerr << fmt::format("timing: p = {:g} dBm {} {:.3f} ms\n", row.p_dbm, vlc::to_string(row.precoder),
                                     row.wall_ms);

    if (!write_file(args.out, vlc::format_csv(res, args.timing)))
    {
        std::cerr << "error: cannot write " << args.out << '\n';
        return kExitRuntime;
    }
    if (!args.trace.empty() && !write_file(args.trace, res.trace))
    {
        std::cerr << "error: cannot write " << args.trace << '\n';
        return kExitRuntime;
    }
    return res.exit_code;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Linear precoder design for multi-LED visible-light downlinks"};
    app.require_subcommand(1);

    std::string check_path;
    auto *check = app.add_subcommand("check", "Validate a scenario and print its channel and noise budget");
    check->add_option("--scenario", check_path, "Scenario JSON file")->required();

    SweepArgs sa;
    auto *sweep = app.add_subcommand("sweep", "Sweep the LED power and run ZF and/or OLP at every point");
    sweep->add_option("--scenario", sa.scenario, "Scenario JSON file")->required();
    sweep->add_option("--precoder", sa.precoder, "zf, olp or both")
        ->check(CLI::IsMember({"zf", "olp", "both"}))
        ->required();
    sweep->add_option("--p-start", sa.p_start, "First power level (dBm)")->required();
    sweep->add_option("--p-end", sa.p_end, "Last power level (dBm)")->required();
    sweep->add_option("--p-step", sa.p_step, "Power step (dB)")->required();
    sweep->add_option("--epsilon", sa.epsilon, "Bisection precision relative to the bracket's lower end");
    sweep->add_option("--alpha", sa.alpha, "Bracket growth factor (> 1)");
    sweep->add_flag("--fidelity-algorithms", sa.fidelity, "Blind bracketing from 1e-5 (no ZF warm start)");
    sweep->add_option("--trace", sa.trace, "Write the tab-separated probe trace here");
    sweep->add_option("--out", sa.out, "Output CSV")->required();
    sweep->add_flag("--timing", sa.timing, "Fill the wall_ms column (output no longer reproducible)");
    sweep->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");
    sweep->add_option("--p-max-offset", sa.p_max_offset, "p_max = p + offset (dB)");
    sweep->add_option("--p-max-dbm", sa.p_max, "Fixed p_max for every point (dBm)");
    sweep->add_option("--random-ues", sa.random_ues, "Replace receivers with this many random UEs");
    sweep->add_option("--seed", sa.seed, "Seed for --random-ues");
    sweep->add_option("--ue-height", sa.ue_height, "Receiver height for --random-ues (m)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try
    {
        if (*check)
            return run_check(check_path);
        return run_sweep_cmd(sa);
    }
    catch (const vlc::DegenerateUeError &e)
    {
        std::cerr << "error: degenerate UE " << (e.ue() + 1) << ": " << e.what() << '\n';
        return kExitRuntime;
    }
    catch (const vlc::ScenarioError &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
