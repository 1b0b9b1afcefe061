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

#ifndef VLC_SWEEP_HPP
#define VLC_SWEEP_HPP

#include "vlc/conic.hpp"
#include "vlc/scenario.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vlc
{

enum class PrecoderKind
{
    Zf,
    Olp,
};

std::string to_string(PrecoderKind kind);

/// Power sweep over a common DC offset p applied to every LED.
struct SweepSpec
{
    double p_start_dbm = 15.0;
    double p_end_dbm = 30.0;
    double p_step_db = 1.0;
    std::vector<PrecoderKind> precoders{PrecoderKind::Zf, PrecoderKind::Olp};
    double epsilon_rel = 1e-3;
    double alpha = 2.0;
    bool fidelity = false;
    conic::SolverSettings solver;
    /// p_max = p + offset unless a fixed p_max is given.
    double p_max_offset_db = 20.0;
    std::optional<double> p_max_dbm;
    /// Fill the wall_ms column; off by default so output is reproducible.
    bool timing = false;
    unsigned threads = 0; // 0: hardware concurrency

    /// Throws std::invalid_argument (usage error).
    void validate() const;
    std::vector<double> grid() const;
};

struct SweepRow
{
    double p_dbm = 0.0;
    PrecoderKind precoder = PrecoderKind::Zf;
    bool ok = false;
    std::string error;
    double min_sinr = 0.0;
    double rate_per_ue = 0.0;
    Eigen::VectorXd sinr;
    int probes = 0;
    int iterations = 0;
    double wall_ms = 0.0;
    bool audit_pass = false;
};

struct SweepResult
{
    std::vector<SweepRow> rows; // p ascending, precoders in spec order
    std::string trace;          // tab-separated probe log
    std::vector<std::string> warnings;
    Eigen::Index ues = 0;
    int exit_code = 0;
};

/// Copy of the scenario with every LED at p (and p_max) dBm.
Scenario with_power(const Scenario &scenario, double p_dbm, double p_max_dbm);

/// Replaces the receivers with `count` uniform draws in the room footprint at
/// `height`; draws that no LED reaches are repeated. Deterministic in `seed`.
Scenario with_random_receivers(const Scenario &scenario, std::size_t count, std::uint64_t seed, double height);

/// Runs the sweep. A degenerate UE aborts with DegenerateUeError; any other
/// per-point failure marks that row and sets exit_code = 1.
SweepResult run_sweep(const Scenario &scenario, const SweepSpec &spec);

/// Header `p_dbm,precoder,min_sinr,rate_per_ue_bps,sinr_1..sinr_K,probes,iters,wall_ms`.
std::string format_csv(const SweepResult &result, bool timing);

inline constexpr const char *kTraceHeader = "p_dbm\tprecoder\tstage\tt\tlambda\tsolver_iters\tresult";

} // namespace vlc

#endif
