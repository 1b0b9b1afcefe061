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

/**
 * @file olp.hpp
 * @brief Max-min SINR linear precoder by bisection over SOC feasibility.
 *
 * The precoder is stacked as w = vec(W^T), so the K weights of LED n are
 * contiguous. For a fixed SINR target t every UE constraint is a
 * second-order cone
 *
 *     || B_k w + sigma_k ||_2 <= h~_k^T w / sqrt(t)
 *
 * and the per-LED L1 budgets become the linear system -a <= w <= a, U a <= p~.
 * Feasibility at t is decided by maximizing a common margin lambda on the
 * cone constraints: the margin program is always strictly feasible, and t
 * is feasible iff the optimal margin is (numerically) nonnegative.
 */

#ifndef VLC_OLP_HPP
#define VLC_OLP_HPP

#include "vlc/channel.hpp"
#include "vlc/conic.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace vlc
{

inline constexpr double kBracketStart = 1e-5;
inline constexpr int kMaxBracketGrowth = 200;

struct VectorizedProblem
{
    Eigen::Index leds = 0;
    Eigen::Index ues = 0;
    /// h~_k^T = h_k^T (I_M ⊗ e_k^T), one row per UE (K × MK).
    Eigen::MatrixXd selectors;
    /// B_k = [h_k^T ⊗ I_K^k ; 0], (K+1) × MK each.
    std::vector<Eigen::MatrixXd> interference;
    /// sigma_k embedded as the last entry of a length K+1 vector.
    std::vector<Eigen::VectorXd> noise;
    /// U = I_M ⊗ 1_K^T.
    Eigen::MatrixXd budget_map;
    Eigen::VectorXd budgets;
    Eigen::VectorXd sigma;
};

VectorizedProblem vectorize(const ChannelState &ch);

/// vec(W^T) for an M × K precoder.
Eigen::VectorXd stack_precoder(const Eigen::MatrixXd &W);
/// Inverse of stack_precoder.
Eigen::MatrixXd unstack_precoder(const Eigen::VectorXd &w, Eigen::Index leds, Eigen::Index ues);
/// w_k = (I_M ⊗ e_k^T) w.
Eigen::VectorXd precoder_column(const Eigen::VectorXd &w, Eigen::Index leds, Eigen::Index ues, Eigen::Index k);

/**
 * Margin program at SINR target t, in normalized units.
 *
 * Variables x = (w', a', lambda') with w = weight_scale * w',
 * a = weight_scale * a' and lambda = margin_scale * lambda', where
 * weight_scale = max p~ and margin_scale = max sigma. Rows: 2MK box rows and
 * M budget rows (one orthant block), then K second-order cones of dim K+2
 * with radius h~_k^T w / sqrt(t) - lambda and norm part B_k w + sigma_k.
 */
struct MarginProgram
{
    conic::ConicProgram program;
    double t = 0.0;
    double weight_scale = 1.0;
    double margin_scale = 1.0;
    Eigen::Index leds = 0;
    Eigen::Index ues = 0;

    /// Solver point for physical (w, a, lambda).
    Eigen::VectorXd pack(const Eigen::VectorXd &w, const Eigen::VectorXd &a, double lambda) const;
    Eigen::VectorXd weights(const Eigen::VectorXd &x) const;
    double margin(const Eigen::VectorXd &x) const;
};

MarginProgram margin_program(const VectorizedProblem &vp, double t);

struct Probe
{
    double t = 0.0;
    bool feasible = false;
    double margin = 0.0; // optimal lambda, physical units
    int solver_iterations = 0;
    conic::SolveStatus status = conic::SolveStatus::NumericalFailure;
    Eigen::VectorXd w;   // witness vec(W^T), budget-clamped; empty if infeasible
};

/// Called once per feasibility solve with the stage ("bracket" or "bisect").
using ProbeObserver = std::function<void(std::string_view stage, const Probe &)>;

struct FeasibilitySettings
{
    conic::SolverSettings solver;
    /// feasible iff lambda* >= -feas_margin_rel * max_k sigma_k
    double feas_margin_rel = 1e-9;
    ProbeObserver observer;
};

/**
 * Solves the margin program at t. A MaxIterations outcome counts as
 * infeasible; NumericalFailure throws SolverError. A feasible witness is
 * scaled into the budgets and must reach min SINR >= t (1 - 1e-6).
 */
Probe is_feasible(const VectorizedProblem &vp, double t, const FeasibilitySettings &settings);

struct Bracket
{
    double t1 = 0.0; // feasible
    double t2 = 0.0; // infeasible, alpha * t1
    int probes = 0;
    Eigen::VectorXd witness; // feasible point at t1
};

/**
 * Geometric bracketing: t_upper = alpha * t_lower, promoted while feasible,
 * stopping at the first infeasible probe. t_lower is only solved when the
 * very first probe fails (it is then the last feasible candidate); a
 * caller-supplied witness for t_lower skips that solve.
 *
 * Throws DegenerateChannelError if t_lower is infeasible and BracketError
 * after kMaxBracketGrowth promotions.
 */
Bracket bracket(const VectorizedProblem &vp, const FeasibilitySettings &settings, double alpha,
                double t_lower = kBracketStart, std::optional<Eigen::VectorXd> lower_witness = std::nullopt);

/// Number of halvings of `width` needed to get it <= eps, i.e.
/// ceil(log2(width / eps)) computed with exact power-of-two arithmetic.
int bisection_iterations(double width, double eps);

struct BisectionReport
{
    std::vector<std::pair<double, double>> history; // (t1, t2) before each step and at exit
    int iterations = 0;
    double t1 = 0.0;
    double t2 = 0.0;
    Eigen::VectorXd w_tilde; // last feasible witness
    Eigen::MatrixXd W;       // M × K, columns sign-normalized
    Eigen::VectorXd sinr;
    int solves = 0;
};

/// Interval halving on [t1, t2] until t2 - t1 <= eps. Without a witness for
/// t1 one extra solve at t1 provides it.
BisectionReport bisect(const VectorizedProblem &vp, double t1, double t2, double eps,
                       const FeasibilitySettings &settings,
                       std::optional<Eigen::VectorXd> t1_witness = std::nullopt);

/// Flips columns so that h_k^T w_k >= 0.
Eigen::MatrixXd normalize_signs(const Eigen::MatrixXd &H, Eigen::MatrixXd W);

struct OlpOptions
{
    double alpha = 2.0;
    /// eps = epsilon_rel * t1 after bracketing.
    double epsilon_rel = 1e-3;
    /// Blind bracketing from 1e-5 instead of the zero-forcing warm start.
    bool fidelity = false;
    FeasibilitySettings feasibility;
};

struct OlpResult
{
    BisectionReport report;
    Bracket bracket;
    double epsilon = 0.0;
    double t_start = 0.0;
    bool warm_started = false;
    int total_solves = 0;

    const Eigen::MatrixXd &W() const { return report.W; }
    double min_sinr() const { return report.sinr.minCoeff(); }
};

/// Full pipeline: degenerate-UE check, vectorize, bracket, bisect.
OlpResult solve_olp(const ChannelState &ch, const OlpOptions &options = {});

} // namespace vlc

#endif
