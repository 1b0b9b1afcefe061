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
 * @file conic.hpp
 * @brief Dense primal-dual interior-point solver for small LP/SOCP problems.
 *
 * Problems are posed in the standard inequality form
 *
 *     minimize    c^T x
 *     subject to  b - A x  in  K = K_1 x ... x K_p
 *
 * where each K_i is a nonnegative orthant or a second-order cone
 * { (u0, u1) : ||u1||_2 <= u0 }. The solver is an infeasible-start
 * path-following method with Nesterov-Todd scaling and a Mehrotra
 * predictor-corrector step. It has no homogeneous self-dual embedding and
 * therefore no infeasibility certificates: callers must hand it problems that
 * are feasible and bounded (e.g. margin maximizations). Equality constraints
 * are not supported; eliminate them before calling.
 */

#ifndef VLC_CONIC_HPP
#define VLC_CONIC_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace vlc::conic
{

enum class ConeKind
{
    Nonnegative,
    SecondOrder,
};

struct ConeBlock
{
    ConeKind kind = ConeKind::Nonnegative;
    Eigen::Index dim = 0;

    static ConeBlock orthant(Eigen::Index dim) { return {ConeKind::Nonnegative, dim}; }
    static ConeBlock soc(Eigen::Index dim) { return {ConeKind::SecondOrder, dim}; }
};

struct ConicProgram
{
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    std::vector<ConeBlock> cones;

    Eigen::Index num_vars() const { return A.cols(); }
    Eigen::Index num_rows() const { return A.rows(); }

    /// Block dims must sum to the row count, SOC blocks need dim >= 2 and
    /// A must have full column rank. Throws std::invalid_argument.
    void validate() const;
};

enum class SolveStatus
{
    Optimal,
    MaxIterations,
    NumericalFailure,
};

std::string to_string(SolveStatus status);

struct SolverSettings
{
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    int max_iterations = 200;
    double step_fraction = 0.99;
    /// 0 silent, 1 summary line, 2 per-iteration log (stderr).
    int verbosity = 0;

    void validate() const;
};

struct ConicSolution
{
    SolveStatus status = SolveStatus::NumericalFailure;
    Eigen::VectorXd x;
    Eigen::VectorXd s; // slack b - A x as tracked by the iteration
    Eigen::VectorXd z; // dual multipliers
    double objective = 0.0;
    double primal_residual = 0.0; // worst cone violation of b - A x
    double dual_residual = 0.0;   // ||A^T z + c||_2
    double gap = 0.0;
    int iterations = 0;
};

struct Residuals
{
    double primal = 0.0;                 // max over blocks
    std::vector<double> block_violation; // 0 for interior points
};

/// Cone violation of the slack b - A x, block by block. Orthant blocks report
/// max(0, -min_i s_i); SOC blocks report max(0, ||s1||_2 - s0).
Residuals residuals(const ConicProgram &prog, const Eigen::VectorXd &x);

/// Same measure applied to an explicit slack vector.
Residuals cone_violation(const std::vector<ConeBlock> &cones, const Eigen::VectorXd &slack);

ConicSolution solve(const ConicProgram &prog, const SolverSettings &settings = {});

/**
 * Plain-text dump for cross-checking with external solvers.
 *
 *     conic-program <N> <R>
 *     cones <count> then one "L <dim>" or "Q <dim>" per block
 *     c <N values>
 *     b <R values>
 *     A followed by R lines of N values
 */
void write_program(std::ostream &out, const ConicProgram &prog);
ConicProgram read_program(std::istream &in);

} // namespace vlc::conic

#endif
