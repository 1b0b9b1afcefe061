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

#include "vlc/conic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace vlc::conic;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace
{

ConicProgram unit_interval()
{
    ConicProgram p;
    p.c = VectorXd::Constant(1, -1.0);
    p.A.resize(2, 1);
    p.A << -1.0, 1.0;
    p.b.resize(2);
    p.b << 0.0, 1.0;
    p.cones = {ConeBlock::orthant(2)};
    return p;
}

/// minimize c^T x over the unit ball, written as (1, x) in Q^{n+1}.
ConicProgram unit_ball(const VectorXd &c)
{
    const auto n = c.size();
    ConicProgram p;
    p.c = c;
    p.A = MatrixXd::Zero(n + 1, n);
    p.A.bottomRows(n) = -MatrixXd::Identity(n, n);
    p.b = VectorXd::Zero(n + 1);
    p.b(0) = 1.0;
    p.cones = {ConeBlock::soc(n + 1)};
    return p;
}

/// Box |x_i| <= 2 plus a ball of radius r around x0 and random objective.
ConicProgram mixed_program(std::mt19937_64 &rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    ConicProgram p;
    p.c = VectorXd::NullaryExpr(n, [&]() { return g(rng); });
    const VectorXd x0 = 0.3 * VectorXd::NullaryExpr(n, [&]() { return g(rng); });
    p.A = MatrixXd::Zero(2 * n + n + 1, n);
    p.b = VectorXd::Zero(2 * n + n + 1);
    p.A.topRows(n) = MatrixXd::Identity(n, n);
    p.A.middleRows(n, n) = -MatrixXd::Identity(n, n);
    p.b.head(2 * n).setConstant(2.0);
    p.b(2 * n) = 1.5;
    p.A.bottomRows(n) = -MatrixXd::Identity(n, n);
    p.b.tail(n) = -x0;
    p.cones = {ConeBlock::orthant(2 * n), ConeBlock::soc(n + 1)};
    return p;
}

} // namespace

TEST_CASE("one-variable LP")
{
    const ConicSolution sol = solve(unit_interval());
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::abs(sol.x(0) - 1.0) <= 1e-8);
    CHECK(std::abs(sol.objective + 1.0) <= 1e-8);
}

TEST_CASE("linear objective over the unit ball")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial)
    {
        const Eigen::Index n = 2 + trial % 4;
        const VectorXd c = VectorXd::NullaryExpr(n, [&]() { return g(rng); });
        const ConicSolution sol = solve(unit_ball(c));
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK((sol.x + c / c.norm()).cwiseAbs().maxCoeff() <= 1e-7);
        CHECK(std::abs(sol.objective + c.norm()) <= 1e-7);
    }
}

TEST_CASE("cone violation measure")
{
    const std::vector<ConeBlock> soc{ConeBlock::soc(3)};
    CHECK(cone_violation(soc, (VectorXd(3) << 1.0, 2.0, 0.0).finished()).primal == doctest::Approx(1.0));
    CHECK(cone_violation(soc, (VectorXd(3) << 2.0, 1.0, 0.5).finished()).primal == 0.0);

    const std::vector<ConeBlock> lin{ConeBlock::orthant(2), ConeBlock::soc(2)};
    const Residuals r = cone_violation(lin, (VectorXd(4) << 1.0, -0.25, 1.0, 3.0).finished());
    REQUIRE(r.block_violation.size() == 2);
    CHECK(r.block_violation[0] == doctest::Approx(0.25));
    CHECK(r.block_violation[1] == doctest::Approx(2.0));
    CHECK(r.primal == doctest::Approx(2.0));

    const ConicProgram p = unit_interval();
    CHECK(residuals(p, VectorXd::Constant(1, 0.5)).primal == 0.0);
    CHECK(residuals(p, VectorXd::Constant(1, 1.5)).primal == doctest::Approx(0.5));
}

TEST_CASE("optimal solutions have small residuals")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 25; ++trial)
    {
        const ConicProgram p = mixed_program(rng, 2 + trial % 5);
        const ConicSolution sol = solve(p);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(residuals(p, sol.x).primal <= 1e-8);
        CHECK(sol.dual_residual <= 1e-8 * std::max(1.0, p.c.norm()));
        CHECK(cone_violation(p.cones, sol.z).primal <= 1e-8);
        CHECK(std::abs(sol.objective - p.c.dot(sol.x)) <= 1e-12 * std::max(1.0, std::abs(sol.objective)));
    }
}

TEST_CASE("duplicated and rescaled rows leave the optimum unchanged")
{
    std::mt19937_64 rng(9);
    const ConicProgram p = mixed_program(rng, 4);
    const ConicSolution base = solve(p);
    REQUIRE(base.status == SolveStatus::Optimal);

    ConicProgram dup = p;
    const Eigen::Index n = p.num_vars();
    dup.A = MatrixXd(p.A.rows() + 1, n);
    dup.A << p.A.topRows(2 * n), p.A.row(0), p.A.bottomRows(n + 1);
    dup.b = VectorXd(p.b.size() + 1);
    dup.b << p.b.head(2 * n), p.b(0), p.b.tail(n + 1);
    dup.cones = {ConeBlock::orthant(2 * n + 1), ConeBlock::soc(n + 1)};
    const ConicSolution d = solve(dup);
    REQUIRE(d.status == SolveStatus::Optimal);
    CHECK(std::abs(d.objective - base.objective) <= 1e-7);

    ConicProgram scaled = p;
    scaled.A.topRows(2 * n) *= 7.0;
    scaled.b.head(2 * n) *= 7.0;
    scaled.A.bottomRows(n + 1) *= 0.25;
    scaled.b.tail(n + 1) *= 0.25;
    const ConicSolution s = solve(scaled);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(std::abs(s.objective - base.objective) <= 1e-7);
    // The minimizer may sit on a vertex; x is only accurate to ~sqrt(gap).
    CHECK((s.x - base.x).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("solves are deterministic")
{
    std::mt19937_64 rng(10);
    const ConicProgram p = mixed_program(rng, 5);
    const ConicSolution a = solve(p);
    const ConicSolution b = solve(p);
    CHECK(a.iterations == b.iterations);
    CHECK(a.x == b.x);
    CHECK(a.z == b.z);
}

TEST_CASE("iteration cap is reported")
{
    SolverSettings s;
    s.max_iterations = 1;
    std::mt19937_64 rng(12);
    const ConicSolution sol = solve(mixed_program(rng, 3), s);
    CHECK(sol.status == SolveStatus::MaxIterations);
    CHECK(to_string(sol.status).size() > 0);
}

TEST_CASE("program validation")
{
    ConicProgram p = unit_interval();
    p.cones = {ConeBlock::orthant(3)};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = unit_ball(VectorXd::Ones(2));
    p.cones = {ConeBlock::soc(1), ConeBlock::soc(2)};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    // Rank-deficient A: a free direction.
    ConicProgram r;
    r.c = VectorXd::Ones(2);
    r.A = MatrixXd::Ones(2, 2);
    r.b = VectorXd::Ones(2);
    r.cones = {ConeBlock::orthant(2)};
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);

    SolverSettings bad;
    bad.step_fraction = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("text dump round trip")
{
    std::mt19937_64 rng(13);
    const ConicProgram p = mixed_program(rng, 3);
    std::stringstream buf;
    write_program(buf, p);
    const ConicProgram q = read_program(buf);
    CHECK(q.A == p.A);
    CHECK(q.b == p.b);
    CHECK(q.c == p.c);
    REQUIRE(q.cones.size() == p.cones.size());
    for (std::size_t i = 0; i < q.cones.size(); ++i)
    {
        CHECK(q.cones[i].kind == p.cones[i].kind);
        CHECK(q.cones[i].dim == p.cones[i].dim);
    }

    std::istringstream junk("conic-program 2 2\ncones 1\nX 2\n");
    CHECK_THROWS(read_program(junk));
}
