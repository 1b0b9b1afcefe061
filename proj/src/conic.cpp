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

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace vlc::conic
{

namespace
{

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Block
{
    ConeKind kind;
    Index offset;
    Index dim;
};

std::vector<Block> layout(const std::vector<ConeBlock> &cones)
{
    std::vector<Block> out;
    out.reserve(cones.size());
    Index offset = 0;
    for (const auto &c : cones)
    {
        out.push_back({c.kind, offset, c.dim});
        offset += c.dim;
    }
    return out;
}

double degree(const std::vector<Block> &blocks)
{
    double deg = 0.0;
    for (const auto &b : blocks)
        deg += b.kind == ConeKind::Nonnegative ? static_cast<double>(b.dim) : 1.0;
    return deg;
}

/// Identity element of the product cone.
VectorXd unit(const std::vector<Block> &blocks, Index rows)
{
    VectorXd e = VectorXd::Zero(rows);
    for (const auto &b : blocks)
    {
        if (b.kind == ConeKind::Nonnegative)
            e.segment(b.offset, b.dim).setOnes();
        else
            e(b.offset) = 1.0;
    }
    return e;
}

/// Jordan product u ∘ v.
VectorXd jordan_product(const std::vector<Block> &blocks, const VectorXd &u, const VectorXd &v)
{
    VectorXd out(u.size());
    for (const auto &b : blocks)
    {
        auto ub = u.segment(b.offset, b.dim);
        auto vb = v.segment(b.offset, b.dim);
        if (b.kind == ConeKind::Nonnegative)
        {
            out.segment(b.offset, b.dim) = ub.cwiseProduct(vb);
        }
        else
        {
            out(b.offset) = ub.dot(vb);
            out.segment(b.offset + 1, b.dim - 1) = ub(0) * vb.tail(b.dim - 1) + vb(0) * ub.tail(b.dim - 1);
        }
    }
    return out;
}

/// Solves lambda ∘ x = d for x.
VectorXd jordan_divide(const std::vector<Block> &blocks, const VectorXd &lambda, const VectorXd &d)
{
    VectorXd out(d.size());
    for (const auto &b : blocks)
    {
        auto l = lambda.segment(b.offset, b.dim);
        auto db = d.segment(b.offset, b.dim);
        if (b.kind == ConeKind::Nonnegative)
        {
            out.segment(b.offset, b.dim) = db.cwiseQuotient(l);
        }
        else
        {
            const double l0 = l(0);
            const auto l1 = l.tail(b.dim - 1);
            const double det = l0 * l0 - l1.squaredNorm();
            const double x0 = (l0 * db(0) - l1.dot(db.tail(b.dim - 1))) / det;
            out(b.offset) = x0;
            out.segment(b.offset + 1, b.dim - 1) = (db.tail(b.dim - 1) - x0 * l1) / l0;
        }
    }
    return out;
}

/// Largest alpha with u + alpha * d in the cone (may be +inf). u must be interior.
double max_step(const std::vector<Block> &blocks, const VectorXd &u, const VectorXd &d)
{
    double alpha = kInf;
    for (const auto &b : blocks)
    {
        auto ub = u.segment(b.offset, b.dim);
        auto db = d.segment(b.offset, b.dim);
        if (b.kind == ConeKind::Nonnegative)
        {
            for (Index i = 0; i < b.dim; ++i)
                if (db(i) < 0.0)
                    alpha = std::min(alpha, -ub(i) / db(i));
            continue;
        }
        const double u0 = ub(0);
        const double d0 = db(0);
        const auto u1 = ub.tail(b.dim - 1);
        const auto d1 = db.tail(b.dim - 1);
        // f(a) = (u0 + a d0)^2 - ||u1 + a d1||^2 = qa a^2 + 2 qb a + qc, qc > 0.
        const double qa = d0 * d0 - d1.squaredNorm();
        const double qb = u0 * d0 - u1.dot(d1);
        const double qc = u0 * u0 - u1.squaredNorm();
        if (d0 >= 0.0 && qa >= 0.0)
            continue; // d is in the cone
        double root = kInf;
        const double disc = qb * qb - qa * qc;
        if (std::abs(qa) <= 1e-300 * std::max(1.0, std::abs(qb)))
        {
            if (qb < 0.0)
                root = -qc / (2.0 * qb);
        }
        else if (disc >= 0.0)
        {
            const double sq = std::sqrt(disc);
            const double q = -(qb + std::copysign(sq, qb));
            const double r1 = q / qa;
            const double r2 = q != 0.0 ? qc / q : kInf;
            for (double r : {r1, r2})
                if (r > 0.0)
                    root = std::min(root, r);
        }
        if (d0 < 0.0)
            root = std::min(root, -u0 / d0);
        alpha = std::min(alpha, root);
    }
    return alpha;
}

/// Nesterov-Todd scaling W with W z = W^{-1} s = lambda, stored per block.
struct Scaling
{
    std::vector<Block> blocks;
    VectorXd diag;               // orthant: sqrt(s / z)
    std::vector<double> beta;    // SOC: per block
    std::vector<VectorXd> v;     // SOC: W = beta (2 v v^T - J)

    bool compute(const VectorXd &s, const VectorXd &z)
    {
        diag = VectorXd::Zero(s.size());
        beta.assign(blocks.size(), 0.0);
        v.assign(blocks.size(), VectorXd());
        for (std::size_t i = 0; i < blocks.size(); ++i)
        {
            const auto &b = blocks[i];
            auto sb = s.segment(b.offset, b.dim);
            auto zb = z.segment(b.offset, b.dim);
            if (b.kind == ConeKind::Nonnegative)
            {
                if ((sb.array() <= 0.0).any() || (zb.array() <= 0.0).any())
                    return false;
                diag.segment(b.offset, b.dim) = sb.cwiseQuotient(zb).cwiseSqrt();
                continue;
            }
            const double sres = sb(0) * sb(0) - sb.tail(b.dim - 1).squaredNorm();
            const double zres = zb(0) * zb(0) - zb.tail(b.dim - 1).squaredNorm();
            if (!(sres > 0.0 && zres > 0.0 && sb(0) > 0.0 && zb(0) > 0.0))
                return false;
            const double sn = std::sqrt(sres);
            const double zn = std::sqrt(zres);
            beta[i] = std::sqrt(sn / zn);
            const double c = std::sqrt((sb.dot(zb) / (sn * zn) + 1.0) / 2.0);
            VectorXd w = sb / sn;
            w(0) += zb(0) / zn;
            w.tail(b.dim - 1) -= zb.tail(b.dim - 1) / zn;
            w /= 2.0 * c;
            w(0) += 1.0;
            v[i] = w / std::sqrt(2.0 * w(0));
        }
        return true;
    }

    /// y = W x
    VectorXd apply(const VectorXd &x) const
    {
        VectorXd y(x.size());
        for (std::size_t i = 0; i < blocks.size(); ++i)
        {
            const auto &b = blocks[i];
            auto xb = x.segment(b.offset, b.dim);
            if (b.kind == ConeKind::Nonnegative)
            {
                y.segment(b.offset, b.dim) = diag.segment(b.offset, b.dim).cwiseProduct(xb);
                continue;
            }
            VectorXd jx = xb;
            jx.tail(b.dim - 1) *= -1.0;
            y.segment(b.offset, b.dim) = beta[i] * (2.0 * v[i].dot(xb) * v[i] - jx);
        }
        return y;
    }

    /// y = W^{-1} x, using W^{-1} = (2 J v v^T J - J) / beta.
    VectorXd apply_inverse(const VectorXd &x) const
    {
        VectorXd y(x.size());
        for (std::size_t i = 0; i < blocks.size(); ++i)
        {
            const auto &b = blocks[i];
            auto xb = x.segment(b.offset, b.dim);
            if (b.kind == ConeKind::Nonnegative)
            {
                y.segment(b.offset, b.dim) = xb.cwiseQuotient(diag.segment(b.offset, b.dim));
                continue;
            }
            VectorXd jv = v[i];
            jv.tail(b.dim - 1) *= -1.0;
            VectorXd jx = xb;
            jx.tail(b.dim - 1) *= -1.0;
            y.segment(b.offset, b.dim) = (2.0 * jv.dot(xb) * jv - jx) / beta[i];
        }
        return y;
    }

    /// W^{-1} A, block by block.
    MatrixXd scale_rows(const MatrixXd &A) const
    {
        MatrixXd G(A.rows(), A.cols());
        for (std::size_t i = 0; i < blocks.size(); ++i)
        {
            const auto &b = blocks[i];
            const auto Ab = A.middleRows(b.offset, b.dim);
            if (b.kind == ConeKind::Nonnegative)
            {
                G.middleRows(b.offset, b.dim) = diag.segment(b.offset, b.dim).cwiseInverse().asDiagonal() * Ab;
                continue;
            }
            VectorXd jv = v[i];
            jv.tail(b.dim - 1) *= -1.0;
            MatrixXd JA = Ab;
            JA.bottomRows(b.dim - 1) *= -1.0;
            G.middleRows(b.offset, b.dim) = (2.0 * jv * (jv.transpose() * Ab) - JA) / beta[i];
        }
        return G;
    }
};

/// Newton system for the cone program at the current scaling:
///   A^T dz = -rx,  A dx + ds = -rz,  lambda ∘ (W dz + W^{-1} ds) = ds_target
class NewtonSystem
{
public:
    NewtonSystem(const MatrixXd &A, const Scaling &W, const std::vector<Block> &blocks)
        : A_(A), W_(W), blocks_(blocks), G_(W.scale_rows(A)), qr_(G_)
    {
        // A^T W^{-2} A = G^T G is factored through a QR of G so that the
        // dominant G^T g term is solved at cond(G), not cond(G)^2.
        const Index n = A.cols();
        ok_ = qr_.rank() == n && G_.allFinite();
        if (ok_)
            R_ = qr_.matrixQR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
    }

    bool ok() const { return ok_; }

    struct Direction
    {
        VectorXd dx, ds, dz;
        VectorXd ds_scaled; // W^{-1} ds
        VectorXd dz_scaled; // W dz
    };

    Direction solve(const VectorXd &rx, const VectorXd &rz, const VectorXd &lambda, const VectorXd &target) const
    {
        const VectorXd u = jordan_divide(blocks_, lambda, target);
        const VectorXd Wu = W_.apply(u);
        Direction d = solve_reduced(rx, rz, Wu);
        // One round of iterative refinement on the two linear equations.
        const VectorXd e1 = A_.transpose() * d.dz + rx;
        const VectorXd e2 = A_ * d.dx + d.ds + rz;
        const Direction c = solve_reduced(e1, e2, VectorXd::Zero(rz.size()));
        d.dx += c.dx;
        d.dz += c.dz;
        d.ds += c.ds;
        d.dz_scaled = W_.apply(d.dz);
        d.ds_scaled = u - d.dz_scaled;
        return d;
    }

private:
    Direction solve_reduced(const VectorXd &rx, const VectorXd &rz, const VectorXd &Wu) const
    {
        const Index n = A_.cols();
        Direction d;
        // G^T G dx = -rx - G^T g with g = W^{-1}(rz + W u).
        const VectorXd g = W_.apply_inverse(rz + Wu);
        const VectorXd qtg = (qr_.householderQ().transpose() * g).head(n);
        const VectorXd prx = qr_.colsPermutation().transpose() * (-rx);
        const VectorXd y = R_.transpose().triangularView<Eigen::Lower>().solve(prx) - qtg;
        d.dx = qr_.colsPermutation() * R_.triangularView<Eigen::Upper>().solve(y);
        d.dz = W_.apply_inverse(G_ * d.dx + g);
        d.ds = -rz - A_ * d.dx;
        return d;
    }

    const MatrixXd &A_;
    const Scaling &W_;
    const std::vector<Block> &blocks_;
    MatrixXd G_;
    Eigen::ColPivHouseholderQR<MatrixXd> qr_;
    MatrixXd R_;
    bool ok_ = false;
};

double block_violation(const Block &b, const VectorXd &slack)
{
    auto sb = slack.segment(b.offset, b.dim);
    if (b.kind == ConeKind::Nonnegative)
        return std::max(0.0, -sb.minCoeff());
    return std::max(0.0, sb.tail(b.dim - 1).norm() - sb(0));
}

} // namespace

std::string to_string(SolveStatus status)
{
    switch (status)
    {
    case SolveStatus::Optimal:
        return "optimal";
    case SolveStatus::MaxIterations:
        return "max-iterations";
    case SolveStatus::NumericalFailure:
        return "numerical-failure";
    }
    return "unknown";
}

void ConicProgram::validate() const
{
    if (c.size() != A.cols())
        throw std::invalid_argument(fmt::format("conic: objective has {} entries, A has {} columns", c.size(), A.cols()));
    if (b.size() != A.rows())
        throw std::invalid_argument(fmt::format("conic: offset has {} entries, A has {} rows", b.size(), A.rows()));
    Index total = 0;
    for (const auto &cone : cones)
    {
        if (cone.kind == ConeKind::SecondOrder && cone.dim < 2)
            throw std::invalid_argument("conic: second-order cone blocks need dim >= 2");
        if (cone.dim < 1)
            throw std::invalid_argument("conic: empty cone block");
        total += cone.dim;
    }
    if (total != A.rows())
        throw std::invalid_argument(fmt::format("conic: cone dims sum to {}, A has {} rows", total, A.rows()));
    if (!A.allFinite() || !b.allFinite() || !c.allFinite())
        throw std::invalid_argument("conic: program data must be finite");
    if (A.cols() > 0)
    {
        Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
        if (qr.rank() < A.cols())
            throw std::invalid_argument("conic: A must have full column rank");
    }
}

void SolverSettings::validate() const
{
    if (!(feas_tol > 0.0) || !(gap_tol > 0.0))
        throw std::invalid_argument("conic: tolerances must be positive");
    if (!(step_fraction > 0.0 && step_fraction < 1.0))
        throw std::invalid_argument("conic: step_fraction must lie in (0, 1)");
    if (max_iterations < 1)
        throw std::invalid_argument("conic: max_iterations must be >= 1");
}

Residuals cone_violation(const std::vector<ConeBlock> &cones, const VectorXd &slack)
{
    Residuals r;
    for (const auto &b : layout(cones))
    {
        const double v = block_violation(b, slack);
        r.block_violation.push_back(v);
        r.primal = std::max(r.primal, v);
    }
    return r;
}

Residuals residuals(const ConicProgram &prog, const VectorXd &x)
{
    if (x.size() != prog.num_vars())
        throw std::invalid_argument("conic: point has the wrong dimension");
    return cone_violation(prog.cones, prog.b - prog.A * x);
}

ConicSolution solve(const ConicProgram &prog, const SolverSettings &settings)
{
    prog.validate();
    settings.validate();

    const auto &A = prog.A;
    const auto &b = prog.b;
    const auto &c = prog.c;
    const auto blocks = layout(prog.cones);
    const double deg = degree(blocks);
    const VectorXd e = unit(blocks, A.rows());
    const double c_scale = std::max(1.0, c.lpNorm<Eigen::Infinity>());
    const double b_scale = std::max(1.0, b.size() ? b.lpNorm<Eigen::Infinity>() : 0.0);

    ConicSolution sol;
    VectorXd x = VectorXd::Zero(A.cols());
    VectorXd s = e;
    VectorXd z = e;

    Scaling W{blocks, {}, {}, {}};

    auto finish = [&](SolveStatus status, int iterations) {
        sol.status = status;
        sol.x = x;
        sol.s = s;
        sol.z = z;
        sol.objective = c.dot(x);
        sol.iterations = iterations;
        if (settings.verbosity >= 1)
            std::fprintf(stderr, "conic: %s after %d iterations, obj %.10e, pres %.2e, dres %.2e, gap %.2e\n",
                         to_string(status).c_str(), iterations, sol.objective, sol.primal_residual,
                         sol.dual_residual, sol.gap);
        return sol;
    };

    for (int iter = 0;; ++iter)
    {
        const VectorXd rx = A.transpose() * z + c;
        const VectorXd rz = A * x + s - b;
        const double sz = s.dot(z);
        const double mu = sz / deg;
        const double pobj = c.dot(x);
        const double dobj = -b.dot(z);

        sol.primal_residual = cone_violation(prog.cones, b - A * x).primal;
        sol.dual_residual = rx.norm();
        sol.gap = std::max(sz, std::abs(pobj - dobj));

        if (settings.verbosity >= 2)
            std::fprintf(stderr, "conic: it %3d  pobj %+.8e  dobj %+.8e  pres %.2e  |rz| %.2e  dres %.2e  gap %.2e\n",
                         iter, pobj, dobj, sol.primal_residual, rz.norm(), sol.dual_residual, sol.gap);

        if (!std::isfinite(sol.gap) || !std::isfinite(sol.dual_residual))
            return finish(SolveStatus::NumericalFailure, iter);
        if (sol.primal_residual <= settings.feas_tol && rz.norm() <= settings.feas_tol * b_scale &&
            sol.dual_residual <= settings.feas_tol * c_scale && sol.gap <= settings.gap_tol)
            return finish(SolveStatus::Optimal, iter);
        if (iter >= settings.max_iterations)
            return finish(SolveStatus::MaxIterations, iter);

        if (!W.compute(s, z))
            return finish(SolveStatus::NumericalFailure, iter);
        const VectorXd lambda = W.apply(z);
        const NewtonSystem kkt(A, W, blocks);
        if (!kkt.ok())
            return finish(SolveStatus::NumericalFailure, iter);

        // Predictor.
        const VectorXd ll = jordan_product(blocks, lambda, lambda);
        const auto aff = kkt.solve(rx, rz, lambda, -ll);
        const double alpha_aff =
            std::min({1.0, max_step(blocks, s, aff.ds), max_step(blocks, z, aff.dz)});
        const double mu_aff = (s + alpha_aff * aff.ds).dot(z + alpha_aff * aff.dz) / deg;
        const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

        // Corrector.
        const VectorXd target =
            -ll - jordan_product(blocks, aff.ds_scaled, aff.dz_scaled) + sigma * mu * e;
        const auto dir = kkt.solve(rx, rz, lambda, target);
        if (!dir.dx.allFinite() || !dir.dz.allFinite() || !dir.ds.allFinite())
            return finish(SolveStatus::NumericalFailure, iter);
        const double alpha_max = std::min(max_step(blocks, s, dir.ds), max_step(blocks, z, dir.dz));
        const double alpha = std::min(1.0, settings.step_fraction * alpha_max);

        x += alpha * dir.dx;
        s += alpha * dir.ds;
        z += alpha * dir.dz;
    }
}

void write_program(std::ostream &out, const ConicProgram &prog)
{
    out << "conic-program " << prog.num_vars() << ' ' << prog.num_rows() << '\n';
    out << "cones " << prog.cones.size();
    for (const auto &cone : prog.cones)
        out << ' ' << (cone.kind == ConeKind::Nonnegative ? 'L' : 'Q') << ' ' << cone.dim;
    out << '\n';
    auto write_vec = [&](const char *tag, const VectorXd &v) {
        out << tag;
        for (Index i = 0; i < v.size(); ++i)
            out << ' ' << fmt::format("{:.17g}", v(i));
        out << '\n';
    };
    write_vec("c", prog.c);
    write_vec("b", prog.b);
    out << "A\n";
    for (Index r = 0; r < prog.num_rows(); ++r)
    {
        for (Index j = 0; j < prog.num_vars(); ++j)
            out << (j ? " " : "") << fmt::format("{:.17g}", prog.A(r, j));
        out << '\n';
    }
}

ConicProgram read_program(std::istream &in)
{
    auto expect = [&](const std::string &tag) {
        std::string word;
        if (!(in >> word) || word != tag)
            throw std::invalid_argument("conic: expected '" + tag + "' in program dump");
    };
    auto read_value = [&]() {
        double v = 0.0;
        if (!(in >> v))
            throw std::invalid_argument("conic: truncated program dump");
        return v;
    };

    ConicProgram prog;
    Index n = 0;
    Index r = 0;
    expect("conic-program");
    if (!(in >> n >> r) || n < 0 || r < 0)
        throw std::invalid_argument("conic: bad dimensions in program dump");
    expect("cones");
    std::size_t count = 0;
    if (!(in >> count))
        throw std::invalid_argument("conic: bad cone count in program dump");
    for (std::size_t i = 0; i < count; ++i)
    {
        char kind = 0;
        Index dim = 0;
        if (!(in >> kind >> dim) || (kind != 'L' && kind != 'Q'))
            throw std::invalid_argument("conic: bad cone block in program dump");
        prog.cones.push_back(kind == 'L' ? ConeBlock::orthant(dim) : ConeBlock::soc(dim));
    }
    prog.c.resize(n);
    prog.b.resize(r);
    prog.A.resize(r, n);
    expect("c");
    for (Index i = 0; i < n; ++i)
        prog.c(i) = read_value();
    expect("b");
    for (Index i = 0; i < r; ++i)
        prog.b(i) = read_value();
    expect("A");
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < n; ++j)
            prog.A(i, j) = read_value();
    prog.validate();
    return prog;
}

} // namespace vlc::conic
