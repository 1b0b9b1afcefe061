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

#include "vlc/zf.hpp"

#include "vlc/errors.hpp"

#include <fmt/format.h>

#include <limits>

namespace vlc
{

ZfDesign zf_precoder(const ChannelState &ch)
{
    ch.validate();
    const Eigen::MatrixXd &H = ch.H;
    const auto K = H.rows();
    const auto M = H.cols();
    if (M < K)
        throw IllConditionedError(std::numeric_limits<double>::infinity(),
                                  fmt::format("zf: {} LEDs cannot null interference between {} UEs", M, K));

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(H);
    const auto &sv = svd.singularValues();
    const double cond = sv(K - 1) > 0.0 ? sv(0) / sv(K - 1) : std::numeric_limits<double>::infinity();
    if (!(cond <= kMaxZfCondition))
        throw IllConditionedError(cond, fmt::format("zf: channel condition number {:.3e} exceeds {:.0e}", cond,
                                                    kMaxZfCondition));

    // Right inverse through the SPD Gram matrix: P = H^T (H H^T)^{-1}.
    const Eigen::LLT<Eigen::MatrixXd> gram((H * H.transpose()).eval());
    if (gram.info() != Eigen::Success)
        throw IllConditionedError(cond, "zf: H H^T is not positive definite");
    const Eigen::MatrixXd P = gram.solve(H).transpose();

    // The gain ratio μ does not depend on k; one scalar serves every UE.
    const Eigen::VectorXd row_sums = P.cwiseAbs() * ch.sigma;
    ZfDesign design;
    design.mu = std::numeric_limits<double>::infinity();
    for (Eigen::Index n = 0; n < M; ++n)
    {
        if (row_sums(n) <= 0.0)
            continue;
        const double ratio = ch.budgets(n) / row_sums(n);
        if (ratio < design.mu)
        {
            design.mu = ratio;
            design.binding_row = n;
        }
    }
    design.gamma = ch.sigma * design.mu;
    design.W = P * design.gamma.asDiagonal();
    return design;
}

} // namespace vlc
