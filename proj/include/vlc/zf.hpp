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

#ifndef VLC_ZF_HPP
#define VLC_ZF_HPP

#include "vlc/channel.hpp"

#include <Eigen/Dense>

namespace vlc
{

inline constexpr double kMaxZfCondition = 1e12;

struct ZfDesign
{
    Eigen::MatrixXd W;     // M × K
    Eigen::VectorXd gamma; // optimal symbol gains
    double mu = 0.0;       // common gain-to-noise ratio
    Eigen::Index binding_row = 0;
};

/**
 * Zero-forcing precoder with max-min optimal symbol gains.
 *
 * W = H^T(HH^T)^{-1}diag(γ) with γ_k = σ_k μ and
 * μ = min_n p̃_n / (|H^T(HH^T)^{-1}| σ)_n. Every UE then sees the same
 * SINR μ². LEDs that no UE sees (zero row sum) do not constrain μ.
 *
 * Throws IllConditionedError when cond(H) exceeds kMaxZfCondition.
 */
ZfDesign zf_precoder(const ChannelState &ch);

inline double zf_min_sinr(const ZfDesign &design)
{
    return design.mu * design.mu;
}

} // namespace vlc

#endif
