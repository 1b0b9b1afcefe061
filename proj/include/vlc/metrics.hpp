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

#ifndef VLC_METRICS_HPP
#define VLC_METRICS_HPP

#include "vlc/channel.hpp"

#include <Eigen/Dense>

#include <vector>

namespace vlc
{

inline constexpr double kAuditTolerance = 1e-8;

struct Evaluation
{
    Eigen::VectorXd sinr;
    double min_sinr = 0.0;
    double rate_per_ue = 0.0;     // bits/s
    Eigen::VectorXd row_usage;    // Σ_k |w_{n,k}|
    Eigen::VectorXd budget_ratio; // row_usage ./ p̃, unclamped
    Eigen::MatrixXd interference; // (k, j) = |h_k^T w_j|
};

struct Audit
{
    bool pass = true;
    std::vector<Eigen::Index> violating_rows;
    Eigen::VectorXd budget_ratio;
};

/// SINR_k = |h_k^T w_k|² / (Σ_{j≠k}|h_k^T w_j|² + σ_k²) and the mean rate
/// (1/K)Σ B·log2(1+SINR_k). W is M × K.
Evaluation evaluate(const ChannelState &ch, const Eigen::MatrixXd &W);

/// Per-LED amplitude check Σ_k|w_{n,k}| ≤ p̃_n(1 + kAuditTolerance).
Audit audit(const ChannelState &ch, const Eigen::MatrixXd &W);

} // namespace vlc

#endif
