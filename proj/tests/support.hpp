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

// Shared generators and oracles for the unit and acceptance suites.

#ifndef VLC_TESTS_SUPPORT_HPP
#define VLC_TESTS_SUPPORT_HPP

#include "vlc/channel.hpp"
#include "vlc/scenario.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>

namespace vlc::testing
{

inline std::string source_path(const std::string &rel)
{
    return std::string(VLC_SOURCE_DIR) + "/" + rel;
}

/// Random abstract channel: gains in [0.2, 1.2], sigma in [0.05, 0.2],
/// budgets in [0.5, 1.5]. Redraws until cond(H) <= max_cond.
inline ChannelState random_channel(std::mt19937_64 &rng, Eigen::Index K, Eigen::Index M, double max_cond = 1e3)
{
    std::uniform_real_distribution<double> gain(0.2, 1.2);
    std::uniform_real_distribution<double> noise(0.05, 0.2);
    std::uniform_real_distribution<double> budget(0.5, 1.5);
    ChannelState ch;
    for (;;)
    {
        ch.H = Eigen::MatrixXd::NullaryExpr(K, M, [&]() { return gain(rng); });
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(ch.H);
        const auto &sv = svd.singularValues();
        if (sv(sv.size() - 1) > 0.0 && sv(0) / sv(sv.size() - 1) <= max_cond)
            break;
    }
    ch.sigma = Eigen::VectorXd::NullaryExpr(K, [&]() { return noise(rng); });
    ch.budgets = Eigen::VectorXd::NullaryExpr(M, [&]() { return budget(rng); });
    ch.dc_power = Eigen::VectorXd::Zero(K);
    ch.bandwidth = 1e8;
    return ch;
}

/// Single-UE optimum: every LED swings fully in phase with its gain.
inline double single_ue_optimum(const ChannelState &ch)
{
    const double s = (ch.budgets.array() * ch.H.row(0).transpose().array().abs()).sum();
    return s * s / (ch.sigma(0) * ch.sigma(0));
}

inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace vlc::testing

#endif
