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

#ifndef VLC_CHANNEL_HPP
#define VLC_CHANNEL_HPP

#include "vlc/scenario.hpp"

#include <Eigen/Dense>

#include <iosfwd>

namespace vlc
{

/**
 * Line-of-sight channel and noise at one operating point.
 *
 * Row k of `H` is h_k^T, the gains from every LED to UE k (A/W). `sigma` is
 * the per-UE noise standard deviation (A), `budgets` the per-LED amplitude
 * swing p̃_n (W) and `dc_power` the P_{s,k} term that drives shot noise.
 * Since σ depends on the DC offsets, a new state is needed per power level.
 */
struct ChannelState
{
    Eigen::MatrixXd H;
    Eigen::VectorXd sigma;
    Eigen::VectorXd budgets;
    Eigen::VectorXd dc_power;
    double bandwidth = 1e8;

    Eigen::Index num_ues() const { return H.rows(); }
    Eigen::Index num_leds() const { return H.cols(); }

    /// Shape and sign checks; an all-zero row raises DegenerateUeError.
    void validate() const;
};

/// Effective collection area q²/sin²(θ_c)·A_PD in m².
double collection_area(const PhysicalParams &params);

/// Lambertian radiant intensity (m+1)cos^m(φ)/(2π).
double lambertian_intensity(double emission_angle, double order);

/**
 * LOS gain for a down-facing LED and an up-facing photodetector.
 *
 * Both cosines equal vertical drop over distance. Incidence beyond the FOV
 * gives exactly 0, as do gains below 1e-300.
 */
double channel_gain(const Transmitter &tx, const Receiver &rx, const PhysicalParams &params);

/// √(2eP_sB + 2eρξA·2π(1−cos θ_c)B + i_amp²B).
double noise_std(const PhysicalParams &params, double dc_power);

ChannelState build_channel(const Scenario &scenario);

/// CSV debug dump: H rows, then sigma, budgets and dc_power.
void write_channel_csv(std::ostream &out, const ChannelState &ch);

} // namespace vlc

#endif
