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

#include "vlc/channel.hpp"

#include "vlc/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <ostream>

namespace vlc
{

namespace
{
constexpr double kGainFloor = 1e-300;
}

void ChannelState::validate() const
{
    const auto K = H.rows();
    const auto M = H.cols();
    if (K < 1 || M < 1)
        throw std::invalid_argument("channel: empty channel matrix");
    if (sigma.size() != K || dc_power.size() != K)
        throw std::invalid_argument("channel: sigma/dc_power length must equal the number of UEs");
    if (budgets.size() != M)
        throw std::invalid_argument("channel: budgets length must equal the number of LEDs");
    if ((H.array() < 0.0).any() || !H.allFinite())
        throw std::invalid_argument("channel: gains must be finite and nonnegative");
    if (!(sigma.array() > 0.0).all())
        throw std::invalid_argument("channel: noise standard deviations must be positive");
    if (!(budgets.array() > 0.0).all())
        throw std::invalid_argument("channel: amplitude budgets must be positive");
    for (Eigen::Index k = 0; k < K; ++k)
        if ((H.row(k).array() == 0.0).all())
            throw DegenerateUeError(static_cast<std::size_t>(k),
                                    fmt::format("receiver {} is outside every transmitter's field of view", k));
}

double collection_area(const PhysicalParams &params)
{
    const double s = std::sin(params.fov_half_angle);
    return params.concentrator_index * params.concentrator_index / (s * s) * params.pd_area;
}

double lambertian_intensity(double emission_angle, double order)
{
    const double c = std::cos(emission_angle);
    if (c <= 0.0)
        return 0.0;
    return (order + 1.0) * std::pow(c, order) / (2.0 * std::numbers::pi);
}

double channel_gain(const Transmitter &tx, const Receiver &rx, const PhysicalParams &params)
{
    const double dx = tx.position[0] - rx.position[0];
    const double dy = tx.position[1] - rx.position[1];
    const double dz = tx.position[2] - rx.position[2];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 == 0.0)
        throw GeometryError("channel_gain: transmitter and receiver coincide");
    if (!(dz > 0.0))
        throw GeometryError(fmt::format("channel_gain: transmitter (z={}) must be above receiver (z={})",
                                        tx.position[2], rx.position[2]));

    const double d = std::sqrt(d2);
    const double cos_angle = dz / d;
    const double incidence = std::acos(std::min(1.0, cos_angle));
    if (incidence > params.fov_half_angle)
        return 0.0;

    // Emission and incidence angles coincide for the vertical orientations.
    const double gain = params.responsivity * collection_area(params) / d2 *
                        lambertian_intensity(incidence, params.lambertian_order) * cos_angle;
    return gain < kGainFloor ? 0.0 : gain;
}

double noise_std(const PhysicalParams &params, double dc_power)
{
    if (!(dc_power >= 0.0))
        throw std::invalid_argument("noise_std: DC power must be nonnegative");
    const double e = params.electron_charge;
    const double B = params.bandwidth;
    const double shot = 2.0 * e * dc_power * B;
    const double ambient = 2.0 * e * params.responsivity * params.ambient_photocurrent * collection_area(params) *
                           2.0 * std::numbers::pi * (1.0 - std::cos(params.fov_half_angle)) * B;
    const double thermal = params.preamp_noise_density * params.preamp_noise_density * B;
    const double variance = shot + ambient + thermal;
    if (!(variance > 0.0))
        throw DegenerateNoiseError("noise_std: every noise term vanishes");
    return std::sqrt(variance);
}

ChannelState build_channel(const Scenario &scenario)
{
    const auto M = static_cast<Eigen::Index>(scenario.num_transmitters());
    const auto K = static_cast<Eigen::Index>(scenario.num_receivers());

    ChannelState ch;
    ch.bandwidth = scenario.params.bandwidth;
    ch.H.resize(K, M);
    ch.sigma.resize(K);
    ch.dc_power.resize(K);
    ch.budgets.resize(M);

    Eigen::VectorXd offsets(M);
    for (Eigen::Index n = 0; n < M; ++n)
    {
        const auto &tx = scenario.transmitters[static_cast<std::size_t>(n)];
        offsets(n) = dbm_to_watts(tx.avg_power_dbm);
        ch.budgets(n) = amplitude_budget(tx);
    }
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const auto &rx = scenario.receivers[static_cast<std::size_t>(k)];
        for (Eigen::Index n = 0; n < M; ++n)
            ch.H(k, n) = channel_gain(scenario.transmitters[static_cast<std::size_t>(n)], rx, scenario.params);
        if ((ch.H.row(k).array() == 0.0).all())
            throw DegenerateUeError(static_cast<std::size_t>(k),
                                    fmt::format("receiver {} at [{}, {}, {}] is outside every transmitter's field of view",
                                                k, rx.position[0], rx.position[1], rx.position[2]));
        ch.dc_power(k) = ch.H.row(k).dot(offsets);
        ch.sigma(k) = noise_std(scenario.params, ch.dc_power(k));
    }
    return ch;
}

void write_channel_csv(std::ostream &out, const ChannelState &ch)
{
    const auto K = ch.num_ues();
    const auto M = ch.num_leds();
    out << "quantity,index";
    for (Eigen::Index n = 0; n < M; ++n)
        out << ",led_" << (n + 1);
    out << '\n';
    for (Eigen::Index k = 0; k < K; ++k)
    {
        out << "h," << (k + 1);
        for (Eigen::Index n = 0; n < M; ++n)
            out << ',' << fmt::format("{:.9e}", ch.H(k, n));
        out << '\n';
    }
    out << "budget_w,";
    for (Eigen::Index n = 0; n < M; ++n)
        out << ',' << fmt::format("{:.9e}", ch.budgets(n));
    out << '\n';
    out << "quantity,ue,sigma_a,dc_power\n";
    for (Eigen::Index k = 0; k < K; ++k)
        out << fmt::format("noise,{},{:.9e},{:.9e}\n", k + 1, ch.sigma(k), ch.dc_power(k));
}

} // namespace vlc
