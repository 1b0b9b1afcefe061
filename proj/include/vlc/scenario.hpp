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

#ifndef VLC_SCENARIO_HPP
#define VLC_SCENARIO_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace vlc
{

using Vec3 = std::array<double, 3>;

inline constexpr double kElectronCharge = 1.602176634e-19; // C

/**
 * Photodetector, concentrator and LED parameters, all in SI units.
 *
 * Angles are radians, areas m², noise densities A/√Hz. The ambient
 * photocurrent is carried as the bare number that enters the noise
 * variance; no radiometric unit conversion is applied to it.
 */
struct PhysicalParams
{
    double lambertian_order = 1.0;
    double responsivity = 0.4;          // A/W
    double pd_area = 1e-4;              // m²
    double fov_half_angle = 1.0471975511965976; // rad
    double concentrator_index = 1.5;
    double preamp_noise_density = 5e-12; // A/√Hz
    double ambient_photocurrent = 10.93;
    double bandwidth = 1e8; // Hz
    double electron_charge = kElectronCharge;

    /// Throws ScenarioError naming the first field that breaks an invariant.
    void validate() const;
};

/// Ceiling LED pointing straight down.
struct Transmitter
{
    Vec3 position{};
    double avg_power_dbm = 0.0;
    double max_power_dbm = 0.0;
};

/// Single-photodetector UE facing straight up.
struct Receiver
{
    Vec3 position{};
};

struct Room
{
    double x = 5.0;
    double y = 5.0;
    double z = 3.0;
};

struct Scenario
{
    Room room;
    PhysicalParams params;
    std::vector<Transmitter> transmitters;
    std::vector<Receiver> receivers;
    /// Name of the built-in LED layout when the file selected one; empty for
    /// explicit coordinates.
    std::string layout_preset;

    std::size_t num_transmitters() const { return transmitters.size(); }
    std::size_t num_receivers() const { return receivers.size(); }

    /// Checks M > K ≥ 1, placement inside the room and per-device invariants.
    void validate() const;
};

double dbm_to_watts(double p_dbm);

/// Largest symmetric swing around the DC offset, min(p_n, p_max − p_n), in
/// watts. Throws ScenarioError when it is not strictly positive.
double amplitude_budget(const Transmitter &tx);

/// Parses and validates the JSON scenario document. Unknown keys are
/// rejected; every error message names the offending field.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario_file(const std::string &path);

inline constexpr std::string_view kAssumedLayoutName = "assumed-6led";

/**
 * Built-in six-LED ceiling layout, z = 3 m in a 5 × 5 m room.
 *
 * ASSUMED geometry: a centred square of half-width 0.7 m plus two LEDs on
 * the main diagonal at ±1.4 m from the centre. Point-symmetric about the
 * room centre. Every UE of the two reference cases sees at least one LED
 * and both reference channel matrices have full row rank.
 */
std::vector<Vec3> default_layout();

} // namespace vlc

#endif
