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

#include "vlc/scenario.hpp"

#include "vlc/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace vlc
{

namespace
{

using json = nlohmann::json;

[[noreturn]] void fail(const std::string &msg)
{
    throw ScenarioError(msg);
}

std::string fmt_value(double v)
{
    return fmt::format("{}", v);
}

void reject_unknown_keys(const json &obj, const std::string &where,
                         std::initializer_list<std::string_view> allowed)
{
    for (const auto &[key, _] : obj.items())
    {
        bool known = false;
        for (auto a : allowed)
            if (key == a)
                known = true;
        if (!known)
            fail(fmt::format("{}: unknown key '{}'", where, key));
    }
}

const json &require_object(const json &parent, const std::string &key, const std::string &where)
{
    if (!parent.contains(key))
        fail(fmt::format("{}: missing key '{}'", where, key));
    const json &v = parent.at(key);
    if (!v.is_object())
        fail(fmt::format("{}.{}: expected an object", where, key));
    return v;
}

double require_number(const json &parent, const std::string &key, const std::string &where)
{
    if (!parent.contains(key))
        fail(fmt::format("{}: missing key '{}'", where, key));
    const json &v = parent.at(key);
    if (!v.is_number())
        fail(fmt::format("{}.{}: expected a number", where, key));
    double d = v.get<double>();
    if (!std::isfinite(d))
        fail(fmt::format("{}.{}: value {} is not finite", where, key, d));
    return d;
}

Vec3 require_vec3(const json &parent, const std::string &key, const std::string &where)
{
    if (!parent.contains(key))
        fail(fmt::format("{}: missing key '{}'", where, key));
    const json &v = parent.at(key);
    if (!v.is_array() || v.size() != 3)
        fail(fmt::format("{}.{}: expected an array of 3 numbers", where, key));
    Vec3 out{};
    for (std::size_t i = 0; i < 3; ++i)
    {
        if (!v[i].is_number())
            fail(fmt::format("{}.{}[{}]: expected a number", where, key, i));
        out[i] = v[i].get<double>();
        if (!std::isfinite(out[i]))
            fail(fmt::format("{}.{}[{}]: value is not finite", where, key, i));
    }
    return out;
}

std::string fmt_pos(const Vec3 &p)
{
    return fmt::format("[{}, {}, {}]", p[0], p[1], p[2]);
}

bool inside_footprint(const Room &room, const Vec3 &p)
{
    return p[0] >= 0.0 && p[0] <= room.x && p[1] >= 0.0 && p[1] <= room.y;
}

} // namespace

void PhysicalParams::validate() const
{
    if (!(lambertian_order >= 1.0))
        fail("physics.m: Lambertian order must be >= 1, got " + fmt_value(lambertian_order));
    if (!(responsivity > 0.0))
        fail("physics.responsivity_a_per_w: must be > 0, got " + fmt_value(responsivity));
    if (!(pd_area > 0.0))
        fail("physics.pd_area_cm2: must be > 0, got " + fmt_value(pd_area));
    if (!(fov_half_angle > 0.0 && fov_half_angle < std::numbers::pi / 2))
        fail("physics.fov_deg: must lie in (0, 90) degrees, got " +
             fmt_value(fov_half_angle * 180.0 / std::numbers::pi));
    if (!(concentrator_index >= 1.0))
        fail("physics.concentrator_index: must be >= 1, got " + fmt_value(concentrator_index));
    if (!(preamp_noise_density >= 0.0))
        fail("physics.preamp_noise_pa_sqrthz: must be >= 0, got " + fmt_value(preamp_noise_density));
    if (!(ambient_photocurrent >= 0.0))
        fail("physics.ambient_photocurrent: must be >= 0, got " + fmt_value(ambient_photocurrent));
    if (!(bandwidth > 0.0))
        fail("physics.bandwidth_hz: must be > 0, got " + fmt_value(bandwidth));
    if (!(electron_charge >= 0.0))
        fail("physics.electron_charge: must be >= 0, got " + fmt_value(electron_charge));
}

void Scenario::validate() const
{
    if (!(room.x > 0.0 && room.y > 0.0 && room.z > 0.0))
        fail(fmt::format("room: dimensions must be positive, got {} x {} x {}", room.x, room.y, room.z));
    params.validate();

    const std::size_t M = transmitters.size();
    const std::size_t K = receivers.size();
    if (K < 1)
        fail("receivers: at least one receiver is required");
    if (M <= K)
        fail(fmt::format("transmitters: need more transmitters than receivers (M > K), got M={} K={}", M, K));

    for (std::size_t n = 0; n < M; ++n)
    {
        const auto &tx = transmitters[n];
        const std::string where = fmt::format("transmitters[{}]", n);
        if (!inside_footprint(room, tx.position))
            fail(fmt::format("{}.pos_m: {} outside the room footprint", where, fmt_pos(tx.position)));
        if (std::abs(tx.position[2] - room.z) > 1e-9)
            fail(fmt::format("{}.pos_m: z = {} is not at ceiling height {}", where, tx.position[2], room.z));
        const double p = dbm_to_watts(tx.avg_power_dbm);
        const double pmax = dbm_to_watts(tx.max_power_dbm);
        if (!(p < pmax))
            fail(fmt::format("{}: p_dbm = {} must be below p_max_dbm = {}", where, tx.avg_power_dbm,
                             tx.max_power_dbm));
    }
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto &rx = receivers[k];
        const std::string where = fmt::format("receivers[{}]", k);
        if (!inside_footprint(room, rx.position))
            fail(fmt::format("{}.pos_m: {} outside the room footprint", where, fmt_pos(rx.position)));
        if (!(rx.position[2] >= 0.0 && rx.position[2] < room.z))
            fail(fmt::format("{}.pos_m: z = {} outside [0, {})", where, rx.position[2], room.z));
    }
}

double dbm_to_watts(double p_dbm)
{
    return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

double amplitude_budget(const Transmitter &tx)
{
    const double p = dbm_to_watts(tx.avg_power_dbm);
    const double pmax = dbm_to_watts(tx.max_power_dbm);
    const double budget = std::min(p, pmax - p);
    if (!(budget > 0.0))
        throw ScenarioError(fmt::format("transmitter with p = {} dBm, p_max = {} dBm has no usable swing",
                                        tx.avg_power_dbm, tx.max_power_dbm));
    return budget;
}

std::vector<Vec3> default_layout()
{
    constexpr double c = 2.5;
    constexpr double square = 0.7;
    constexpr double diagonal = 1.4;
    constexpr double z = 3.0;
    return {
        {c - square, c - square, z},
        {c - square, c + square, z},
        {c + square, c - square, z},
        {c + square, c + square, z},
        {c - diagonal, c - diagonal, z},
        {c + diagonal, c + diagonal, z},
    };
}

Scenario parse_scenario(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        fail(std::string("scenario: malformed JSON: ") + e.what());
    }
    if (!doc.is_object())
        fail("scenario: top level must be an object");
    reject_unknown_keys(doc, "scenario", {"room", "physics", "transmitters", "receivers"});

    Scenario sc;

    const json &room = require_object(doc, "room", "scenario");
    reject_unknown_keys(room, "room", {"x_m", "y_m", "z_m"});
    sc.room.x = require_number(room, "x_m", "room");
    sc.room.y = require_number(room, "y_m", "room");
    sc.room.z = require_number(room, "z_m", "room");

    const json &phys = require_object(doc, "physics", "scenario");
    reject_unknown_keys(phys, "physics",
                        {"m", "responsivity_a_per_w", "pd_area_cm2", "fov_deg", "concentrator_index",
                         "preamp_noise_pa_sqrthz", "ambient_photocurrent", "bandwidth_hz"});
    auto &pp = sc.params;
    pp.lambertian_order = require_number(phys, "m", "physics");
    pp.responsivity = require_number(phys, "responsivity_a_per_w", "physics");
    pp.pd_area = require_number(phys, "pd_area_cm2", "physics") * 1e-4;
    pp.fov_half_angle = require_number(phys, "fov_deg", "physics") * std::numbers::pi / 180.0;
    pp.concentrator_index = require_number(phys, "concentrator_index", "physics");
    pp.preamp_noise_density = require_number(phys, "preamp_noise_pa_sqrthz", "physics") * 1e-12;
    pp.ambient_photocurrent = require_number(phys, "ambient_photocurrent", "physics");
    pp.bandwidth = require_number(phys, "bandwidth_hz", "physics");

    if (!doc.contains("transmitters"))
        fail("scenario: missing key 'transmitters'");
    const json &txs = doc.at("transmitters");
    if (txs.is_array())
    {
        for (std::size_t n = 0; n < txs.size(); ++n)
        {
            const std::string where = fmt::format("transmitters[{}]", n);
            const json &t = txs[n];
            if (!t.is_object())
                fail(where + ": expected an object");
            reject_unknown_keys(t, where, {"pos_m", "p_dbm", "p_max_dbm"});
            Transmitter tx;
            tx.position = require_vec3(t, "pos_m", where);
            tx.avg_power_dbm = require_number(t, "p_dbm", where);
            tx.max_power_dbm = require_number(t, "p_max_dbm", where);
            sc.transmitters.push_back(tx);
        }
    }
    else if (txs.is_object())
    {
        reject_unknown_keys(txs, "transmitters", {"preset", "p_dbm", "p_max_dbm"});
        if (!txs.contains("preset") || !txs.at("preset").is_string())
            fail("transmitters.preset: expected a string");
        const auto preset = txs.at("preset").get<std::string>();
        if (preset != kAssumedLayoutName)
            fail(fmt::format("transmitters.preset: unknown layout '{}'", preset));
        const double p = require_number(txs, "p_dbm", "transmitters");
        const double pmax = require_number(txs, "p_max_dbm", "transmitters");
        for (const auto &pos : default_layout())
            sc.transmitters.push_back(Transmitter{pos, p, pmax});
        sc.layout_preset = preset;
    }
    else
    {
        fail("transmitters: expected an array or a preset object");
    }

    if (!doc.contains("receivers") || !doc.at("receivers").is_array())
        fail("scenario: 'receivers' must be an array");
    const json &rxs = doc.at("receivers");
    for (std::size_t k = 0; k < rxs.size(); ++k)
    {
        const std::string where = fmt::format("receivers[{}]", k);
        const json &r = rxs[k];
        if (!r.is_object())
            fail(where + ": expected an object");
        reject_unknown_keys(r, where, {"pos_m"});
        sc.receivers.push_back(Receiver{require_vec3(r, "pos_m", where)});
    }

    sc.validate();
    return sc;
}

Scenario load_scenario_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace vlc
