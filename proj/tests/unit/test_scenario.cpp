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

#include "support.hpp"

#include "vlc/channel.hpp"
#include "vlc/errors.hpp"
#include "vlc/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

using namespace vlc;

namespace
{

std::string document(const std::string &receivers, const std::string &physics_extra = "")
{
    return R"({
  "room": {"x_m": 5.0, "y_m": 5.0, "z_m": 3.0},
  "physics": {"m": 1, "responsivity_a_per_w": 0.4, "pd_area_cm2": 1.0, "fov_deg": 60,
              "concentrator_index": 1.5, "preamp_noise_pa_sqrthz": 5.0,
              "ambient_photocurrent": 10.93, "bandwidth_hz": 1e8)" +
           physics_extra + R"(},
  "transmitters": {"preset": "assumed-6led", "p_dbm": 15, "p_max_dbm": 35},
  "receivers": )" + receivers +
           "}";
}

} // namespace

TEST_CASE("reference physics document converts to SI")
{
    const Scenario sc = parse_scenario(document(R"([{"pos_m": [2.05, 1.60, 2.15]}])"));
    CHECK(sc.params.pd_area == doctest::Approx(1e-4).epsilon(1e-15));
    CHECK(sc.params.fov_half_angle == doctest::Approx(std::numbers::pi / 3).epsilon(1e-15));
    CHECK(sc.params.bandwidth == 1e8);
    CHECK(sc.params.preamp_noise_density == doctest::Approx(5e-12).epsilon(1e-15));
    CHECK(sc.params.lambertian_order == 1.0);
    CHECK(sc.num_transmitters() == 6);
    CHECK(sc.layout_preset == kAssumedLayoutName);
    REQUIRE(sc.num_receivers() == 1);
    CHECK(sc.receivers[0].position[0] == 2.05);
}

TEST_CASE("shipped scenario files load")
{
    for (const char *name : {"data/case1.json", "data/case2.json"})
    {
        const Scenario sc = load_scenario_file(testing::source_path(name));
        CHECK(sc.num_receivers() == 4);
        CHECK(sc.num_transmitters() == 6);
    }
}

TEST_CASE("receiver above the ceiling is rejected")
{
    CHECK_THROWS_AS(parse_scenario(document(R"([{"pos_m": [2.0, 2.0, 3.5]}])")), ScenarioError);
}

TEST_CASE("malformed documents name the offending field")
{
    try
    {
        parse_scenario(document(R"([{"pos_m": [2.0, 2.0, 2.0]}])", R"(, "colour": 1)"));
        FAIL("unknown key accepted");
    }
    catch (const ScenarioError &e)
    {
        CHECK(std::string(e.what()).find("colour") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario("{not json"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario(document("[]")), ScenarioError);
    CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), ScenarioError);
}

TEST_CASE("dBm conversion")
{
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(std::abs(dbm_to_watts(15.0) - 0.0316227766016838) < 1e-7);
}

TEST_CASE("amplitude budget takes the tighter side")
{
    const double w1 = 30.0, w2 = 30.0 + 10.0 * std::log10(2.0), w3 = 30.0 + 10.0 * std::log10(3.0);
    CHECK(amplitude_budget({{}, w1, w3}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(amplitude_budget({{}, w2, w3}) == doctest::Approx(1.0).epsilon(1e-12));
    // p_max far above p: the swing is the DC offset itself.
    CHECK(amplitude_budget({{}, 15.0, 35.0}) == doctest::Approx(dbm_to_watts(15.0)).epsilon(1e-15));
    CHECK_THROWS_AS(amplitude_budget({{}, 20.0, 20.0}), ScenarioError);
}

TEST_CASE("default layout")
{
    const auto layout = default_layout();
    REQUIRE(layout.size() == 6);
    double cx = 0, cy = 0;
    for (const auto &p : layout)
    {
        CHECK(p[2] == 3.0);
        cx += p[0] / 6;
        cy += p[1] / 6;
        // Point symmetry about the room centre.
        bool mirrored = false;
        for (const auto &q : layout)
            mirrored = mirrored || (std::abs(q[0] - (5.0 - p[0])) < 1e-12 && std::abs(q[1] - (5.0 - p[1])) < 1e-12);
        CHECK(mirrored);
    }
    CHECK(cx == doctest::Approx(2.5));
    CHECK(cy == doctest::Approx(2.5));
}

TEST_CASE("reference receivers see the assumed layout")
{
    for (const char *name : {"data/case1.json", "data/case2.json"})
    {
        const Scenario sc = load_scenario_file(testing::source_path(name));
        const ChannelState ch = build_channel(sc);
        for (Eigen::Index k = 0; k < ch.num_ues(); ++k)
            CHECK((ch.H.row(k).array() > 0.0).count() >= 1);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(ch.H);
        CHECK(lu.rank() == ch.num_ues());
    }
}
