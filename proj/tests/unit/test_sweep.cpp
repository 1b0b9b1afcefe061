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

#include "vlc/errors.hpp"
#include "vlc/sweep.hpp"

#include <doctest.h>

#include <sstream>

using namespace vlc;

namespace
{

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

SweepSpec reference_spec()
{
    SweepSpec spec;
    spec.p_start_dbm = 15;
    spec.p_end_dbm = 30;
    spec.p_step_db = 2;
    return spec;
}

} // namespace

TEST_CASE("power grid")
{
    SweepSpec spec = reference_spec();
    const auto g = spec.grid();
    REQUIRE(g.size() == 8);
    CHECK(g.front() == 15);
    CHECK(g.back() == 29);
    spec.p_end_dbm = 29;
    CHECK(spec.grid().size() == 8);
}

TEST_CASE("invalid sweep specs")
{
    SweepSpec spec = reference_spec();
    spec.precoders.clear();
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = reference_spec();
    spec.p_step_db = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = reference_spec();
    spec.p_end_dbm = 10;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = reference_spec();
    spec.alpha = 1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("reference sweep table")
{
    const Scenario sc = load_scenario_file(testing::source_path("data/case1.json"));
    const SweepResult res = run_sweep(sc, reference_spec());
    CHECK(res.exit_code == 0);
    REQUIRE(res.rows.size() == 16);
    for (std::size_t i = 0; i < res.rows.size(); i += 2)
    {
        const SweepRow &zf = res.rows[i];
        const SweepRow &olp = res.rows[i + 1];
        CHECK(zf.precoder == PrecoderKind::Zf);
        CHECK(olp.precoder == PrecoderKind::Olp);
        CHECK(zf.p_dbm == olp.p_dbm);
        CHECK(zf.audit_pass);
        CHECK(olp.audit_pass);
        CHECK(olp.min_sinr >= zf.min_sinr * (1 - 1e-6));
        if (i > 0)
        {
            CHECK(zf.rate_per_ue >= res.rows[i - 2].rate_per_ue);
            CHECK(olp.rate_per_ue >= res.rows[i - 1].rate_per_ue);
        }
    }
    CHECK(res.warnings.empty());

    const auto csv = lines(format_csv(res, false));
    REQUIRE(csv.size() == 17);
    CHECK(csv[0] == "p_dbm,precoder,min_sinr,rate_per_ue_bps,sinr_1,sinr_2,sinr_3,sinr_4,probes,iters,wall_ms");
    CHECK(csv[1].rfind("15,zf,", 0) == 0);
    CHECK(csv[2].rfind("15,olp,", 0) == 0);
    CHECK(csv[1].back() == ',');

    const auto trace = lines(res.trace);
    REQUIRE(trace.size() > 1);
    CHECK(trace[0] == kTraceHeader);
}

TEST_CASE("sweep output is independent of the thread count")
{
    const Scenario sc = load_scenario_file(testing::source_path("data/case2.json"));
    SweepSpec spec = reference_spec();
    spec.p_end_dbm = 21;
    spec.threads = 1;
    const SweepResult a = run_sweep(sc, spec);
    spec.threads = 4;
    const SweepResult b = run_sweep(sc, spec);
    CHECK(format_csv(a, false) == format_csv(b, false));
    CHECK(a.trace == b.trace);
}

TEST_CASE("unreachable receiver aborts the sweep")
{
    Scenario sc = load_scenario_file(testing::source_path("data/case1.json"));
    sc.receivers[2].position = {0.05, 4.95, 2.9};
    CHECK_THROWS_AS(run_sweep(sc, reference_spec()), DegenerateUeError);
}

TEST_CASE("random receivers are reproducible and reachable")
{
    const Scenario sc = load_scenario_file(testing::source_path("data/case1.json"));
    const Scenario a = with_random_receivers(sc, 3, 42, 2.15);
    const Scenario b = with_random_receivers(sc, 3, 42, 2.15);
    const Scenario c = with_random_receivers(sc, 3, 43, 2.15);
    REQUIRE(a.num_receivers() == 3);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(a.receivers[k].position == b.receivers[k].position);
    CHECK(a.receivers[0].position != c.receivers[0].position);
    CHECK_NOTHROW(build_channel(a));
}

TEST_CASE("fixed p_max overrides the offset")
{
    const Scenario sc = load_scenario_file(testing::source_path("data/case1.json"));
    SweepSpec spec = reference_spec();
    spec.p_start_dbm = spec.p_end_dbm = 20;
    spec.precoders = {PrecoderKind::Zf};
    spec.p_max_dbm = 22.0;
    const SweepResult tight = run_sweep(sc, spec);
    spec.p_max_dbm.reset();
    const SweepResult loose = run_sweep(sc, spec);
    REQUIRE(tight.rows.size() == 1);
    CHECK(tight.rows[0].min_sinr < loose.rows[0].min_sinr);
}
