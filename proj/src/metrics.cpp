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

#include "vlc/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace vlc
{

namespace
{
void check_shapes(const ChannelState &ch, const Eigen::MatrixXd &W)
{
    if (W.rows() != ch.num_leds() || W.cols() != ch.num_ues())
        throw std::invalid_argument("precoder must be M x K to match the channel");
}
} // namespace

Evaluation evaluate(const ChannelState &ch, const Eigen::MatrixXd &W)
{
    check_shapes(ch, W);
    const auto K = ch.num_ues();

    Evaluation ev;
    ev.interference = (ch.H * W).cwiseAbs();
    ev.sinr.resize(K);
    double rate_sum = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double signal = ev.interference(k, k) * ev.interference(k, k);
        double interference = 0.0;
        for (Eigen::Index j = 0; j < K; ++j)
            if (j != k)
                interference += ev.interference(k, j) * ev.interference(k, j);
        const double s2 = ch.sigma(k) * ch.sigma(k);
        ev.sinr(k) = signal / (interference + s2);
        rate_sum += ch.bandwidth * std::log2(1.0 + ev.sinr(k));
    }
    ev.min_sinr = ev.sinr.minCoeff();
    ev.rate_per_ue = rate_sum / static_cast<double>(K);
    ev.row_usage = W.cwiseAbs().rowwise().sum();
    ev.budget_ratio = ev.row_usage.cwiseQuotient(ch.budgets);
    return ev;
}

Audit audit(const ChannelState &ch, const Eigen::MatrixXd &W)
{
    check_shapes(ch, W);
    Audit a;
    a.budget_ratio = W.cwiseAbs().rowwise().sum().cwiseQuotient(ch.budgets);
    for (Eigen::Index n = 0; n < a.budget_ratio.size(); ++n)
    {
        if (!(a.budget_ratio(n) <= 1.0 + kAuditTolerance))
        {
            a.pass = false;
            a.violating_rows.push_back(n);
        }
    }
    return a;
}

} // namespace vlc
