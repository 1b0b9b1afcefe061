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

#ifndef VLC_ERRORS_HPP
#define VLC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vlc
{

/// Malformed scenario document or a physical invariant that does not hold.
class ScenarioError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Transmitter/receiver placement the line-of-sight model cannot evaluate.
class GeometryError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Noise model whose variance vanishes identically.
class DegenerateNoiseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A receiver that no transmitter reaches; it can never get positive SINR.
class DegenerateUeError : public std::runtime_error
{
public:
    DegenerateUeError(std::size_t ue, const std::string &what)
        : std::runtime_error(what), ue_(ue) {}

    std::size_t ue() const noexcept { return ue_; }

private:
    std::size_t ue_;
};

/// H H^T too close to singular for the zero-forcing inverse.
class IllConditionedError : public std::runtime_error
{
public:
    IllConditionedError(double condition, const std::string &what)
        : std::runtime_error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// The interior-point solver broke down (KKT factorization, lost interiority).
class SolverError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Even the smallest bracketing target is infeasible.
class DegenerateChannelError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The SINR bracketing loop did not terminate.
class BracketError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace vlc

#endif
