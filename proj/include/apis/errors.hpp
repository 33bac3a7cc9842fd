/*
* Copyright (C) 2026 The apis authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace apis {

// Invalid parameter values, bad dimensions, points on a singular boundary.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameter files and command-line key/value input.
class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Step-size underflow or a nonfinite state during time stepping.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Trajectory too short for the requested analysis.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace apis
