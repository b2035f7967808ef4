/*
 Copyright 2026 The flipopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace flipopt {

/// Invalid or inconsistent configuration. `field()` names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A non-finite value appeared during simulation, differentiation or training.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, int index = -1, std::string where = {})
        : std::runtime_error(what), index_(index), where_(std::move(where)) {}

    /// Step, parameter or iteration index where the failure was detected (-1 if unknown).
    int index() const noexcept { return index_; }
    /// Stage or field name, when applicable.
    const std::string& where() const noexcept { return where_; }

private:
    int index_;
    std::string where_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flipopt
