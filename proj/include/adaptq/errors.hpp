// Copyright 2026 The adaptq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace adaptq {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A function argument is outside its documented domain (non-finite angle, negative strength, ...).
class ArgumentError : public Error {
   public:
    using Error::Error;
};

/// A state does not satisfy the precondition of a geometric projection.
/// `value` carries the violated quantity.
class DomainError : public Error {
   public:
    DomainError(const std::string &what, double value) : Error(what), value(value) {}
    double value;
};

/// Invalid scheme or experiment configuration; `field` names the offending entry.
class ConfigError : public Error {
   public:
    ConfigError(std::string field, const std::string &what) : Error(field + ": " + what), field(std::move(field)) {}
    std::string field;
};

/// A trajectory left the finite reals. Carries the step index and, when known, the path.
class IntegrationError : public Error {
   public:
    IntegrationError(const std::string &what, std::size_t step, std::uint64_t path_id = kNoPath)
        : Error(what), step(step), path_id(path_id) {}

    static constexpr std::uint64_t kNoPath = ~std::uint64_t{0};
    std::size_t step;
    std::uint64_t path_id;
};

/// The density matrix acquired an eigenvalue below -1e-6 (step too coarse for the measurement rate).
class PositivityError : public IntegrationError {
   public:
    PositivityError(const std::string &what, double min_eigenvalue, std::size_t step = 0,
                    std::uint64_t path_id = kNoPath)
        : IntegrationError(what, step, path_id), min_eigenvalue(min_eigenvalue) {}
    double min_eigenvalue;
};

}  // namespace adaptq
