// SPDX-License-Identifier: Apache-2.0
//
// capstat - higher-order capacity statistics for MRC diversity receivers
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

#pragma once

#include <stdexcept>
#include <string>

namespace capstat {

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Request is mathematically valid but beyond what the implementation supports
/// (order above the validated range, non-integer m for the sampler, ...).
class capability_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky or LU breakdown; carries the index of the failing pivot.
class factorization_error : public std::runtime_error {
public:
    factorization_error(const std::string &what, std::size_t pivot)
        : std::runtime_error(what), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// An integrand returned a non-finite value.
class evaluation_error : public std::runtime_error {
public:
    evaluation_error(const std::string &what, double abscissa)
        : std::runtime_error(what), abscissa_(abscissa) {}

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

} // namespace capstat
