// Copyright 2026 The quasidecay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QUASIDECAY_ERRORS_HPP
#define QUASIDECAY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quasidecay {

// Every failure raised by the library derives from Error, so callers (and the
// C boundary) can map it onto a status code without string matching.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid physical inputs: non-finite values, Δ <= 0, g < 0.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Argument outside an operation's domain: negative time, α outside [0, 1),
// unsorted grids, E_b outside the declared band.
class DomainError : public Error {
public:
    using Error::Error;
};

// Quadrature non-convergence, eigensolver failure, orthogonality loss.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Curve analysis preconditions (grid density, fit windows).
class AnalysisError : public Error {
public:
    using Error::Error;
};

}  // namespace quasidecay

#endif  // QUASIDECAY_ERRORS_HPP
