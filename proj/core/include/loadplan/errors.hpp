// Copyright 2026 The loadplan Authors
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

#ifndef LOADPLAN_ERRORS_HPP_
#define LOADPLAN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace loadplan {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A query or footprint falls outside a grid or lattice.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary or text input.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace loadplan

#endif  // LOADPLAN_ERRORS_HPP_
