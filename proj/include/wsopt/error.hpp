/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
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

namespace wsopt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A window or window set violates its structural invariants.
class InvalidWindow : public Error {
 public:
  using Error::Error;
};

/// An operation that requires W1 <= W2 was called on a non-covering pair.
class NotCovered : public Error {
 public:
  using Error::Error;
};

/// Exact integer or rational arithmetic left the 63-bit range.
class Overflow : public Error {
 public:
  using Error::Error;
};

/// Sharing was requested for an aggregate that has no bounded sub-aggregate.
class HolisticFunction : public Error {
 public:
  using Error::Error;
};

/// A comparison formula was evaluated outside the range where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Structural violation in a plan DAG or a plan document.
class PlanError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message carries the offending line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Events were delivered out of timestamp order.
class OutOfOrderEvent : public Error {
 public:
  OutOfOrderEvent(unsigned long long ts, unsigned long long previous)
      : Error("event ts " + std::to_string(ts) + " arrived after ts " + std::to_string(previous)),
        ts_(ts) {}
  unsigned long long ts() const { return ts_; }

 private:
  unsigned long long ts_;
};

}  // namespace wsopt
