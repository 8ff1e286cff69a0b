// Copyright 2026 The Protolite Authors
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

#ifndef PROTOLITE_OUTCOME_H_
#define PROTOLITE_OUTCOME_H_

#include <cstdint>
#include <string>

#include "protolite/ast.h"

namespace protolite {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

// Class name reported for integer receivers.
inline constexpr std::string_view kIntegerClass = "Integer";

// Why evaluation got stuck.
struct StuckReason {
  enum class Kind : std::uint8_t {
    kDoesNotUnderstand,  // class_name, selector
    kNilReceiver,        // selector
    kUnknownVariable,    // name
    kUnknownField,       // class_name, name
    kArityMismatch,      // class_name, selector, detail "expected/got"
    kBadOperand,         // selector
    kUnknownClass,       // class_name
  };

  Kind kind = Kind::kDoesNotUnderstand;
  std::string class_name;
  std::string name;  // selector, variable, or field
  std::string detail;

  static StuckReason DoesNotUnderstand(std::string cls, std::string selector);
  static StuckReason NilReceiver(std::string selector);
  static StuckReason UnknownVariable(std::string name);
  static StuckReason UnknownField(std::string cls, std::string field);
  static StuckReason ArityMismatch(std::string cls, std::string selector,
                                   std::size_t expected, std::size_t got);
  static StuckReason BadOperand(std::string selector);
  static StuckReason UnknownClass(std::string cls);

  // e.g. "DoesNotUnderstand(A, protectedMethod)".
  std::string ToString() const;
  std::string_view KindName() const;

  friend bool operator==(const StuckReason&, const StuckReason&) = default;
};

// Result of evaluating a program. Equality ignores the step count.
struct Outcome {
  enum class Kind : std::uint8_t { kValue, kRuntimeError, kFuelExhausted };

  Kind kind = Kind::kValue;
  Value value;
  StuckReason error;
  std::uint64_t steps = 0;

  static Outcome OfValue(Value v, std::uint64_t steps);
  static Outcome OfError(StuckReason r, std::uint64_t steps);
  static Outcome OfFuelExhausted(std::uint64_t steps);

  std::string ToString() const;

  friend bool operator==(const Outcome& a, const Outcome& b);
};

// Removes the mangling prefix from a selector, if present.
std::string StripManglePrefix(std::string_view selector);

// Equality after stripping mangling prefixes from error selectors.
bool EquivalentOutcomes(const Outcome& a, const Outcome& b);

}  // namespace protolite

#endif  // PROTOLITE_OUTCOME_H_
