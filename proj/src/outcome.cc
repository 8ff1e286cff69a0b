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

#include "protolite/outcome.h"

#include <utility>

namespace protolite {

StuckReason StuckReason::DoesNotUnderstand(std::string cls,
                                           std::string selector) {
  return {Kind::kDoesNotUnderstand, std::move(cls), std::move(selector), ""};
}
StuckReason StuckReason::NilReceiver(std::string selector) {
  return {Kind::kNilReceiver, "", std::move(selector), ""};
}
StuckReason StuckReason::UnknownVariable(std::string name) {
  return {Kind::kUnknownVariable, "", std::move(name), ""};
}
StuckReason StuckReason::UnknownField(std::string cls, std::string field) {
  return {Kind::kUnknownField, std::move(cls), std::move(field), ""};
}
StuckReason StuckReason::ArityMismatch(std::string cls, std::string selector,
                                       std::size_t expected, std::size_t got) {
  return {Kind::kArityMismatch, std::move(cls), std::move(selector),
          "expected " + std::to_string(expected) + " got " +
              std::to_string(got)};
}
StuckReason StuckReason::BadOperand(std::string selector) {
  return {Kind::kBadOperand, std::string(kIntegerClass), std::move(selector),
          "argument is not an integer"};
}

StuckReason StuckReason::UnknownClass(std::string cls) {
  return {Kind::kUnknownClass, std::move(cls), "new", ""};
}

std::string_view StuckReason::KindName() const {
  switch (kind) {
    case Kind::kDoesNotUnderstand: return "DoesNotUnderstand";
    case Kind::kNilReceiver: return "NilReceiver";
    case Kind::kUnknownVariable: return "UnknownVariable";
    case Kind::kUnknownField: return "UnknownField";
    case Kind::kArityMismatch: return "ArityMismatch";
    case Kind::kBadOperand: return "BadOperand";
    case Kind::kUnknownClass: return "UnknownClass";
  }
  return "?";
}

std::string StuckReason::ToString() const {
  std::string s(KindName());
  s += "(";
  if (!class_name.empty()) s += class_name + ", ";
  s += name;
  if (!detail.empty()) s += ", " + detail;
  return s + ")";
}

Outcome Outcome::OfValue(Value v, std::uint64_t steps) {
  Outcome o;
  o.kind = Kind::kValue;
  o.value = v;
  o.steps = steps;
  return o;
}

Outcome Outcome::OfError(StuckReason r, std::uint64_t steps) {
  Outcome o;
  o.kind = Kind::kRuntimeError;
  o.error = std::move(r);
  o.steps = steps;
  return o;
}

Outcome Outcome::OfFuelExhausted(std::uint64_t steps) {
  Outcome o;
  o.kind = Kind::kFuelExhausted;
  o.steps = steps;
  return o;
}

std::string Outcome::ToString() const {
  switch (kind) {
    case Kind::kValue: return value.ToString();
    case Kind::kRuntimeError: return "error: " + error.ToString();
    case Kind::kFuelExhausted:
      return "fuel exhausted after " + std::to_string(steps) + " steps";
  }
  return "?";
}

bool operator==(const Outcome& a, const Outcome& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Outcome::Kind::kValue: return a.value == b.value;
    case Outcome::Kind::kRuntimeError: return a.error == b.error;
    case Outcome::Kind::kFuelExhausted: return true;
  }
  return false;
}

std::string StripManglePrefix(std::string_view selector) {
  if (HasReservedPrefix(selector)) selector.remove_prefix(kManglePrefix.size());
  return std::string(selector);
}

bool EquivalentOutcomes(const Outcome& a, const Outcome& b) {
  if (a.kind != Outcome::Kind::kRuntimeError ||
      b.kind != Outcome::Kind::kRuntimeError) {
    return a == b;
  }
  StuckReason x = a.error;
  StuckReason y = b.error;
  x.name = StripManglePrefix(x.name);
  y.name = StripManglePrefix(y.name);
  return x == y;
}

}  // namespace protolite
