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

#ifndef PROTOLITE_VALIDATE_H_
#define PROTOLITE_VALIDATE_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "protolite/ast.h"

namespace protolite {

// Well-formedness rules, in the order they are checked and reported.
enum class Rule {
  kClassesOnce,
  kFieldOncePerClass,
  kFieldsUniquelyDefined,
  kMethodOncePerClass,
  kCompleteClasses,
  kWellFoundedClasses,
  kClassMethodsOk,
  kOverridingPublicMethod,
  kOverridingProtectedMethod,
  kDistinctParameters,
  kReservedName,
};

// Upper-case rule name, e.g. "OVERRIDINGPUBLICMETHOD".
std::string_view RuleName(Rule rule);

struct Violation {
  Rule rule;
  std::string class_name;
  std::string member;  // field, selector, or superclass; may be empty
  std::string message;

  std::string ToString() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Violations sorted by (rule, class, member, message); empty means valid.
using ValidationReport = std::vector<Violation>;

ValidationReport Validate(const Program& p);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Throws ValidationError when Validate(p) is not empty.
void RequireValid(const Program& p);

}  // namespace protolite

#endif  // PROTOLITE_VALIDATE_H_
