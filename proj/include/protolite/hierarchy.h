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

#ifndef PROTOLITE_HIERARCHY_H_
#define PROTOLITE_HIERARCHY_H_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "protolite/ast.h"

namespace protolite {

class UnknownClassError : public std::runtime_error {
 public:
  explicit UnknownClassError(std::string_view name)
      : std::runtime_error("unknown class '" + std::string(name) + "'"),
        name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// A method found by walking up the superclass chain.
struct FoundMethod {
  const ClassDef* owner = nullptr;
  const MethodDef* method = nullptr;
};

// Class relations of a program: subclassing, field and method membership,
// and closest-definition lookups. Holds pointers into the program, which
// must outlive it. Tolerates invalid hierarchies (cycles, missing parents)
// so the validator can use it; lookups stop at the first repeated class.
class Hierarchy {
 public:
  explicit Hierarchy(const Program& program);

  const Program& program() const { return *program_; }

  // True for declared classes and for Object.
  bool Contains(std::string_view name) const;
  const ClassDef* Find(std::string_view name) const;
  const ClassDef& Get(std::string_view name) const;

  // c ≺ c′: `c` is declared to extend `parent`.
  bool DirectSubclass(std::string_view c, std::string_view parent) const;
  // c ≤ c′: reflexive-transitive closure of DirectSubclass.
  bool SubclassOf(std::string_view c, std::string_view ancestor) const;
  bool DefinesPublic(std::string_view c, std::string_view selector) const;
  bool DefinesProtected(std::string_view c, std::string_view selector) const;
  // All fields visible in `c`, inherited first, in declaration order.
  std::vector<std::string> FieldsOf(std::string_view c) const;

  // Superclass name; nullopt for Object.
  std::optional<std::string> Superclass(std::string_view c) const;
  // Declared classes from `c` upward, excluding Object.
  std::vector<const ClassDef*> Chain(std::string_view c) const;
  // Every declared class c′ with c′ ≤ c and c′ ≠ c, in declaration order.
  std::vector<const ClassDef*> StrictDescendants(std::string_view c) const;

  // Closest definition of `selector` from `start` upward, any visibility.
  std::optional<FoundMethod> ClosestDefinition(std::string_view start,
                                               std::string_view selector) const;
  // Closest public definition from `start` upward.
  std::optional<FoundMethod> ClosestPublic(std::string_view start,
                                           std::string_view selector) const;
  // True if any declared class defines `selector`.
  bool DefinedAnywhere(std::string_view selector) const;

 private:
  void CheckKnown(std::string_view name) const;

  const Program* program_;
  std::map<std::string, const ClassDef*, std::less<>> by_name_;
};

}  // namespace protolite

#endif  // PROTOLITE_HIERARCHY_H_
