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

#include "protolite/hierarchy.h"

#include <algorithm>
#include <set>

namespace protolite {

Hierarchy::Hierarchy(const Program& program) : program_(&program) {
  for (const ClassDef& c : program.classes) {
    // First declaration wins; duplicates are a validation error.
    by_name_.emplace(c.name, &c);
  }
}

bool Hierarchy::Contains(std::string_view name) const {
  return name == kObjectClass || by_name_.count(name) > 0;
}

const ClassDef* Hierarchy::Find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const ClassDef& Hierarchy::Get(std::string_view name) const {
  const ClassDef* c = Find(name);
  if (c == nullptr) throw UnknownClassError(name);
  return *c;
}

void Hierarchy::CheckKnown(std::string_view name) const {
  if (!Contains(name)) throw UnknownClassError(name);
}

bool Hierarchy::DirectSubclass(std::string_view c,
                               std::string_view parent) const {
  CheckKnown(c);
  CheckKnown(parent);
  if (c == kObjectClass) return false;
  return Get(c).superclass == parent;
}

bool Hierarchy::SubclassOf(std::string_view c,
                           std::string_view ancestor) const {
  CheckKnown(c);
  CheckKnown(ancestor);
  if (c == ancestor || ancestor == kObjectClass) return true;
  for (const ClassDef* k : Chain(c)) {
    if (k->name == ancestor) return true;
  }
  return false;
}

bool Hierarchy::DefinesPublic(std::string_view c,
                              std::string_view selector) const {
  CheckKnown(c);
  const MethodDef* m =
      c == kObjectClass ? nullptr : Get(c).FindMethod(selector);
  return m != nullptr && m->visibility == Visibility::kPublic;
}

bool Hierarchy::DefinesProtected(std::string_view c,
                                 std::string_view selector) const {
  CheckKnown(c);
  const MethodDef* m =
      c == kObjectClass ? nullptr : Get(c).FindMethod(selector);
  return m != nullptr && m->visibility == Visibility::kProtected;
}

std::vector<std::string> Hierarchy::FieldsOf(std::string_view c) const {
  CheckKnown(c);
  std::vector<const ClassDef*> chain = Chain(c);
  std::vector<std::string> fields;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    for (const std::string& f : (*it)->fields) {
      if (std::find(fields.begin(), fields.end(), f) == fields.end()) {
        fields.push_back(f);
      }
    }
  }
  return fields;
}

std::optional<std::string> Hierarchy::Superclass(std::string_view c) const {
  CheckKnown(c);
  if (c == kObjectClass) return std::nullopt;
  return Get(c).superclass;
}

std::vector<const ClassDef*> Hierarchy::Chain(std::string_view c) const {
  std::vector<const ClassDef*> chain;
  std::set<const ClassDef*> seen;
  const ClassDef* cur = Find(c);
  while (cur != nullptr && seen.insert(cur).second) {
    chain.push_back(cur);
    cur = Find(cur->superclass);
  }
  return chain;
}

std::vector<const ClassDef*> Hierarchy::StrictDescendants(
    std::string_view c) const {
  CheckKnown(c);
  std::vector<const ClassDef*> out;
  for (const ClassDef& k : program_->classes) {
    if (Find(k.name) != &k || k.name == c) continue;
    std::vector<const ClassDef*> chain = Chain(k.name);
    if (c == kObjectClass ||
        std::any_of(chain.begin(), chain.end(),
                    [&](const ClassDef* a) { return a->name == c; })) {
      out.push_back(&k);
    }
  }
  return out;
}

std::optional<FoundMethod> Hierarchy::ClosestDefinition(
    std::string_view start, std::string_view selector) const {
  CheckKnown(start);
  for (const ClassDef* c : Chain(start)) {
    if (const MethodDef* m = c->FindMethod(selector)) {
      return FoundMethod{c, m};
    }
  }
  return std::nullopt;
}

std::optional<FoundMethod> Hierarchy::ClosestPublic(
    std::string_view start, std::string_view selector) const {
  CheckKnown(start);
  for (const ClassDef* c : Chain(start)) {
    const MethodDef* m = c->FindMethod(selector);
    if (m != nullptr && m->visibility == Visibility::kPublic) {
      return FoundMethod{c, m};
    }
  }
  return std::nullopt;
}

bool Hierarchy::DefinedAnywhere(std::string_view selector) const {
  return std::any_of(
      program_->classes.begin(), program_->classes.end(),
      [&](const ClassDef& c) { return c.FindMethod(selector) != nullptr; });
}

}  // namespace protolite
