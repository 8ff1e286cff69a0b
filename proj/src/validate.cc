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

#include "protolite/validate.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

#include "protolite/hierarchy.h"

namespace protolite {

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kClassesOnce: return "CLASSESONCE";
    case Rule::kFieldOncePerClass: return "FIELDONCEPERCLASS";
    case Rule::kFieldsUniquelyDefined: return "FIELDSUNIQUELYDEFINED";
    case Rule::kMethodOncePerClass: return "METHODONCEPERCLASS";
    case Rule::kCompleteClasses: return "COMPLETECLASSES";
    case Rule::kWellFoundedClasses: return "WELLFOUNDEDCLASSES";
    case Rule::kClassMethodsOk: return "CLASSMETHODSOK";
    case Rule::kOverridingPublicMethod: return "OVERRIDINGPUBLICMETHOD";
    case Rule::kOverridingProtectedMethod: return "OVERRIDINGPROTECTEDMETHOD";
    case Rule::kDistinctParameters: return "DISTINCTPARAMETERS";
    case Rule::kReservedName: return "RESERVEDNAME";
  }
  return "?";
}

std::string Violation::ToString() const {
  std::string s(RuleName(rule));
  s += ": ";
  s += class_name;
  if (!member.empty()) s += "." + member;
  s += ": " + message;
  return s;
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(report.empty() ? "invalid program"
                                        : report.front().ToString()),
      report_(std::move(report)) {}

void RequireValid(const Program& p) {
  ValidationReport report = Validate(p);
  if (!report.empty()) throw ValidationError(std::move(report));
}

namespace {

std::vector<const MethodDef*> AllMethods(const ClassDef& c) {
  std::vector<const MethodDef*> out;
  for (const MethodDef& m : c.public_methods) out.push_back(&m);
  for (const MethodDef& m : c.protected_methods) out.push_back(&m);
  return out;
}

// Names in an expression that must not carry the mangling prefix.
void CollectNames(const Expr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarExpr>) {
          out.push_back(n.name);
        } else if constexpr (std::is_same_v<T, FieldSetExpr>) {
          CollectNames(*n.value, out);
        } else if constexpr (std::is_same_v<T, SendExpr>) {
          out.push_back(n.selector);
          CollectNames(*n.receiver, out);
          for (const ExprPtr& a : n.args) CollectNames(*a, out);
        } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
          out.push_back(n.selector);
          for (const ExprPtr& a : n.args) CollectNames(*a, out);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          out.push_back(n.var);
          CollectNames(*n.bound, out);
          CollectNames(*n.body, out);
        }
      },
      e.node);
}

class Validator {
 public:
  explicit Validator(const Program& p) : p_(p), h_(p) {}

  ValidationReport Run() {
    ClassesOnce();
    for (const ClassDef& c : p_.classes) {
      FieldOncePerClass(c);
      FieldsUniquelyDefined(c);
      MethodOncePerClass(c);
      CompleteClasses(c);
      WellFounded(c);
      MethodOverrides(c);
      DistinctParameters(c);
      ReservedNames(c);
    }
    if (p_.main) {
      std::vector<std::string> names;
      CollectNames(*p_.main, names);
      for (const std::string& n : names) {
        if (HasReservedPrefix(n)) {
          Add(Rule::kReservedName, "main", n, "reserved prefix in main");
        }
      }
    }
    std::sort(report_.begin(), report_.end(),
              [](const Violation& a, const Violation& b) {
                return std::tie(a.rule, a.class_name, a.member, a.message) <
                       std::tie(b.rule, b.class_name, b.member, b.message);
              });
    return std::move(report_);
  }

 private:
  void Add(Rule rule, std::string cls, std::string member, std::string msg) {
    report_.push_back(
        {rule, std::move(cls), std::move(member), std::move(msg)});
  }

  void ClassesOnce() {
    for (std::size_t i = 0; i < p_.classes.size(); ++i) {
      const std::string& name = p_.classes[i].name;
      if (name == kObjectClass) {
        Add(Rule::kClassesOnce, name, "", "the root class cannot be redefined");
      }
      for (std::size_t j = i + 1; j < p_.classes.size(); ++j) {
        if (p_.classes[j].name == name) {
          Add(Rule::kClassesOnce, name, "",
              "declared more than once (declarations " + std::to_string(i) +
                  " and " + std::to_string(j) + ")");
        }
      }
    }
  }

  void FieldOncePerClass(const ClassDef& c) {
    std::set<std::string> seen;
    for (const std::string& f : c.fields) {
      if (!seen.insert(f).second) {
        Add(Rule::kFieldOncePerClass, c.name, f, "field declared twice");
      }
    }
  }

  void FieldsUniquelyDefined(const ClassDef& c) {
    std::vector<const ClassDef*> chain = h_.Chain(c.name);
    for (const std::string& f : std::set<std::string>(c.fields.begin(),
                                                      c.fields.end())) {
      for (std::size_t i = 1; i < chain.size(); ++i) {
        const auto& up = chain[i]->fields;
        if (std::find(up.begin(), up.end(), f) != up.end()) {
          Add(Rule::kFieldsUniquelyDefined, c.name, f,
              "field already defined in " + chain[i]->name);
        }
      }
    }
  }

  void MethodOncePerClass(const ClassDef& c) {
    std::set<std::string> seen;
    for (const MethodDef* m : AllMethods(c)) {
      if (!seen.insert(m->selector).second) {
        Add(Rule::kMethodOncePerClass, c.name, m->selector,
            "method declared twice");
      }
    }
  }

  void CompleteClasses(const ClassDef& c) {
    if (!h_.Contains(c.superclass)) {
      Add(Rule::kCompleteClasses, c.name, c.superclass,
          "extends undefined class " + c.superclass);
    }
  }

  void WellFounded(const ClassDef& c) {
    std::set<std::string> seen{c.name};
    const ClassDef* cur = h_.Find(c.superclass);
    while (cur != nullptr) {
      if (cur->name == c.name) {
        Add(Rule::kWellFoundedClasses, c.name, "", "inheritance cycle");
        return;
      }
      if (!seen.insert(cur->name).second) return;  // cycle above c
      cur = h_.Find(cur->superclass);
    }
  }

  void MethodOverrides(const ClassDef& c) {
    std::vector<const ClassDef*> chain = h_.Chain(c.name);
    for (const MethodDef* m : AllMethods(c)) {
      for (std::size_t i = 1; i < chain.size(); ++i) {
        const MethodDef* up = chain[i]->FindMethod(m->selector);
        if (up == nullptr) continue;
        if (up->params.size() != m->params.size()) {
          Add(Rule::kClassMethodsOk, c.name, m->selector,
              "arity " + std::to_string(m->params.size()) +
                  " differs from " + std::to_string(up->params.size()) +
                  " in " + chain[i]->name);
        }
        if (up->visibility == Visibility::kPublic &&
            m->visibility == Visibility::kProtected) {
          Add(Rule::kOverridingPublicMethod, c.name, m->selector,
              "protected method overrides public method of " +
                  chain[i]->name);
        }
        // OVERRIDINGPROTECTEDMETHOD holds by construction: any override of
        // a protected method is either public or protected.
      }
    }
  }

  void DistinctParameters(const ClassDef& c) {
    for (const MethodDef* m : AllMethods(c)) {
      std::set<std::string> seen;
      for (const std::string& x : m->params) {
        if (!seen.insert(x).second) {
          Add(Rule::kDistinctParameters, c.name, m->selector,
              "parameter '" + x + "' repeated");
        }
      }
    }
  }

  void ReservedNames(const ClassDef& c) {
    for (const std::string& f : c.fields) {
      if (HasReservedPrefix(f)) {
        Add(Rule::kReservedName, c.name, f, "reserved prefix in field name");
      }
    }
    for (const MethodDef* m : AllMethods(c)) {
      std::vector<std::string> names{m->selector};
      names.insert(names.end(), m->params.begin(), m->params.end());
      if (m->body) CollectNames(*m->body, names);
      for (const std::string& n : names) {
        if (HasReservedPrefix(n)) {
          Add(Rule::kReservedName, c.name, m->selector,
              "reserved prefix in '" + n + "'");
        }
      }
    }
  }

  const Program& p_;
  Hierarchy h_;
  ValidationReport report_;
};

}  // namespace

ValidationReport Validate(const Program& p) { return Validator(p).Run(); }

}  // namespace protolite
