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

// Small-step reference evaluator. Visibility is decided at each send by the
// syntactic kind of the send: object-sends see public methods only, self-
// and super-sends see every method and take the closest definition. This is
// the oracle the compiled runtime is tested against; it favours clarity
// over speed.

#ifndef PROTOLITE_REFERENCE_H_
#define PROTOLITE_REFERENCE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "protolite/ast.h"
#include "protolite/hierarchy.h"
#include "protolite/outcome.h"

namespace protolite::reference {

struct Redex;
using RedexPtr = std::shared_ptr<const Redex>;

struct ValRedex {
  Value value;
};
struct NewRedex {
  std::string class_name;
};
struct VarRedex {
  std::string name;
};
// o.f
struct FieldGetRedex {
  Value owner;
  std::string field;
};
// o.f = ε
struct FieldSetRedex {
  Value owner;
  std::string field;
  RedexPtr value;
};
// ε.m(ε*)
struct ObjectSendRedex {
  RedexPtr receiver;
  std::string selector;
  std::vector<RedexPtr> args;
};
// self⟨o, c⟩.m(ε*) and super⟨o, c⟩.m(ε*): `defining_class` is the class
// of the method whose body contained the send.
struct SelfSendRedex {
  Value owner;
  std::string defining_class;
  std::string selector;
  std::vector<RedexPtr> args;
};
struct SuperSendRedex {
  Value owner;
  std::string defining_class;
  std::string selector;
  std::vector<RedexPtr> args;
};
struct LetRedex {
  std::string var;
  RedexPtr bound;
  RedexPtr body;
};

struct Redex {
  using Node = std::variant<ValRedex, NewRedex, VarRedex, FieldGetRedex,
                            FieldSetRedex, ObjectSendRedex, SelfSendRedex,
                            SuperSendRedex, LetRedex>;
  Node node;
};

RedexPtr MakeVal(Value v);
bool IsValue(const Redex& r);

struct ObjectRecord {
  std::string class_name;
  std::map<std::string, Value> fields;
};

// oid → object. Object ids start at 1 and are never reused.
class Store {
 public:
  Value Allocate(std::string class_name,
                 const std::vector<std::string>& field_names);
  const ObjectRecord& Get(Value oid) const;
  ObjectRecord& Get(Value oid);
  bool Contains(Value oid) const;
  std::size_t size() const { return objects_.size(); }
  const std::map<std::uint64_t, ObjectRecord>& objects() const {
    return objects_;
  }

 private:
  std::map<std::uint64_t, ObjectRecord> objects_;
  std::uint64_t next_oid_ = 1;
};

// Thrown by Translate for a field that is not visible in the class.
class TranslateError : public std::runtime_error {
 public:
  explicit TranslateError(StuckReason reason);
  const StuckReason& reason() const { return reason_; }

 private:
  StuckReason reason_;
};

// owner[[e]]defining_class: binds `self` to the owner, decorates field
// accesses with the owner, and annotates self- and super-sends with the
// owner and defining class.
RedexPtr Translate(const Expr& e, Value owner, std::string_view defining_class,
                   const Hierarchy& h);

// e[v/x]; a `let x` rebinding x shadows it in its body.
ExprPtr Substitute(const ExprPtr& e, Value v, std::string_view x);

// The same substitution over redexes, used by the let rule.
RedexPtr SubstituteRedex(const RedexPtr& r, Value v, std::string_view x);

struct StepResult {
  enum class Kind : std::uint8_t { kReduced, kStuck, kNormal };
  Kind kind = Kind::kNormal;
  RedexPtr next;
  StuckReason reason;
};

// One leftmost reduction. Mutates `store` on [new] and [set].
StepResult Step(const RedexPtr& r, Store& store, const Hierarchy& h);

using TraceFn = std::function<void(std::uint64_t step, const Redex& r)>;

// Evaluates nil[[main]]Object until a value, a stuck state, or `fuel`
// reductions. Never throws for run-time errors.
Outcome EvalProgram(const Program& p, std::uint64_t fuel = kDefaultFuel,
                    const TraceFn& trace = nullptr);

std::string PrintRedex(const Redex& r);

}  // namespace protolite::reference

#endif  // PROTOLITE_REFERENCE_H_
