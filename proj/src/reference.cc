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

#include "protolite/reference.h"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

namespace protolite::reference {

namespace {

RedexPtr Make(Redex::Node node) {
  return std::make_shared<const Redex>(Redex{std::move(node)});
}

struct Stuck {
  StuckReason reason;
};

}  // namespace

RedexPtr MakeVal(Value v) { return Make(ValRedex{v}); }

bool IsValue(const Redex& r) {
  return std::holds_alternative<ValRedex>(r.node);
}

Value Store::Allocate(std::string class_name,
                      const std::vector<std::string>& field_names) {
  ObjectRecord rec{std::move(class_name), {}};
  for (const std::string& f : field_names) rec.fields.emplace(f, Value::Nil());
  std::uint64_t oid = next_oid_++;
  objects_.emplace(oid, std::move(rec));
  return Value::Oid(oid);
}

const ObjectRecord& Store::Get(Value oid) const {
  return objects_.at(oid.oid());
}

ObjectRecord& Store::Get(Value oid) { return objects_.at(oid.oid()); }

bool Store::Contains(Value oid) const {
  return oid.is_oid() && objects_.count(oid.oid()) > 0;
}

TranslateError::TranslateError(StuckReason reason)
    : std::runtime_error(reason.ToString()), reason_(std::move(reason)) {}

namespace {

class Translator {
 public:
  Translator(Value owner, std::string_view cls, const Hierarchy& h)
      : owner_(owner), cls_(cls), fields_(h.FieldsOf(cls)) {}

  RedexPtr Run(const Expr& e) const {
    return std::visit(
        [&](const auto& n) -> RedexPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NewExpr>) {
            return Make(NewRedex{n.class_name});
          } else if constexpr (std::is_same_v<T, VarExpr>) {
            return Make(VarRedex{n.name});
          } else if constexpr (std::is_same_v<T, SelfExpr>) {
            return MakeVal(owner_);
          } else if constexpr (std::is_same_v<T, LiteralExpr>) {
            return MakeVal(n.value);
          } else if constexpr (std::is_same_v<T, FieldGetExpr>) {
            CheckField(n.field);
            return Make(FieldGetRedex{owner_, n.field});
          } else if constexpr (std::is_same_v<T, FieldSetExpr>) {
            CheckField(n.field);
            return Make(FieldSetRedex{owner_, n.field, Run(*n.value)});
          } else if constexpr (std::is_same_v<T, SendExpr>) {
            if (IsSelfSend(n)) {
              return Make(SelfSendRedex{owner_, cls_, n.selector, All(n.args)});
            }
            return Make(ObjectSendRedex{Run(*n.receiver), n.selector,
                                        All(n.args)});
          } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
            return Make(SuperSendRedex{owner_, cls_, n.selector, All(n.args)});
          } else {
            return Make(LetRedex{n.var, Run(*n.bound), Run(*n.body)});
          }
        },
        e.node);
  }

 private:
  void CheckField(const std::string& f) const {
    if (std::find(fields_.begin(), fields_.end(), f) == fields_.end()) {
      throw TranslateError(StuckReason::UnknownField(cls_, f));
    }
  }
  std::vector<RedexPtr> All(const std::vector<ExprPtr>& es) const {
    std::vector<RedexPtr> out;
    out.reserve(es.size());
    for (const ExprPtr& e : es) out.push_back(Run(*e));
    return out;
  }

  Value owner_;
  std::string cls_;
  std::vector<std::string> fields_;
};

std::vector<ExprPtr> SubstituteAll(const std::vector<ExprPtr>& es, Value v,
                                   std::string_view x) {
  std::vector<ExprPtr> out;
  out.reserve(es.size());
  for (const ExprPtr& e : es) out.push_back(Substitute(e, v, x));
  return out;
}

std::vector<RedexPtr> SubstituteRedexAll(const std::vector<RedexPtr>& rs,
                                         Value v, std::string_view x) {
  std::vector<RedexPtr> out;
  out.reserve(rs.size());
  for (const RedexPtr& r : rs) out.push_back(SubstituteRedex(r, v, x));
  return out;
}

}  // namespace

RedexPtr Translate(const Expr& e, Value owner, std::string_view defining_class,
                   const Hierarchy& h) {
  return Translator(owner, defining_class, h).Run(e);
}

ExprPtr Substitute(const ExprPtr& e, Value v, std::string_view x) {
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarExpr>) {
          return n.name == x ? MakeLiteral(v, e->pos) : e;
        } else if constexpr (std::is_same_v<T, FieldSetExpr>) {
          return MakeFieldSet(n.field, Substitute(n.value, v, x), e->pos);
        } else if constexpr (std::is_same_v<T, SendExpr>) {
          return MakeSend(Substitute(n.receiver, v, x), n.selector,
                          SubstituteAll(n.args, v, x), e->pos);
        } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
          return MakeSuperSend(n.selector, SubstituteAll(n.args, v, x), e->pos);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          ExprPtr bound = Substitute(n.bound, v, x);
          ExprPtr body = n.var == x ? n.body : Substitute(n.body, v, x);
          return MakeLet(n.var, std::move(bound), std::move(body), e->pos);
        } else {
          // new, self, literals and field reads contain no variables.
          return e;
        }
      },
      e->node);
}

RedexPtr SubstituteRedex(const RedexPtr& r, Value v, std::string_view x) {
  return std::visit(
      [&](const auto& n) -> RedexPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarRedex>) {
          return n.name == x ? MakeVal(v) : r;
        } else if constexpr (std::is_same_v<T, FieldSetRedex>) {
          return Make(
              FieldSetRedex{n.owner, n.field, SubstituteRedex(n.value, v, x)});
        } else if constexpr (std::is_same_v<T, ObjectSendRedex>) {
          return Make(ObjectSendRedex{SubstituteRedex(n.receiver, v, x),
                                      n.selector,
                                      SubstituteRedexAll(n.args, v, x)});
        } else if constexpr (std::is_same_v<T, SelfSendRedex>) {
          return Make(SelfSendRedex{n.owner, n.defining_class, n.selector,
                                    SubstituteRedexAll(n.args, v, x)});
        } else if constexpr (std::is_same_v<T, SuperSendRedex>) {
          return Make(SuperSendRedex{n.owner, n.defining_class, n.selector,
                                     SubstituteRedexAll(n.args, v, x)});
        } else if constexpr (std::is_same_v<T, LetRedex>) {
          RedexPtr bound = SubstituteRedex(n.bound, v, x);
          RedexPtr body = n.var == x ? n.body : SubstituteRedex(n.body, v, x);
          return Make(LetRedex{n.var, std::move(bound), std::move(body)});
        } else {
          return r;
        }
      },
      r->node);
}

namespace {

class Reducer {
 public:
  Reducer(Store& store, const Hierarchy& h) : store_(store), h_(h) {}

  // Reduces the leftmost redex inside `r`, which must not be a value.
  // Throws Stuck.
  RedexPtr Reduce(const RedexPtr& r) {
    return std::visit([&](const auto& n) { return ReduceNode(n); }, r->node);
  }

 private:
  RedexPtr ReduceNode(const ValRedex&) {
    throw std::logic_error("no reduction applies to a value");
  }

  // [new]
  RedexPtr ReduceNode(const NewRedex& n) {
    if (n.class_name == kObjectClass) {
      return MakeVal(store_.Allocate(n.class_name, {}));
    }
    if (!h_.Contains(n.class_name)) {
      throw Stuck{StuckReason::UnknownClass(n.class_name)};
    }
    return MakeVal(store_.Allocate(n.class_name, h_.FieldsOf(n.class_name)));
  }

  RedexPtr ReduceNode(const VarRedex& n) {
    throw Stuck{StuckReason::UnknownVariable(n.name)};
  }

  // [get]
  RedexPtr ReduceNode(const FieldGetRedex& n) {
    return MakeVal(FieldsOf(n.owner, n.field).at(n.field));
  }

  // E = o.f = E, then [set]
  RedexPtr ReduceNode(const FieldSetRedex& n) {
    if (!IsValue(*n.value)) {
      return Make(FieldSetRedex{n.owner, n.field, Reduce(n.value)});
    }
    Value v = std::get<ValRedex>(n.value->node).value;
    FieldsOf(n.owner, n.field)[n.field] = v;
    return MakeVal(v);
  }

  // E = E.m(ε*) | o.m(v* E ε*), then [object-send]
  RedexPtr ReduceNode(const ObjectSendRedex& n) {
    if (!IsValue(*n.receiver)) {
      return Make(ObjectSendRedex{Reduce(n.receiver), n.selector, n.args});
    }
    if (auto args = ReduceArgs(n.args)) {
      return Make(ObjectSendRedex{n.receiver, n.selector, std::move(*args)});
    }
    Value recv = std::get<ValRedex>(n.receiver->node).value;
    std::vector<Value> args = ArgValues(n.args);
    if (recv.is_int()) return Primitive(recv, n.selector, args);
    if (recv.is_nil()) throw Stuck{StuckReason::NilReceiver(n.selector)};
    const std::string& cls = store_.Get(recv).class_name;
    std::optional<FoundMethod> found = h_.Contains(cls)
                                           ? h_.ClosestPublic(cls, n.selector)
                                           : std::nullopt;
    if (!found) throw Stuck{StuckReason::DoesNotUnderstand(cls, n.selector)};
    return Activate(recv, cls, *found, args);
  }

  // self⟨o, c⟩.m(v* E ε*), then [self-send]: closest definition from the
  // receiver's class, public or protected.
  RedexPtr ReduceNode(const SelfSendRedex& n) {
    if (auto args = ReduceArgs(n.args)) {
      return Make(SelfSendRedex{n.owner, n.defining_class, n.selector,
                                std::move(*args)});
    }
    std::vector<Value> args = ArgValues(n.args);
    if (n.owner.is_int()) return Primitive(n.owner, n.selector, args);
    if (n.owner.is_nil()) throw Stuck{StuckReason::NilReceiver(n.selector)};
    const std::string& cls = store_.Get(n.owner).class_name;
    std::optional<FoundMethod> found =
        h_.Contains(cls) ? h_.ClosestDefinition(cls, n.selector)
                         : std::nullopt;
    if (!found) throw Stuck{StuckReason::DoesNotUnderstand(cls, n.selector)};
    return Activate(n.owner, cls, *found, args);
  }

  // super⟨o, c⟩.m(v* E ε*), then [super-send]: closest definition from
  // the strict superclass of c, public or protected.
  RedexPtr ReduceNode(const SuperSendRedex& n) {
    if (auto args = ReduceArgs(n.args)) {
      return Make(SuperSendRedex{n.owner, n.defining_class, n.selector,
                                 std::move(*args)});
    }
    std::vector<Value> args = ArgValues(n.args);
    if (n.owner.is_nil()) throw Stuck{StuckReason::NilReceiver(n.selector)};
    const std::string& cls = store_.Get(n.owner).class_name;
    std::optional<std::string> start = h_.Superclass(n.defining_class);
    std::optional<FoundMethod> found;
    if (start && *start != kObjectClass && h_.Contains(*start)) {
      found = h_.ClosestDefinition(*start, n.selector);
    }
    if (!found) throw Stuck{StuckReason::DoesNotUnderstand(cls, n.selector)};
    return Activate(n.owner, cls, *found, args);
  }

  // let x = E in ε, then [let]
  RedexPtr ReduceNode(const LetRedex& n) {
    if (!IsValue(*n.bound)) {
      return Make(LetRedex{n.var, Reduce(n.bound), n.body});
    }
    return SubstituteRedex(n.body, std::get<ValRedex>(n.bound->node).value,
                           n.var);
  }

  // Reduces the leftmost non-value argument, or returns nullopt when all
  // arguments are values.
  std::optional<std::vector<RedexPtr>> ReduceArgs(
      const std::vector<RedexPtr>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!IsValue(*args[i])) {
        std::vector<RedexPtr> out = args;
        out[i] = Reduce(args[i]);
        return out;
      }
    }
    return std::nullopt;
  }

  static std::vector<Value> ArgValues(const std::vector<RedexPtr>& args) {
    std::vector<Value> out;
    out.reserve(args.size());
    for (const RedexPtr& a : args) {
      out.push_back(std::get<ValRedex>(a->node).value);
    }
    return out;
  }

  static RedexPtr Primitive(Value recv, const std::string& selector,
                            const std::vector<Value>& args) {
    if (selector != kPlusSelector) {
      throw Stuck{
          StuckReason::DoesNotUnderstand(std::string(kIntegerClass), selector)};
    }
    if (args.size() != 1) {
      throw Stuck{StuckReason::ArityMismatch(std::string(kIntegerClass),
                                             selector, 1, args.size())};
    }
    if (!args[0].is_int()) throw Stuck{StuckReason::BadOperand(selector)};
    return MakeVal(
        Value::Int(WrappingAdd(recv.int_value(), args[0].int_value())));
  }

  // Parameter substitution, then owner[[body]]found_class.
  RedexPtr Activate(Value receiver, const std::string& receiver_class,
                    const FoundMethod& found, const std::vector<Value>& args) {
    const MethodDef& m = *found.method;
    if (m.params.size() != args.size()) {
      throw Stuck{StuckReason::ArityMismatch(receiver_class, m.selector,
                                             m.params.size(), args.size())};
    }
    ExprPtr body = m.body;
    for (std::size_t i = 0; i < args.size(); ++i) {
      body = Substitute(body, args[i], m.params[i]);
    }
    try {
      return Translate(*body, receiver, found.owner->name, h_);
    } catch (const TranslateError& e) {
      throw Stuck{e.reason()};
    }
  }

  std::map<std::string, Value>& FieldsOf(Value owner, const std::string& f) {
    if (!store_.Contains(owner)) {
      throw Stuck{StuckReason::UnknownField(std::string(kObjectClass), f)};
    }
    ObjectRecord& rec = store_.Get(owner);
    if (rec.fields.count(f) == 0) {
      throw Stuck{StuckReason::UnknownField(rec.class_name, f)};
    }
    return rec.fields;
  }

  Store& store_;
  const Hierarchy& h_;
};

}  // namespace

StepResult Step(const RedexPtr& r, Store& store, const Hierarchy& h) {
  if (IsValue(*r)) return {StepResult::Kind::kNormal, r, {}};
  try {
    return {StepResult::Kind::kReduced, Reducer(store, h).Reduce(r), {}};
  } catch (const Stuck& s) {
    return {StepResult::Kind::kStuck, r, s.reason};
  }
}

Outcome EvalProgram(const Program& p, std::uint64_t fuel,
                    const TraceFn& trace) {
  Hierarchy h(p);
  RedexPtr r;
  try {
    r = Translate(*p.main, Value::Nil(), kObjectClass, h);
  } catch (const TranslateError& e) {
    return Outcome::OfError(e.reason(), 0);
  }
  Store store;
  std::uint64_t steps = 0;
  for (;;) {
    if (IsValue(*r)) {
      return Outcome::OfValue(std::get<ValRedex>(r->node).value, steps);
    }
    if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
    if (trace) trace(steps, *r);
    StepResult s = Step(r, store, h);
    if (s.kind == StepResult::Kind::kStuck) {
      return Outcome::OfError(std::move(s.reason), steps);
    }
    r = std::move(s.next);
    ++steps;
  }
}

namespace {

void PrintArgs(std::ostream& out, const std::vector<RedexPtr>& args) {
  out << "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out << ", ";
    out << PrintRedex(*args[i]);
  }
  out << ")";
}

}  // namespace

std::string PrintRedex(const Redex& r) {
  std::ostringstream out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ValRedex>) {
          out << n.value.ToString();
        } else if constexpr (std::is_same_v<T, NewRedex>) {
          out << "new " << n.class_name;
        } else if constexpr (std::is_same_v<T, VarRedex>) {
          out << n.name;
        } else if constexpr (std::is_same_v<T, FieldGetRedex>) {
          out << n.owner.ToString() << "." << n.field;
        } else if constexpr (std::is_same_v<T, FieldSetRedex>) {
          out << n.owner.ToString() << "." << n.field << " = "
              << PrintRedex(*n.value);
        } else if constexpr (std::is_same_v<T, ObjectSendRedex>) {
          out << "(" << PrintRedex(*n.receiver) << ")." << n.selector;
          PrintArgs(out, n.args);
        } else if constexpr (std::is_same_v<T, SelfSendRedex>) {
          out << "self<" << n.owner.ToString() << ", " << n.defining_class
              << ">." << n.selector;
          PrintArgs(out, n.args);
        } else if constexpr (std::is_same_v<T, SuperSendRedex>) {
          out << "super<" << n.owner.ToString() << ", " << n.defining_class
              << ">." << n.selector;
          PrintArgs(out, n.args);
        } else {
          out << "let " << n.var << " = " << PrintRedex(*n.bound) << " in "
              << PrintRedex(*n.body);
        }
      },
      r.node);
  return out.str();
}

}  // namespace protolite::reference
