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

#ifndef PROTOLITE_AST_H_
#define PROTOLITE_AST_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace protolite {

// Name of the built-in root class.
inline constexpr std::string_view kObjectClass = "Object";
// Prefix reserved for mangled selectors.
inline constexpr std::string_view kManglePrefix = "__";
// The only primitive selector, understood by integers.
inline constexpr std::string_view kPlusSelector = "+";

inline bool HasReservedPrefix(std::string_view name) {
  return name.substr(0, kManglePrefix.size()) == kManglePrefix;
}

struct SourcePos {
  int line = 0;
  int column = 0;
};

// A run-time value: nil, an object id, or an integer.
class Value {
 public:
  enum class Kind : std::uint8_t { kNil, kOid, kInt };

  constexpr Value() = default;
  static constexpr Value Nil() { return Value(); }
  static constexpr Value Oid(std::uint64_t id) {
    return Value(Kind::kOid, static_cast<std::int64_t>(id));
  }
  static constexpr Value Int(std::int64_t v) { return Value(Kind::kInt, v); }

  Kind kind() const { return kind_; }
  bool is_nil() const { return kind_ == Kind::kNil; }
  bool is_oid() const { return kind_ == Kind::kOid; }
  bool is_int() const { return kind_ == Kind::kInt; }
  std::uint64_t oid() const { return static_cast<std::uint64_t>(payload_); }
  std::int64_t int_value() const { return payload_; }

  // "nil", "42", or "#3" for object 3.
  std::string ToString() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  constexpr Value(Kind kind, std::int64_t payload)
      : kind_(kind), payload_(payload) {}

  Kind kind_ = Kind::kNil;
  std::int64_t payload_ = 0;
};

// Wrapping 64-bit addition shared by both evaluators.
inline std::int64_t WrappingAdd(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct NewExpr {
  std::string class_name;
};
struct VarExpr {
  std::string name;
};
struct SelfExpr {};
// nil, integer literals, and values substituted for variables.
struct LiteralExpr {
  Value value;
};
struct FieldGetExpr {
  std::string field;
};
struct FieldSetExpr {
  std::string field;
  ExprPtr value;
};
// `receiver.selector(args)`; `a + b` is a send of `+` to `a`.
struct SendExpr {
  ExprPtr receiver;
  std::string selector;
  std::vector<ExprPtr> args;
};
struct SuperSendExpr {
  std::string selector;
  std::vector<ExprPtr> args;
};
struct LetExpr {
  std::string var;
  ExprPtr bound;
  ExprPtr body;
};

struct Expr {
  using Node = std::variant<NewExpr, VarExpr, SelfExpr, LiteralExpr,
                            FieldGetExpr, FieldSetExpr, SendExpr,
                            SuperSendExpr, LetExpr>;
  Node node;
  SourcePos pos;
};

// Node constructors.
ExprPtr MakeNew(std::string class_name, SourcePos pos = {});
ExprPtr MakeVar(std::string name, SourcePos pos = {});
ExprPtr MakeSelf(SourcePos pos = {});
ExprPtr MakeLiteral(Value v, SourcePos pos = {});
ExprPtr MakeNil(SourcePos pos = {});
ExprPtr MakeInt(std::int64_t v, SourcePos pos = {});
ExprPtr MakeFieldGet(std::string field, SourcePos pos = {});
ExprPtr MakeFieldSet(std::string field, ExprPtr value, SourcePos pos = {});
ExprPtr MakeSend(ExprPtr receiver, std::string selector,
                 std::vector<ExprPtr> args, SourcePos pos = {});
ExprPtr MakeSuperSend(std::string selector, std::vector<ExprPtr> args,
                      SourcePos pos = {});
ExprPtr MakeLet(std::string var, ExprPtr bound, ExprPtr body,
                SourcePos pos = {});
ExprPtr MakePlus(ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});

// True for a send whose receiver is syntactically `self`.
bool IsSelfSend(const SendExpr& send);

// Structural equality, ignoring source positions.
bool ExprEquals(const Expr& a, const Expr& b);

enum class Visibility : std::uint8_t { kPublic, kProtected };

std::string_view VisibilityName(Visibility v);

struct MethodDef {
  std::string selector;
  std::vector<std::string> params;
  ExprPtr body;
  Visibility visibility = Visibility::kPublic;
  SourcePos pos;
};

struct ClassDef {
  std::string name;
  std::string superclass{kObjectClass};
  std::vector<std::string> fields;
  std::vector<MethodDef> public_methods;
  std::vector<MethodDef> protected_methods;
  SourcePos pos;

  // Own method with this selector, public or protected.
  const MethodDef* FindMethod(std::string_view selector) const;
  std::size_t method_count() const {
    return public_methods.size() + protected_methods.size();
  }
};

struct Program {
  std::vector<ClassDef> classes;
  ExprPtr main;

  const ClassDef* FindClass(std::string_view name) const;
  ClassDef* FindClass(std::string_view name);
};

bool MethodEquals(const MethodDef& a, const MethodDef& b);
bool ProgramEquals(const Program& a, const Program& b);

}  // namespace protolite

#endif  // PROTOLITE_AST_H_
