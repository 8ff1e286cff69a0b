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

#include "protolite/ast.h"

#include <algorithm>
#include <utility>

namespace protolite {

std::string Value::ToString() const {
  switch (kind_) {
    case Kind::kNil:
      return "nil";
    case Kind::kOid:
      return "#" + std::to_string(oid());
    case Kind::kInt:
      return std::to_string(payload_);
  }
  return "?";
}

namespace {

ExprPtr Make(Expr::Node node, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{std::move(node), pos});
}

bool ArgsEqual(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const ExprPtr& x, const ExprPtr& y) {
                      return ExprEquals(*x, *y);
                    });
}

bool MethodsEqual(const std::vector<MethodDef>& a,
                  const std::vector<MethodDef>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), MethodEquals);
}

}  // namespace

ExprPtr MakeNew(std::string class_name, SourcePos pos) {
  return Make(NewExpr{std::move(class_name)}, pos);
}
ExprPtr MakeVar(std::string name, SourcePos pos) {
  return Make(VarExpr{std::move(name)}, pos);
}
ExprPtr MakeSelf(SourcePos pos) { return Make(SelfExpr{}, pos); }
ExprPtr MakeLiteral(Value v, SourcePos pos) {
  return Make(LiteralExpr{v}, pos);
}
ExprPtr MakeNil(SourcePos pos) { return MakeLiteral(Value::Nil(), pos); }
ExprPtr MakeInt(std::int64_t v, SourcePos pos) {
  return MakeLiteral(Value::Int(v), pos);
}
ExprPtr MakeFieldGet(std::string field, SourcePos pos) {
  return Make(FieldGetExpr{std::move(field)}, pos);
}
ExprPtr MakeFieldSet(std::string field, ExprPtr value, SourcePos pos) {
  return Make(FieldSetExpr{std::move(field), std::move(value)}, pos);
}
ExprPtr MakeSend(ExprPtr receiver, std::string selector,
                 std::vector<ExprPtr> args, SourcePos pos) {
  return Make(
      SendExpr{std::move(receiver), std::move(selector), std::move(args)},
      pos);
}
ExprPtr MakeSuperSend(std::string selector, std::vector<ExprPtr> args,
                      SourcePos pos) {
  return Make(SuperSendExpr{std::move(selector), std::move(args)}, pos);
}
ExprPtr MakeLet(std::string var, ExprPtr bound, ExprPtr body, SourcePos pos) {
  return Make(LetExpr{std::move(var), std::move(bound), std::move(body)}, pos);
}
ExprPtr MakePlus(ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  std::vector<ExprPtr> args;
  args.push_back(std::move(rhs));
  return MakeSend(std::move(lhs), std::string(kPlusSelector), std::move(args),
                  pos);
}

bool IsSelfSend(const SendExpr& send) {
  return std::holds_alternative<SelfExpr>(send.receiver->node);
}

bool ExprEquals(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&b](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NewExpr>) {
          return x.class_name == y.class_name;
        } else if constexpr (std::is_same_v<T, VarExpr>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, SelfExpr>) {
          return true;
        } else if constexpr (std::is_same_v<T, LiteralExpr>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, FieldGetExpr>) {
          return x.field == y.field;
        } else if constexpr (std::is_same_v<T, FieldSetExpr>) {
          return x.field == y.field && ExprEquals(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, SendExpr>) {
          return x.selector == y.selector &&
                 ExprEquals(*x.receiver, *y.receiver) &&
                 ArgsEqual(x.args, y.args);
        } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
          return x.selector == y.selector && ArgsEqual(x.args, y.args);
        } else {
          return x.var == y.var && ExprEquals(*x.bound, *y.bound) &&
                 ExprEquals(*x.body, *y.body);
        }
      },
      a.node);
}

std::string_view VisibilityName(Visibility v) {
  return v == Visibility::kPublic ? "public" : "protected";
}

const MethodDef* ClassDef::FindMethod(std::string_view selector) const {
  for (const auto* list : {&public_methods, &protected_methods}) {
    for (const MethodDef& m : *list) {
      if (m.selector == selector) return &m;
    }
  }
  return nullptr;
}

const ClassDef* Program::FindClass(std::string_view name) const {
  for (const ClassDef& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ClassDef* Program::FindClass(std::string_view name) {
  for (ClassDef& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool MethodEquals(const MethodDef& a, const MethodDef& b) {
  return a.selector == b.selector && a.params == b.params &&
         a.visibility == b.visibility && ExprEquals(*a.body, *b.body);
}

bool ProgramEquals(const Program& a, const Program& b) {
  if (a.classes.size() != b.classes.size()) return false;
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    const ClassDef& x = a.classes[i];
    const ClassDef& y = b.classes[i];
    if (x.name != y.name || x.superclass != y.superclass ||
        x.fields != y.fields ||
        !MethodsEqual(x.public_methods, y.public_methods) ||
        !MethodsEqual(x.protected_methods, y.protected_methods)) {
      return false;
    }
  }
  if (!a.main || !b.main) return a.main == b.main;
  return ExprEquals(*a.main, *b.main);
}

}  // namespace protolite
