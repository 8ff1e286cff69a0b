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

// Concrete syntax for `.stl` sources:
//
//   class B extends A {
//     fields: x y;
//     method sum() { self.total() + (new B).total() }
//     protected method total() { let t = x in t + 1 }
//   }
//   main { (new B).sum() }
//
// A bare identifier is a variable when bound by a parameter or an enclosing
// `let`, otherwise a field of the enclosing class (inherited fields
// included), otherwise a free variable that gets stuck at run time.

#ifndef PROTOLITE_PARSER_H_
#define PROTOLITE_PARSER_H_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "protolite/ast.h"

namespace protolite {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SourcePos pos, const std::string& message);
  SourcePos pos() const { return pos_; }
  const std::string& detail() const { return detail_; }

 private:
  SourcePos pos_;
  std::string detail_;
};

// A source-level name used the reserved mangling prefix.
class ReservedSelectorError : public SyntaxError {
 public:
  ReservedSelectorError(SourcePos pos, std::string_view name);
};

Program Parse(std::string_view source);

// Parses a single `[protected] method m(...) { ... }` declaration whose
// identifiers are resolved against the fields of `class_name` in `program`.
MethodDef ParseMethod(std::string_view source, const Program& program,
                      std::string_view class_name);

// Renders the selector of the `index`-th send site of an expression, in
// evaluation order (receiver sites before the send, argument sites after).
using SiteRenderer =
    std::function<std::string(std::size_t index, std::string_view selector)>;

std::string PrintExpr(const Expr& e, const SiteRenderer& renderer = nullptr);
std::string PrintMethod(const MethodDef& m,
                        const SiteRenderer& renderer = nullptr);
// Parse(PrettyPrint(p)) is structurally equal to p.
std::string PrettyPrint(const Program& p);

}  // namespace protolite

#endif  // PROTOLITE_PARSER_H_
