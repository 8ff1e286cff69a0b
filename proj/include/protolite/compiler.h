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

// Lowers a validated program to a RuntimeImage that realizes protected
// methods with plain dictionaries and one visibility-blind lookup:
//
//  * classes in the rewrite scope register protected methods under the
//    mangled selector only, and public methods under both selectors
//    (one CompiledMethod, two entries);
//  * self- and super-sends in those classes are mangled, except sends that
//    resolve to a public method above the scope, which stay plain so the
//    classes above never need mangled entries;
//  * classes outside the scope compile exactly as if protected methods did
//    not exist.

#ifndef PROTOLITE_COMPILER_H_
#define PROTOLITE_COMPILER_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "protolite/ast.h"
#include "protolite/image.h"

namespace protolite {

struct RewriteScope {
  std::set<std::string> classes;
  // Members whose superclass is not a member.
  std::set<std::string> roots;

  bool Contains(std::string_view c) const {
    return classes.count(std::string(c)) > 0;
  }
};

// Classes that define a protected method, classes that self-send a
// selector defined protected by one of their strict descendants, and all
// descendants of either. Empty for kBaseline; every class for kWorstCase.
RewriteScope ComputeRewriteScope(const Program& p,
                                 CompileMode mode = CompileMode::kProtected);

struct SiteTag {
  std::string selector;
  SendKind kind = SendKind::kObject;
  bool mangled = false;
  bool deferred = false;
};

// Tags every send site of `body` (in evaluation order) for a method of
// `enclosing_class`. Object-sends are always plain. Self/super-sends are
// mangled when `enclosing_class` is in scope, unless the closest definition
// (from the class, or its superclass for super) lies outside the scope, or
// no class defines the selector (deferred).
std::vector<SiteTag> RewriteBody(const Expr& body,
                                 std::string_view enclosing_class,
                                 const Program& p, const RewriteScope& scope);

// `body` rendered with mangled sites spelled `__selector`.
std::string RenderRewritten(const Expr& body, const std::vector<SiteTag>& tags);

struct CompileOptions {
  CompileMode mode = CompileMode::kProtected;
};

// Throws ValidationError for invalid programs.
RuntimeImage CompileProgram(const Program& p, CompileOptions options = {});

// Adds `method` to `class_name`. Rejects programs that would no longer
// validate (ValidationError) and unknown classes (UnknownClassError). When
// the method pulls classes into the rewrite scope, those classes and their
// descendants are recompiled; in-scope methods with sends of the same
// selector are re-tagged. The input image stays valid.
RuntimeImage InstallMethod(const RuntimeImage& image,
                           std::string_view class_name, MethodDef method);

// Text dump of dictionaries, rewritten bodies, and deferred sites, ordered
// by class name then symbol text.
std::string Desugar(const RuntimeImage& image);

}  // namespace protolite

#endif  // PROTOLITE_COMPILER_H_
