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

#ifndef PROTOLITE_IMAGE_H_
#define PROTOLITE_IMAGE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "protolite/ast.h"
#include "protolite/symbols.h"

namespace protolite {

using ClassIndex = std::uint32_t;
inline constexpr ClassIndex kObjectIndex = 0;
inline constexpr ClassIndex kNoClass = ~ClassIndex{0};

enum class Op : std::uint8_t {
  kPushNil,
  kPushInt,      // imm
  kPushSelf,
  kLoadLocal,    // arg = slot
  kUnboundVar,   // arg = index into names
  kNew,          // arg = class index, or kNoClass with imm = name index
  kGetField,     // arg = field index
  kSetField,     // arg = field index
  kSend,         // arg = site index; object- and self-sends
  kSuperSend,    // arg = site index
  kBindLocal,    // arg = slot; the `let` reduction
  kReturn,
};

struct Instr {
  Op op;
  std::uint32_t arg = 0;
  std::int64_t imm = 0;
};

enum class SendKind : std::uint8_t { kObject, kSelf, kSuper };

std::string_view SendKindName(SendKind k);

struct SendSite {
  std::string selector;  // as written in the source
  Symbol symbol;         // what the runtime looks up; mangled iff `mangled`
  SendKind kind = SendKind::kObject;
  bool mangled = false;
  // Self/super-send to a selector no class defines; compiled plain and
  // re-examined when a method with that selector is installed.
  bool deferred = false;
  bool primitive_plus = false;
  std::uint32_t argc = 0;
  // Lookup start for super-sends: superclass of the method's class.
  ClassIndex super_start = kNoClass;
};

struct CompiledMethod {
  std::string origin_class;
  ClassIndex origin_index = kObjectIndex;
  std::string selector;
  Symbol selector_symbol;  // unmangled
  Visibility visibility = Visibility::kPublic;
  std::vector<std::string> params;
  ExprPtr source_body;

  std::vector<Instr> code;
  std::vector<SendSite> sites;
  std::vector<std::string> names;
  std::uint32_t locals = 0;
  // First field reference that is not visible in the class; activation
  // gets stuck on it, as translation does in the reference evaluator.
  std::optional<std::string> unknown_field;
  // Global id of sites[0]; inline caches are indexed by site_base + i.
  std::uint32_t site_base = 0;
};

using CompiledMethodPtr = std::shared_ptr<const CompiledMethod>;
using MethodDictionary =
    std::unordered_map<Symbol, CompiledMethodPtr, SymbolHash>;

enum class CompileMode : std::uint8_t {
  kProtected,  // mangling and double registration for classes in scope
  kBaseline,   // no mangling; protected methods installed as public
  kWorstCase,  // every class in scope, every method public
};

std::string_view CompileModeName(CompileMode m);

struct ClassInfo {
  std::string name;
  ClassIndex superclass = kNoClass;  // kNoClass only for Object
  std::vector<std::string> fields;   // layout, inherited fields first
  bool rewritten = false;
  bool protection_root = false;
  MethodDictionary dictionary;
};

struct DeferredSite {
  std::string class_name;
  std::string method;
  std::string selector;
  friend auto operator<=>(const DeferredSite&, const DeferredSite&) = default;
};

// A compiled program: classes with method dictionaries keyed by symbol.
// Immutable once built; InstallMethod produces a new image that shares
// unchanged compiled methods with the old one.
class RuntimeImage {
 public:
  const Program& program() const { return program_; }
  CompileMode mode() const { return mode_; }
  const SymbolTable& symbols() const { return symbols_; }
  const std::vector<ClassInfo>& classes() const { return classes_; }
  const ClassInfo& klass(ClassIndex i) const { return classes_.at(i); }
  std::optional<ClassIndex> FindClass(std::string_view name) const;
  const CompiledMethod& main() const { return *main_; }
  std::uint32_t site_count() const { return site_count_; }

  // Classes that received mangled sites and double registration.
  std::vector<std::string> RewrittenClasses() const;
  std::vector<std::string> ProtectionRoots() const;
  // Sorted by class, method, selector.
  std::vector<DeferredSite> DeferredSites() const;

  // Dictionary entry for `text` in class `name`, or null.
  CompiledMethodPtr Entry(std::string_view class_name,
                          std::string_view text) const;

 private:
  friend class ImageBuilder;

  Program program_;
  CompileMode mode_ = CompileMode::kProtected;
  SymbolTable symbols_;
  std::vector<ClassInfo> classes_;
  std::map<std::string, ClassIndex, std::less<>> index_;
  CompiledMethodPtr main_;
  std::uint32_t site_count_ = 0;
};

}  // namespace protolite

#endif  // PROTOLITE_IMAGE_H_
