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

#include "protolite/symbols.h"

#include "protolite/ast.h"

namespace protolite {

Symbol SymbolTable::Intern(std::string_view text) {
  auto it = ids_.find(std::string(text));
  if (it != ids_.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(texts_.size());
  texts_.emplace_back(text);
  ids_.emplace(texts_.back(), id);
  return Symbol(id);
}

bool SymbolTable::Find(std::string_view text, Symbol* out) const {
  auto it = ids_.find(std::string(text));
  if (it == ids_.end()) return false;
  *out = Symbol(it->second);
  return true;
}

bool SymbolTable::IsMangled(Symbol s) const {
  return HasReservedPrefix(Text(s));
}

std::string MangleSelector(std::string_view selector) {
  if (HasReservedPrefix(selector)) throw AlreadyMangledError(selector);
  std::string out(kManglePrefix);
  out += selector;
  return out;
}

Symbol Mangle(SymbolTable& table, Symbol selector) {
  std::string mangled = MangleSelector(table.Text(selector));
  return table.Intern(mangled);
}

}  // namespace protolite
