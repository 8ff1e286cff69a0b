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

#ifndef PROTOLITE_SYMBOLS_H_
#define PROTOLITE_SYMBOLS_H_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace protolite {

// Interned selector. Two symbols are equal iff their text is equal within
// the same SymbolTable.
class Symbol {
 public:
  constexpr Symbol() = default;
  constexpr explicit Symbol(std::uint32_t id) : id_(id) {}
  constexpr std::uint32_t id() const { return id_; }
  friend constexpr auto operator<=>(Symbol, Symbol) = default;

 private:
  std::uint32_t id_ = 0;
};

struct SymbolHash {
  std::size_t operator()(Symbol s) const { return s.id(); }
};

class AlreadyMangledError : public std::invalid_argument {
 public:
  explicit AlreadyMangledError(std::string_view text)
      : std::invalid_argument("selector '" + std::string(text) +
                              "' is already mangled") {}
};

class SymbolTable {
 public:
  Symbol Intern(std::string_view text);
  // Looks up without interning.
  bool Find(std::string_view text, Symbol* out) const;
  std::string_view Text(Symbol s) const { return texts_.at(s.id()); }
  bool IsMangled(Symbol s) const;
  std::size_t size() const { return texts_.size(); }

 private:
  std::vector<std::string> texts_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// "__" + text.
std::string MangleSelector(std::string_view selector);

// Interns the mangled form of an unmangled symbol. Mangling is not
// idempotent: a mangled input throws AlreadyMangledError.
Symbol Mangle(SymbolTable& table, Symbol selector);

}  // namespace protolite

#endif  // PROTOLITE_SYMBOLS_H_
