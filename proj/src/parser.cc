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

#include "protolite/parser.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "protolite/hierarchy.h"

namespace protolite {

SyntaxError::SyntaxError(SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" +
                         std::to_string(pos.column) + ": " + message),
      pos_(pos),
      detail_(message) {}

ReservedSelectorError::ReservedSelectorError(SourcePos pos,
                                             std::string_view name)
    : SyntaxError(pos, "name '" + std::string(name) +
                           "' uses the reserved prefix '" +
                           std::string(kManglePrefix) + "'") {}

namespace {

enum class Tok {
  kIdent,
  kInt,
  kLBrace,
  kRBrace,
  kLParen,
  kRParen,
  kSemi,
  kColon,
  kComma,
  kDot,
  kAssign,  // :=
  kEquals,  // =
  kPlus,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      SkipSpace();
      SourcePos pos{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Tok::kEnd, "", pos});
        return out;
      }
      char c = src_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = i_;
        while (i_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
                src_[i_] == '_')) {
          Advance();
        }
        out.push_back({Tok::kIdent, std::string(src_.substr(start, i_ - start)),
                       pos});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && i_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
        std::size_t start = i_;
        Advance();
        while (i_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[i_]))) {
          Advance();
        }
        out.push_back(
            {Tok::kInt, std::string(src_.substr(start, i_ - start)), pos});
        continue;
      }
      Tok kind;
      std::string text(1, c);
      switch (c) {
        case '{': kind = Tok::kLBrace; break;
        case '}': kind = Tok::kRBrace; break;
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case ';': kind = Tok::kSemi; break;
        case ',': kind = Tok::kComma; break;
        case '.': kind = Tok::kDot; break;
        case '=': kind = Tok::kEquals; break;
        case '+': kind = Tok::kPlus; break;
        case ':':
          if (i_ + 1 < src_.size() && src_[i_ + 1] == '=') {
            Advance();
            kind = Tok::kAssign;
            text = ":=";
          } else {
            kind = Tok::kColon;
          }
          break;
        default:
          throw SyntaxError(pos, "unexpected character '" + text + "'");
      }
      Advance();
      out.push_back({kind, std::move(text), pos});
    }
  }

 private:
  void Advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void SkipSpace() {
    while (i_ < src_.size()) {
      if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
        Advance();
      } else if (src_.substr(i_, 2) == "//") {
        while (i_ < src_.size() && src_[i_] != '\n') Advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "class", "extends", "fields", "method", "protected", "main",
    "new",   "nil",     "self",   "super",  "let",       "in"};

// Recursive-descent parser. Identifiers are parsed as VarExpr and `x := e`
// as FieldSetExpr; Resolver fixes them up once the hierarchy is known.
class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program ParseProgram() {
    Program p;
    while (IsKeyword("class")) p.classes.push_back(ParseClass());
    Expect("main");
    Expect(Tok::kLBrace, "'{'");
    in_main_ = true;
    p.main = ParseExpr();
    in_main_ = false;
    Expect(Tok::kRBrace, "'}'");
    if (Peek().kind != Tok::kEnd) Fail("expected end of input");
    return p;
  }

  MethodDef ParseSingleMethod() {
    MethodDef m = ParseMethodDecl();
    if (Peek().kind != Tok::kEnd) Fail("expected end of input");
    return m;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  Token Next() {
    Token t = Peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void Fail(const std::string& msg) const {
    const Token& t = Peek();
    std::string found =
        t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(t.pos, msg + ", found " + found);
  }
  bool IsKeyword(std::string_view kw) const {
    return Peek().kind == Tok::kIdent && Peek().text == kw;
  }
  void Expect(std::string_view kw) {
    if (!IsKeyword(kw)) Fail("expected '" + std::string(kw) + "'");
    Next();
  }
  Token Expect(Tok kind, const std::string& what) {
    if (Peek().kind != kind) Fail("expected " + what);
    return Next();
  }
  Token ExpectName(const std::string& what) {
    if (Peek().kind != Tok::kIdent || kKeywords.count(Peek().text) > 0) {
      Fail("expected " + what);
    }
    Token t = Next();
    if (HasReservedPrefix(t.text)) throw ReservedSelectorError(t.pos, t.text);
    return t;
  }

  ClassDef ParseClass() {
    ClassDef c;
    c.pos = Peek().pos;
    Expect("class");
    c.name = ExpectName("class name").text;
    Expect("extends");
    c.superclass = ExpectName("superclass name").text;
    Expect(Tok::kLBrace, "'{'");
    if (IsKeyword("fields")) {
      Next();
      Expect(Tok::kColon, "':'");
      while (Peek().kind == Tok::kIdent) {
        c.fields.push_back(ExpectName("field name").text);
      }
      Expect(Tok::kSemi, "';'");
    }
    while (!(Peek().kind == Tok::kRBrace)) {
      MethodDef m = ParseMethodDecl();
      (m.visibility == Visibility::kPublic ? c.public_methods
                                           : c.protected_methods)
          .push_back(std::move(m));
    }
    Expect(Tok::kRBrace, "'}'");
    return c;
  }

  MethodDef ParseMethodDecl() {
    MethodDef m;
    m.pos = Peek().pos;
    if (IsKeyword("protected")) {
      Next();
      m.visibility = Visibility::kProtected;
    }
    Expect("method");
    m.selector = ExpectName("method name").text;
    Expect(Tok::kLParen, "'('");
    if (Peek().kind != Tok::kRParen) {
      for (;;) {
        Token p = ExpectName("parameter name");
        if (std::find(m.params.begin(), m.params.end(), p.text) !=
            m.params.end()) {
          throw SyntaxError(p.pos, "duplicate parameter '" + p.text + "'");
        }
        m.params.push_back(p.text);
        if (Peek().kind != Tok::kComma) break;
        Next();
      }
    }
    Expect(Tok::kRParen, "')'");
    Expect(Tok::kLBrace, "'{'");
    m.body = ParseExpr();
    Expect(Tok::kRBrace, "'}'");
    return m;
  }

  ExprPtr ParseExpr() {
    SourcePos pos = Peek().pos;
    if (IsKeyword("let")) {
      Next();
      std::string var = ExpectName("variable name").text;
      Expect(Tok::kEquals, "'='");
      ExprPtr bound = ParseExpr();
      Expect("in");
      ExprPtr body = ParseExpr();
      return MakeLet(std::move(var), std::move(bound), std::move(body), pos);
    }
    if (Peek().kind == Tok::kIdent && Peek(1).kind == Tok::kAssign &&
        kKeywords.count(Peek().text) == 0) {
      std::string field = ExpectName("field name").text;
      Next();
      return MakeFieldSet(std::move(field), ParseExpr(), pos);
    }
    ExprPtr lhs = ParsePostfix();
    while (Peek().kind == Tok::kPlus) {
      SourcePos op = Next().pos;
      lhs = MakePlus(std::move(lhs), ParsePostfix(), op);
    }
    return lhs;
  }

  ExprPtr ParsePostfix() {
    ExprPtr e = ParsePrimary();
    while (Peek().kind == Tok::kDot) {
      Next();
      Token sel = ExpectName("selector");
      e = MakeSend(std::move(e), sel.text, ParseArgs(), sel.pos);
    }
    return e;
  }

  std::vector<ExprPtr> ParseArgs() {
    Expect(Tok::kLParen, "'('");
    std::vector<ExprPtr> args;
    if (Peek().kind != Tok::kRParen) {
      for (;;) {
        args.push_back(ParseExpr());
        if (Peek().kind != Tok::kComma) break;
        Next();
      }
    }
    Expect(Tok::kRParen, "')'");
    return args;
  }

  ExprPtr ParsePrimary() {
    const Token& t = Peek();
    SourcePos pos = t.pos;
    switch (t.kind) {
      case Tok::kInt: {
        std::int64_t v = 0;
        const char* first = t.text.data();
        const char* last = first + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
          throw SyntaxError(pos, "integer literal out of range");
        }
        Next();
        return MakeInt(v, pos);
      }
      case Tok::kLParen: {
        Next();
        ExprPtr e = ParseExpr();
        Expect(Tok::kRParen, "')'");
        return e;
      }
      case Tok::kIdent:
        break;
      default:
        Fail("expected expression");
    }
    if (IsKeyword("new")) {
      Next();
      return MakeNew(ExpectName("class name").text, pos);
    }
    if (IsKeyword("nil")) {
      Next();
      return MakeNil(pos);
    }
    if (IsKeyword("self")) {
      Next();
      return MakeSelf(pos);
    }
    if (IsKeyword("super")) {
      if (in_main_) {
        throw SyntaxError(pos, "'super' is only allowed inside a method");
      }
      Next();
      Expect(Tok::kDot, "'.'");
      Token sel = ExpectName("selector");
      return MakeSuperSend(sel.text, ParseArgs(), pos);
    }
    return MakeVar(ExpectName("expression").text, pos);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool in_main_ = false;
};

// Turns identifiers that name fields into FieldGetExpr, and checks that
// assignments target fields.
class Resolver {
 public:
  explicit Resolver(std::vector<std::string> fields)
      : fields_(std::move(fields)) {}

  ExprPtr Resolve(const ExprPtr& e, std::vector<std::string>& scope) const {
    return std::visit(
        [&](const auto& n) -> ExprPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarExpr>) {
            if (!InScope(scope, n.name) && IsField(n.name)) {
              return MakeFieldGet(n.name, e->pos);
            }
            return e;
          } else if constexpr (std::is_same_v<T, FieldSetExpr>) {
            if (InScope(scope, n.field)) {
              throw SyntaxError(e->pos, "cannot assign to variable '" +
                                            n.field + "'");
            }
            if (!IsField(n.field)) {
              throw SyntaxError(e->pos, "unknown field '" + n.field + "'");
            }
            return MakeFieldSet(n.field, Resolve(n.value, scope), e->pos);
          } else if constexpr (std::is_same_v<T, SendExpr>) {
            ExprPtr recv = Resolve(n.receiver, scope);
            return MakeSend(std::move(recv), n.selector,
                            ResolveAll(n.args, scope), e->pos);
          } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
            return MakeSuperSend(n.selector, ResolveAll(n.args, scope), e->pos);
          } else if constexpr (std::is_same_v<T, LetExpr>) {
            ExprPtr bound = Resolve(n.bound, scope);
            scope.push_back(n.var);
            ExprPtr body = Resolve(n.body, scope);
            scope.pop_back();
            return MakeLet(n.var, std::move(bound), std::move(body), e->pos);
          } else {
            return e;
          }
        },
        e->node);
  }

 private:
  static bool InScope(const std::vector<std::string>& scope,
                      const std::string& name) {
    return std::find(scope.begin(), scope.end(), name) != scope.end();
  }
  bool IsField(const std::string& name) const {
    return std::find(fields_.begin(), fields_.end(), name) != fields_.end();
  }
  std::vector<ExprPtr> ResolveAll(const std::vector<ExprPtr>& es,
                                  std::vector<std::string>& scope) const {
    std::vector<ExprPtr> out;
    out.reserve(es.size());
    for (const ExprPtr& a : es) out.push_back(Resolve(a, scope));
    return out;
  }

  std::vector<std::string> fields_;
};

void ResolveMethod(MethodDef& m, const Resolver& resolver) {
  std::vector<std::string> scope = m.params;
  m.body = resolver.Resolve(m.body, scope);
}

// --- printing ---

class Printer {
 public:
  explicit Printer(const SiteRenderer& renderer) : renderer_(renderer) {}

  // Levels: 0 = any expression, 1 = operand of `+` (left),
  // 2 = receiver / right operand of `+`.
  std::string Print(const Expr& e, int level) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, NewExpr>) {
            std::string s = "new " + n.class_name;
            return level >= 2 ? "(" + s + ")" : s;
          } else if constexpr (std::is_same_v<T, VarExpr>) {
            return n.name;
          } else if constexpr (std::is_same_v<T, SelfExpr>) {
            return "self";
          } else if constexpr (std::is_same_v<T, LiteralExpr>) {
            return n.value.ToString();
          } else if constexpr (std::is_same_v<T, FieldGetExpr>) {
            return n.field;
          } else if constexpr (std::is_same_v<T, FieldSetExpr>) {
            std::string s = n.field + " := " + Print(*n.value, 0);
            return level > 0 ? "(" + s + ")" : s;
          } else if constexpr (std::is_same_v<T, SendExpr>) {
            if (n.selector == kPlusSelector && n.args.size() == 1) {
              std::string lhs = Print(*n.receiver, 1);
              std::string op = Site(n.selector);
              std::string s = lhs + " " + op + " " + Print(*n.args[0], 2);
              return level > 1 ? "(" + s + ")" : s;
            }
            std::string recv = Print(*n.receiver, 2);
            std::string sel = Site(n.selector);
            return recv + "." + sel + Args(n.args);
          } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
            std::string sel = Site(n.selector);
            return "super." + sel + Args(n.args);
          } else {
            std::string s = "let " + n.var + " = " + Print(*n.bound, 0) +
                            " in " + Print(*n.body, 0);
            return level > 0 ? "(" + s + ")" : s;
          }
        },
        e.node);
  }

 private:
  std::string Site(std::string_view selector) {
    std::size_t index = next_site_++;
    return renderer_ ? renderer_(index, selector) : std::string(selector);
  }

  std::string Args(const std::vector<ExprPtr>& args) {
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i > 0) s += ", ";
      s += Print(*args[i], 0);
    }
    return s + ")";
  }

  const SiteRenderer& renderer_;
  std::size_t next_site_ = 0;
};

}  // namespace

Program Parse(std::string_view source) {
  Program p = Parser(Lexer(source).Run()).ParseProgram();
  Hierarchy h(p);
  for (ClassDef& c : p.classes) {
    Resolver resolver(h.FieldsOf(c.name));
    for (MethodDef& m : c.public_methods) ResolveMethod(m, resolver);
    for (MethodDef& m : c.protected_methods) ResolveMethod(m, resolver);
  }
  std::vector<std::string> scope;
  p.main = Resolver({}).Resolve(p.main, scope);
  return p;
}

MethodDef ParseMethod(std::string_view source, const Program& program,
                      std::string_view class_name) {
  Hierarchy h(program);
  std::vector<std::string> fields = h.FieldsOf(class_name);
  MethodDef m = Parser(Lexer(source).Run()).ParseSingleMethod();
  ResolveMethod(m, Resolver(std::move(fields)));
  return m;
}

std::string PrintExpr(const Expr& e, const SiteRenderer& renderer) {
  return Printer(renderer).Print(e, 0);
}

std::string PrintMethod(const MethodDef& m, const SiteRenderer& renderer) {
  std::ostringstream out;
  if (m.visibility == Visibility::kProtected) out << "protected ";
  out << "method " << m.selector << "(";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (i > 0) out << ", ";
    out << m.params[i];
  }
  out << ") { " << PrintExpr(*m.body, renderer) << " }";
  return out.str();
}

std::string PrettyPrint(const Program& p) {
  std::ostringstream out;
  for (const ClassDef& c : p.classes) {
    out << "class " << c.name << " extends " << c.superclass << " {\n";
    if (!c.fields.empty()) {
      out << "  fields:";
      for (const std::string& f : c.fields) out << " " << f;
      out << ";\n";
    }
    for (const auto* list : {&c.public_methods, &c.protected_methods}) {
      for (const MethodDef& m : *list) out << "  " << PrintMethod(m) << "\n";
    }
    out << "}\n\n";
  }
  out << "main { " << (p.main ? PrintExpr(*p.main) : "nil") << " }\n";
  return out.str();
}

}  // namespace protolite
