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

#include "protolite/compiler.h"

#include <algorithm>
#include <sstream>
#include <utility>

#include "protolite/hierarchy.h"
#include "protolite/parser.h"
#include "protolite/validate.h"

namespace protolite {

std::string_view SendKindName(SendKind k) {
  switch (k) {
    case SendKind::kObject: return "object";
    case SendKind::kSelf: return "self";
    case SendKind::kSuper: return "super";
  }
  return "?";
}

std::string_view CompileModeName(CompileMode m) {
  switch (m) {
    case CompileMode::kProtected: return "protected";
    case CompileMode::kBaseline: return "baseline";
    case CompileMode::kWorstCase: return "worst-case";
  }
  return "?";
}

std::optional<ClassIndex> RuntimeImage::FindClass(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> RuntimeImage::RewrittenClasses() const {
  std::vector<std::string> out;
  for (const ClassInfo& c : classes_) {
    if (c.rewritten) out.push_back(c.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> RuntimeImage::ProtectionRoots() const {
  std::vector<std::string> out;
  for (const ClassInfo& c : classes_) {
    if (c.protection_root) out.push_back(c.name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DeferredSite> RuntimeImage::DeferredSites() const {
  std::vector<DeferredSite> out;
  for (const ClassInfo& c : classes_) {
    for (const auto& [sym, m] : c.dictionary) {
      // Visit each compiled method once, through its own class and the
      // selector it was registered under.
      if (m->origin_class != c.name) continue;
      if (symbols_.IsMangled(sym) &&
          c.dictionary.count(m->selector_symbol) > 0) {
        continue;
      }
      for (const SendSite& s : m->sites) {
        if (s.deferred) out.push_back({c.name, m->selector, s.selector});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CompiledMethodPtr RuntimeImage::Entry(std::string_view class_name,
                                      std::string_view text) const {
  auto cls = FindClass(class_name);
  Symbol sym;
  if (!cls || !symbols_.Find(text, &sym)) return nullptr;
  const MethodDictionary& d = classes_[*cls].dictionary;
  auto it = d.find(sym);
  return it == d.end() ? nullptr : it->second;
}

namespace {

// Selectors of self-sends (receiver syntactically `self`) in `e`.
void CollectSelfSendSelectors(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FieldSetExpr>) {
          CollectSelfSendSelectors(*n.value, out);
        } else if constexpr (std::is_same_v<T, SendExpr>) {
          if (IsSelfSend(n)) out.insert(n.selector);
          CollectSelfSendSelectors(*n.receiver, out);
          for (const ExprPtr& a : n.args) CollectSelfSendSelectors(*a, out);
        } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
          for (const ExprPtr& a : n.args) CollectSelfSendSelectors(*a, out);
        } else if constexpr (std::is_same_v<T, LetExpr>) {
          CollectSelfSendSelectors(*n.bound, out);
          CollectSelfSendSelectors(*n.body, out);
        }
      },
      e.node);
}

class SiteTagger {
 public:
  SiteTagger(std::string_view enclosing, const Hierarchy& h,
             const RewriteScope& scope)
      : enclosing_(enclosing),
        h_(h),
        scope_(scope),
        in_scope_(scope.Contains(enclosing)) {}

  std::vector<SiteTag> Run(const Expr& body) {
    Visit(body);
    return std::move(tags_);
  }

 private:
  void Visit(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FieldSetExpr>) {
            Visit(*n.value);
          } else if constexpr (std::is_same_v<T, SendExpr>) {
            Visit(*n.receiver);
            tags_.push_back(Tag(n.selector,
                                IsSelfSend(n) ? SendKind::kSelf
                                              : SendKind::kObject));
            for (const ExprPtr& a : n.args) Visit(*a);
          } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
            tags_.push_back(Tag(n.selector, SendKind::kSuper));
            for (const ExprPtr& a : n.args) Visit(*a);
          } else if constexpr (std::is_same_v<T, LetExpr>) {
            Visit(*n.bound);
            Visit(*n.body);
          }
        },
        e.node);
  }

  SiteTag Tag(const std::string& selector, SendKind kind) const {
    SiteTag tag{selector, kind, false, false};
    if (kind == SendKind::kObject || !in_scope_ ||
        selector == kPlusSelector) {
      return tag;
    }
    std::optional<FoundMethod> found;
    if (kind == SendKind::kSelf) {
      found = h_.ClosestDefinition(enclosing_, selector);
    } else if (std::optional<std::string> up = h_.Superclass(enclosing_);
               up && *up != kObjectClass && h_.Contains(*up)) {
      found = h_.ClosestDefinition(*up, selector);
    }
    if (found) {
      // A definition above the scope is public and has no mangled entry:
      // the send stays plain.
      tag.mangled = scope_.Contains(found->owner->name);
    } else if (h_.DefinedAnywhere(selector)) {
      tag.mangled = true;
    } else {
      tag.deferred = true;
    }
    return tag;
  }

  std::string enclosing_;
  const Hierarchy& h_;
  const RewriteScope& scope_;
  bool in_scope_;
  std::vector<SiteTag> tags_;
};

}  // namespace

RewriteScope ComputeRewriteScope(const Program& p, CompileMode mode) {
  RewriteScope scope;
  if (mode == CompileMode::kBaseline) return scope;
  Hierarchy h(p);
  std::set<std::string> seeds;
  for (const ClassDef& c : p.classes) {
    if (mode == CompileMode::kWorstCase || !c.protected_methods.empty()) {
      seeds.insert(c.name);
      continue;
    }
    std::set<std::string> self_sent;
    for (const auto* list : {&c.public_methods, &c.protected_methods}) {
      for (const MethodDef& m : *list) {
        CollectSelfSendSelectors(*m.body, self_sent);
      }
    }
    if (self_sent.empty()) continue;
    for (const ClassDef* d : h.StrictDescendants(c.name)) {
      bool hook = std::any_of(
          d->protected_methods.begin(), d->protected_methods.end(),
          [&](const MethodDef& m) { return self_sent.count(m.selector) > 0; });
      if (hook) {
        seeds.insert(c.name);
        break;
      }
    }
  }
  for (const std::string& s : seeds) {
    scope.classes.insert(s);
    for (const ClassDef* d : h.StrictDescendants(s)) {
      scope.classes.insert(d->name);
    }
  }
  for (const std::string& c : scope.classes) {
    if (!scope.Contains(h.Get(c).superclass)) scope.roots.insert(c);
  }
  return scope;
}

std::vector<SiteTag> RewriteBody(const Expr& body,
                                 std::string_view enclosing_class,
                                 const Program& p, const RewriteScope& scope) {
  Hierarchy h(p);
  return SiteTagger(enclosing_class, h, scope).Run(body);
}

std::string RenderRewritten(const Expr& body,
                            const std::vector<SiteTag>& tags) {
  return PrintExpr(body, [&](std::size_t i, std::string_view sel) {
    return i < tags.size() && tags[i].mangled ? MangleSelector(sel)
                                              : std::string(sel);
  });
}

// Builds and incrementally updates images.
class ImageBuilder {
 public:
  static RuntimeImage Build(const Program& p, CompileMode mode) {
    RequireValid(p);
    ImageBuilder b;
    b.img_.program_ = p;
    b.img_.mode_ = mode;
    b.img_.symbols_.Intern(kPlusSelector);
    Hierarchy h(b.img_.program_);
    b.scope_ = ComputeRewriteScope(b.img_.program_, mode);
    b.SetUpClasses(h);
    for (ClassIndex i = 1; i < b.img_.classes_.size(); ++i) {
      b.RebuildClass(i, h);
    }
    b.CompileMain(h);
    return std::move(b.img_);
  }

  static RuntimeImage Install(const RuntimeImage& old, std::string_view cls,
                              MethodDef method) {
    if (!old.FindClass(cls) || cls == kObjectClass) {
      throw UnknownClassError(cls);
    }
    ImageBuilder b;
    b.img_ = old;
    ClassDef* def = b.img_.program_.FindClass(cls);
    const std::string selector = method.selector;
    (method.visibility == Visibility::kPublic ? def->public_methods
                                              : def->protected_methods)
        .push_back(std::move(method));
    RequireValid(b.img_.program_);

    Hierarchy h(b.img_.program_);
    b.scope_ = ComputeRewriteScope(b.img_.program_, b.img_.mode_);
    std::set<std::string> recompile;
    for (const std::string& c : b.scope_.classes) {
      if (b.img_.klass(*b.img_.FindClass(c)).rewritten) continue;
      recompile.insert(c);
      for (const ClassDef* d : h.StrictDescendants(c)) {
        recompile.insert(d->name);
      }
    }
    b.UpdateScopeFlags();
    for (const std::string& c : recompile) {
      b.RebuildClass(*b.img_.FindClass(c), h);
    }
    ClassIndex target = *b.img_.FindClass(cls);
    const MethodDef* added = h.Get(cls).FindMethod(selector);
    if (recompile.count(std::string(cls)) == 0) {
      b.Register(target, b.CompileMethod(target, *added, h));
    }
    // Sends of the new selector may now resolve differently.
    for (ClassIndex i = 1; i < b.img_.classes_.size(); ++i) {
      ClassInfo& info = b.img_.classes_[i];
      if (!info.rewritten || recompile.count(info.name) > 0) continue;
      const ClassDef& c = h.Get(info.name);
      for (const auto* list : {&c.public_methods, &c.protected_methods}) {
        for (const MethodDef& m : *list) {
          if (i == target && m.selector == selector) continue;
          std::set<std::string> sent;
          CollectSentSelectors(*m.body, sent);
          if (sent.count(selector) > 0) {
            b.Register(i, b.CompileMethod(i, m, h));
          }
        }
      }
    }
    return std::move(b.img_);
  }

 private:
  void SetUpClasses(const Hierarchy& h) {
    img_.classes_.clear();
    img_.index_.clear();
    ClassInfo object;
    object.name = std::string(kObjectClass);
    img_.classes_.push_back(std::move(object));
    img_.index_.emplace(kObjectClass, kObjectIndex);
    for (const ClassDef& c : img_.program_.classes) {
      img_.index_.emplace(c.name,
                          static_cast<ClassIndex>(img_.classes_.size()));
      ClassInfo info;
      info.name = c.name;
      info.fields = h.FieldsOf(c.name);
      img_.classes_.push_back(std::move(info));
    }
    for (ClassIndex i = 1; i < img_.classes_.size(); ++i) {
      const ClassDef& c = h.Get(img_.classes_[i].name);
      img_.classes_[i].superclass = *img_.FindClass(c.superclass);
    }
    UpdateScopeFlags();
  }

  void UpdateScopeFlags() {
    for (ClassInfo& info : img_.classes_) {
      info.rewritten = scope_.Contains(info.name);
      info.protection_root = scope_.roots.count(info.name) > 0;
    }
  }

  void RebuildClass(ClassIndex i, const Hierarchy& h) {
    img_.classes_[i].dictionary.clear();
    const ClassDef& c = h.Get(img_.classes_[i].name);
    for (const auto* list : {&c.public_methods, &c.protected_methods}) {
      for (const MethodDef& m : *list) Register(i, CompileMethod(i, m, h));
    }
  }

  void Register(ClassIndex i, CompiledMethodPtr m) {
    ClassInfo& info = img_.classes_[i];
    Symbol plain = m->selector_symbol;
    if (!info.rewritten) {
      info.dictionary[plain] = m;
      return;
    }
    Symbol mangled = Mangle(img_.symbols_, plain);
    if (m->visibility == Visibility::kPublic) info.dictionary[plain] = m;
    info.dictionary[mangled] = std::move(m);
  }

  CompiledMethodPtr CompileMethod(ClassIndex i, const MethodDef& m,
                                  const Hierarchy& h) {
    const ClassInfo& info = img_.classes_[i];
    std::vector<SiteTag> tags = SiteTagger(info.name, h, scope_).Run(*m.body);
    auto cm = std::make_shared<CompiledMethod>();
    cm->origin_class = info.name;
    cm->origin_index = i;
    cm->selector = m.selector;
    cm->selector_symbol = img_.symbols_.Intern(m.selector);
    cm->visibility = img_.mode_ == CompileMode::kProtected
                         ? m.visibility
                         : Visibility::kPublic;
    cm->params = m.params;
    cm->source_body = m.body;
    Lower(*cm, m.params, *m.body, tags);
    return cm;
  }

  void CompileMain(const Hierarchy& h) {
    auto cm = std::make_shared<CompiledMethod>();
    cm->origin_class = std::string(kObjectClass);
    cm->selector = "main";
    cm->selector_symbol = img_.symbols_.Intern("main");
    cm->source_body = img_.program_.main;
    std::vector<SiteTag> tags =
        SiteTagger(kObjectClass, h, scope_).Run(*img_.program_.main);
    Lower(*cm, {}, *img_.program_.main, tags);
    img_.main_ = std::move(cm);
  }

  static void CollectSentSelectors(const Expr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, FieldSetExpr>) {
            CollectSentSelectors(*n.value, out);
          } else if constexpr (std::is_same_v<T, SendExpr>) {
            out.insert(n.selector);
            CollectSentSelectors(*n.receiver, out);
            for (const ExprPtr& a : n.args) CollectSentSelectors(*a, out);
          } else if constexpr (std::is_same_v<T, SuperSendExpr>) {
            out.insert(n.selector);
            for (const ExprPtr& a : n.args) CollectSentSelectors(*a, out);
          } else if constexpr (std::is_same_v<T, LetExpr>) {
            CollectSentSelectors(*n.bound, out);
            CollectSentSelectors(*n.body, out);
          }
        },
        e.node);
  }

  // Emits stack code for a method body. Site indices follow the tagger's
  // evaluation order.
  class Lowerer {
   public:
    Lowerer(RuntimeImage& img, CompiledMethod& cm,
            const std::vector<SiteTag>& tags)
        : img_(img),
          cm_(cm),
          tags_(tags),
          fields_(cm.origin_index == kObjectIndex && cm.selector == "main"
                      ? std::vector<std::string>{}
                      : img.klass(cm.origin_index).fields) {}

    void Run(const std::vector<std::string>& params, const Expr& body) {
      scope_ = params;
      cm_.locals = static_cast<std::uint32_t>(params.size());
      Emit(body);
      cm_.code.push_back({Op::kReturn});
    }

   private:
    void Emit(const Expr& e) {
      std::visit([&](const auto& n) { EmitNode(n); }, e.node);
    }

    void EmitNode(const NewExpr& n) {
      if (auto cls = img_.FindClass(n.class_name)) {
        cm_.code.push_back({Op::kNew, *cls});
      } else {
        cm_.code.push_back({Op::kNew, kNoClass, Name(n.class_name)});
      }
    }
    void EmitNode(const VarExpr& n) {
      for (std::size_t i = scope_.size(); i-- > 0;) {
        if (scope_[i] == n.name) {
          cm_.code.push_back({Op::kLoadLocal, static_cast<std::uint32_t>(i)});
          return;
        }
      }
      cm_.code.push_back(
          {Op::kUnboundVar, static_cast<std::uint32_t>(Name(n.name))});
    }
    void EmitNode(const SelfExpr&) { cm_.code.push_back({Op::kPushSelf}); }
    void EmitNode(const LiteralExpr& n) {
      if (n.value.is_int()) {
        cm_.code.push_back({Op::kPushInt, 0, n.value.int_value()});
      } else if (n.value.is_nil()) {
        cm_.code.push_back({Op::kPushNil});
      } else {
        throw std::logic_error("object literal in source program");
      }
    }
    void EmitNode(const FieldGetExpr& n) {
      cm_.code.push_back({Op::kGetField, Field(n.field)});
    }
    void EmitNode(const FieldSetExpr& n) {
      std::uint32_t field = Field(n.field);
      Emit(*n.value);
      cm_.code.push_back({Op::kSetField, field});
    }
    void EmitNode(const SendExpr& n) {
      Emit(*n.receiver);
      std::uint32_t site = AddSite(n.selector, n.args.size());
      for (const ExprPtr& a : n.args) Emit(*a);
      cm_.code.push_back({Op::kSend, site});
    }
    void EmitNode(const SuperSendExpr& n) {
      cm_.code.push_back({Op::kPushSelf});
      std::uint32_t site = AddSite(n.selector, n.args.size());
      for (const ExprPtr& a : n.args) Emit(*a);
      cm_.code.push_back({Op::kSuperSend, site});
    }
    void EmitNode(const LetExpr& n) {
      Emit(*n.bound);
      auto slot = static_cast<std::uint32_t>(scope_.size());
      scope_.push_back(n.var);
      cm_.locals = std::max(cm_.locals, slot + 1);
      cm_.code.push_back({Op::kBindLocal, slot});
      Emit(*n.body);
      scope_.pop_back();
    }

    std::uint32_t AddSite(const std::string& selector, std::size_t argc) {
      auto index = static_cast<std::uint32_t>(cm_.sites.size());
      const SiteTag& tag = tags_.at(index);
      SendSite s;
      s.selector = selector;
      s.kind = tag.kind;
      s.mangled = tag.mangled;
      s.deferred = tag.deferred;
      s.primitive_plus = selector == kPlusSelector;
      s.argc = static_cast<std::uint32_t>(argc);
      Symbol plain = img_.symbols_.Intern(selector);
      s.symbol = tag.mangled ? Mangle(img_.symbols_, plain) : plain;
      if (tag.kind == SendKind::kSuper) {
        s.super_start = img_.klass(cm_.origin_index).superclass;
      }
      cm_.sites.push_back(std::move(s));
      return index;
    }

    std::uint32_t Field(const std::string& f) {
      auto it = std::find(fields_.begin(), fields_.end(), f);
      if (it == fields_.end()) {
        if (!cm_.unknown_field) cm_.unknown_field = f;
        return 0;
      }
      return static_cast<std::uint32_t>(it - fields_.begin());
    }

    std::int64_t Name(const std::string& name) {
      cm_.names.push_back(name);
      return static_cast<std::int64_t>(cm_.names.size() - 1);
    }

    RuntimeImage& img_;
    CompiledMethod& cm_;
    const std::vector<SiteTag>& tags_;
    std::vector<std::string> fields_;
    std::vector<std::string> scope_;
  };

  void Lower(CompiledMethod& cm, const std::vector<std::string>& params,
             const Expr& body, const std::vector<SiteTag>& tags) {
    Lowerer(img_, cm, tags).Run(params, body);
    cm.site_base = img_.site_count_;
    img_.site_count_ += static_cast<std::uint32_t>(cm.sites.size());
  }

  RuntimeImage img_;
  RewriteScope scope_;
};

RuntimeImage CompileProgram(const Program& p, CompileOptions options) {
  return ImageBuilder::Build(p, options.mode);
}

RuntimeImage InstallMethod(const RuntimeImage& image,
                           std::string_view class_name, MethodDef method) {
  return ImageBuilder::Install(image, class_name, std::move(method));
}

namespace {

std::string RenderCompiled(const CompiledMethod& m) {
  MethodDef def{m.selector, m.params, m.source_body, m.visibility, {}};
  std::string text = PrintMethod(def, [&](std::size_t i, std::string_view sel) {
    return i < m.sites.size() && m.sites[i].mangled ? MangleSelector(sel)
                                                    : std::string(sel);
  });
  // "method sel(...)" -> "method Class#sel(...)"
  std::size_t at = text.find("method ") + 7;
  return text.insert(at, m.origin_class + "#");
}

}  // namespace

std::string Desugar(const RuntimeImage& image) {
  std::ostringstream out;
  std::vector<const ClassInfo*> classes;
  for (const ClassInfo& c : image.classes()) {
    if (c.superclass != kNoClass) classes.push_back(&c);
  }
  std::sort(classes.begin(), classes.end(),
            [](const ClassInfo* a, const ClassInfo* b) {
              return a->name < b->name;
            });
  out << "mode " << CompileModeName(image.mode()) << "\n";
  for (const ClassInfo* c : classes) {
    out << "class " << c->name << " extends "
        << image.klass(c->superclass).name;
    if (c->rewritten) {
      out << (c->protection_root ? " [rewritten, root]" : " [rewritten]");
    }
    out << "\n";
    std::vector<std::pair<std::string, CompiledMethodPtr>> entries;
    for (const auto& [sym, m] : c->dictionary) {
      entries.emplace_back(std::string(image.symbols().Text(sym)), m);
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<const CompiledMethod*> methods;
    for (const auto& [text, m] : entries) {
      int refs = 0;
      for (const auto& e : entries) refs += e.second == m ? 1 : 0;
      out << "  " << text << " -> " << m->origin_class << "#" << m->selector
          << " " << VisibilityName(m->visibility)
          << (refs > 1 ? " shared" : "") << "\n";
      if (std::find(methods.begin(), methods.end(), m.get()) == methods.end()) {
        methods.push_back(m.get());
      }
    }
    std::sort(methods.begin(), methods.end(),
              [](const CompiledMethod* a, const CompiledMethod* b) {
                return a->selector < b->selector;
              });
    for (const CompiledMethod* m : methods) {
      out << "  " << RenderCompiled(*m) << "\n";
    }
  }
  std::vector<DeferredSite> deferred = image.DeferredSites();
  if (!deferred.empty()) {
    out << "deferred\n";
    for (const DeferredSite& d : deferred) {
      out << "  " << d.class_name << "#" << d.method << " -> " << d.selector
          << "\n";
    }
  }
  out << "main { " << PrintExpr(*image.main().source_body) << " }\n";
  return out.str();
}

}  // namespace protolite
