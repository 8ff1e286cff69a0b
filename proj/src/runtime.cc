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

#include "protolite/runtime.h"

#include <string>
#include <utility>

namespace protolite {

LookupResult DefaultLookup(const RuntimeImage& image, ClassIndex cls,
                           Symbol selector) {
  for (ClassIndex c = cls; c != kNoClass; c = image.klass(c).superclass) {
    const MethodDictionary& d = image.klass(c).dictionary;
    auto it = d.find(selector);
    if (it != d.end()) return {it->second.get(), c};
  }
  return {};
}

std::size_t GlobalCache::Slot(ClassIndex cls, Symbol selector) {
  std::uint64_t k = (std::uint64_t{cls} << 32) | selector.id();
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return static_cast<std::size_t>(k % kGlobalCacheSize);
}

LookupResult GlobalCache::Lookup(const RuntimeImage& image, ClassIndex cls,
                                 Symbol selector) {
  const std::size_t h0 = Slot(cls, selector);
  Entry* empty = nullptr;
  for (std::size_t i = 0; i < kGlobalCacheProbes; ++i) {
    Entry& e = table_[(h0 + i) % kGlobalCacheSize];
    if (!e.used) {
      if (empty == nullptr) empty = &e;
      continue;
    }
    if (e.cls == cls && e.selector == selector) {
      ++hits_[i];
      return e.result;
    }
  }
  ++misses_;
  LookupResult r = DefaultLookup(image, cls, selector);
  if (r.found()) {
    Entry& slot = empty != nullptr ? *empty : table_[h0];
    slot = {true, cls, selector, r};
    ++installs_;
  }
  return r;
}

void GlobalCache::Flush() { table_.fill(Entry{}); }

void GlobalCache::ResetCounters() {
  hits_.fill(0);
  misses_ = 0;
  installs_ = 0;
}

std::size_t GlobalCache::occupied() const {
  std::size_t n = 0;
  for (const Entry& e : table_) n += e.used ? 1 : 0;
  return n;
}

void InlineCache::Record(ClassIndex cls, const CompiledMethod* method) {
  if (state_ == State::kMegamorphic || Find(cls) != nullptr) return;
  if (size_ == kInlineCacheCapacity) {
    state_ = State::kMegamorphic;
    size_ = 0;
    return;
  }
  entries_[size_++] = {cls, method};
  state_ = size_ == 1 ? State::kMonomorphic : State::kPolymorphic;
}

Runtime::Runtime(const RuntimeImage& image, RuntimeConfig config)
    : image_(image), config_(config), inline_(image.site_count()) {}

void Runtime::Shadow(ClassIndex cls, Symbol selector,
                     const CompiledMethod* m) {
  if (DefaultLookup(image_, cls, selector).method != m) ++shadow_mismatches_;
}

LookupResult Runtime::SlowLookup(ClassIndex cls, Symbol selector) {
  keys_.insert((std::uint64_t{cls} << 32) | selector.id());
  if (!config_.global_cache) return DefaultLookup(image_, cls, selector);
  LookupResult r = global_.Lookup(image_, cls, selector);
  if (config_.shadow_lookup) Shadow(cls, selector, r.method);
  return r;
}

LookupResult Runtime::Lookup(ClassIndex cls, Symbol selector) {
  return SlowLookup(cls, selector);
}

const CompiledMethod* Runtime::Dispatch(std::uint32_t site, ClassIndex cls,
                                        Symbol selector) {
  ++sends_;
  if (!config_.inline_cache) return SlowLookup(cls, selector).method;
  InlineCache& ic = inline_[site];
  if (const CompiledMethod* m = ic.Find(cls)) {
    ++ic_hits_;
    if (config_.shadow_lookup) Shadow(cls, selector, m);
    return m;
  }
  ++ic_misses_;
  const CompiledMethod* m = SlowLookup(cls, selector).method;
  if (m != nullptr && ic.state() != InlineCache::State::kMegamorphic) {
    ++ic_fills_;
    ic.Record(cls, m);
  }
  return m;
}

CacheStats Runtime::Stats() const {
  CacheStats s;
  s.probe1 = global_.hits()[0];
  s.probe2 = global_.hits()[1];
  s.probe3 = global_.hits()[2];
  s.misses = global_.misses();
  s.distinct_keys = keys_.size();
  for (const InlineCache& ic : inline_) {
    switch (ic.state()) {
      case InlineCache::State::kMonomorphic: ++s.ic_mono; break;
      case InlineCache::State::kPolymorphic: ++s.ic_poly; break;
      case InlineCache::State::kMegamorphic: ++s.ic_mega; break;
      case InlineCache::State::kEmpty: break;
    }
  }
  s.ic_hits = ic_hits_;
  s.ic_misses = ic_misses_;
  s.ic_fills = ic_fills_;
  s.sends = sends_;
  s.shadow_mismatches = shadow_mismatches_;
  return s;
}

void Runtime::ResetStats() {
  global_.ResetCounters();
  keys_.clear();
  ic_hits_ = ic_misses_ = ic_fills_ = sends_ = shadow_mismatches_ = 0;
}

void Runtime::FlushCaches() {
  global_.Flush();
  inline_.assign(image_.site_count(), InlineCache());
}

ClassIndex Runtime::ClassOf(Value oid) const {
  return objects_.at(oid.oid() - 1).cls;
}

Outcome Runtime::Run(std::uint64_t fuel) {
  objects_.clear();
  fields_.clear();
  stack_.clear();
  locals_.clear();
  frames_.clear();

  const CompiledMethod& main = image_.main();
  if (main.unknown_field) {
    return Outcome::OfError(
        StuckReason::UnknownField(std::string(kObjectClass),
                                  *main.unknown_field),
        0);
  }
  std::uint64_t steps = 0;
  locals_.resize(main.locals);
  frames_.push_back({&main, main.code.data(), Value::Nil(), 0, 0});

  Frame* f = &frames_.back();
  auto stuck = [&](StuckReason r) {
    return Outcome::OfError(std::move(r), steps);
  };
  auto class_name = [&](ClassIndex c) { return image_.klass(c).name; };

  // Pushes an activation of `m` for the receiver and argc arguments on top
  // of the stack, or returns the reason it cannot be activated.
  auto activate = [&](const CompiledMethod* m, Value self, ClassIndex cls,
                      std::uint32_t argc) -> std::optional<StuckReason> {
    if (m->params.size() != argc) {
      return StuckReason::ArityMismatch(class_name(cls), m->selector,
                                        m->params.size(), argc);
    }
    if (m->unknown_field) {
      return StuckReason::UnknownField(m->origin_class, *m->unknown_field);
    }
    auto base = static_cast<std::uint32_t>(locals_.size());
    locals_.resize(base + m->locals);
    const std::size_t first_arg = stack_.size() - argc;
    for (std::uint32_t i = 0; i < argc; ++i) {
      locals_[base + i] = stack_[first_arg + i];
    }
    stack_.resize(first_arg - 1);
    frames_.push_back({m, m->code.data(), self, base,
                       static_cast<std::uint32_t>(stack_.size())});
    f = &frames_.back();
    ++steps;
    return std::nullopt;
  };

  for (;;) {
    const Instr& in = *f->pc++;
    switch (in.op) {
      case Op::kPushNil:
        stack_.push_back(Value::Nil());
        break;
      case Op::kPushInt:
        stack_.push_back(Value::Int(in.imm));
        break;
      case Op::kPushSelf:
        stack_.push_back(f->self);
        break;
      case Op::kLoadLocal:
        stack_.push_back(locals_[f->locals + in.arg]);
        break;
      case Op::kUnboundVar:
        if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
        return stuck(StuckReason::UnknownVariable(
            f->method->names[static_cast<std::size_t>(in.arg)]));
      case Op::kNew: {
        if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
        if (in.arg == kNoClass) {
          return stuck(StuckReason::UnknownClass(
              f->method->names[static_cast<std::size_t>(in.imm)]));
        }
        const ClassInfo& c = image_.klass(in.arg);
        objects_.push_back(
            {in.arg, static_cast<std::uint32_t>(fields_.size())});
        fields_.resize(fields_.size() + c.fields.size());
        stack_.push_back(Value::Oid(objects_.size()));
        ++steps;
        break;
      }
      case Op::kGetField: {
        if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
        const HeapObject& o = objects_[f->self.oid() - 1];
        stack_.push_back(fields_[o.fields + in.arg]);
        ++steps;
        break;
      }
      case Op::kSetField: {
        if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
        const HeapObject& o = objects_[f->self.oid() - 1];
        fields_[o.fields + in.arg] = stack_.back();
        ++steps;
        break;
      }
      case Op::kSend: {
        if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
        const SendSite& site = f->method->sites[in.arg];
        Value recv = stack_[stack_.size() - site.argc - 1];
        if (recv.is_int()) {
          if (!site.primitive_plus) {
            return stuck(StuckReason::DoesNotUnderstand(
                std::string(kIntegerClass), site.selector));
          }
          if (site.argc != 1) {
            return stuck(StuckReason::ArityMismatch(
                std::string(kIntegerClass), site.selector, 1, site.argc));
          }
          Value arg = stack_.back();
          if (!arg.is_int()) {
            return stuck(StuckReason::BadOperand(site.selector));
          }
          stack_.pop_back();
          stack_.back() = Value::Int(WrappingAdd(recv.int_value(),
                                                 arg.int_value()));
          ++steps;
          break;
        }
        if (recv.is_nil()) {
          return stuck(StuckReason::NilReceiver(site.selector));
        }
        ClassIndex cls = objects_[recv.oid() - 1].cls;
        const CompiledMethod* m =
            Dispatch(f->method->site_base + in.arg, cls, site.symbol);
        if (m == nullptr) {
          return stuck(
              StuckReason::DoesNotUnderstand(class_name(cls), site.selector));
        }
        if (auto r = activate(m, recv, cls, site.argc)) return stuck(*r);
        break;
      }
      case Op::kSuperSend: {
        if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
        const SendSite& site = f->method->sites[in.arg];
        Value recv = stack_[stack_.size() - site.argc - 1];
        if (recv.is_nil()) {
          return stuck(StuckReason::NilReceiver(site.selector));
        }
        ClassIndex cls = objects_[recv.oid() - 1].cls;
        ++sends_;
        const CompiledMethod* m =
            site.super_start == kNoClass
                ? nullptr
                : SlowLookup(site.super_start, site.symbol).method;
        if (m == nullptr) {
          return stuck(
              StuckReason::DoesNotUnderstand(class_name(cls), site.selector));
        }
        if (auto r = activate(m, recv, cls, site.argc)) return stuck(*r);
        break;
      }
      case Op::kBindLocal:
        if (steps >= fuel) return Outcome::OfFuelExhausted(steps);
        locals_[f->locals + in.arg] = stack_.back();
        stack_.pop_back();
        ++steps;
        break;
      case Op::kReturn: {
        Value v = stack_.back();
        stack_.resize(f->stack);
        locals_.resize(f->locals);
        frames_.pop_back();
        if (frames_.empty()) return Outcome::OfValue(v, steps);
        f = &frames_.back();
        stack_.push_back(v);
        break;
      }
    }
  }
}

Outcome RunImage(const RuntimeImage& image, RuntimeConfig config,
                 std::uint64_t fuel, CacheStats* stats) {
  Runtime rt(image, config);
  Outcome out = rt.Run(fuel);
  if (stats != nullptr) *stats = rt.Stats();
  return out;
}

}  // namespace protolite
