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

#include "protolite/metrics.h"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "protolite/compiler.h"
#include "protolite/hierarchy.h"
#include "protolite/reference.h"

namespace protolite {

const ClassMemory* MemoryReport::Find(std::string_view name) const {
  for (const ClassMemory& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

MemoryReport MeasureImage(const RuntimeImage& image) {
  MemoryReport r;
  std::set<std::string_view> plain;
  std::set<std::string_view> mangled;
  std::set<const CompiledMethod*> methods;
  for (const ClassInfo& c : image.classes()) {
    if (c.superclass == kNoClass) continue;
    ClassMemory cm{c.name};
    for (const auto& [sym, m] : c.dictionary) {
      std::string_view text = image.symbols().Text(sym);
      if (image.symbols().IsMangled(sym)) {
        ++cm.mangled_entries;
        mangled.insert(text);
      } else {
        ++cm.plain_entries;
        plain.insert(text);
      }
      methods.insert(m.get());
    }
    cm.entries = cm.plain_entries + cm.mangled_entries;
    r.total_entries += cm.entries;
    r.classes.push_back(std::move(cm));
  }
  r.plain_symbols = plain.size();
  r.mangled_symbols = mangled.size();
  r.compiled_methods = methods.size();
  r.dictionary_bytes = r.total_entries * kEntryBytes;
  for (const auto* set : {&plain, &mangled}) {
    for (std::string_view s : *set) {
      r.symbol_bytes += kSymbolHeaderBytes + s.size();
    }
  }
  return r;
}

namespace {

using DictionaryView = std::map<std::string, std::string>;

DictionaryView ViewOf(const RuntimeImage& image, const ClassInfo& c) {
  DictionaryView v;
  for (const auto& [sym, m] : c.dictionary) {
    v.emplace(std::string(image.symbols().Text(sym)),
              m->origin_class + "#" + m->selector + " " +
                  std::string(VisibilityName(m->visibility)));
  }
  return v;
}

}  // namespace

bool DictionariesEqual(const RuntimeImage& a, const RuntimeImage& b) {
  if (a.classes().size() != b.classes().size()) return false;
  for (std::size_t i = 0; i < a.classes().size(); ++i) {
    const ClassInfo& ca = a.classes()[i];
    const ClassInfo& cb = b.classes()[i];
    if (ca.name != cb.name || ViewOf(a, ca) != ViewOf(b, cb)) return false;
  }
  return true;
}

RuntimeConfig CacheConfig(std::size_t i) {
  return RuntimeConfig{(i & 2) == 0, (i & 1) == 0};
}

std::string CacheConfigName(const RuntimeConfig& c) {
  std::string out = c.global_cache ? "global" : "no-global";
  out += c.inline_cache ? "+inline" : "+no-inline";
  return out;
}

DiffResult DifferentialRun(const Program& p, std::uint64_t fuel,
                           std::string program_id) {
  DiffResult d;
  d.program_id = std::move(program_id);
  d.reference = reference::EvalProgram(p, fuel);
  RuntimeImage image = CompileProgram(p);
  std::ostringstream detail;
  for (std::size_t i = 0; i < kCacheConfigCount; ++i) {
    RuntimeConfig config = CacheConfig(i);
    config.shadow_lookup = true;
    CacheStats stats;
    d.configs[i] = RunImage(image, config, fuel, &stats);
    d.lookup_mismatches += stats.shadow_mismatches;
  }
  d.runtime = d.configs[0];
  d.agree = true;
  auto mismatch = [&](const std::string& what, const Outcome& got) {
    d.agree = false;
    detail << what << ": " << got.ToString() << " (steps " << got.steps
           << ") vs reference " << d.reference.ToString() << " (steps "
           << d.reference.steps << "); ";
  };
  for (std::size_t i = 0; i < kCacheConfigCount; ++i) {
    if (!EquivalentOutcomes(d.reference, d.configs[i])) {
      mismatch("runtime " + CacheConfigName(CacheConfig(i)), d.configs[i]);
    }
  }
  bool protected_free = std::all_of(
      p.classes.begin(), p.classes.end(),
      [](const ClassDef& c) { return c.protected_methods.empty(); });
  if (protected_free) {
    RuntimeImage baseline = CompileProgram(p, {CompileMode::kBaseline});
    d.baseline = RunImage(baseline, {}, fuel);
    if (!(*d.baseline == d.reference) ||
        d.baseline->steps != d.reference.steps) {
      mismatch("baseline", *d.baseline);
    }
    if (!(d.runtime == d.reference) || d.runtime.steps != d.reference.steps) {
      mismatch("runtime (exact)", d.runtime);
    }
    d.dictionaries_equal = DictionariesEqual(image, baseline);
    if (!*d.dictionaries_equal) {
      d.agree = false;
      detail << "mangled and baseline dictionaries differ; ";
    }
  }
  if (d.lookup_mismatches > 0) {
    d.agree = false;
    detail << d.lookup_mismatches << " cached lookups disagree with lookup; ";
  }
  d.detail = detail.str();
  return d;
}

namespace {

class Generator {
 public:
  Generator(std::uint64_t seed, const GeneratorOptions& o)
      : rng_(seed), o_(o) {}

  Program Run() {
    MakeHierarchy();
    MakeSignatures();
    for (std::size_t c = 0; c < classes_.size(); ++c) MakeBodies(c);
    Program p;
    for (const ClassGen& c : classes_) p.classes.push_back(c.def);
    p.main = MakeMain();
    return p;
  }

 private:
  struct ClassGen {
    ClassDef def;
    int parent = -1;  // -1: Object
    int depth = 1;
    std::vector<std::string> fields;  // visible fields, inherited first
    // Selector index -> visibility of the own definition.
    std::map<int, Visibility> own;
  };

  struct Ctx {
    int cls = -1;  // -1: main
    int min_selector = 0;
    int super_selector = -1;
    std::vector<std::string> vars;
  };

  int Uniform(int lo, int hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng_() % span);
  }
  bool Chance(double p) {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p;
  }
  template <typename T>
  const T& Pick(const std::vector<T>& xs) {
    return xs[rng_() % xs.size()];
  }

  std::string Sel(int i) const { return "s" + std::to_string(i); }

  void MakeHierarchy() {
    int n = Uniform(1, std::max(1, o_.max_classes));
    for (int i = 0; i < n; ++i) {
      ClassGen g;
      g.def.name = "C" + std::to_string(i);
      std::vector<int> parents;
      for (int j = 0; j < i; ++j) {
        if (classes_[j].depth < o_.max_depth) parents.push_back(j);
      }
      if (!parents.empty() && !Chance(0.25)) {
        g.parent = Pick(parents);
        g.depth = classes_[g.parent].depth + 1;
        g.def.superclass = classes_[g.parent].def.name;
        g.fields = classes_[g.parent].fields;
      }
      int own_fields = Uniform(0, 2);
      for (int k = 0; k < own_fields; ++k) {
        std::string f = "f" + std::to_string(next_field_++);
        g.def.fields.push_back(f);
        g.fields.push_back(f);
      }
      classes_.push_back(std::move(g));
    }
  }

  void MakeSignatures() {
    selector_count_ = Uniform(2, 8);
    for (int s = 0; s < selector_count_; ++s) arity_.push_back(Uniform(0, 2));
    for (ClassGen& g : classes_) {
      std::vector<int> pool(selector_count_);
      std::iota(pool.begin(), pool.end(), 0);
      int count = Uniform(1, std::min(o_.max_methods, selector_count_));
      for (int k = 0; k < count; ++k) {
        std::size_t at = rng_() % pool.size();
        int s = pool[at];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
        bool public_above = false;
        for (int a = g.parent; a >= 0; a = classes_[a].parent) {
          auto it = classes_[a].own.find(s);
          if (it != classes_[a].own.end() &&
              it->second == Visibility::kPublic) {
            public_above = true;
          }
        }
        g.own[s] = !public_above && Chance(o_.protected_ratio)
                       ? Visibility::kProtected
                       : Visibility::kPublic;
      }
    }
  }

  void MakeBodies(std::size_t c) {
    ClassGen& g = classes_[c];
    for (const auto& [s, vis] : g.own) {
      MethodDef m;
      m.selector = Sel(s);
      m.visibility = vis;
      Ctx ctx;
      ctx.cls = static_cast<int>(c);
      ctx.min_selector = s + 1;
      ctx.super_selector = s;
      for (int k = 0; k < arity_[s]; ++k) {
        m.params.push_back("p" + std::to_string(k));
      }
      ctx.vars = m.params;
      m.body = Gen(o_.max_expr_depth, ctx);
      (vis == Visibility::kPublic ? g.def.public_methods
                                  : g.def.protected_methods)
          .push_back(std::move(m));
    }
  }

  ExprPtr MakeMain() {
    Ctx ctx;
    int lets = Uniform(1, 4);
    std::vector<std::pair<std::string, ExprPtr>> bindings;
    for (int k = 0; k < lets; ++k) {
      std::string var = "x" + std::to_string(next_var_++);
      bindings.emplace_back(var, ObjectSend(o_.max_expr_depth - 1, ctx));
      ctx.vars.push_back(var);
    }
    ExprPtr body = Chance(0.5) ? MakeVar(Pick(ctx.vars))
                               : Gen(o_.max_expr_depth - 1, ctx);
    for (auto it = bindings.rbegin(); it != bindings.rend(); ++it) {
      body = MakeLet(it->first, it->second, body);
    }
    return body;
  }

  ExprPtr Leaf(Ctx& ctx) {
    switch (Uniform(0, 9)) {
      case 0:
      case 1:
      case 2:
      case 3:
        return MakeInt(Uniform(-3, 20));
      case 4:
      case 5:
        if (!ctx.vars.empty()) return MakeVar(Pick(ctx.vars));
        return MakeInt(Uniform(0, 9));
      case 6:
        if (ctx.cls >= 0) return MakeSelf();
        return MakeNew(RandomClass());
      case 7:
        if (ctx.cls >= 0 && !classes_[ctx.cls].fields.empty()) {
          return MakeFieldGet(Pick(classes_[ctx.cls].fields));
        }
        return MakeNil();
      default:
        return MakeNew(RandomClass());
    }
  }

  const std::string& RandomClass() {
    return classes_[rng_() % classes_.size()].def.name;
  }

  std::vector<ExprPtr> Args(int selector, int depth, Ctx& ctx) {
    std::vector<ExprPtr> args;
    for (int k = 0; k < arity_[selector]; ++k) {
      args.push_back(Chance(0.7) ? Leaf(ctx) : Gen(depth - 1, ctx));
    }
    return args;
  }

  // Selectors >= min_selector defined in the chain from `cls` upward;
  // public ones only when `public_only`.
  std::vector<int> Answered(int cls, int min_selector, bool public_only) {
    std::vector<int> out;
    for (int s = min_selector; s < selector_count_; ++s) {
      for (int a = cls; a >= 0; a = classes_[a].parent) {
        auto it = classes_[a].own.find(s);
        if (it == classes_[a].own.end()) continue;
        if (!public_only || it->second == Visibility::kPublic) out.push_back(s);
        break;
      }
    }
    return out;
  }

  int AnySelector(int min_selector) {
    return Uniform(min_selector, selector_count_ - 1);
  }

  ExprPtr ObjectSend(int depth, Ctx& ctx) {
    if (ctx.min_selector >= selector_count_) return Leaf(ctx);
    std::vector<int> answering;
    for (int c = 0; c < static_cast<int>(classes_.size()); ++c) {
      if (!Answered(c, ctx.min_selector, true).empty()) answering.push_back(c);
    }
    int target = !answering.empty() && Chance(0.95)
                     ? Pick(answering)
                     : static_cast<int>(rng_() % classes_.size());
    std::vector<int> understood = Answered(target, ctx.min_selector, true);
    int s = !understood.empty() && Chance(0.93) ? Pick(understood)
                                                : AnySelector(ctx.min_selector);
    ExprPtr receiver = Chance(0.9) ? MakeNew(classes_[target].def.name)
                                   : Leaf(ctx);
    return MakeSend(receiver, Sel(s), Args(s, depth, ctx));
  }

  ExprPtr SelfSend(int depth, Ctx& ctx) {
    if (ctx.min_selector >= selector_count_) return Leaf(ctx);
    std::vector<int> answered = Answered(ctx.cls, ctx.min_selector, false);
    int s = !answered.empty() && Chance(0.9) ? Pick(answered)
                                             : AnySelector(ctx.min_selector);
    return MakeSend(MakeSelf(), Sel(s), Args(s, depth, ctx));
  }

  ExprPtr SuperSend(int depth, Ctx& ctx) {
    int parent = classes_[ctx.cls].parent;
    std::vector<int> answered;
    if (parent >= 0) {
      answered = Answered(parent, ctx.min_selector, false);
      if (!Answered(parent, ctx.super_selector, false).empty() &&
          Answered(parent, ctx.super_selector, false).front() ==
              ctx.super_selector) {
        answered.push_back(ctx.super_selector);
      }
    }
    int s;
    if (!answered.empty() && Chance(0.9)) {
      s = Pick(answered);
    } else if (ctx.min_selector < selector_count_ && Chance(0.5)) {
      s = AnySelector(ctx.min_selector);
    } else {
      s = ctx.super_selector;
    }
    return MakeSuperSend(Sel(s), Args(s, depth, ctx));
  }

  // Operands of `+`: mostly integers and sends that may answer one.
  ExprPtr Operand(int depth, Ctx& ctx) {
    if (depth <= 0 || Chance(0.5)) return MakeInt(Uniform(-3, 20));
    if (ctx.cls >= 0 && Chance(0.5)) return SelfSend(depth - 1, ctx);
    return Gen(depth - 1, ctx);
  }

  ExprPtr Gen(int depth, Ctx& ctx) {
    if (depth <= 0 || Chance(0.15)) return Leaf(ctx);
    bool in_method = ctx.cls >= 0;
    switch (Uniform(0, 10)) {
      case 0:
      case 1:
        return ObjectSend(depth, ctx);
      case 2:
      case 3:
      case 4:
        return in_method ? SelfSend(depth, ctx) : ObjectSend(depth, ctx);
      case 5:
        return in_method ? SuperSend(depth, ctx) : ObjectSend(depth, ctx);
      case 6:
      case 7:
        return MakePlus(Operand(depth, ctx), Operand(depth, ctx));
      case 8: {
        std::string var = "x" + std::to_string(next_var_++);
        ExprPtr bound = Gen(depth - 1, ctx);
        ctx.vars.push_back(var);
        ExprPtr body = Gen(depth - 1, ctx);
        ctx.vars.pop_back();
        return MakeLet(var, bound, body);
      }
      case 9:
        if (in_method && !classes_[ctx.cls].fields.empty()) {
          return MakeFieldSet(Pick(classes_[ctx.cls].fields),
                              Gen(depth - 1, ctx));
        }
        return Leaf(ctx);
      default:
        return Leaf(ctx);
    }
  }

  std::mt19937_64 rng_;
  GeneratorOptions o_;
  std::vector<ClassGen> classes_;
  int selector_count_ = 0;
  std::vector<int> arity_;
  int next_field_ = 0;
  int next_var_ = 0;
};

}  // namespace

Program GenerateProgram(std::uint64_t seed, const GeneratorOptions& options) {
  return Generator(seed, options).Run();
}

double Median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

namespace {

void CheckBenchOptions(const BenchOptions& options) {
  if (options.iterations <= 0 || options.invocations <= 0 ||
      options.repeat <= 0) {
    throw BenchError("benchmark needs at least one invocation, iteration, "
                     "and repetition");
  }
  if (options.warmup < 0 || options.warmup >= options.iterations) {
    throw BenchError("warm-up must leave at least one measured iteration");
  }
}

BenchReport StartReport(const RuntimeImage& image, RuntimeConfig config,
                        const BenchOptions& options, std::string label) {
  BenchReport report;
  report.label = std::move(label);
  report.config = config;
  report.mode = image.mode();
  report.options = options;
  return report;
}

// One timed iteration: `repeat` evaluations of main.
void TimeIteration(Runtime& rt, int it, BenchReport& report) {
  using Clock = std::chrono::steady_clock;
  const BenchOptions& options = report.options;
  if (it == options.warmup) rt.ResetStats();
  auto start = Clock::now();
  for (int r = 0; r < options.repeat; ++r) {
    report.outcome = rt.Run(options.fuel);
    if (report.outcome.kind == Outcome::Kind::kFuelExhausted) {
      throw BenchError("benchmark ran out of fuel after " +
                       std::to_string(report.outcome.steps) + " steps");
    }
  }
  std::chrono::duration<double, std::milli> elapsed = Clock::now() - start;
  if (it >= options.warmup) report.times_ms.push_back(elapsed.count());
}

void FinishReport(BenchReport& report) {
  report.median_ms = Median(report.times_ms);
  report.mean_ms = std::accumulate(report.times_ms.begin(),
                                   report.times_ms.end(), 0.0) /
                   static_cast<double>(report.times_ms.size());
}

}  // namespace

BenchReport Bench(const RuntimeImage& image, RuntimeConfig config,
                  const BenchOptions& options, std::string label) {
  CheckBenchOptions(options);
  BenchReport report = StartReport(image, config, options, std::move(label));
  for (int inv = 0; inv < options.invocations; ++inv) {
    Runtime rt(image, config);
    for (int it = 0; it < options.iterations; ++it) {
      TimeIteration(rt, it, report);
    }
    if (inv == options.invocations - 1) report.stats = rt.Stats();
  }
  FinishReport(report);
  return report;
}

BenchPair BenchAgainstBaseline(const RuntimeImage& baseline,
                               const RuntimeImage& image, RuntimeConfig config,
                               const BenchOptions& options) {
  CheckBenchOptions(options);
  BenchPair pair{StartReport(baseline, config, options, "baseline"),
                 StartReport(image, config, options, "measured")};
  for (int inv = 0; inv < options.invocations; ++inv) {
    Runtime base_rt(baseline, config);
    Runtime rt(image, config);
    const bool base_first = inv % 2 == 0;
    for (int it = 0; it < options.iterations; ++it) {
      if (base_first) TimeIteration(base_rt, it, pair.baseline);
      TimeIteration(rt, it, pair.measured);
      if (!base_first) TimeIteration(base_rt, it, pair.baseline);
    }
    if (inv == options.invocations - 1) {
      pair.baseline.stats = base_rt.Stats();
      pair.measured.stats = rt.Stats();
    }
  }
  FinishReport(pair.baseline);
  FinishReport(pair.measured);
  CompareToBaseline(pair.measured, pair.baseline);
  return pair;
}

void CompareToBaseline(BenchReport& report, const BenchReport& baseline) {
  report.overhead = baseline.median_ms > 0
                        ? (report.median_ms - baseline.median_ms) /
                              baseline.median_ms
                        : 0.0;
}

}  // namespace protolite
