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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <optional>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "protolite/compiler.h"
#include "protolite/metrics.h"
#include "protolite/parser.h"
#include "protolite/reference.h"
#include "protolite/report.h"
#include "protolite/runtime.h"
#include "protolite/validate.h"
#include "test_util.h"

namespace protolite {
namespace {

using testing::LoadProgram;

constexpr std::uint64_t kCorpusSize = 1000;
constexpr std::uint64_t kFuzzFuel = 20000;

// Collects failure notes for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && notes_.size() < 5) notes_.push_back(what);
    ok_ = ok_ && ok;
  }
  void Note(const std::string& s) { info_ = s; }
  bool ok() const { return ok_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::string& info() const { return info_; }

 private:
  bool ok_ = true;
  std::vector<std::string> notes_;
  std::string info_;
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_s;
  std::function<void(Check&)> body;
};

void GoldenSuite(Check& c) {
  struct Case {
    const char* file;
    std::optional<std::int64_t> value;
  };
  const Case kCases[] = {
      {"appendixB_callProtected_A.stl", 11},
      {"appendixB_callProtected_B.stl", 42},
      {"appendixB_protectedMethod.stl", std::nullopt},
      {"appendixB_raiseError.stl", std::nullopt},
      {"appendixB_sum.stl", 84},
      {"appendixB_publicInSubclass.stl", 36},
  };
  for (const Case& k : kCases) {
    Program p = LoadProgram(k.file);
    Outcome ref = reference::EvalProgram(p);
    RuntimeImage image = CompileProgram(p);
    auto matches = [&](const Outcome& o) {
      if (k.value) return o.kind == Outcome::Kind::kValue &&
                          o.value == Value::Int(*k.value);
      return o.kind == Outcome::Kind::kRuntimeError &&
             o.error.kind == StuckReason::Kind::kDoesNotUnderstand;
    };
    c.Expect(matches(ref), std::string(k.file) + " reference " +
                               ref.ToString());
    for (std::size_t i = 0; i < kCacheConfigCount; ++i) {
      Outcome o = RunImage(image, CacheConfig(i));
      c.Expect(matches(o) && o == ref,
               std::string(k.file) + " " + CacheConfigName(CacheConfig(i)) +
                   " " + o.ToString());
    }
  }
}

void NarrowingRejection(Check& c) {
  Program p = LoadProgram("narrowing.stl");
  auto narrowing = [](const ValidationError& e) {
    for (const Violation& v : e.report()) {
      if (v.rule == Rule::kOverridingPublicMethod) return true;
    }
    return false;
  };
  bool compile_rejected = false;
  try {
    CompileProgram(p);
  } catch (const ValidationError& e) {
    compile_rejected = narrowing(e);
  }
  c.Expect(compile_rejected, "whole-program compile accepted narrowing");

  Program ok = Parse(R"(class A extends Object { method size() { 1 } }
                       class B extends A { } main { (new B).size() })");
  RuntimeImage image = CompileProgram(ok);
  bool install_rejected = false;
  try {
    InstallMethod(image, "B",
                  ParseMethod("protected method size() { 2 }", ok, "B"));
  } catch (const ValidationError& e) {
    install_rejected = narrowing(e);
  }
  c.Expect(install_rejected, "installMethod accepted narrowing");
  c.Expect(RunImage(image).value == Value::Int(1),
           "rejected install altered the image");
}

void FuzzEquivalence(Check& c) {
  GeneratorOptions free;
  free.protected_ratio = 0;
  std::uint64_t agree_free = 0;
  std::uint64_t agree_protected = 0;
  std::uint64_t with_protected = 0;
  for (std::uint64_t seed = 0; seed < kCorpusSize; ++seed) {
    Program pf = GenerateProgram(seed, free);
    DiffResult a = DifferentialRun(pf, kFuzzFuel);
    bool three_way = a.agree && a.baseline.has_value() &&
                     *a.baseline == a.runtime &&
                     EquivalentOutcomes(a.reference, *a.baseline) &&
                     a.dictionaries_equal.value_or(false);
    c.Expect(three_way, "protected-free seed " + std::to_string(seed) + ": " +
                            a.detail + "\n" + PrettyPrint(pf));
    agree_free += three_way ? 1 : 0;

    Program pp = GenerateProgram(seed);
    bool any = false;
    for (const ClassDef& k : pp.classes) any |= !k.protected_methods.empty();
    with_protected += any ? 1 : 0;
    DiffResult b = DifferentialRun(pp, kFuzzFuel);
    bool ok = b.agree && EquivalentOutcomes(b.reference, b.runtime);
    c.Expect(ok, "protected seed " + std::to_string(seed) + ": " + b.detail +
                     "\n" + PrettyPrint(pp));
    agree_protected += ok ? 1 : 0;
  }
  c.Expect(with_protected >= kCorpusSize / 2,
           "corpus has too few programs with protected methods");
  std::ostringstream s;
  s << agree_free << "/" << kCorpusSize << " protected-free three-way, "
    << agree_protected << "/" << kCorpusSize << " protected ("
    << with_protected << " declare protected methods)";
  c.Note(s.str());
}

std::uint64_t ScopedSelectors(const Program& p, const RewriteScope& s) {
  std::set<std::string> out;
  for (const ClassDef& k : p.classes) {
    if (!s.Contains(k.name)) continue;
    for (const MethodDef& m : k.public_methods) out.insert(m.selector);
    for (const MethodDef& m : k.protected_methods) out.insert(m.selector);
  }
  return out.size();
}

void CheckLaws(Check& c, const Program& p, const std::string& id) {
  RewriteScope scope = ComputeRewriteScope(p);
  MemoryReport m = MeasureImage(CompileProgram(p));
  MemoryReport base = MeasureImage(CompileProgram(p, {CompileMode::kBaseline}));
  std::uint64_t total = 0;
  for (const ClassDef& k : p.classes) {
    std::uint64_t want = scope.Contains(k.name)
                             ? 2 * k.public_methods.size() +
                                   k.protected_methods.size()
                             : k.public_methods.size();
    const ClassMemory* cm = m.Find(k.name);
    c.Expect(cm != nullptr && cm->entries == want,
             id + " entries of " + k.name);
    total += want;
  }
  c.Expect(m.total_entries == total, id + " total entries");
  c.Expect(m.mangled_symbols == ScopedSelectors(p, scope),
           id + " mangled symbols");
  c.Expect(m.compiled_methods == base.compiled_methods,
           id + " compiled methods");
}

void Accounting(Check& c) {
  Program l1 = LoadProgram("listing1.stl");
  CheckLaws(c, l1, "listing1");
  MemoryReport m = MeasureImage(CompileProgram(l1));
  c.Expect(m.Find("A")->entries == 4 && m.Find("B")->entries == 7,
           "listing1 per-class entries");
  for (std::uint64_t seed = 0; seed < kCorpusSize; ++seed) {
    CheckLaws(c, GenerateProgram(seed), "seed " + std::to_string(seed));
  }
  MemoryReport worst =
      MeasureImage(CompileProgram(l1, {CompileMode::kWorstCase}));
  MemoryReport base =
      MeasureImage(CompileProgram(l1, {CompileMode::kBaseline}));
  WorstCaseRatios r = Ratios(worst, base);
  std::ostringstream s;
  s << "listing1 worst/baseline: entries " << r.entries << "x, symbols "
    << r.symbols << "x, compiled methods " << r.compiled_methods << "x";
  c.Note(s.str());
}

void CacheBehavior(Check& c) {
  // (a) Outcomes are identical under every cache configuration.
  for (std::uint64_t seed = 0; seed < kCorpusSize; ++seed) {
    RuntimeImage image = CompileProgram(GenerateProgram(seed));
    Outcome first = RunImage(image, CacheConfig(0), kFuzzFuel);
    for (std::size_t i = 1; i < kCacheConfigCount; ++i) {
      c.Expect(RunImage(image, CacheConfig(i), kFuzzFuel) == first,
               "transparency seed " + std::to_string(seed));
    }
  }
  // (b) No steady-state global misses on a workload of at most 200 keys.
  RuntimeImage keys = CompileProgram(Parse(testing::KeyWorkloadSource()));
  Runtime rt(keys);
  rt.Run();
  CacheStats warm = rt.Stats();
  c.Expect(warm.distinct_keys <= 200, "workload exceeds 200 keys");
  rt.ResetStats();
  for (int i = 0; i < 10; ++i) rt.Run();
  CacheStats steady = rt.Stats();
  c.Expect(steady.misses == 0, "steady-state misses on key workload");
  RuntimeImage counter = CompileProgram(LoadProgram("counter.stl"));
  Runtime global_only(counter, {true, false, false});
  global_only.Run();
  global_only.ResetStats();
  for (int i = 0; i < 10; ++i) global_only.Run();
  c.Expect(global_only.Stats().misses == 0,
           "steady-state misses on counter workload, global cache only");
  // (c) Worst-case mangling at most doubles the distinct keys.
  std::ostringstream s;
  s << warm.distinct_keys << " keys, steady misses " << steady.misses;
  for (const char* file : {"counter.stl", "listing1.stl", "propagation.stl"}) {
    Program p = LoadProgram(file);
    CacheStats base;
    CacheStats worst;
    RunImage(CompileProgram(p, {CompileMode::kBaseline}), {true, false, false},
             kDefaultFuel, &base);
    RunImage(CompileProgram(p, {CompileMode::kWorstCase}),
             {true, false, false}, kDefaultFuel, &worst);
    c.Expect(base.distinct_keys > 0 &&
                 worst.distinct_keys <= 2 * base.distinct_keys,
             std::string(file) + " distinct keys");
    s << "; " << file << " keys " << base.distinct_keys << " -> "
      << worst.distinct_keys;
  }
  c.Note(s.str());
}

void ProbeHistogramCheck(Check& c) {
  CacheStats s;
  Outcome o = RunImage(CompileProgram(LoadProgram("collision.stl")), {},
                       kDefaultFuel, &s);
  c.Expect(o.value == Value::Int(114), "collision workload value");
  c.Expect(s.probe2 >= 1, "no probe-2 hit on the collision workload");
  ProbeHistogram h = ProbePercentages(s);
  c.Expect(std::abs(h.probe1 + h.probe2 + h.probe3 + h.misses - 100.0) < 1e-9,
           "percentages do not sum to 100");
  auto j = CacheStatsJson(s);
  for (const char* k : {"probe1", "probe2", "probe3", "misses",
                        "distinctKeys", "ic"}) {
    c.Expect(j.contains(k), std::string("json lacks ") + k);
  }
  c.Note("probe1 " + FormatPercent(h.probe1) + " probe2 " +
         FormatPercent(h.probe2) + " probe3 " + FormatPercent(h.probe3) +
         " misses " + FormatPercent(h.misses));
}

void OverheadBound(Check& c) {
  Program p = LoadProgram("counter.stl");
  RuntimeImage worst = CompileProgram(p, {CompileMode::kWorstCase});
  RuntimeImage base = CompileProgram(p, {CompileMode::kBaseline});
  BenchOptions o;
  o.repeat = 50;
  BenchPair pair = BenchAgainstBaseline(base, worst, CacheConfig(0), o);
  const BenchReport& b = pair.baseline;
  const BenchReport& w = pair.measured;
  c.Expect(w.overhead.has_value() && *w.overhead <= 0.15,
           "worst-case overhead above 15%");
  std::ostringstream s;
  s << "baseline median " << b.median_ms << " ms, worst-case median "
    << w.median_ms << " ms, overhead " << (*w.overhead * 100) << "%";
  c.Note(s.str());
}

// Propagation sample classes with a different main expression.
std::string ReadProgramSourceWithMain(const std::string& main) {
  std::string src = testing::ReadProgramSource("propagation.stl");
  return src.substr(0, src.rfind("main")) + "main { " + main + " }\n";
}

void PropagationCheck(Check& c) {
  Program p = LoadProgram("propagation.stl");
  RuntimeImage image = CompileProgram(p);
  MemoryReport m = MeasureImage(image);
  c.Expect(m.Find("Root")->mangled_entries == 0, "root has mangled entries");
  std::string d = Desugar(image);
  c.Expect(d.find("class Root extends Object\n  copy -> Root#copy public\n") !=
               std::string::npos,
           "root dump");
  c.Expect(d.find("protected method A#protectedMethod() { self.copy() }") !=
               std::string::npos,
           "middle self-send was mangled");
  c.Expect(d.find("  copy -> B#copy public shared\n") != std::string::npos,
           "leaf lacks plain override");
  CompiledMethodPtr middle = image.Entry("A", "__protectedMethod");
  c.Expect(middle != nullptr && !middle->sites[0].mangled &&
               !middle->sites[0].deferred,
           "middle site tag");
  DiffResult r = DifferentialRun(p, kDefaultFuel);
  c.Expect(r.agree && r.runtime.value == Value::Int(3),
           "differential run " + r.detail);
  // The leaf override is what the plain self-send finds.
  Program leaf = Parse(ReadProgramSourceWithMain("(new B).run()"));
  c.Expect(RunImage(CompileProgram(leaf)).value == Value::Int(2) &&
               reference::EvalProgram(leaf).value == Value::Int(2),
           "leaf override not found");
}

void DeferredCheck(Check& c) {
  Program p = LoadProgram("deferred.stl");
  RuntimeImage before = CompileProgram(p);
  const SendSite& site = before.Entry("A", "anyMethod")->sites[0];
  c.Expect(!site.mangled && site.deferred, "site not compiled plain");
  c.Expect(RunImage(before).error ==
               StuckReason::DoesNotUnderstand("A", "unknown"),
           "run before install");
  RuntimeImage after = InstallMethod(
      before, "A", ParseMethod("protected method unknown() { 7 }", p, "A"));
  c.Expect(after.Entry("A", "anyMethod")->sites[0].mangled,
           "site not mangled after install");
  c.Expect(after.DeferredSites().empty(), "site still deferred");
  c.Expect(RunImage(after).value == Value::Int(7), "run after install");
}

}  // namespace

}  // namespace protolite

int main() {
  using protolite::Check;
  using protolite::Criterion;
  const Criterion kCriteria[] = {
      {"AC1", "golden suite under reference and all cache configs", 1,
       protolite::GoldenSuite},
      {"AC2", "narrowing rejected at compile and install", 0,
       protolite::NarrowingRejection},
      {"AC3", "differential fuzz equivalence", 60, protolite::FuzzEquivalence},
      {"AC4", "entry and symbol accounting laws", 0, protolite::Accounting},
      {"AC5", "cache transparency, steady state, key growth", 0,
       protolite::CacheBehavior},
      {"AC6", "probe histogram and live probe-2 hit", 0,
       protolite::ProbeHistogramCheck},
      {"AC7", "worst-case overhead within 15%", 120, protolite::OverheadBound},
      {"AC8", "propagation stops at public-only ancestors", 0,
       protolite::PropagationCheck},
      {"AC9", "deferred site mangled after install", 0,
       protolite::DeferredCheck},
  };
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  int failed = 0;
  for (const Criterion& k : kCriteria) {
    Check c;
    auto start = std::chrono::steady_clock::now();
    try {
      k.body(c);
    } catch (const std::exception& e) {
      c.Expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    if (k.budget_s > 0) {
      c.Expect(secs < k.budget_s, "time budget exceeded");
    }
    std::printf("%s %s  %s (%.2f s)\n", k.id, c.ok() ? "PASS" : "FAIL",
                k.title, secs);
    if (!c.info().empty()) std::printf("    %s\n", c.info().c_str());
    for (const std::string& n : c.notes()) {
      std::printf("    %s\n", n.c_str());
    }
    failed += c.ok() ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(std::size(kCriteria)) - failed,
              std::size(kCriteria));
  return failed == 0 ? 0 : 1;
}
