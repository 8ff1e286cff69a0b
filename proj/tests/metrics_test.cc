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

#include <set>
#include <string>

#include "gtest/gtest.h"
#include "protolite/compiler.h"
#include "protolite/parser.h"
#include "protolite/report.h"
#include "protolite/validate.h"
#include "test_util.h"

namespace protolite {
namespace {

using testing::AccessSample;
using testing::LoadProgram;

// Distinct selectors of methods defined in rewritten classes.
std::uint64_t ScopedSelectors(const Program& p, const RewriteScope& s) {
  std::set<std::string> out;
  for (const ClassDef& c : p.classes) {
    if (!s.Contains(c.name)) continue;
    for (const MethodDef& m : c.public_methods) out.insert(m.selector);
    for (const MethodDef& m : c.protected_methods) out.insert(m.selector);
  }
  return out.size();
}

TEST(MeasureImageTest, AccessSampleCounts) {
  MemoryReport r = MeasureImage(CompileProgram(AccessSample("1")));
  ASSERT_EQ(r.classes.size(), 2u);
  EXPECT_EQ(r.Find("A")->entries, 4u);
  EXPECT_EQ(r.Find("A")->mangled_entries, 3u);
  EXPECT_EQ(r.Find("B")->entries, 7u);
  EXPECT_EQ(r.Find("B")->plain_entries, 3u);
  EXPECT_EQ(r.total_entries, 11u);
  EXPECT_EQ(r.compiled_methods, 7u);
  // Plain keys: callProtected sum raiseError publicInSubclass.
  EXPECT_EQ(r.plain_symbols, 4u);
  EXPECT_EQ(r.mangled_symbols, 5u);
  EXPECT_EQ(r.dictionary_bytes, 11 * kEntryBytes);
  EXPECT_EQ(r.Find("Nope"), nullptr);
}

TEST(MeasureImageTest, ByteModel) {
  MemoryReport r = MeasureImage(
      CompileProgram(Parse("class A extends Object { method ab() { 1 } } "
                           "main { 1 }")));
  EXPECT_EQ(r.dictionary_bytes, kEntryBytes);
  EXPECT_EQ(r.symbol_bytes, kSymbolHeaderBytes + 2);
  EXPECT_EQ(r.total_bytes(), kEntryBytes + kSymbolHeaderBytes + 2);
}

TEST(MeasureImageTest, ProtectedFreeHasNoMangledSymbols) {
  GeneratorOptions o;
  o.protected_ratio = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    MemoryReport r = MeasureImage(CompileProgram(GenerateProgram(seed, o)));
    ASSERT_EQ(r.mangled_symbols, 0u) << "seed " << seed;
  }
}

TEST(MeasureImageTest, AccountingLawsOnGeneratedPrograms) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Program p = GenerateProgram(seed);
    RewriteScope scope = ComputeRewriteScope(p);
    MemoryReport mangled = MeasureImage(CompileProgram(p));
    MemoryReport base =
        MeasureImage(CompileProgram(p, {CompileMode::kBaseline}));
    std::uint64_t total = 0;
    for (const ClassDef& c : p.classes) {
      std::uint64_t want = scope.Contains(c.name)
                               ? 2 * c.public_methods.size() +
                                     c.protected_methods.size()
                               : c.public_methods.size();
      ASSERT_EQ(mangled.Find(c.name)->entries, want) << "seed " << seed;
      total += want;
    }
    ASSERT_EQ(mangled.total_entries, total);
    ASSERT_EQ(mangled.mangled_symbols, ScopedSelectors(p, scope))
        << "seed " << seed;
    ASSERT_EQ(mangled.compiled_methods, base.compiled_methods);
    ASSERT_EQ(base.mangled_symbols, 0u);
  }
}

TEST(MeasureImageTest, WorstCaseSymbolRatio) {
  for (const char* file : {"listing1.stl", "propagation.stl", "counter.stl"}) {
    Program p = LoadProgram(file);
    MemoryReport worst =
        MeasureImage(CompileProgram(p, {CompileMode::kWorstCase}));
    MemoryReport base =
        MeasureImage(CompileProgram(p, {CompileMode::kBaseline}));
    WorstCaseRatios r = Ratios(worst, base);
    EXPECT_DOUBLE_EQ(r.symbols,
                     static_cast<double>(worst.plain_symbols +
                                         worst.mangled_symbols) /
                         static_cast<double>(base.plain_symbols));
    EXPECT_DOUBLE_EQ(r.entries, 2.0) << file;
    EXPECT_DOUBLE_EQ(r.compiled_methods, 1.0);
  }
}

TEST(DictionariesEqualTest, DetectsDifferences) {
  Program p = AccessSample("1");
  EXPECT_TRUE(DictionariesEqual(CompileProgram(p), CompileProgram(p)));
  EXPECT_FALSE(DictionariesEqual(
      CompileProgram(p), CompileProgram(p, {CompileMode::kBaseline})));
}

TEST(CacheConfigTest, Enumeration) {
  std::set<std::pair<bool, bool>> seen;
  for (std::size_t i = 0; i < kCacheConfigCount; ++i) {
    seen.insert({CacheConfig(i).global_cache, CacheConfig(i).inline_cache});
  }
  EXPECT_EQ(seen.size(), 4u);
  EXPECT_TRUE(CacheConfig(0).global_cache && CacheConfig(0).inline_cache);
  EXPECT_EQ(CacheConfigName(CacheConfig(0)), "global+inline");
}

TEST(DifferentialRunTest, GoldenProgramsAgree) {
  for (const char* file :
       {"appendixB_callProtected_A.stl", "appendixB_callProtected_B.stl",
        "appendixB_protectedMethod.stl", "appendixB_raiseError.stl",
        "appendixB_sum.stl", "appendixB_publicInSubclass.stl",
        "propagation.stl",
        "deferred.stl", "counter.stl"}) {
    DiffResult d = DifferentialRun(LoadProgram(file), kDefaultFuel, file);
    EXPECT_TRUE(d.agree) << file << ": " << d.detail;
    EXPECT_EQ(d.lookup_mismatches, 0u);
    EXPECT_FALSE(d.baseline.has_value());
  }
}

TEST(DifferentialRunTest, ProtectedFreeIsThreeWay) {
  Program p = Parse(R"(class A extends Object { method m() { self.n() }
                                               method n() { 4 } }
                      main { (new A).m() })");
  DiffResult d = DifferentialRun(p, kDefaultFuel);
  ASSERT_TRUE(d.agree) << d.detail;
  ASSERT_TRUE(d.baseline.has_value());
  EXPECT_EQ(*d.baseline, d.runtime);
  EXPECT_TRUE(d.dictionaries_equal.value_or(false));
}

TEST(DifferentialRunTest, FuzzCorpusAgrees) {
  GeneratorOptions free;
  free.protected_ratio = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    DiffResult a = DifferentialRun(GenerateProgram(seed), 20000);
    ASSERT_TRUE(a.agree) << "seed " << seed << ": " << a.detail;
    DiffResult b = DifferentialRun(GenerateProgram(seed, free), 20000);
    ASSERT_TRUE(b.agree) << "seed " << seed << ": " << b.detail;
    ASSERT_TRUE(b.baseline.has_value());
  }
}

TEST(DifferentialRunTest, FuelExhaustionAgrees) {
  DiffResult d = DifferentialRun(LoadProgram("counter.stl"), 50);
  EXPECT_TRUE(d.agree) << d.detail;
  EXPECT_EQ(d.reference.kind, Outcome::Kind::kFuelExhausted);
}

TEST(GeneratorTest, DeterministicAndValid) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Program a = GenerateProgram(seed);
    ASSERT_EQ(PrettyPrint(a), PrettyPrint(GenerateProgram(seed)));
    ASSERT_TRUE(Validate(a).empty()) << PrettyPrint(a);
  }
  EXPECT_NE(PrettyPrint(GenerateProgram(1)), PrettyPrint(GenerateProgram(2)));
}

TEST(GeneratorTest, RespectsBounds) {
  GeneratorOptions o;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Program p = GenerateProgram(seed, o);
    ASSERT_LE(static_cast<int>(p.classes.size()), o.max_classes);
    ASSERT_GE(p.classes.size(), 1u);
    for (const ClassDef& c : p.classes) {
      ASSERT_LE(static_cast<int>(c.public_methods.size() +
                                 c.protected_methods.size()),
                o.max_methods);
      int depth = 0;
      for (const ClassDef* k = &c; k != nullptr;
           k = p.FindClass(k->superclass)) {
        ++depth;
      }
      ASSERT_LE(depth, o.max_depth);
    }
  }
}

TEST(GeneratorTest, CorpusCoversInterestingShapes) {
  int with_protected = 0;
  int with_deferred = 0;
  int values = 0;
  int dnu = 0;
  int hook_callers = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Program p = GenerateProgram(seed);
    RuntimeImage image = CompileProgram(p);
    RewriteScope s = ComputeRewriteScope(p);
    bool any_protected = false;
    for (const ClassDef& c : p.classes) {
      any_protected |= !c.protected_methods.empty();
      if (s.roots.count(c.name) > 0 && c.protected_methods.empty()) {
        ++hook_callers;
      }
    }
    with_protected += any_protected ? 1 : 0;
    with_deferred += image.DeferredSites().empty() ? 0 : 1;
    Outcome o = RunImage(image, {}, 20000);
    values += o.kind == Outcome::Kind::kValue ? 1 : 0;
    dnu += o.kind == Outcome::Kind::kRuntimeError &&
                   o.error.kind == StuckReason::Kind::kDoesNotUnderstand
               ? 1
               : 0;
  }
  EXPECT_GT(with_protected, 300);
  EXPECT_GT(with_deferred, 0);
  EXPECT_GT(values, 200);
  EXPECT_GT(dnu, 100);
  EXPECT_GT(hook_callers, 0);
}

TEST(BenchTest, RejectsBadOptions) {
  RuntimeImage image = CompileProgram(LoadProgram("counter.stl"));
  BenchOptions o;
  o.iterations = 0;
  EXPECT_THROW(Bench(image, {}, o), BenchError);
  o.iterations = 5;
  o.warmup = 5;
  EXPECT_THROW(Bench(image, {}, o), BenchError);
  o.warmup = 1;
  o.fuel = 10;
  EXPECT_THROW(Bench(image, {}, o), BenchError);
}

TEST(BenchTest, ReportShape) {
  RuntimeImage image = CompileProgram(LoadProgram("counter.stl"));
  BenchOptions o;
  o.invocations = 2;
  o.iterations = 4;
  o.warmup = 1;
  BenchReport r = Bench(image, {}, o, "x");
  EXPECT_EQ(r.times_ms.size(), 6u);
  EXPECT_EQ(r.outcome.value, Value::Int(300));
  EXPECT_EQ(r.median_ms, Median(r.times_ms));
  EXPECT_EQ(r.stats.misses, 0u);
  EXPECT_FALSE(r.overhead.has_value());
  BenchReport base = r;
  base.median_ms = r.median_ms / 2;
  CompareToBaseline(r, base);
  ASSERT_TRUE(r.overhead.has_value());
  EXPECT_NEAR(*r.overhead, 1.0, 1e-9);
}

TEST(BenchTest, MedianOfEvenAndOdd) {
  EXPECT_DOUBLE_EQ(Median({3, 1, 2}), 2);
  EXPECT_DOUBLE_EQ(Median({4, 1, 3, 2}), 2.5);
}

// Alternates short runs of both configurations so machine drift hits
// both alike.
TEST(BenchTest, CachesOnIsNotSlower) {
  RuntimeImage image = CompileProgram(LoadProgram("counter.stl"));
  BenchOptions o;
  o.invocations = 1;
  o.repeat = 20;
  std::vector<double> on;
  std::vector<double> off;
  for (int round = 0; round < 10; ++round) {
    BenchReport a = Bench(image, CacheConfig(0), o);
    BenchReport b = Bench(image, CacheConfig(3), o);
    on.insert(on.end(), a.times_ms.begin(), a.times_ms.end());
    off.insert(off.end(), b.times_ms.begin(), b.times_ms.end());
  }
  EXPECT_LE(Median(on), Median(off));
}

TEST(BenchTest, PairedBenchInterleavesAndCompares) {
  Program p = LoadProgram("counter.stl");
  RuntimeImage base = CompileProgram(p, {CompileMode::kBaseline});
  RuntimeImage worst = CompileProgram(p, {CompileMode::kWorstCase});
  BenchOptions o;
  o.invocations = 3;
  o.iterations = 4;
  o.warmup = 1;
  BenchPair pair = BenchAgainstBaseline(base, worst, {}, o);
  EXPECT_EQ(pair.baseline.times_ms.size(), 9u);
  EXPECT_EQ(pair.measured.times_ms.size(), 9u);
  EXPECT_EQ(pair.baseline.mode, CompileMode::kBaseline);
  EXPECT_EQ(pair.measured.mode, CompileMode::kWorstCase);
  EXPECT_EQ(pair.measured.outcome, pair.baseline.outcome);
  ASSERT_TRUE(pair.measured.overhead.has_value());
  EXPECT_FALSE(pair.baseline.overhead.has_value());
  EXPECT_EQ(pair.measured.stats.misses, 0u);
  o.iterations = 0;
  EXPECT_THROW(BenchAgainstBaseline(base, worst, {}, o), BenchError);
}

TEST(ReportTest, CacheStatsJsonShape) {
  CacheStats s;
  s.probe1 = 1;
  s.probe2 = 2;
  s.probe3 = 3;
  s.misses = 4;
  s.distinct_keys = 5;
  s.ic_mono = 6;
  s.ic_poly = 7;
  s.ic_mega = 8;
  EXPECT_EQ(CacheStatsJson(s).dump(),
            R"({"distinctKeys":5,"ic":{"mega":8,"mono":6,"poly":7},)"
            R"("misses":4,"probe1":1,"probe2":2,"probe3":3})");
  ProbeHistogram h = ProbePercentages(s);
  EXPECT_DOUBLE_EQ(h.probe1 + h.probe2 + h.probe3 + h.misses, 100.0);
  EXPECT_DOUBLE_EQ(h.misses, 40.0);
  EXPECT_EQ(FormatPercent(40), " 40.00%");
}

}  // namespace
}  // namespace protolite
