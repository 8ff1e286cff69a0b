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

// Dictionary accounting, differential runs against the reference
// evaluator, random program generation, and benchmarking.

#ifndef PROTOLITE_METRICS_H_
#define PROTOLITE_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "protolite/ast.h"
#include "protolite/image.h"
#include "protolite/outcome.h"
#include "protolite/runtime.h"

namespace protolite {

inline constexpr std::uint64_t kEntryBytes = 16;
inline constexpr std::uint64_t kSymbolHeaderBytes = 24;

struct ClassMemory {
  std::string name;
  std::uint64_t entries = 0;
  std::uint64_t plain_entries = 0;
  std::uint64_t mangled_entries = 0;
};

struct MemoryReport {
  std::vector<ClassMemory> classes;  // declaration order, Object excluded
  std::uint64_t total_entries = 0;
  // Distinct dictionary keys across the image.
  std::uint64_t plain_symbols = 0;
  std::uint64_t mangled_symbols = 0;
  std::uint64_t compiled_methods = 0;
  std::uint64_t dictionary_bytes = 0;
  std::uint64_t symbol_bytes = 0;

  std::uint64_t symbols() const { return plain_symbols + mangled_symbols; }
  std::uint64_t total_bytes() const { return dictionary_bytes + symbol_bytes; }
  const ClassMemory* Find(std::string_view name) const;
};

MemoryReport MeasureImage(const RuntimeImage& image);

// Same classes, and per class the same keys mapping to methods with the
// same origin, selector, and visibility.
bool DictionariesEqual(const RuntimeImage& a, const RuntimeImage& b);

inline constexpr std::size_t kCacheConfigCount = 4;
// {global, inline}: on/on, on/off, off/on, off/off.
RuntimeConfig CacheConfig(std::size_t i);
std::string CacheConfigName(const RuntimeConfig& c);

struct DiffResult {
  std::string program_id;
  Outcome reference;
  Outcome runtime;  // mangled image, all caches on
  // Mangled image under each CacheConfig(i).
  std::array<Outcome, kCacheConfigCount> configs;
  // Protected-free programs only.
  std::optional<Outcome> baseline;
  std::optional<bool> dictionaries_equal;
  // Cached lookups that disagreed with an uncached lookup.
  std::uint64_t lookup_mismatches = 0;
  bool agree = false;
  std::string detail;
};

// Runs the reference evaluator and the compiled image and compares them.
DiffResult DifferentialRun(const Program& p, std::uint64_t fuel,
                           std::string program_id = "");

struct GeneratorOptions {
  int max_classes = 8;
  int max_methods = 6;
  int max_depth = 5;
  // Chance that a selector without a public ancestor definition is
  // declared protected. Zero yields protected-free programs.
  double protected_ratio = 0.4;
  int max_expr_depth = 3;
};

// Valid by construction and deterministic per seed. Call chains always
// move to a later selector or up the hierarchy, so evaluation terminates.
Program GenerateProgram(std::uint64_t seed,
                        const GeneratorOptions& options = {});

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchOptions {
  int invocations = 10;
  int iterations = 15;
  int warmup = 5;
  // Evaluations of main per iteration.
  int repeat = 1;
  std::uint64_t fuel = kDefaultFuel;
};

struct BenchReport {
  std::string label;
  RuntimeConfig config;
  CompileMode mode = CompileMode::kProtected;
  BenchOptions options;
  // Measured (post-warm-up) iteration times of all invocations, in ms.
  std::vector<double> times_ms;
  double median_ms = 0;
  double mean_ms = 0;
  // (median - baseline median) / baseline median, when compared.
  std::optional<double> overhead;
  // Counters over the measured iterations of the last invocation.
  CacheStats stats;
  Outcome outcome;
};

// Fresh runtime per invocation; the first `warmup` iterations of each
// invocation are discarded. Throws BenchError on zero iterations, warm-up
// not below iterations, or fuel exhaustion.
BenchReport Bench(const RuntimeImage& image, RuntimeConfig config,
                  const BenchOptions& options, std::string label = "");

struct BenchPair {
  BenchReport baseline;
  BenchReport measured;  // overhead filled relative to `baseline`
};

// Benchmarks two images with the same options, alternating their
// iterations inside each invocation so that drift in machine speed hits
// both alike. The leading image alternates between invocations.
BenchPair BenchAgainstBaseline(const RuntimeImage& baseline,
                               const RuntimeImage& image, RuntimeConfig config,
                               const BenchOptions& options);

// Fills `report.overhead` relative to `baseline`.
void CompareToBaseline(BenchReport& report, const BenchReport& baseline);

double Median(std::vector<double> xs);

}  // namespace protolite

#endif  // PROTOLITE_METRICS_H_
