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

// protolite run|check|desugar|diff|bench|stats <file> [flags]

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "protolite/compiler.h"
#include "protolite/hierarchy.h"
#include "protolite/metrics.h"
#include "protolite/parser.h"
#include "protolite/reference.h"
#include "protolite/report.h"
#include "protolite/runtime.h"
#include "protolite/validate.h"

namespace protolite {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;

struct Flags {
  std::string file;
  bool no_global_cache = false;
  bool no_inline_cache = false;
  bool no_protect = false;
  bool worst_case = false;
  std::optional<std::uint64_t> fuel;
  bool json = false;
  bool reference = false;
  std::vector<std::string> installs;
  std::uint64_t seed = 0;
  std::string seeds;
  double protected_ratio = GeneratorOptions{}.protected_ratio;
  BenchOptions bench;
};

class ExitError {
 public:
  ExitError(int code, std::string message)
      : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

std::uint64_t Fuel(const Flags& f) {
  if (f.fuel) return *f.fuel;
  if (const char* env = std::getenv("PROTOLITE_FUEL")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ExitError(kExitInvalid,
                      "PROTOLITE_FUEL is not a number: " + std::string(env));
    }
  }
  return kDefaultFuel;
}

RuntimeConfig Config(const Flags& f) {
  return {!f.no_global_cache, !f.no_inline_cache, false};
}

CompileMode Mode(const Flags& f) {
  if (f.no_protect) return CompileMode::kBaseline;
  if (f.worst_case) return CompileMode::kWorstCase;
  return CompileMode::kProtected;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ExitError(kExitIo, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw ExitError(kExitIo, "error reading " + path);
  return s.str();
}

Program ParseFile(const std::string& path) {
  std::string source = ReadFile(path);
  try {
    return Parse(source);
  } catch (const SyntaxError& e) {
    throw ExitError(kExitInvalid, path + ":" + e.what());
  }
}

std::string ViolationsText(const ValidationReport& r) {
  std::string out;
  for (const Violation& v : r) out += v.ToString() + "\n";
  return out;
}

RuntimeImage Install(RuntimeImage image, const std::string& install_text) {
  std::size_t colon = install_text.find(':');
  if (colon == std::string::npos) {
    throw ExitError(kExitInvalid, "--install expects CLASS:METHOD-SOURCE");
  }
  std::string cls = install_text.substr(0, colon);
  if (!Hierarchy(image.program()).Find(cls)) {
    throw ExitError(kExitInvalid, "unknown class '" + cls + "'");
  }
  try {
    MethodDef m =
        ParseMethod(install_text.substr(colon + 1), image.program(), cls);
    return InstallMethod(image, cls, std::move(m));
  } catch (const SyntaxError& e) {
    throw ExitError(kExitInvalid, std::string("--install: ") + e.what());
  } catch (const ValidationError& e) {
    throw ExitError(kExitInvalid, ViolationsText(e.report()));
  }
}

RuntimeImage Compile(const Program& p, const Flags& f) {
  try {
    RuntimeImage image = CompileProgram(p, {Mode(f)});
    for (const std::string& text : f.installs) image = Install(image, text);
    return image;
  } catch (const ValidationError& e) {
    throw ExitError(kExitInvalid, ViolationsText(e.report()));
  }
}

int OutcomeExit(const Outcome& o) {
  return o.kind == Outcome::Kind::kValue ? kExitOk : kExitRuntime;
}

void PrintOutcome(const Outcome& o, bool json) {
  if (json) {
    std::cout << OutcomeJson(o).dump(2) << "\n";
  } else if (o.kind == Outcome::Kind::kValue) {
    std::cout << o.value.ToString() << "\n";
  } else {
    std::cout << o.ToString() << "\n";
  }
}

int CmdRun(const Flags& f) {
  Program p = ParseFile(f.file);
  Outcome o;
  if (f.reference) {
    if (!f.installs.empty()) {
      throw ExitError(kExitInvalid, "--install needs the compiled runtime");
    }
    try {
      RequireValid(p);
    } catch (const ValidationError& e) {
      throw ExitError(kExitInvalid, ViolationsText(e.report()));
    }
    o = reference::EvalProgram(p, Fuel(f));
  } else {
    RuntimeImage image = Compile(p, f);
    o = RunImage(image, Config(f), Fuel(f));
  }
  PrintOutcome(o, f.json);
  return OutcomeExit(o);
}

int CmdCheck(const Flags& f) {
  Program p = ParseFile(f.file);
  ValidationReport r = Validate(p);
  if (f.json) {
    std::cout << nlohmann::json{{"valid", r.empty()},
                                {"violations", ValidationReportJson(r)}}
                     .dump(2)
              << "\n";
  } else if (r.empty()) {
    std::cout << "ok\n";
  } else {
    std::cout << ViolationsText(r);
  }
  return r.empty() ? kExitOk : kExitInvalid;
}

int CmdDesugar(const Flags& f) {
  RuntimeImage image = Compile(ParseFile(f.file), f);
  std::cout << Desugar(image);
  return kExitOk;
}

std::pair<std::uint64_t, std::uint64_t> SeedRange(const std::string& text) {
  std::size_t dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      std::uint64_t s = std::stoull(text);
      return {s, s};
    }
    std::uint64_t lo = std::stoull(text.substr(0, dots));
    std::uint64_t hi = std::stoull(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty range");
    return {lo, hi};
  } catch (const std::exception&) {
    throw ExitError(kExitInvalid, "--seeds expects A..B, got '" + text + "'");
  }
}

int CmdDiff(const Flags& f) {
  const std::uint64_t fuel = Fuel(f);
  if (!f.file.empty()) {
    Program p = ParseFile(f.file);
    try {
      RequireValid(p);
    } catch (const ValidationError& e) {
      throw ExitError(kExitInvalid, ViolationsText(e.report()));
    }
    DiffResult d = DifferentialRun(p, fuel, f.file);
    if (f.json) {
      std::cout << DiffResultJson(d).dump(2) << "\n";
    } else {
      std::cout << "reference: " << d.reference.ToString() << "\n"
                << "runtime:   " << d.runtime.ToString() << "\n"
                << (d.agree ? "agree" : "DISAGREE: " + d.detail) << "\n";
    }
    return d.agree ? kExitOk : kExitRuntime;
  }
  auto [lo, hi] = SeedRange(f.seeds.empty() ? std::to_string(f.seed) : f.seeds);
  GeneratorOptions options;
  options.protected_ratio = f.protected_ratio;
  std::uint64_t total = 0;
  std::uint64_t agreed = 0;
  nlohmann::json failures = nlohmann::json::array();
  for (std::uint64_t seed = lo;; ++seed) {
    Program p = GenerateProgram(seed, options);
    DiffResult d = DifferentialRun(p, fuel, "seed " + std::to_string(seed));
    ++total;
    if (d.agree) {
      ++agreed;
    } else {
      nlohmann::json j = DiffResultJson(d);
      j["source"] = PrettyPrint(p);
      failures.push_back(j);
      if (!f.json) {
        std::cout << "seed " << seed << " disagrees: " << d.detail << "\n"
                  << PrettyPrint(p) << "\n";
      }
    }
    if (seed == hi) break;
  }
  if (f.json) {
    std::cout << nlohmann::json{{"programs", total},
                                {"agree", agreed},
                                {"failures", failures}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << agreed << "/" << total << " agree\n";
  }
  return agreed == total ? kExitOk : kExitRuntime;
}

void PrintBench(const BenchReport& r) {
  std::cout << r.label << " (" << CompileModeName(r.mode) << ", "
            << CacheConfigName(r.config) << "): median " << r.median_ms
            << " ms, mean " << r.mean_ms << " ms over " << r.times_ms.size()
            << " iterations";
  if (r.overhead) std::cout << ", overhead " << *r.overhead * 100 << "%";
  std::cout << "\n";
}

int CmdBench(const Flags& f) {
  Program p = ParseFile(f.file);
  RuntimeImage image = Compile(p, f);
  Flags base_flags = f;
  base_flags.no_protect = true;
  base_flags.worst_case = false;
  RuntimeImage baseline = Compile(p, base_flags);
  BenchOptions options = f.bench;
  options.fuel = Fuel(f);
  try {
    BenchPair pair = BenchAgainstBaseline(baseline, image, Config(f), options);
    const BenchReport& base = pair.baseline;
    const BenchReport& measured = pair.measured;
    if (f.json) {
      std::cout << nlohmann::json{{"baseline", BenchReportJson(base)},
                                  {"measured", BenchReportJson(measured)}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << options.invocations << " invocations x "
                << options.iterations << " iterations, " << options.warmup
                << " warm-up discarded, baseline and measured interleaved\n";
      PrintBench(base);
      PrintBench(measured);
    }
    return kExitOk;
  } catch (const BenchError& e) {
    throw ExitError(kExitRuntime, std::string("benchmark failed: ") + e.what());
  }
}

int CmdStats(const Flags& f) {
  Program p = ParseFile(f.file);
  RuntimeImage image = Compile(p, f);
  Runtime rt(image, Config(f));
  Outcome o = rt.Run(Fuel(f));
  CacheStats stats = rt.Stats();
  ProbeHistogram hist = ProbePercentages(stats);
  MemoryReport mem = MeasureImage(image);
  Flags worst_flags = f;
  worst_flags.no_protect = false;
  worst_flags.worst_case = true;
  Flags base_flags = f;
  base_flags.no_protect = true;
  base_flags.worst_case = false;
  MemoryReport worst = MeasureImage(Compile(p, worst_flags));
  MemoryReport base = MeasureImage(Compile(p, base_flags));
  WorstCaseRatios ratios = Ratios(worst, base);
  if (f.json) {
    nlohmann::json j = {{"mode", std::string(CompileModeName(image.mode()))},
                        {"config", CacheConfigName(Config(f))},
                        {"outcome", OutcomeJson(o)},
                        {"cache", CacheStatsJson(stats)},
                        {"probePercent", ProbeHistogramJson(hist)},
                        {"inlineCache",
                         {{"hits", stats.ic_hits},
                          {"misses", stats.ic_misses},
                          {"fills", stats.ic_fills}}},
                        {"memory", MemoryReportJson(mem)},
                        {"worstCase", MemoryReportJson(worst)},
                        {"baseline", MemoryReportJson(base)},
                        {"worstCaseRatios", RatiosJson(ratios)}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << "outcome: " << o.ToString() << " (" << o.steps << " steps)\n"
            << "mode: " << CompileModeName(image.mode())
            << ", caches: " << CacheConfigName(Config(f)) << "\n"
            << "global cache: " << stats.consultations()
            << " consultations\n"
            << "  probe1 " << FormatPercent(hist.probe1) << "  " << stats.probe1
            << "\n"
            << "  probe2 " << FormatPercent(hist.probe2) << "  " << stats.probe2
            << "\n"
            << "  probe3 " << FormatPercent(hist.probe3) << "  " << stats.probe3
            << "\n"
            << "  misses " << FormatPercent(hist.misses) << "  " << stats.misses
            << "\n"
            << "distinct keys: " << stats.distinct_keys << "\n"
            << "inline caches: mono " << stats.ic_mono << ", poly "
            << stats.ic_poly << ", mega " << stats.ic_mega << " (hits "
            << stats.ic_hits << ", misses " << stats.ic_misses << ")\n"
            << "dictionaries: " << mem.total_entries << " entries, "
            << mem.plain_symbols << " plain + " << mem.mangled_symbols
            << " mangled symbols, " << mem.compiled_methods
            << " compiled methods, " << mem.total_bytes() << " bytes\n";
  for (const ClassMemory& c : mem.classes) {
    std::cout << "  " << c.name << ": " << c.entries << " entries ("
              << c.plain_entries << " plain, " << c.mangled_entries
              << " mangled)\n";
  }
  std::cout << "worst case / baseline: entries " << ratios.entries
            << "x, symbols " << ratios.symbols << "x, compiled methods "
            << ratios.compiled_methods << "x, dictionary bytes "
            << ratios.dictionary_bytes << "x, symbol bytes "
            << ratios.symbol_bytes << "x, total bytes " << ratios.total_bytes
            << "x\n";
  return kExitOk;
}

void AddCompileFlags(CLI::App* cmd, Flags& f) {
  auto* np = cmd->add_flag("--no-protect", f.no_protect,
                           "Compile without mangling; protected as public");
  auto* wc = cmd->add_flag("--worst-case", f.worst_case,
                           "Every class rewritten, every method public");
  np->excludes(wc);
  cmd->add_option("--install", f.installs,
                  "Install CLASS:METHOD-SOURCE after compiling");
}

void AddRunFlags(CLI::App* cmd, Flags& f) {
  cmd->add_flag("--no-global-cache", f.no_global_cache, "Disable global cache");
  cmd->add_flag("--no-inline-cache", f.no_inline_cache,
                "Disable inline caches");
  cmd->add_option("--fuel", f.fuel, "Reduction budget");
}

int Main(int argc, char** argv) {
  CLI::App app{"protolite: protected methods by mangling and double "
               "registration"};
  app.require_subcommand(1);
  Flags f;
  app.add_flag("--json", f.json, "Machine-readable output");

  CLI::App* run = app.add_subcommand("run", "Evaluate a program");
  run->add_option("file", f.file, "Program source")->required();
  AddCompileFlags(run, f);
  AddRunFlags(run, f);
  run->add_flag("--reference", f.reference, "Use the reference evaluator");
  run->add_flag("--json", f.json, "Machine-readable output");

  CLI::App* check = app.add_subcommand("check", "Validate a program");
  check->add_option("file", f.file, "Program source")->required();
  check->add_flag("--json", f.json, "Machine-readable output");

  CLI::App* desugar = app.add_subcommand("desugar", "Dump the compiled image");
  desugar->add_option("file", f.file, "Program source")->required();
  AddCompileFlags(desugar, f);

  CLI::App* diff =
      app.add_subcommand("diff", "Compare reference and compiled runtime");
  diff->add_option("file", f.file, "Program source; omit to fuzz");
  diff->add_option("--seed", f.seed, "Generator seed");
  diff->add_option("--seeds", f.seeds, "Seed range A..B (inclusive)");
  diff->add_option("--protected-ratio", f.protected_ratio,
                   "Chance a generated method is protected")
      ->check(CLI::Range(0.0, 1.0));
  diff->add_option("--fuel", f.fuel, "Reduction budget");
  diff->add_flag("--json", f.json, "Machine-readable output");

  CLI::App* bench = app.add_subcommand("bench", "Benchmark against baseline");
  bench->add_option("file", f.file, "Program source")->required();
  AddCompileFlags(bench, f);
  AddRunFlags(bench, f);
  bench->add_option("--invocations", f.bench.invocations, "Fresh runtimes");
  bench->add_option("--iterations", f.bench.iterations,
                    "Iterations per invocation");
  bench->add_option("--warmup", f.bench.warmup, "Discarded iterations");
  bench->add_option("--repeat", f.bench.repeat,
                    "Evaluations of main per iteration");
  bench->add_flag("--json", f.json, "Machine-readable output");

  CLI::App* stats = app.add_subcommand("stats", "Cache and memory report");
  stats->add_option("file", f.file, "Program source")->required();
  AddCompileFlags(stats, f);
  AddRunFlags(stats, f);
  stats->add_flag("--json", f.json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run) return CmdRun(f);
    if (*check) return CmdCheck(f);
    if (*desugar) return CmdDesugar(f);
    if (*diff) return CmdDiff(f);
    if (*bench) return CmdBench(f);
    if (*stats) return CmdStats(f);
  } catch (const ExitError& e) {
    std::cerr << e.message();
    if (e.message().empty() || e.message().back() != '\n') std::cerr << "\n";
    return e.code();
  }
  return kExitInvalid;
}

}  // namespace
}  // namespace protolite

int main(int argc, char** argv) { return protolite::Main(argc, argv); }
