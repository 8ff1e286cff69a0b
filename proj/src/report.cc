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

#include "protolite/report.h"

#include <cstdio>

namespace protolite {

using nlohmann::json;

json OutcomeJson(const Outcome& o) {
  json j;
  j["steps"] = o.steps;
  switch (o.kind) {
    case Outcome::Kind::kValue:
      j["kind"] = "value";
      j["value"] = o.value.ToString();
      break;
    case Outcome::Kind::kRuntimeError:
      j["kind"] = "error";
      j["error"] = {{"reason", std::string(o.error.KindName())},
                    {"class", o.error.class_name},
                    {"name", o.error.name},
                    {"detail", o.error.detail},
                    {"message", o.error.ToString()}};
      break;
    case Outcome::Kind::kFuelExhausted:
      j["kind"] = "fuel-exhausted";
      break;
  }
  return j;
}

json CacheStatsJson(const CacheStats& s) {
  return {{"probe1", s.probe1},
          {"probe2", s.probe2},
          {"probe3", s.probe3},
          {"misses", s.misses},
          {"distinctKeys", s.distinct_keys},
          {"ic",
           {{"mono", s.ic_mono}, {"poly", s.ic_poly}, {"mega", s.ic_mega}}}};
}

ProbeHistogram ProbePercentages(const CacheStats& s) {
  ProbeHistogram h;
  const std::uint64_t total = s.consultations();
  if (total == 0) return h;
  auto pct = [&](std::uint64_t n) {
    return 100.0 * static_cast<double>(n) / static_cast<double>(total);
  };
  h.probe1 = pct(s.probe1);
  h.probe2 = pct(s.probe2);
  h.probe3 = pct(s.probe3);
  h.misses = pct(s.misses);
  return h;
}

json ProbeHistogramJson(const ProbeHistogram& h) {
  return {{"probe1", h.probe1},
          {"probe2", h.probe2},
          {"probe3", h.probe3},
          {"misses", h.misses}};
}

json MemoryReportJson(const MemoryReport& r) {
  json classes = json::array();
  for (const ClassMemory& c : r.classes) {
    classes.push_back({{"class", c.name},
                       {"entries", c.entries},
                       {"plain", c.plain_entries},
                       {"mangled", c.mangled_entries}});
  }
  return {{"classes", classes},
          {"totalEntries", r.total_entries},
          {"plainSymbols", r.plain_symbols},
          {"mangledSymbols", r.mangled_symbols},
          {"compiledMethods", r.compiled_methods},
          {"dictionaryBytes", r.dictionary_bytes},
          {"symbolBytes", r.symbol_bytes},
          {"totalBytes", r.total_bytes()}};
}

WorstCaseRatios Ratios(const MemoryReport& worst, const MemoryReport& base) {
  auto ratio = [](std::uint64_t a, std::uint64_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  return {ratio(worst.total_entries, base.total_entries),
          ratio(worst.symbols(), base.symbols()),
          ratio(worst.compiled_methods, base.compiled_methods),
          ratio(worst.dictionary_bytes, base.dictionary_bytes),
          ratio(worst.symbol_bytes, base.symbol_bytes),
          ratio(worst.total_bytes(), base.total_bytes())};
}

json RatiosJson(const WorstCaseRatios& r) {
  return {{"entries", r.entries},
          {"symbols", r.symbols},
          {"compiledMethods", r.compiled_methods},
          {"dictionaryBytes", r.dictionary_bytes},
          {"symbolBytes", r.symbol_bytes},
          {"totalBytes", r.total_bytes}};
}

json ValidationReportJson(const ValidationReport& r) {
  json out = json::array();
  for (const Violation& v : r) {
    out.push_back({{"rule", std::string(RuleName(v.rule))},
                   {"class", v.class_name},
                   {"member", v.member},
                   {"message", v.message}});
  }
  return out;
}

json DiffResultJson(const DiffResult& d) {
  json j = {{"program", d.program_id},
            {"agree", d.agree},
            {"reference", OutcomeJson(d.reference)},
            {"runtime", OutcomeJson(d.runtime)},
            {"lookupMismatches", d.lookup_mismatches}};
  if (d.baseline) j["baseline"] = OutcomeJson(*d.baseline);
  if (d.dictionaries_equal) j["dictionariesEqual"] = *d.dictionaries_equal;
  if (!d.detail.empty()) j["detail"] = d.detail;
  return j;
}

json BenchReportJson(const BenchReport& r) {
  json j = {{"label", r.label},
            {"mode", std::string(CompileModeName(r.mode))},
            {"config", CacheConfigName(r.config)},
            {"invocations", r.options.invocations},
            {"iterations", r.options.iterations},
            {"warmup", r.options.warmup},
            {"repeat", r.options.repeat},
            {"timesMs", r.times_ms},
            {"medianMs", r.median_ms},
            {"meanMs", r.mean_ms},
            {"outcome", OutcomeJson(r.outcome)},
            {"cache", CacheStatsJson(r.stats)},
            {"probePercent", ProbeHistogramJson(ProbePercentages(r.stats))}};
  if (r.overhead) j["overhead"] = *r.overhead;
  return j;
}

std::string FormatPercent(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%6.2f%%", pct);
  return buf;
}

}  // namespace protolite
