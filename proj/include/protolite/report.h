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

// JSON and text renderings of outcomes and reports.

#ifndef PROTOLITE_REPORT_H_
#define PROTOLITE_REPORT_H_

#include <string>

#include "json.hpp"
#include "protolite/metrics.h"
#include "protolite/outcome.h"
#include "protolite/runtime.h"
#include "protolite/validate.h"

namespace protolite {

nlohmann::json OutcomeJson(const Outcome& o);

// {"probe1", "probe2", "probe3", "misses", "distinctKeys",
//  "ic": {"mono", "poly", "mega"}}
nlohmann::json CacheStatsJson(const CacheStats& s);

struct ProbeHistogram {
  double probe1 = 0;
  double probe2 = 0;
  double probe3 = 0;
  double misses = 0;
};

// Percentages of global-cache consultations; all zero without any.
ProbeHistogram ProbePercentages(const CacheStats& s);
nlohmann::json ProbeHistogramJson(const ProbeHistogram& h);

nlohmann::json MemoryReportJson(const MemoryReport& r);

// Worst-case over baseline ratios of entries, symbols, compiled methods,
// and modeled bytes.
struct WorstCaseRatios {
  double entries = 0;
  double symbols = 0;
  double compiled_methods = 0;
  double dictionary_bytes = 0;
  double symbol_bytes = 0;
  double total_bytes = 0;
};

WorstCaseRatios Ratios(const MemoryReport& worst, const MemoryReport& base);
nlohmann::json RatiosJson(const WorstCaseRatios& r);

nlohmann::json ValidationReportJson(const ValidationReport& r);
nlohmann::json DiffResultJson(const DiffResult& d);
nlohmann::json BenchReportJson(const BenchReport& r);

std::string FormatPercent(double pct);

}  // namespace protolite

#endif  // PROTOLITE_REPORT_H_
