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

// Python bindings. Structured results cross the boundary as JSON text and
// are decoded by the pure-Python wrapper.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "protolite/compiler.h"
#include "protolite/metrics.h"
#include "protolite/parser.h"
#include "protolite/reference.h"
#include "protolite/report.h"
#include "protolite/runtime.h"
#include "protolite/validate.h"

namespace py = pybind11;

namespace protolite {
namespace {

using Installs = std::vector<std::pair<std::string, std::string>>;

CompileMode ModeFromName(const std::string& name) {
  if (name == "protected") return CompileMode::kProtected;
  if (name == "baseline") return CompileMode::kBaseline;
  if (name == "worst-case") return CompileMode::kWorstCase;
  throw py::value_error("mode must be protected, baseline, or worst-case");
}

RuntimeImage Build(const std::string& source, const std::string& mode,
                   const Installs& installs) {
  Program p = Parse(source);
  RuntimeImage image = CompileProgram(p, {ModeFromName(mode)});
  for (const auto& [cls, method] : installs) {
    image = InstallMethod(image, cls,
                          ParseMethod(method, image.program(), cls));
  }
  return image;
}

std::string RunJson(const std::string& source, const std::string& mode,
                    bool global_cache, bool inline_cache, std::uint64_t fuel,
                    const Installs& installs) {
  RuntimeImage image = Build(source, mode, installs);
  CacheStats stats;
  Outcome o = RunImage(image, {global_cache, inline_cache, false}, fuel,
                       &stats);
  nlohmann::json j = OutcomeJson(o);
  j["cache"] = CacheStatsJson(stats);
  return j.dump();
}

std::string StatsJson(const std::string& source, const std::string& mode,
                      bool global_cache, bool inline_cache,
                      std::uint64_t fuel) {
  Program p = Parse(source);
  RuntimeImage image = CompileProgram(p, {ModeFromName(mode)});
  CacheStats stats;
  Outcome o = RunImage(image, {global_cache, inline_cache, false}, fuel,
                       &stats);
  MemoryReport worst =
      MeasureImage(CompileProgram(p, {CompileMode::kWorstCase}));
  MemoryReport base = MeasureImage(CompileProgram(p, {CompileMode::kBaseline}));
  return nlohmann::json{
      {"outcome", OutcomeJson(o)},
      {"cache", CacheStatsJson(stats)},
      {"probePercent", ProbeHistogramJson(ProbePercentages(stats))},
      {"memory", MemoryReportJson(MeasureImage(image))},
      {"worstCaseRatios", RatiosJson(Ratios(worst, base))}}
      .dump();
}

GeneratorOptions Options(double protected_ratio) {
  GeneratorOptions o;
  o.protected_ratio = protected_ratio;
  return o;
}

}  // namespace
}  // namespace protolite

PYBIND11_MODULE(_protolite, m) {
  using namespace protolite;
  m.doc() = "Protected methods for a small Smalltalk-like language.";

  static py::exception<SyntaxError> parse_error(m, "ParseError",
                                                PyExc_ValueError);
  static py::exception<ValidationError> validation_error(
      m, "ValidationError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SyntaxError& e) {
      parse_error(e.what());
    } catch (const ValidationError& e) {
      validation_error(e.what());
    } catch (const UnknownClassError& e) {
      PyErr_SetString(PyExc_KeyError, e.what());
    } catch (const BenchError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  m.attr("DEFAULT_FUEL") = kDefaultFuel;

  m.def("pretty", [](const std::string& source) {
    return PrettyPrint(Parse(source));
  }, py::arg("source"), "Parses and prints a program in canonical form.");

  m.def("check_json", [](const std::string& source) {
    return ValidationReportJson(Validate(Parse(source))).dump();
  }, py::arg("source"));

  m.def("run_json", &RunJson, py::arg("source"), py::arg("mode"),
        py::arg("global_cache"), py::arg("inline_cache"), py::arg("fuel"),
        py::arg("installs"));

  m.def("reference_json", [](const std::string& source, std::uint64_t fuel) {
    return OutcomeJson(reference::EvalProgram(Parse(source), fuel)).dump();
  }, py::arg("source"), py::arg("fuel"));

  m.def("desugar", [](const std::string& source, const std::string& mode,
                      const Installs& installs) {
    return Desugar(Build(source, mode, installs));
  }, py::arg("source"), py::arg("mode"), py::arg("installs"));

  m.def("diff_json", [](const std::string& source, std::uint64_t fuel) {
    return DiffResultJson(DifferentialRun(Parse(source), fuel)).dump();
  }, py::arg("source"), py::arg("fuel"));

  m.def("generate", [](std::uint64_t seed, double protected_ratio) {
    return PrettyPrint(GenerateProgram(seed, Options(protected_ratio)));
  }, py::arg("seed"), py::arg("protected_ratio"));

  m.def("stats_json", &StatsJson, py::arg("source"), py::arg("mode"),
        py::arg("global_cache"), py::arg("inline_cache"), py::arg("fuel"));
}
