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

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace protolite {
namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Result Cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " '" PROTOLITE_BINARY "' " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Prog(const std::string& name) {
  return "'" + testing::ProgramPath(name) + "'";
}

TEST(CliTest, RunPrintsValue) {
  Result r = Cli("run " + Prog("appendixB_sum.stl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "84\n");
}

TEST(CliTest, RunGoldenValues) {
  const std::pair<const char*, const char*> kCases[] = {
      {"appendixB_callProtected_A.stl", "11\n"},
      {"appendixB_callProtected_B.stl", "42\n"},
      {"appendixB_publicInSubclass.stl", "36\n"},
  };
  for (const auto& [file, out] : kCases) {
    for (const char* flags : {"", " --reference", " --no-global-cache",
                              " --no-inline-cache", " --no-protect",
                              " --worst-case"}) {
      Result r = Cli("run " + Prog(file) + flags);
      EXPECT_EQ(r.code, 0) << file << flags;
      EXPECT_EQ(r.out, out) << file << flags;
    }
  }
}

TEST(CliTest, RuntimeErrorExitsOne) {
  Result r = Cli("run " + Prog("appendixB_raiseError.stl"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("DoesNotUnderstand(A, protectedMethod)"),
            std::string::npos)
      << r.out;
  r = Cli("run " + Prog("appendixB_protectedMethod.stl") + " --reference");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("DoesNotUnderstand"), std::string::npos);
}

TEST(CliTest, ValidationErrorExitsTwo) {
  Result r = Cli("run " + Prog("narrowing.stl"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("OVERRIDINGPUBLICMETHOD"), std::string::npos) << r.out;
  r = Cli("check " + Prog("narrowing.stl"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("OVERRIDINGPUBLICMETHOD"), std::string::npos);
  r = Cli("check " + Prog("listing1.stl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok\n");
}

TEST(CliTest, ParseErrorExitsTwo) {
  std::string path = ::testing::TempDir() + "/bad.stl";
  FILE* f = std::fopen(path.c_str(), "w");
  ASSERT_NE(f, nullptr);
  std::fputs("class A extends Object { method m( { 1 } } main { 1 }", f);
  std::fclose(f);
  Result r = Cli("run '" + path + "'");
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(CliTest, MissingFileExitsThree) {
  EXPECT_EQ(Cli("run /nonexistent/file.stl").code, 3);
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli("run " + Prog("listing1.stl") + " --no-protect --worst-case")
                .code,
            2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
}

TEST(CliTest, FuelFromEnvironmentAndFlag) {
  Result r = Cli("run " + Prog("appendixB_sum.stl"), "PROTOLITE_FUEL=3");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("fuel exhausted"), std::string::npos) << r.out;
  r = Cli("run " + Prog("appendixB_sum.stl") + " --fuel 100",
          "PROTOLITE_FUEL=3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "84\n");
}

TEST(CliTest, RunJson) {
  Result r = Cli("run " + Prog("appendixB_sum.stl") + " --json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "value");
  EXPECT_EQ(j["value"], "84");
}

TEST(CliTest, DesugarShowsSharedAndMangledEntries) {
  Result r = Cli("desugar " + Prog("listing1.stl"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("__protectedMethod -> A#protectedMethod protected"),
            std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("callProtected -> A#callProtected public shared"),
            std::string::npos);
  EXPECT_NE(r.out.find("__callProtected -> A#callProtected public shared"),
            std::string::npos);
  EXPECT_EQ(r.out, Cli("desugar " + Prog("listing1.stl")).out);
}

TEST(CliTest, InstallResolvesDeferredSite) {
  Result before = Cli("run " + Prog("deferred.stl"));
  EXPECT_EQ(before.code, 1);
  Result after = Cli("run " + Prog("deferred.stl") +
                     " --install 'A:protected method unknown() { 7 }'");
  EXPECT_EQ(after.code, 0) << after.out;
  EXPECT_EQ(after.out, "7\n");
  Result bad = Cli("run " + Prog("listing1.stl") +
                   " --install 'B:protected method callProtected() { 1 }'");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("OVERRIDINGPUBLICMETHOD"), std::string::npos);
}

TEST(CliTest, DiffSeedRange) {
  Result r = Cli("diff --seeds 0..99");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "100/100 agree\n");
  r = Cli("diff --seeds 0..49 --protected-ratio 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "50/50 agree\n");
  r = Cli("diff " + Prog("propagation.stl"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "reference: 3\nruntime:   3\nagree\n");
}

TEST(CliTest, StatsReportsLawCountsAndProbes) {
  Result r = Cli("stats " + Prog("listing1.stl") + " --worst-case --json");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["memory"]["totalEntries"], 14);
  EXPECT_EQ(j["memory"]["mangledSymbols"], 5);
  EXPECT_EQ(j["memory"]["plainSymbols"], 5);
  EXPECT_EQ(j["worstCaseRatios"]["entries"], 2.0);
  for (const char* k : {"probe1", "probe2", "probe3", "misses",
                        "distinctKeys"}) {
    EXPECT_TRUE(j["cache"].contains(k)) << k;
  }
  Result text = Cli("stats " + Prog("collision.stl"));
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("probe2  33.33%  1"), std::string::npos) << text.out;
  EXPECT_NE(text.out.find("worst case / baseline"), std::string::npos);
}

TEST(CliTest, BenchReportsOverhead) {
  Result r = Cli("bench " + Prog("counter.stl") +
                 " --invocations 2 --iterations 3 --warmup 1 --json");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["measured"].contains("overhead"));
  EXPECT_EQ(j["measured"]["outcome"]["value"], "300");
  r = Cli("bench " + Prog("counter.stl") + " --iterations 0");
  EXPECT_EQ(r.code, 1);
  r = Cli("bench " + Prog("counter.stl") + " --fuel 10");
  EXPECT_EQ(r.code, 1);
}

}  // namespace
}  // namespace protolite
