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

// Executes a RuntimeImage with a single visibility-blind method lookup,
// a 3-probe global lookup cache, and per-site inline caches.

#ifndef PROTOLITE_RUNTIME_H_
#define PROTOLITE_RUNTIME_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "protolite/image.h"
#include "protolite/outcome.h"

namespace protolite {

inline constexpr std::size_t kGlobalCacheSize = 1024;
inline constexpr std::size_t kGlobalCacheProbes = 3;
inline constexpr std::size_t kInlineCacheCapacity = 6;

struct LookupResult {
  const CompiledMethod* method = nullptr;
  ClassIndex defining_class = kNoClass;

  bool found() const { return method != nullptr; }
  friend bool operator==(const LookupResult&, const LookupResult&) = default;
};

// Walks the superclass chain from `cls` and returns the first dictionary
// entry for `selector`. No visibility logic.
LookupResult DefaultLookup(const RuntimeImage& image, ClassIndex cls,
                           Symbol selector);

class GlobalCache {
 public:
  GlobalCache() { Flush(); }

  // First probe slot of a key.
  static std::size_t Slot(ClassIndex cls, Symbol selector);

  // Probes Slot(k), Slot(k)+1, Slot(k)+2. On a triple miss runs
  // DefaultLookup and installs a found result into the first empty probe
  // slot, or over the first slot when all three are taken.
  LookupResult Lookup(const RuntimeImage& image, ClassIndex cls,
                      Symbol selector);

  // Empties the table; counters are kept.
  void Flush();
  void ResetCounters();

  // hits()[i] counts hits at probe i + 1.
  const std::array<std::uint64_t, kGlobalCacheProbes>& hits() const {
    return hits_;
  }
  std::uint64_t misses() const { return misses_; }
  std::uint64_t installs() const { return installs_; }
  std::size_t occupied() const;

 private:
  struct Entry {
    bool used = false;
    ClassIndex cls = kNoClass;
    Symbol selector;
    LookupResult result;
  };

  std::array<Entry, kGlobalCacheSize> table_;
  std::array<std::uint64_t, kGlobalCacheProbes> hits_{};
  std::uint64_t misses_ = 0;
  std::uint64_t installs_ = 0;
};

// Per-site cache of receiver class -> method. Transitions only go
// empty -> monomorphic -> polymorphic -> megamorphic.
class InlineCache {
 public:
  enum class State : std::uint8_t { kEmpty, kMonomorphic, kPolymorphic,
                                    kMegamorphic };

  const CompiledMethod* Find(ClassIndex cls) const {
    for (std::uint8_t i = 0; i < size_; ++i) {
      if (entries_[i].cls == cls) return entries_[i].method;
    }
    return nullptr;
  }
  void Record(ClassIndex cls, const CompiledMethod* method);
  State state() const { return state_; }
  std::size_t size() const { return size_; }

 private:
  struct Entry {
    ClassIndex cls;
    const CompiledMethod* method;
  };
  State state_ = State::kEmpty;
  std::uint8_t size_ = 0;
  std::array<Entry, kInlineCacheCapacity> entries_{};
};

struct RuntimeConfig {
  bool global_cache = true;
  bool inline_cache = true;
  // Checks every cached lookup against DefaultLookup.
  bool shadow_lookup = false;
};

struct CacheStats {
  std::uint64_t probe1 = 0;
  std::uint64_t probe2 = 0;
  std::uint64_t probe3 = 0;
  std::uint64_t misses = 0;
  // Distinct (class, symbol) keys that reached the lookup below the
  // inline cache.
  std::uint64_t distinct_keys = 0;
  // Sites per inline-cache state.
  std::uint64_t ic_mono = 0;
  std::uint64_t ic_poly = 0;
  std::uint64_t ic_mega = 0;
  std::uint64_t ic_hits = 0;
  std::uint64_t ic_misses = 0;
  std::uint64_t ic_fills = 0;
  std::uint64_t sends = 0;
  std::uint64_t shadow_mismatches = 0;

  std::uint64_t consultations() const {
    return probe1 + probe2 + probe3 + misses;
  }
};

// One evaluation context. Heap and frames are reset on every Run; caches
// and counters persist across runs until flushed or reset. The image must
// outlive the runtime.
class Runtime {
 public:
  explicit Runtime(const RuntimeImage& image, RuntimeConfig config = {});

  Outcome Run(std::uint64_t fuel = kDefaultFuel);

  CacheStats Stats() const;
  // Zeroes counters and the observed key set; cache contents are kept.
  void ResetStats();
  void FlushCaches();

  // Method lookup through the configured global cache (no inline cache).
  LookupResult Lookup(ClassIndex cls, Symbol selector);

  const RuntimeImage& image() const { return image_; }
  const RuntimeConfig& config() const { return config_; }
  const GlobalCache& global_cache() const { return global_; }
  const InlineCache& inline_cache(std::uint32_t site) const {
    return inline_.at(site);
  }
  std::size_t object_count() const { return objects_.size(); }
  // Class of a heap object from the last run.
  ClassIndex ClassOf(Value oid) const;

 private:
  struct HeapObject {
    ClassIndex cls;
    std::uint32_t fields;  // offset into fields_
  };
  struct Frame {
    const CompiledMethod* method;
    const Instr* pc;
    Value self;
    std::uint32_t locals;  // offset into locals_
    std::uint32_t stack;   // operand stack height at entry
  };

  const CompiledMethod* Dispatch(std::uint32_t site, ClassIndex cls,
                                 Symbol selector);
  LookupResult SlowLookup(ClassIndex cls, Symbol selector);
  void Shadow(ClassIndex cls, Symbol selector, const CompiledMethod* m);

  const RuntimeImage& image_;
  RuntimeConfig config_;
  GlobalCache global_;
  std::vector<InlineCache> inline_;
  std::unordered_set<std::uint64_t> keys_;
  std::uint64_t ic_hits_ = 0;
  std::uint64_t ic_misses_ = 0;
  std::uint64_t ic_fills_ = 0;
  std::uint64_t sends_ = 0;
  std::uint64_t shadow_mismatches_ = 0;

  std::vector<HeapObject> objects_;
  std::vector<Value> fields_;
  std::vector<Value> stack_;
  std::vector<Value> locals_;
  std::vector<Frame> frames_;
};

// Runs `image` in a fresh runtime; stats are copied out when requested.
Outcome RunImage(const RuntimeImage& image, RuntimeConfig config = {},
                 std::uint64_t fuel = kDefaultFuel,
                 CacheStats* stats = nullptr);

}  // namespace protolite

#endif  // PROTOLITE_RUNTIME_H_
