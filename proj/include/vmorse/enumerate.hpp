#pragma once

// Worklist closure of states under the elementary surgeries, component
// peeling under the reduced move set, and the small query layer used by the
// command line tool.  The closure is level-synchronous: workers expand
// disjoint slices of the frontier and the results are merged in slice order,
// so the visited set and the dump are identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "surgery.hpp"

namespace vmorse {

struct EnumOptions {
  Program program = Program::Main;
  int coeff_bound = 12;  // successors with larger |entries| are ignored
  uint64_t max_states = 100000000ull;  // hard safety cap
  int worker_count = 1;
  uint64_t spill_threshold = 0;  // 0 = keep everything in memory
  std::string spill_path;        // backing file used once the threshold hits
};

inline int max_abs_entry(const VM& v) {
  int mx = 0;
  for (int i = 0; i < v.mu * v.mu; ++i) mx = std::max(mx, std::abs(int(v.A[i])));
  for (int i = 0; i < v.mu; ++i) mx = std::max(mx, std::abs(int(v.b[i])));
  return mx;
}

// Hash set of states with an append-only store.  Above the spill threshold,
// member states are appended to a backing file and only a 128-bit digest per
// state is kept in memory; a digest collision is treated as impossible.
class StateSet {
 public:
  explicit StateSet(uint64_t spill_threshold = 0, std::string spill_path = {})
      : spill_threshold_(spill_threshold), spill_path_(std::move(spill_path)) {
    table_.resize(1 << 12, 0);
  }
  StateSet(const StateSet&) = delete;
  StateSet& operator=(const StateSet&) = delete;
  ~StateSet() {
    if (file_) std::fclose(file_);
    if (!spill_path_.empty() && spilled_) std::remove(spill_path_.c_str());
  }

  uint64_t size() const { return count_; }

  bool contains(const VM& v) const {
    uint64_t h = VMHash{}(v);
    for (uint64_t slot = probe_start(h);; slot = (slot + 1) & (table_.size() - 1)) {
      uint64_t e = table_[slot];
      if (e == 0) break;
      if (hashes_[e - 1] == h && !spilled_ && states_[e - 1] == v) return true;
      if (spilled_ && hashes_[e - 1] == h && digests_[e - 1] == digest(v))
        return true;
    }
    return false;
  }

  // Returns true when v was not present before.
  bool insert(const VM& v) {
    uint64_t h = VMHash{}(v);
    uint64_t d = spilled_ ? digest(v) : 0;
    for (uint64_t slot = probe_start(h);; slot = (slot + 1) & (table_.size() - 1)) {
      uint64_t e = table_[slot];
      if (e == 0) {
        if (spilled_) {
          digests_.push_back(d ? d : digest(v));
          append_to_file(v);
        } else {
          states_.push_back(v);
        }
        hashes_.push_back(h);
        table_[slot] = ++count_;
        if (count_ * 10 >= table_.size() * 7) grow();
        if (spill_threshold_ && !spilled_ && count_ >= spill_threshold_) spill();
        return true;
      }
      if (hashes_[e - 1] == h) {
        if (!spilled_ && states_[e - 1] == v) return false;
        if (spilled_ && digests_[e - 1] == digest(v)) return false;
      }
    }
  }

  // Visits every member in insertion order.
  void for_each(const std::function<void(const VM&)>& fn) const {
    if (!spilled_) {
      for (const VM& v : states_) fn(v);
      return;
    }
    std::fflush(file_);
    std::FILE* in = std::fopen(spill_path_.c_str(), "rb");
    if (!in) throw std::runtime_error("cannot reopen spill file " + spill_path_);
    VM v;
    while (std::fread(&v, sizeof(VM), 1, in) == 1) fn(v);
    std::fclose(in);
  }

  // Valid only before any spill.
  const std::vector<VM>& in_memory() const {
    if (spilled_) throw std::logic_error("state set was spilled to disk");
    return states_;
  }

 private:
  uint64_t probe_start(uint64_t h) const { return h & (table_.size() - 1); }

  static uint64_t digest(const VM& v) {
    // second, independent mix over the same bytes as VMHash
    uint64_t h = 0x9e3779b97f4a7c15ull;
    const uint8_t* bytes = reinterpret_cast<const uint8_t*>(&v);
    for (size_t i = 0; i < sizeof(VM); ++i) {
      h ^= bytes[i];
      h *= 0xff51afd7ed558ccdull;
      h ^= h >> 33;
    }
    return h;
  }

  void grow() {
    std::vector<uint64_t> old = std::move(table_);
    table_.assign(old.size() * 2, 0);
    for (uint64_t e : old) {
      if (e == 0) continue;
      uint64_t h = hashes_[e - 1];
      uint64_t slot = probe_start(h);
      while (table_[slot] != 0) slot = (slot + 1) & (table_.size() - 1);
      table_[slot] = e;
    }
  }

  void spill() {
    if (spill_path_.empty())
      throw std::invalid_argument("spill threshold set without a spill path");
    file_ = std::fopen(spill_path_.c_str(), "wb+");
    if (!file_) throw std::runtime_error("cannot open spill file " + spill_path_);
    digests_.reserve(states_.size());
    for (const VM& v : states_) {
      digests_.push_back(digest(v));
      append_to_file(v);
    }
    states_.clear();
    states_.shrink_to_fit();
    spilled_ = true;
  }

  void append_to_file(const VM& v) {
    if (std::fwrite(&v, sizeof(VM), 1, file_) != 1)
      throw std::runtime_error("write to spill file failed");
  }

  uint64_t spill_threshold_;
  std::string spill_path_;
  std::vector<VM> states_;
  std::vector<uint64_t> hashes_;
  std::vector<uint64_t> digests_;
  std::vector<uint64_t> table_;
  uint64_t count_ = 0;
  bool spilled_ = false;
  std::FILE* file_ = nullptr;
};

struct ClosureStats {
  uint64_t expanded = 0;
  uint64_t dropped_by_bound = 0;
  int max_entry_seen = 0;
};

inline void closure(StateSet& set, std::vector<VM> frontier,
                    const Conventions& cv, const EnumOptions& opts,
                    ClosureStats* stats = nullptr) {
  for (VM& v : frontier) canonicalize(v);
  frontier.erase(std::remove_if(frontier.begin(), frontier.end(),
                                [&](const VM& v) { return !set.insert(v); }),
                 frontier.end());
  const int workers = std::max(1, opts.worker_count);
  std::atomic<uint64_t> dropped{0};
  std::atomic<int> max_entry{0};
  while (!frontier.empty()) {
    if (stats) stats->expanded += frontier.size();
    std::vector<std::vector<VM>> batch(workers);
    auto expand = [&](int w) {
      for (size_t i = w; i < frontier.size(); i += workers) {
        for (VM& s : successors(frontier[i], cv, opts.program)) {
          int mx = max_abs_entry(s);
          int seen = max_entry.load();
          while (mx > seen && !max_entry.compare_exchange_weak(seen, mx)) {
          }
          if (mx > opts.coeff_bound) {
            ++dropped;
            continue;
          }
          batch[w].push_back(std::move(s));
        }
      }
    };
    if (workers == 1) {
      expand(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(expand, w);
      for (auto& t : pool) t.join();
    }
    std::vector<VM> next;
    for (auto& b : batch)
      for (VM& s : b)
        if (set.insert(s)) next.push_back(std::move(s));
    if (set.size() > opts.max_states)
      throw std::runtime_error("state cap exceeded: " +
                               std::to_string(set.size()));
    frontier = std::move(next);
  }
  if (stats) {
    stats->dropped_by_bound += dropped.load();
    stats->max_entry_seen = std::max(stats->max_entry_seen, max_entry.load());
  }
}

inline std::vector<VM> closure_list(const std::vector<VM>& seeds,
                                    const Conventions& cv,
                                    const EnumOptions& opts,
                                    ClosureStats* stats = nullptr) {
  StateSet set;
  closure(set, seeds, cv, opts, stats);
  return set.in_memory();
}

struct ComponentInfo {
  uint64_t card = 0;
  int ind_value = 0;
  VM representative;  // smallest key among the members
  std::vector<uint32_t> members;  // indices into the peeled universe
};

struct ComponentPartition {
  std::vector<VM> universe;  // sorted by state key
  std::vector<ComponentInfo> components;
  std::vector<uint32_t> component_of;  // universe index -> component id
};

// Splits a closed set of states into reduced-program components.  The
// universe is sorted by key; components are peeled off in key order, so ids
// and representatives are deterministic.  Successors leaving the universe
// (possible only when it was truncated by the coefficient bound) are ignored.
inline ComponentPartition peel_components(std::vector<VM> universe,
                                          const Conventions& cv,
                                          const EnumOptions& opts) {
  ComponentPartition part;
  std::sort(universe.begin(), universe.end(), [](const VM& x, const VM& y) {
    return state_key(x) < state_key(y);
  });
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  std::unordered_map<std::string, uint32_t> index;
  index.reserve(universe.size() * 2);
  for (uint32_t i = 0; i < universe.size(); ++i)
    index.emplace(state_key(universe[i]), i);
  part.component_of.assign(universe.size(), UINT32_MAX);
  for (uint32_t start = 0; start < universe.size(); ++start) {
    if (part.component_of[start] != UINT32_MAX) continue;
    uint32_t id = static_cast<uint32_t>(part.components.size());
    ComponentInfo info;
    info.representative = universe[start];
    info.ind_value = ind(universe[start]);
    std::vector<uint32_t> stack = {start};
    part.component_of[start] = id;
    while (!stack.empty()) {
      uint32_t cur = stack.back();
      stack.pop_back();
      info.members.push_back(cur);
      for (const VM& s : successors(universe[cur], cv, Program::Reduced)) {
        auto it = index.find(state_key(s));
        if (it == index.end()) continue;
        if (part.component_of[it->second] != UINT32_MAX) continue;
        part.component_of[it->second] = id;
        stack.push_back(it->second);
      }
    }
    info.card = info.members.size();
    std::sort(info.members.begin(), info.members.end());
    part.components.push_back(std::move(info));
  }
  part.universe = std::move(universe);
  return part;
}

inline std::map<int, uint64_t> per_ind_totals(const std::vector<VM>& states) {
  std::map<int, uint64_t> totals;
  for (const VM& v : states) ++totals[ind(v)];
  return totals;
}

// --- query layer ----------------------------------------------------------

// Predicates over single states, used for component facts: has_q(k),
// all_real, morse_pattern_at(i,v), not_all_real, has_state(key).
struct Query {
  std::function<bool(const VM&)> pred;
  std::string text;
};

inline Query parse_query(const std::string& text);  // io.hpp

inline uint64_t count_matching(const std::vector<VM>& states, const Query& q) {
  uint64_t n = 0;
  for (const VM& v : states)
    if (q.pred(v)) ++n;
  return n;
}

}  // namespace vmorse
