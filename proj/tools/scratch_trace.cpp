// Exploratory A2/A3 closure trace; not installed.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <set>
#include <string>

#include "vmorse/calibrate.hpp"

using namespace vmorse;

int main(int argc, char** argv) {
  Conventions cv = default_conventions();
  const char* cls_name = argc > 1 ? argv[1] : "A2";
  ClassId cls = class_by_name(cls_name);
  for (int i = 2; i + 1 < argc; i += 2) {
    std::string k = argv[i];
    int v = std::atoi(argv[i + 1]);
    if (k == "swap") cv.swap_rule = v;
    else if (k == "s3e") cv.s3_even = v;
    else if (k == "s3o") cv.s3_odd = v;
    else if (k == "bdl") cv.bd_lex = v;
    else if (k == "flip") cv.land_flip = v;
    else if (k == "merge") cv.merge_sign = v;
    else if (k == "miss") cv.miss_allowed = v;
    else if (k == "refl") cv.reflect_member = v;
    else if (k == "conj") cv.conj_order = v;
  }
  VM seed = builtin_seed(cls, cv);
  std::printf("seed:\n%s\n", format_state(seed).c_str());
  std::set<std::string> seen = {state_key(seed)};
  std::deque<VM> work = {seed};
  int expanded = 0;
  while (!work.empty() && expanded < 200) {
    VM cur = work.front();
    work.pop_front();
    ++expanded;
    for (const VM& s : successors(cur, cv, Program::Main)) {
      if (max_abs_entry(s) > 12) continue;
      if (!seen.insert(state_key(s)).second) continue;
      auto errs = validate(s);
      auto ce = con_errors(s, cv);
      errs.insert(errs.end(), ce.begin(), ce.end());
      if (!errs.empty()) {
        std::printf("INVALID successor (%s)\nfrom:\n%s\nto:\n%s\n",
                    errs.front().c_str(), format_state(cur).c_str(),
                    format_state(s).c_str());
        return 1;
      }
      work.push_back(s);
    }
  }
  std::printf("closure ok: %zu states (expanded %d)\n", seen.size(), expanded);
  EnumOptions opts;
  auto all = closure_list({seed}, cv, opts);
  auto part = peel_components(all, cv, opts);
  std::printf("components=%zu\n", part.components.size());
  for (auto& c : part.components)
    std::printf("  card=%llu ind=%d rep=%s\n", (unsigned long long)c.card,
                c.ind_value, state_key(c.representative).c_str());
  if (all.size() <= 40)
    for (auto& v : all) std::printf("state %s\n", state_key(v).c_str());
  if (all.size() <= 10)
    for (auto& v : all) std::printf("---\n%s", format_state(v).c_str());
  return 0;
}
