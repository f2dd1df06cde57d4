#pragma once

// Discrete state of a non-discriminant morsification: intersection matrix of
// the distinguished vanishing-cycle basis, intersections with the real part
// of the zero level, Morse data of the real critical points, and the count of
// negative critical values.  All operations are pure; states are value types.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmorse {

constexpr int kMaxMu = 10;

enum class ClassId : uint8_t {
  P8_1,
  P8_2,
  X9_plus,
  X9_1,
  X9_2,
  J10_1,
  J10_3,
  A2,
  A3,
};

// Exact: corank-2 classes, Morse entries 0..2 of the two-variable function.
// Parity: corank-3 classes, only the parity of the Morse index is tracked.
enum class IndexMode : uint8_t { Exact, Parity };

struct ClassInfo {
  const char* name;
  int mu;
  int ambient_dim;  // 2 for X9/J10 (and the A-series sanity seeds), 3 for P8
  IndexMode mode;
};

inline const ClassInfo& class_info(ClassId c) {
  static const ClassInfo table[] = {
      {"P8_1", 8, 3, IndexMode::Parity},  {"P8_2", 8, 3, IndexMode::Parity},
      {"X9_plus", 9, 2, IndexMode::Exact}, {"X9_1", 9, 2, IndexMode::Exact},
      {"X9_2", 9, 2, IndexMode::Exact},    {"J10_1", 10, 2, IndexMode::Exact},
      {"J10_3", 10, 2, IndexMode::Exact},  {"A2", 2, 2, IndexMode::Exact},
      {"A3", 3, 2, IndexMode::Exact},
  };
  return table[static_cast<int>(c)];
}

inline ClassId class_by_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(ClassId::A3); ++i)
    if (s == class_info(static_cast<ClassId>(i)).name)
      return static_cast<ClassId>(i);
  throw std::invalid_argument("unknown singularity class: " + s);
}

// Index layout of the mu basis positions:
//   0 .. r-1          real critical values, ascending; the first q are negative
//   r .. r+p-1        upper half-plane values by increasing path angle
//                     measured from the ray of negative reals
//   r+p .. mu-1       their complex conjugates, in matching order
struct VM {
  ClassId cls{ClassId::A2};
  int8_t mu{0};
  int8_t r{0};
  int8_t q{0};
  std::array<int8_t, kMaxMu * kMaxMu> A{};  // row-major, symmetric, diag -2
  std::array<int8_t, kMaxMu> m{};           // Morse data of real points
  std::array<int8_t, kMaxMu> b{};           // <Delta_i, V cap R^n>

  int p() const { return (mu - r) / 2; }
  IndexMode mode() const { return class_info(cls).mode; }
  int ambient() const { return class_info(cls).ambient_dim; }

  int a(int i, int j) const { return A[i * mu + j]; }
  void set_a(int i, int j, int v) {
    if (v < -120 || v > 120) throw std::overflow_error("matrix entry overflow");
    A[i * mu + j] = static_cast<int8_t>(v);
    A[j * mu + i] = static_cast<int8_t>(v);
  }

  // Parity of the stabilized (three-variable) Morse index at real position i.
  int parity(int i) const { return m[i] & 1; }

  bool operator==(const VM& o) const {
    return cls == o.cls && mu == o.mu && r == o.r && q == o.q && A == o.A &&
           m == o.m && b == o.b;
  }
  bool operator!=(const VM& o) const { return !(*this == o); }
};

struct VMHash {
  size_t operator()(const VM& v) const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t x) {
      h ^= x;
      h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(v.cls) << 16 | uint64_t(v.mu) << 8 | uint64_t(v.r));
    mix(uint64_t(v.q));
    for (int i = 0; i < v.mu * v.mu; ++i) mix(uint64_t(uint8_t(v.A[i])));
    for (int i = 0; i < v.mu; ++i) mix(uint64_t(uint8_t(v.m[i])) | uint64_t(uint8_t(v.b[i])) << 8);
    return size_t(h);
  }
};

// Applies a basis permutation: new position i holds what was at perm[i].
inline VM permuted(const VM& v, const std::vector<int>& perm) {
  VM out = v;
  for (int i = 0; i < v.mu; ++i) {
    out.b[i] = v.b[perm[i]];
    for (int j = 0; j < v.mu; ++j)
      out.A[i * v.mu + j] = v.A[perm[i] * v.mu + perm[j]];
  }
  return out;
}

// Lexicographic maximization over the free orientation choices: flipping a
// conjugate pair flips both of its members; when r = 0 the product of all
// pair flips realizes the global flip of condition (4).  The compared word is
// the upper-triangle string of A followed by b.
// In three variables the real part of the zero level need not be orientable
// (the nonsingular cubic surfaces realized by P8 include projective planes),
// so the pairing with it is only defined modulo 2 and Parity-mode states
// store b as residues.
inline void reduce_b(VM& v) {
  if (v.mode() != IndexMode::Parity) return;
  for (int i = 0; i < v.mu; ++i)
    v.b[i] = static_cast<int8_t>(((v.b[i] % 2) + 2) % 2);
}

inline void canonicalize(VM& v) {
  reduce_b(v);
  const bool residue_b = v.mode() == IndexMode::Parity;
  const int p = v.p();
  if (p == 0) return;
  const int mu = v.mu, r = v.r;
  std::array<int8_t, kMaxMu> sign;
  auto fill_sign = [&](unsigned mask) {
    for (int i = 0; i < r; ++i) sign[i] = 1;
    for (int k = 0; k < p; ++k) {
      int8_t s = (mask >> k) & 1 ? -1 : 1;
      sign[r + k] = s;
      sign[r + p + k] = s;
    }
  };
  unsigned best_mask = 0;
  for (unsigned mask = 1; mask < (1u << p); ++mask) {
    fill_sign(mask);
    std::array<int8_t, kMaxMu> bsign;
    for (int i = 0; i < r; ++i) bsign[i] = 1;
    for (int k = 0; k < p; ++k) {
      int8_t s = (best_mask >> k) & 1 ? -1 : 1;
      bsign[r + k] = s;
      bsign[r + p + k] = s;
    }
    // compare candidate(mask) with candidate(best_mask)
    int cmp = 0;
    for (int i = 0; i < mu && cmp == 0; ++i)
      for (int j = i + 1; j < mu && cmp == 0; ++j) {
        int x = sign[i] * sign[j] * v.a(i, j);
        int y = bsign[i] * bsign[j] * v.a(i, j);
        cmp = (x > y) - (x < y);
      }
    // a residue b string is invariant under the flips, so it cannot break ties
    for (int i = 0; i < mu && cmp == 0 && !residue_b; ++i) {
      int x = sign[i] * v.b[i];
      int y = bsign[i] * v.b[i];
      cmp = (x > y) - (x < y);
    }
    if (cmp > 0) best_mask = mask;
  }
  if (best_mask == 0) return;
  fill_sign(best_mask);
  for (int i = 0; i < mu; ++i) {
    v.b[i] = static_cast<int8_t>(sign[i] * v.b[i]);
    for (int j = 0; j < mu; ++j)
      v.A[i * mu + j] = static_cast<int8_t>(sign[i] * sign[j] * v.A[i * mu + j]);
  }
  reduce_b(v);
}

inline VM canonical(VM v) {
  canonicalize(v);
  return v;
}

// Ind: signed count of negative critical values by Morse parity.
inline int ind(const VM& v) {
  int s = 0;
  for (int i = 0; i < v.q; ++i) s += v.parity(i) ? -1 : 1;
  return s;
}

inline std::vector<std::string> validate(const VM& v) {
  std::vector<std::string> bad;
  const int mu = v.mu, r = v.r, p = v.p();
  if (mu < 1 || mu > kMaxMu) bad.push_back("mu out of range");
  if (mu != class_info(v.cls).mu) bad.push_back("mu does not match class");
  if (!(0 <= v.q && v.q <= r && r <= mu)) bad.push_back("need 0 <= q <= r <= mu");
  if ((mu - r) % 2 != 0) bad.push_back("mu - r must be even");
  for (int i = 0; i < mu; ++i)
    if (v.a(i, i) != -2) bad.push_back("diagonal must be -2");
  for (int i = 0; i < mu; ++i)
    for (int j = i + 1; j < mu; ++j)
      if (v.A[i * mu + j] != v.A[j * mu + i]) bad.push_back("matrix not symmetric");
  for (int i = 0; i < r; ++i) {
    int lim = v.mode() == IndexMode::Exact ? 2 : 1;
    if (v.m[i] < 0 || v.m[i] > lim) bad.push_back("Morse entry out of range");
  }
  // conjugation symmetry within the complex blocks
  for (int k = 0; k < p; ++k)
    for (int l = 0; l < p; ++l)
      if (v.a(r + k, r + l) != v.a(r + p + k, r + p + l))
        bad.push_back("conjugate block symmetry broken");
  for (int k = 0; k < p; ++k)
    if (v.b[r + k] != v.b[r + p + k])
      bad.push_back("conjugate b entries differ");
  if (r == 0 && v.mode() == IndexMode::Exact) {
    // the global orientation flip is pinned by a nonzero pairing with the
    // real zero level; modulo 2 (Parity mode) the flip is invisible anyway
    bool allz = true;
    for (int i = 0; i < mu; ++i) allz = allz && v.b[i] == 0;
    if (allz) bad.push_back("r = 0 state with identically zero b");
  }
  if (bad.empty() && canonical(v) != v) bad.push_back("not in canonical form");
  return bad;
}

inline bool is_valid(const VM& v) { return validate(v).empty(); }

// --- textual formats ------------------------------------------------------

// Canonical byte encoding; states are equal iff these strings are equal.
inline std::string state_key(const VM& v) {
  std::string s = class_info(v.cls).name;
  auto put = [&s](int x) {
    s += ';';
    s += std::to_string(x);
  };
  put(v.r);
  put(v.q);
  for (int i = 0; i < v.mu; ++i)
    for (int j = i + 1; j < v.mu; ++j) put(v.a(i, j));
  for (int i = 0; i < v.r; ++i) put(v.m[i]);
  for (int i = 0; i < v.mu; ++i) put(v.b[i]);
  return s;
}

inline std::string format_state(const VM& v) {
  std::string s = "class=";
  s += class_info(v.cls).name;
  s += " mu=" + std::to_string(v.mu) + " r=" + std::to_string(int(v.r)) +
       " q=" + std::to_string(int(v.q)) +
       " mode=" + (v.mode() == IndexMode::Exact ? "exact" : "parity") + "\nm=";
  for (int i = 0; i < v.r; ++i) s += (i ? "," : "") + std::to_string(int(v.m[i]));
  s += "\nb=";
  for (int i = 0; i < v.mu; ++i) s += (i ? "," : "") + std::to_string(int(v.b[i]));
  s += '\n';
  for (int i = 0; i < v.mu; ++i) {
    for (int j = 0; j < v.mu; ++j) s += (j ? "," : "") + std::to_string(v.a(i, j));
    s += '\n';
  }
  return s;
}

VM parse_state(const std::string& text);  // io.hpp

}  // namespace vmorse
