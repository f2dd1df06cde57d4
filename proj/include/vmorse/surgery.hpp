#pragma once

// The four elementary surgeries acting on states, parameterized by a small
// set of convention flags.  Collisions of critical values happen at a real
// point not separated from zero by other critical values, so merges act on
// the innermost same-side pair and landings insert next to zero; a conjugate
// pair entering or leaving the complex domain does so at the angular end of
// the complex block matching its side.  The flag values shipped in
// default_conventions() are the ones selected by the calibration harness;
// every other combination fails at least one of the pinned sanity counts.

#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "state.hpp"

namespace vmorse {

struct Conventions {
  // s1 exchange of adjacent real values: 0 = only when the cycles do not
  // intersect, 1 = also at intersection index +-1 (two chiralities).
  int swap_rule = 0;
  // b increment sign of a zero-crossing value, by Morse parity of the jumper.
  int s3_even = 1;
  int s3_odd = 1;
  // tie break among minimal admissible b strings of a seed:
  // 0 = lexicographically largest, 1 = smallest
  int bd_lex = 0;
  // global orientation convention of the conjugation involution; flips which
  // Morse pattern a landing with positive intersection index produces.
  bool land_flip = false;
  // sign of the intersection index required for a real pair to merge:
  // 0 = either, 1 = +1 only, 2 = -1 only.
  int merge_sign = 0;
  // 0 = miss only for non-intersecting pairs, 1 = also at index +-1.
  int miss_allowed = 0;
  // member of a merging or landing pair that crosses the standard paths of
  // the same-side real values farther from zero, reflecting those cycles:
  // 0 = the lower member (paths dodge below the axis), 1 = the upper.
  int reflect_member = 0;
  // order of the reflections accumulated by conjugating a real cycle across
  // the values between it and zero: 0 = nearest zero applied first.
  int conj_order = 0;
  // three-variable orientation signs: the conjugation sign of a real cycle
  // may depend on both the Morse parity class and the side of the axis its
  // value lies on, and the zero-crossing contribution sign on the parity
  // class; their exact-index analogues are four-periodic, so the restriction
  // to parity classes is a free convention of the ambient dimension.
  int pm_conj[2][2] = {{1, -1}, {-1, 1}};  // [parity][negative side]
  // whether reversing the sign of the function also reverses b.
  bool negate_flip_b = false;
};

inline Conventions default_conventions();  // defined in calibrate.hpp

enum class MoveKind : uint8_t {
  S1Swap,
  S1Merge,
  S2Miss,
  S2Land,
  S3Jump,
  S4Braid,
};

struct SurgeryMove {
  MoveKind kind;
  int arg = 0;      // position (swaps), side (0 = negative) otherwise
  int variant = 0;  // chirality of swaps and braids, direction of jumps
};

// Picard-Lefschetz reflection of basis row t in basis row s; an involution
// for self-intersection -2, and an isometry of the form.
inline void reflect(VM& v, int t, int s) {
  int c = v.a(t, s);
  if (c == 0) return;
  for (int j = 0; j < v.mu; ++j) {
    if (j == t) continue;
    v.set_a(t, j, v.a(t, j) + c * v.a(s, j));
  }
  v.b[t] = static_cast<int8_t>(v.b[t] + c * v.b[s]);
}

// Contribution sign of a value crossing zero downward: the vanishing sphere
// joins the zero level with an orientation sign of period four in the Morse
// index.  With exact indices the index-2 points contribute negatively; with
// parity classes the sign is invisible because b is a residue string.
inline int zero_cross_sign(const VM& v, const Conventions& cv, int j) {
  if (v.mode() == IndexMode::Exact)
    return (v.m[j] == 2 ? -1 : 1) * (v.parity(j) ? cv.s3_odd : cv.s3_even);
  return 1;
}

// Sign of conjugation acting on the vanishing cycle of a real Morse point:
// the cycle has as many imaginary sphere directions as the complementary
// index, so the sign depends on the parity of the stabilized index and the
// side of the critical value.
inline int conj_sign(const Conventions& cv, int par, bool negative_value,
                     bool parity_mode = false) {
  int e;
  if (parity_mode) {
    e = cv.pm_conj[par & 1][negative_value ? 1 : 0];
  } else {
    e = (par ? -1 : 1) * (negative_value ? 1 : -1);
  }
  return cv.land_flip ? -e : e;
}

// Conjugate of real basis cycle i over the current basis: the sign above
// composed with the reflections in the real values between value i and zero.
inline std::vector<int> conj_of_real(const VM& v, const Conventions& cv, int i) {
  std::vector<int> x(v.mu, 0);
  x[i] = 1;
  auto apply_h = [&](int s) {
    long c = 0;
    for (int j = 0; j < v.mu; ++j) c += long(x[j]) * v.a(j, s);
    x[s] += int(c);
  };
  std::vector<int> between;
  if (i < v.q) {
    for (int j = v.q - 1; j > i; --j) between.push_back(j);  // nearest zero first
  } else {
    for (int j = v.q; j < i; ++j) between.push_back(j);
  }
  if (cv.conj_order == 1) std::reverse(between.begin(), between.end());
  for (int s : between) apply_h(s);
  int e = conj_sign(cv, v.parity(i), i < v.q,
                    v.mode() == IndexMode::Parity);
  for (auto& c : x) c *= e;
  return x;
}

// Consistency of a state with its own conjugation action: the zero level is
// conjugation invariant, so for every real cycle the pairing of its
// conjugate with the zero level matches its own, and the pairing with a
// lower pair member matches the conjugate's pairing with the upper one.
inline std::vector<std::string> con_errors(const VM& v, const Conventions& cv) {
  std::vector<std::string> errs;
  const int r = v.r, p = v.p(), mu = v.mu;
  for (int i = 0; i < r; ++i) {
    std::vector<int> ci = conj_of_real(v, cv, i);
    long cb = 0;
    for (int j = 0; j < mu; ++j) cb += long(ci[j]) * v.b[j];
    bool b_ok = v.mode() == IndexMode::Parity ? ((cb - v.b[i]) % 2 == 0)
                                              : (cb == v.b[i]);
    if (!b_ok) {
      errs.push_back("b not conjugation invariant at real " + std::to_string(i));
      continue;
    }
    for (int k = 0; k < p; ++k) {
      long cu = 0;
      for (int j = 0; j < mu; ++j) cu += long(ci[j]) * v.a(j, r + k);
      if (cu != v.a(i, r + p + k)) {
        errs.push_back("pair pairing breaks conjugation at real " +
                       std::to_string(i) + " pair " + std::to_string(k));
        break;
      }
    }
  }
  return errs;
}

namespace detail {

// Rebuilds a state after replacing the basis by integer combinations of the
// old one: rows[i] gives new cycle i over the old basis.  b transforms
// linearly, the matrix by congruence.
inline VM rebasis(const VM& v, int r, int q,
                  const std::vector<std::vector<int>>& rows,
                  const std::vector<int>& morse) {
  VM out;
  out.cls = v.cls;
  out.mu = v.mu;
  out.r = static_cast<int8_t>(r);
  out.q = static_cast<int8_t>(q);
  const int mu = v.mu;
  for (int i = 0; i < r; ++i) out.m[i] = static_cast<int8_t>(morse[i]);
  for (int i = 0; i < mu; ++i) {
    long bi = 0;
    for (int k = 0; k < mu; ++k) bi += long(rows[i][k]) * v.b[k];
    if (bi < -120 || bi > 120) throw std::overflow_error("b entry overflow");
    out.b[i] = static_cast<int8_t>(bi);
    for (int j = i; j < mu; ++j) {
      long aij = 0;
      for (int k = 0; k < mu; ++k) {
        if (rows[i][k] == 0) continue;
        for (int l = 0; l < mu; ++l)
          aij += long(rows[i][k]) * v.a(k, l) * rows[j][l];
      }
      if (aij < -120 || aij > 120)
        throw std::overflow_error("matrix entry overflow");
      out.A[i * mu + j] = static_cast<int8_t>(aij);
      out.A[j * mu + i] = static_cast<int8_t>(aij);
    }
  }
  return out;
}

inline std::vector<int> transposition(int mu, int i, int j) {
  std::vector<int> perm(mu);
  for (int k = 0; k < mu; ++k) perm[k] = k;
  std::swap(perm[i], perm[j]);
  return perm;
}

// row += <row, mem> mem over the old basis.
inline void reflect_in(const VM& v, std::vector<int>& row,
                       const std::vector<int>& mem) {
  long c = 0;
  for (int j = 0; j < v.mu; ++j)
    for (int k = 0; k < v.mu; ++k) c += long(row[j]) * v.a(j, k) * mem[k];
  for (int k = 0; k < v.mu; ++k) row[k] += int(c) * mem[k];
}

// Reflection of the old basis vector e_j in the cycle given by mem (over the
// old basis): e_j + <x_j, mem> mem.
inline std::vector<int> reflected_row(const VM& v, int j,
                                      const std::vector<int>& mem) {
  std::vector<int> row(v.mu, 0);
  row[j] = 1;
  reflect_in(v, row, mem);
  return row;
}

// Transport of a cycle across the dodges of the given real values (listed
// nearest zero first), in the order a point traveling outward from zero
// crosses them; invert = true gives the inward journey.
inline std::vector<int> transported(const VM& v, const Conventions& cv,
                                    std::vector<int> x, std::vector<int> sep,
                                    bool invert) {
  if (cv.conj_order == 1) std::reverse(sep.begin(), sep.end());
  if (!invert) std::reverse(sep.begin(), sep.end());
  for (int s : sep) {
    long c = 0;
    for (int j = 0; j < v.mu; ++j) c += long(x[j]) * v.a(j, s);
    x[s] += int(c);
  }
  return x;
}

}  // namespace detail

// --- s1: collision of two neighboring real critical values ---------------

inline std::vector<VM> s1_moves(const VM& v, const Conventions& cv) {
  std::vector<VM> out;
  const int r = v.r, q = v.q, p = v.p();
  // exchange branch: the points stay real, their values trade places
  for (int i = 0; i + 1 < r; ++i) {
    if (i + 1 == q) continue;  // values on opposite sides of zero never meet
    int a = v.a(i, i + 1);
    if (a == 0) {
      VM w = permuted(v, detail::transposition(v.mu, i, i + 1));
      std::swap(w.m[i], w.m[i + 1]);
      canonicalize(w);
      out.push_back(w);
    } else if (std::abs(a) == 1 && cv.swap_rule == 1) {
      // over: the cycle of the overtaken value is reflected in the mover
      VM w = permuted(v, detail::transposition(v.mu, i, i + 1));
      std::swap(w.m[i], w.m[i + 1]);
      reflect(w, i + 1, i);
      canonicalize(w);
      out.push_back(w);
      // under
      VM t = v;
      reflect(t, i + 1, i);
      t = permuted(t, detail::transposition(v.mu, i, i + 1));
      std::swap(t.m[i], t.m[i + 1]);
      canonicalize(t);
      out.push_back(t);
    }
  }
  // merge branch: any adjacent same-side pair goes complex, entering the
  // angular end of the complex block on its side of the imaginary axis.
  // The upper member rises clear of everything; the lower one descends and
  // travels outward under the farther same-side values, so its cycle is the
  // conjugate of the outer one and those values are reflected in it.
  auto try_merge = [&](int lo_pos, bool neg_side) {
    int hi_pos = lo_pos + 1;
    int inner = neg_side ? hi_pos : lo_pos;  // value nearer zero
    int outer = neg_side ? lo_pos : hi_pos;
    int c = v.a(inner, outer);
    if (std::abs(c) != 1) return;
    if (cv.merge_sign == 1 && c != 1) return;
    if (cv.merge_sign == 2 && c != -1) return;
    // the colliding pair is a splitting of a real A2 point, so the lower
    // value carries the lower Morse index
    if (v.mode() == IndexMode::Exact) {
      if (v.m[hi_pos] != v.m[lo_pos] + 1) return;
    } else {
      if (v.parity(hi_pos) == v.parity(lo_pos)) return;
    }
    std::vector<int> lower = conj_of_real(v, cv, outer);
    const int mu = v.mu;
    int nr = r - 2, nq = neg_side ? q - 2 : q, np = p + 1;
    std::vector<int> upper(mu, 0);
    upper[outer] = 1;
    // the cycle the lower member carries while still at the collision
    // radius, before its inward journey across the separating values
    std::vector<int> sep;  // values between the collision and zero
    if (neg_side)
      for (int j = q - 1; j > hi_pos; --j) sep.push_back(j);
    else
      for (int j = q; j < lo_pos; ++j) sep.push_back(j);
    std::vector<int> low_out = detail::transported(v, cv, lower, sep, false);
    const std::vector<int>& mem = cv.reflect_member == 0 ? low_out : upper;
    std::vector<std::vector<int>> rows(mu, std::vector<int>(mu, 0));
    std::vector<int> morse(nr);
    for (int j = 0, idx = 0; j < r; ++j) {
      if (j == lo_pos || j == hi_pos) continue;
      // same-side values farther from zero than the collision point
      if (neg_side ? j < lo_pos : j > hi_pos)
        rows[idx] = detail::reflected_row(v, j, mem);
      else
        rows[idx][j] = 1;
      morse[idx] = v.m[j];
      ++idx;
    }
    int slot = neg_side ? 0 : np - 1;
    for (int k = 0; k < np; ++k) {
      if (k == slot) {
        rows[nr + k][outer] = 1;
        rows[nr + np + k] = lower;
      } else {
        int k0 = k - (neg_side ? 1 : 0);
        rows[nr + k][r + k0] = 1;
        rows[nr + np + k][r + p + k0] = 1;
      }
    }
    VM w = detail::rebasis(v, nr, nq, rows, morse);
    canonicalize(w);
    out.push_back(w);
  };
  for (int i = 0; i + 1 < q; ++i) try_merge(i, true);
  for (int i = q; i + 1 < r; ++i) try_merge(i, false);
  return out;
}

// --- s2: a conjugate pair of values meets the real axis ------------------

// Only the angular-extreme pairs can reach their side of the axis.  They
// can touch it at any point of that side: with d same-side real values
// between the touching point and zero, the values farther out have their
// cycles reflected in each member crossing the axis, while the d nearer
// values separate the pair from zero and enter the conjugate transport of
// the lower member.
using S2Trace =
    std::function<void(int side, int d, MoveKind kind, const VM& w)>;

inline std::vector<VM> s2_moves(const VM& v, const Conventions& cv,
                                const S2Trace& trace = {}) {
  std::vector<VM> out;
  const int r = v.r, q = v.q, p = v.p(), mu = v.mu;
  for (int side = 0; side < 2 && p > 0; ++side) {
    bool neg_side = side == 0;
    int k = neg_side ? 0 : p - 1;
    int up = r + k, low = r + p + k;
    int a = v.a(up, low);
    int n_side = neg_side ? q : r - q;
    for (int d = 0; d <= n_side; ++d) {
      auto is_far = [&](int j) {  // same-side real beyond the touching point
        return neg_side ? j < q - d : j >= q + d;
      };
      // the lower member reaches the touching radius carrying its cycle
      // transported outward across the d separating values
      std::vector<int> sep;  // separating values, nearest zero first
      if (neg_side)
        for (int j = q - 1; j >= q - d; --j) sep.push_back(j);
      else
        for (int j = q; j < q + d; ++j) sep.push_back(j);
      std::vector<int> e_low(mu, 0), e_up(mu, 0);
      e_low[low] = 1;
      e_up[up] = 1;
      std::vector<int> lhat = detail::transported(v, cv, e_low, sep, false);
      // miss: the values trade half-planes at the touching point, the
      // points stay apart.  Each member crosses the paths of the farther
      // values once; the members then swap journeys, the old upper one
      // continuing inward under the separating values.
      if (a == 0 || (std::abs(a) == 1 && cv.miss_allowed == 1)) {
        std::vector<std::vector<int>> rows(mu, std::vector<int>(mu, 0));
        std::vector<int> morse(r);
        for (int j = 0; j < r; ++j) {
          rows[j][j] = 1;
          if (is_far(j)) {
            detail::reflect_in(v, rows[j], e_up);
            detail::reflect_in(v, rows[j], lhat);
          }
          morse[j] = v.m[j];
        }
        for (int kk = 0; kk < p; ++kk) {
          if (kk == k) continue;
          rows[r + kk][r + kk] = 1;
          rows[r + p + kk][r + p + kk] = 1;
        }
        rows[up] = lhat;
        rows[low] = detail::transported(v, cv, e_up, sep, true);
        VM w = detail::rebasis(v, r, q, rows, morse);
        canonicalize(w);
        if (w != v) {
          if (trace) trace(side, d, MoveKind::S2Miss, w);
          out.push_back(w);
        }
      }
      // land: the points meet at a real A2 point and split into two real
      // Morse points.  The outer new cycle is the upper member (negated on
      // the negative side); the inner one is pinned by requiring that
      // merging the pair back reproduces the lower member.  That condition
      // also selects the base Morse parity of the ascending pair.
      long ul = 0;
      for (int j = 0; j < mu; ++j) ul += long(lhat[j]) * v.a(up, j);
      if (std::abs(ul) != 1) continue;
      for (int par_base = 0; par_base < 2; ++par_base) {
        int par_outer = neg_side ? par_base : (par_base ^ 1);
        int eps = conj_sign(cv, par_outer, neg_side,
                            v.mode() == IndexMode::Parity);
        if (eps * ul != -1) continue;  // merging back must return L
        if (v.mode() == IndexMode::Exact && par_base > 1) continue;
        int m_lo = par_base;
        int m_hi = v.mode() == IndexMode::Exact ? par_base + 1 : (par_base ^ 1);
        int nr = r + 2, nq = neg_side ? q + 2 : q, np = p - 1;
        int lo_slot = neg_side ? q - d : q + d;  // pair positions
        std::vector<std::vector<int>> rows(mu, std::vector<int>(mu, 0));
        std::vector<int> morse(nr, 0);
        const std::vector<int>& mem = cv.reflect_member == 0 ? lhat : e_up;
        for (int j = 0, idx = 0; idx < nr; ++idx) {
          if (idx == lo_slot || idx == lo_slot + 1) continue;
          if (is_far(j))
            rows[idx] = detail::reflected_row(v, j, mem);
          else
            rows[idx][j] = 1;
          morse[idx] = v.m[j];
          ++j;
        }
        // outer = +-U; inner from h_inner(U) = eps * transported L
        int c_sign = neg_side ? -1 : 1;
        int outer_slot = neg_side ? lo_slot : lo_slot + 1;
        int inner_slot = neg_side ? lo_slot + 1 : lo_slot;
        rows[outer_slot][up] = neg_side ? -1 : 1;
        for (int j = 0; j < mu; ++j)
          rows[inner_slot][j] = c_sign * (eps * int(lhat[j]) - (j == up ? 1 : 0));
        morse[lo_slot] = m_lo;
        morse[lo_slot + 1] = m_hi;
        for (int kk = 0; kk < np; ++kk) {
          int k0 = kk + (neg_side ? 1 : 0);
          rows[nr + kk][r + k0] = 1;
          rows[nr + np + kk][r + p + k0] = 1;
        }
        VM w = detail::rebasis(v, nr, nq, rows, morse);
        canonicalize(w);
        if (trace) trace(side, d, MoveKind::S2Land, w);
        out.push_back(w);
      }
    }
  }
  return out;
}

// --- s3: a real value jumps through zero ---------------------------------

// The jumper keeps its place in the value order; only q and the
// intersections with the real zero level change.  Downward and upward jumps
// use opposite increments, making them mutually inverse.
inline std::vector<VM> s3_moves(const VM& v, const Conventions& cv) {
  std::vector<VM> out;
  const int r = v.r, p = v.p();
  auto jump = [&](int j, int dir) {
    VM w = v;
    int s = zero_cross_sign(v, cv, j) * dir;
    for (int i = 0; i < v.mu; ++i)
      w.b[i] = static_cast<int8_t>(w.b[i] + s * v.a(i, j));
    w.q = static_cast<int8_t>(v.q + dir);
    // the jumper dodges around zero through the half-plane of the paths of
    // one pair block and reflects their cycles
    for (int k = 0; k < p; ++k)
      reflect(w, cv.reflect_member == 0 ? r + p + k : r + k, j);
    canonicalize(w);
    out.push_back(w);
  };
  if (v.q < v.r) jump(v.q, +1);    // smallest positive value crosses down
  if (v.q > 0) jump(v.q - 1, -1);  // largest negative value crosses up
  return out;
}

// --- s4: change of the path system at two angularly adjacent pairs -------

// Always applicable; acts on the upper block like an adjacent-path exchange
// and on the lower block by the conjugated transformation.  Both
// chiralities are emitted; they are mutually inverse.
inline std::vector<VM> s4_moves(const VM& v, const Conventions&) {
  std::vector<VM> out;
  const int r = v.r, p = v.p();
  for (int k = 0; k + 1 < p; ++k) {
    std::vector<int> perm(v.mu);
    for (int j = 0; j < v.mu; ++j) perm[j] = j;
    std::swap(perm[r + k], perm[r + k + 1]);
    std::swap(perm[r + p + k], perm[r + p + k + 1]);
    {
      VM w = permuted(v, perm);
      reflect(w, r + k + 1, r + k);
      reflect(w, r + p + k + 1, r + p + k);
      canonicalize(w);
      if (w != v) out.push_back(w);
    }
    {
      VM t = v;
      reflect(t, r + k + 1, r + k);
      reflect(t, r + p + k + 1, r + p + k);
      VM w = permuted(t, perm);
      canonicalize(w);
      if (w != v) out.push_back(w);
    }
  }
  return out;
}

enum class Program : uint8_t { Main, Reduced };

inline std::vector<VM> successors(const VM& v, const Conventions& cv,
                                  Program prog) {
  std::vector<VM> out = s1_moves(v, cv);
  auto s2 = s2_moves(v, cv);
  out.insert(out.end(), s2.begin(), s2.end());
  if (prog == Program::Main) {
    auto s3 = s3_moves(v, cv);
    out.insert(out.end(), s3.begin(), s3.end());
  }
  auto s4 = s4_moves(v, cv);
  out.insert(out.end(), s4.begin(), s4.end());
  out.erase(std::remove(out.begin(), out.end(), v), out.end());
  return out;
}

// --- seeds, scale, negation ----------------------------------------------

// Conjugation action on the basis of a fully real state with q negative
// values: each cycle is transported across the values between its own and
// zero and picks up the sign of the local antiholomorphic reflection.
// Column i of the result expresses the conjugate of cycle i.
inline std::vector<std::vector<long>> con_matrix(const VM& v, int q,
                                                 const Conventions& cv) {
  const int mu = v.mu;
  std::vector<std::vector<long>> C(mu, std::vector<long>(mu, 0));
  for (int i = 0; i < mu; ++i) {
    bool neg = i < q;
    std::vector<int> between;
    if (neg)
      for (int j = q - 1; j > i; --j) between.push_back(j);  // nearest zero first
    else
      for (int j = q; j < i; ++j) between.push_back(j);
    if (cv.conj_order == 1) std::reverse(between.begin(), between.end());
    std::vector<long> x(mu, 0);
    x[i] = 1;
    for (int s : between) {
      long c = 0;
      for (int j = 0; j < mu; ++j) c += x[j] * v.a(j, s);
      x[s] += c;
    }
    int eps = conj_sign(cv, v.parity(i), neg,
                        v.mode() == IndexMode::Parity);
    for (int j = 0; j < mu; ++j) C[j][i] = eps * x[j];
  }
  return C;
}

// b of a fully real state with q = 0.  The string is pinned by requiring
// that every member of the standard scale (obtained by letting the values
// jump through zero one at a time) pairs consistently with its own
// conjugation action: the zero level is conjugation invariant, so b must be
// fixed by the transpose of the conjugation matrix at every scale position.
// The leftover freedom (at most a sign) is resolved by minimal norm and the
// lexicographic convention.
inline void derive_b(VM& v, const Conventions& cv) {
  if (v.r != v.mu || v.q != 0)
    throw std::invalid_argument("derive_b needs a fully real state with q=0");
  const int mu = v.mu;
  if (v.mode() == IndexMode::Parity) {
    // b is a residue string; brute-force the 2^mu candidates against the
    // mod-2 conjugation invariance and self-pairing parities over the scale
    std::vector<std::vector<int>> u2(mu + 1, std::vector<int>(mu, 0));
    for (int q = 1; q <= mu; ++q)
      for (int i = 0; i < mu; ++i)
        u2[q][i] = (u2[q - 1][i] + std::abs(v.a(i, q - 1))) & 1;
    std::vector<std::vector<std::vector<long>>> Cs;
    for (int q = 0; q <= mu; ++q) Cs.push_back(con_matrix(v, q, cv));
    std::vector<int> best;
    int best_w = -1;
    for (unsigned mask = 0; mask < (1u << mu); ++mask) {
      std::vector<int> b0(mu);
      for (int i = 0; i < mu; ++i) b0[i] = (mask >> i) & 1;
      bool ok = true;
      for (int q = 0; q <= mu && ok; ++q)
        for (int i = 0; i < mu && ok; ++i) {
          long cb = 0, self = 0;
          for (int j = 0; j < mu; ++j) {
            cb += Cs[q][j][i] * ((b0[j] + u2[q][j]) & 1);
            self += Cs[q][j][i] * v.a(i, j);
          }
          int bi = (b0[i] + u2[q][i]) & 1;
          if ((cb - bi) % 2 != 0 || (self - bi) % 2 != 0) ok = false;
        }
      if (!ok) continue;
      int w = 0;
      for (int x : b0) w += x;
      if (best_w == -1 || w < best_w ||
          (w == best_w && (cv.bd_lex == 0 ? b0 > best : b0 < best))) {
        best_w = w;
        best = b0;
      }
    }
    if (best_w == -1) throw std::logic_error("no admissible b string found");
    for (int i = 0; i < mu; ++i) v.b[i] = static_cast<int8_t>(best[i]);
    return;
  }
  // cumulative zero-jump increments: scale state q has b = b0 + u[q]
  std::vector<std::vector<long>> u(mu + 1, std::vector<long>(mu, 0));
  for (int q = 1; q <= mu; ++q) {
    int j = q - 1;
    long s = zero_cross_sign(v, cv, j);
    for (int i = 0; i < mu; ++i) u[q][i] = u[q - 1][i] + s * v.a(i, j);
  }
  // rows of the homogeneous system M b0 = rhs collected over the scale,
  // together with the parity of the self-pairing with the conjugate
  std::vector<std::vector<long>> M;
  std::vector<long> rhs;
  std::vector<int> par_target(mu, -1);
  for (int q = 0; q <= mu; ++q) {
    auto C = con_matrix(v, q, cv);
    for (int i = 0; i < mu; ++i) {
      // <con x_i, zero level> = <x_i, zero level>
      std::vector<long> row(mu, 0);
      long r0 = 0;
      for (int j = 0; j < mu; ++j) {
        long c = C[j][i] - (i == j ? 1 : 0);
        row[j] = c;
        r0 -= c * u[q][j];
      }
      M.push_back(std::move(row));
      rhs.push_back(r0);
      long self = 0;  // <x_i, con x_i> fixes b_i mod 2
      for (int j = 0; j < mu; ++j) self += C[j][i] * v.a(i, j);
      long want = ((self % 2) + 2 + (u[q][i] % 2) + 2) % 2;
      if (par_target[i] == -1)
        par_target[i] = int(want);
      else if (par_target[i] != int(want))
        throw std::logic_error("inconsistent b parities along the scale");
    }
  }
  // fraction-free elimination over the integers
  const int rows = static_cast<int>(M.size());
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < mu && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (M[r][col] != 0 && (piv == -1 || std::llabs(M[r][col]) <
                                              std::llabs(M[piv][col])))
        piv = r;
    if (piv == -1) continue;
    std::swap(M[rank], M[piv]);
    std::swap(rhs[rank], rhs[piv]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || M[r][col] == 0) continue;
      long a = M[rank][col], b = M[r][col];
      long g = std::gcd(std::llabs(a), std::llabs(b));
      long fa = b / g, fb = a / g;
      for (int c2 = 0; c2 < mu; ++c2) M[r][c2] = fb * M[r][c2] - fa * M[rank][c2];
      rhs[r] = fb * rhs[r] - fa * rhs[rank];
      long g2 = std::llabs(rhs[r]);
      for (int c2 = 0; c2 < mu; ++c2) g2 = std::gcd(g2, std::llabs(M[r][c2]));
      if (g2 > 1) {
        for (int c2 = 0; c2 < mu; ++c2) M[r][c2] /= g2;
        rhs[r] /= g2;
      }
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < rows; ++r)
    if (rhs[r] != 0) throw std::logic_error("b constraints are contradictory");
  std::vector<bool> is_pivot(mu, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < mu; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  if (free_cols.size() > 3)
    throw std::logic_error("b is underdetermined beyond sign freedom");
  // enumerate small assignments of the free coordinates
  std::vector<long> best;
  long best_norm = -1;
  std::vector<long> c(free_cols.size(), 0);
  const long range = 6;
  std::function<void(size_t)> scan = [&](size_t k) {
    if (k == free_cols.size()) {
      std::vector<long> b0(mu, 0);
      for (size_t t = 0; t < free_cols.size(); ++t) b0[free_cols[t]] = c[t];
      for (int r = rank - 1; r >= 0; --r) {
        int pc = pivot_col[r];
        long num = rhs[r];
        for (int c2 = 0; c2 < mu; ++c2)
          if (c2 != pc) num -= M[r][c2] * b0[c2];
        if (num % M[r][pc] != 0) return;  // non-integral branch
        b0[pc] = num / M[r][pc];
      }
      for (int i = 0; i < mu; ++i)
        if ((((b0[i] % 2) + 2) % 2) != par_target[i]) return;
      long norm = 0;
      for (long x : b0) norm += x * x;
      if (best_norm == -1 || norm < best_norm ||
          (norm == best_norm && ((cv.bd_lex == 0) ? b0 > best : b0 < best))) {
        best_norm = norm;
        best = b0;
      }
    } else {
      for (long val = -range; val <= range; ++val) {
        c[k] = val;
        scan(k + 1);
      }
    }
  };
  scan(0);
  if (best_norm == -1) throw std::logic_error("no admissible b string found");
  for (int i = 0; i < mu; ++i) {
    if (best[i] < -120 || best[i] > 120)
      throw std::overflow_error("b entry overflow");
    v.b[i] = static_cast<int8_t>(best[i]);
  }
}

// States with q > 0 are produced from the all-positive sibling by letting
// the q smallest values jump through zero one by one.
inline VM make_seed(ClassId cls, const std::vector<std::vector<int>>& A,
                    const std::vector<int>& morse, int q,
                    const Conventions& cv) {
  VM v;
  v.cls = cls;
  v.mu = static_cast<int8_t>(A.size());
  v.r = v.mu;
  v.q = 0;
  for (int i = 0; i < v.mu; ++i) {
    v.m[i] = static_cast<int8_t>(morse[i]);
    for (int j = 0; j < v.mu; ++j) v.set_a(i, j, A[i][j]);
  }
  derive_b(v, cv);
  for (int t = 0; t < q; ++t) v = s3_moves(v, cv).front();
  canonicalize(v);
  return v;
}

// The scale through a fully real state: its siblings under repeated zero
// jumps, indexed by q = 0..mu.
inline std::vector<VM> standard_scale(const VM& seed, const Conventions& cv) {
  if (seed.r != seed.mu)
    throw std::invalid_argument("standard_scale needs a fully real state");
  std::vector<VM> scale(seed.mu + 1);
  scale[seed.q] = seed;
  VM cur = seed;
  for (int q = seed.q; q > 0; --q) {
    for (const VM& w : s3_moves(cur, cv))
      if (w.q == q - 1) cur = w;
    scale[q - 1] = cur;
  }
  cur = seed;
  for (int q = seed.q; q < seed.mu; ++q) {
    for (const VM& w : s3_moves(cur, cv))
      if (w.q == q + 1) cur = w;
    scale[q + 1] = cur;
  }
  return scale;
}

// Effect of replacing the function by its negative: values and cycles in
// reversed order, conjugate pairs swapped end to end, Morse data
// complemented, negative values counted from the other side.
inline VM negate_state(const VM& v, const Conventions& cv) {
  const int r = v.r, p = v.p(), mu = v.mu;
  std::vector<int> perm(mu);
  for (int i = 0; i < r; ++i) perm[i] = r - 1 - i;
  for (int k = 0; k < p; ++k) {
    perm[r + k] = r + p + (p - 1 - k);
    perm[r + p + k] = r + (p - 1 - k);
  }
  VM w = permuted(v, perm);
  w.q = static_cast<int8_t>(r - v.q);
  int top = v.mode() == IndexMode::Exact ? 2 : 1;
  for (int i = 0; i < r; ++i)
    w.m[i] = static_cast<int8_t>(top - v.m[r - 1 - i]);
  if (cv.negate_flip_b)
    for (int i = 0; i < mu; ++i) w.b[i] = static_cast<int8_t>(-w.b[i]);
  canonicalize(w);
  return w;
}

}  // namespace vmorse
