#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "qdilog/errors.hpp"
#include "qdilog/qexp.hpp"

namespace qdilog {

/// Relation between two products of single-generator q-exponentials
/// s_n^+- = s(w_n^+-1), instantiated at concrete sites.
struct SRelation {
  std::string label;
  FactorProduct lhs;
  FactorProduct rhs;
};

namespace rel {

inline SFactor sp(int n) { return {n, +1}; }
inline SFactor sm(int n) { return {n, -1}; }
inline SFactor s(int n, int sign) { return {n, sign}; }

inline std::string sign_char(int sign) { return sign > 0 ? "+" : "-"; }

/// The six relations among s(u^+-1), s(v^+-1) for the Weyl pair (u, v) =
/// (w_n, w_{n+1}). Index 5 and 6 are the local commutations on n and n+1.
inline SRelation two_site(int index, int n) {
  const int a = n, b = n + 1;
  const std::string at = "[" + std::to_string(n) + "]";
  switch (index) {
    case 1: return {"r1" + at, {sp(b), sm(a), sp(a), sp(b)}, {sm(a), sp(b), sp(a)}};
    case 2: return {"r2" + at, {sm(b), sp(a), sm(a), sm(b)}, {sp(a), sm(b), sm(a)}};
    case 3: return {"r3" + at, {sp(a), sp(b), sm(b), sp(a)}, {sp(b), sp(a), sm(b)}};
    case 4: return {"r4" + at, {sm(a), sm(b), sp(b), sm(a)}, {sm(b), sm(a), sp(b)}};
    case 5: return {"loc[" + std::to_string(a) + "]", {sp(a), sm(a)}, {sm(a), sp(a)}};
    case 6: return {"loc[" + std::to_string(b) + "]", {sp(b), sm(b)}, {sm(b), sp(b)}};
    default: throw InvalidParams("two-site relations are numbered 1..6");
  }
}

inline SRelation local_commute(int n) { return {"loc[" + std::to_string(n) + "]", {sp(n), sm(n)}, {sm(n), sp(n)}}; }

/// s_{n+1}^e s_n^- s_n^+ s_{n+1}^e = s_n^-e s_{n+1}^e s_n^e
inline SRelation family1(int n, int e) {
  return {"fam1[" + std::to_string(n) + "," + sign_char(e) + "]",
          {s(n + 1, e), sm(n), sp(n), s(n + 1, e)},
          {s(n, -e), s(n + 1, e), s(n, e)}};
}

/// s_n^-e s_{n+1}^- s_{n+1}^+ s_n^-e = s_{n+1}^-e s_n^-e X, where X is
/// s_{n+1}^e (corrected form, agreeing with the two-site relations 3 and 4)
/// or s_n^e (the form as typeset).
inline SRelation family2(int n, int e, bool as_typeset = false) {
  return {std::string(as_typeset ? "fam2_typeset[" : "fam2[") + std::to_string(n) + "," + sign_char(e) + "]",
          {s(n, -e), sm(n + 1), sp(n + 1), s(n, -e)},
          {s(n + 1, -e), s(n, -e), as_typeset ? s(n, e) : s(n + 1, e)}};
}

/// s_m^a s_n^b = s_n^b s_m^a, |m - n| != 1.
inline SRelation commute(int m, int a, int n, int b) {
  if (std::abs(m - n) == 1) throw InvalidParams("neighbouring q-exponentials do not commute");
  return {"comm[" + std::to_string(m) + sign_char(a) + "," + std::to_string(n) + sign_char(b) + "]",
          {s(m, a), s(n, b)},
          {s(n, b), s(m, a)}};
}

inline FactorProduct braid_word(const std::vector<int>& indices) {
  FactorProduct out;
  for (int n : indices) {
    out.push_back(sp(n));
    out.push_back(sm(n));
  }
  return out;
}

inline FactorProduct sigma_word(const std::vector<int>& indices) {
  FactorProduct out;
  for (int n : indices) {
    out.push_back(sm(n));
    out.push_back(sp(n + 1));
  }
  return out;
}

/// b_n b_{n+1} b_n = b_{n+1} b_n b_{n+1}, expanded through b_n = s_n^+ s_n^-.
inline SRelation artin(int n) {
  return {"artin[" + std::to_string(n) + "]", braid_word({n, n + 1, n}), braid_word({n + 1, n, n + 1})};
}

inline SRelation braid_commute(int m, int n) {
  return {"bcomm[" + std::to_string(m) + "," + std::to_string(n) + "]", braid_word({m, n}), braid_word({n, m})};
}

/// c_{n+1} c_{n-1} c_n c_{n+1} = c_{n-1} c_{n+1} c_n, c_n = s_n^- s_{n+1}^+.
inline SRelation sigma1(int n) {
  return {"sig1[" + std::to_string(n) + "]", sigma_word({n + 1, n - 1, n, n + 1}), sigma_word({n - 1, n + 1, n})};
}

/// c_{n-1} c_n c_{n+1} c_{n-1} = c_n c_{n-1} c_{n+1}
inline SRelation sigma2(int n) {
  return {"sig2[" + std::to_string(n) + "]", sigma_word({n - 1, n, n + 1, n - 1}), sigma_word({n, n - 1, n + 1})};
}

inline SRelation sigma_commute(int m, int n) {
  return {"scomm[" + std::to_string(m) + "," + std::to_string(n) + "]", sigma_word({m, n}), sigma_word({n, m})};
}

}  // namespace rel
}  // namespace qdilog
