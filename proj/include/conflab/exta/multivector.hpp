#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "conflab/core/jet.hpp"

// Exterior algebra of R^m, m <= 8, over an arbitrary commutative scalar ring
// (double for values, Jet for derivative-carrying fields). Components are
// stored densely, one coefficient per subset of {0..m-1}; basis element e_A
// is e_{a1} ^ ... ^ e_{ap} with a1 < ... < ap the set bits of A.
//
// Orientation convention (referenced by every Willmore sign test):
// e_1 ^ ... ^ e_m is the positive volume form; star, contract and bullet
// signs all follow from it.

namespace conflab::exta {

using mask_t = std::uint32_t;

inline int grade_of(mask_t A) { return std::popcount(A); }

inline bool scalar_is_zero(double v) { return v == 0.0; }
inline bool scalar_is_zero(const Jet& v) {
  for (double x : v.c)
    if (x != 0.0) return false;
  return true;
}

// sign of sorting (A ascending, then B ascending) into ascending order;
// A and B disjoint
inline int sign_merge(mask_t A, mask_t B) {
  int inv = 0;
  mask_t a = A;
  while (a) {
    const int bit = std::countr_zero(a);
    inv += std::popcount(B & ((mask_t(1) << bit) - 1));
    a &= a - 1;
  }
  return (inv & 1) ? -1 : 1;
}

template <class T>
struct MultiVec {
  int m = 0;
  std::vector<T> c;  // size 1 << m

  MultiVec() = default;
  explicit MultiVec(int m_) : m(m_), c(std::size_t(1) << m_, T(0.0)) {
    if (m_ < 0 || m_ > 8) throw std::invalid_argument("MultiVec: need 0 <= m <= 8");
  }

  static MultiVec scalar(int m_, T v) { MultiVec r(m_); r.c[0] = v; return r; }
  static MultiVec basis(int m_, mask_t A) { MultiVec r(m_); r.c[A] = T(1.0); return r; }
  static MultiVec vector(int m_, const std::vector<T>& v) {
    MultiVec r(m_);
    for (int i = 0; i < m_; ++i) r.c[mask_t(1) << i] = v[std::size_t(i)];
    return r;
  }

  std::size_t size() const { return c.size(); }

  // -1 for mixed grade; grade 0 for zero element
  int pure_grade() const {
    int g = -1;
    for (mask_t A = 0; A < c.size(); ++A) {
      if (scalar_is_zero(c[A])) continue;
      const int gA = grade_of(A);
      if (g == -1) g = gA;
      else if (g != gA) return -1;
    }
    return g == -1 ? 0 : g;
  }

  MultiVec grade(int p) const {
    MultiVec r(m);
    for (mask_t A = 0; A < c.size(); ++A)
      if (grade_of(A) == p) r.c[A] = c[A];
    return r;
  }

  MultiVec& operator+=(const MultiVec& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  MultiVec& operator-=(const MultiVec& o) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
  }
};

template <class T>
MultiVec<T> operator+(MultiVec<T> a, const MultiVec<T>& b) { a += b; return a; }
template <class T>
MultiVec<T> operator-(MultiVec<T> a, const MultiVec<T>& b) { a -= b; return a; }
template <class T>
MultiVec<T> operator-(const MultiVec<T>& a) {
  MultiVec<T> r(a.m);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] * (-1.0);
  return r;
}
template <class T>
MultiVec<T> operator*(MultiVec<T> a, double s) {
  for (auto& v : a.c) v = v * s;
  return a;
}
template <class T>
MultiVec<T> operator*(double s, MultiVec<T> a) { return a * s; }

// scale by a ring element (e.g. a Jet conformal factor)
template <class T, class S>
MultiVec<T> scaled(const MultiVec<T>& a, const S& s) {
  MultiVec<T> r(a.m);
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] * s;
  return r;
}

template <class T>
MultiVec<T> wedge(const MultiVec<T>& a, const MultiVec<T>& b) {
  if (a.m != b.m) throw std::invalid_argument("wedge: dimension mismatch");
  MultiVec<T> r(a.m);
  for (mask_t A = 0; A < a.c.size(); ++A) {
    if (scalar_is_zero(a.c[A])) continue;
    for (mask_t B = 0; B < b.c.size(); ++B) {
      if (A & B) continue;
      if (scalar_is_zero(b.c[B])) continue;
      r.c[A | B] += a.c[A] * b.c[B] * double(sign_merge(A, B));
    }
  }
  return r;
}

template <class T>
MultiVec<T> hodge_star(const MultiVec<T>& a, bool require_pure = true) {
  if (require_pure && a.pure_grade() == -1)
    throw std::invalid_argument("hodge_star: mixed grade");
  const mask_t full = (mask_t(1) << a.m) - 1;
  MultiVec<T> r(a.m);
  for (mask_t A = 0; A < a.c.size(); ++A) {
    if (scalar_is_zero(a.c[A])) continue;
    const mask_t Ac = full & ~A;
    r.c[Ac] += a.c[A] * double(sign_merge(A, Ac));
  }
  return r;
}

// interior multiplication: <a |_ b, g> = <a, b ^ g>, for grade(b) <= grade(a);
// basis terms with B not a subset of A vanish
template <class T>
MultiVec<T> contract(const MultiVec<T>& a, const MultiVec<T>& b, bool check_grades = true) {
  if (a.m != b.m) throw std::invalid_argument("contract: dimension mismatch");
  if (check_grades) {
    const int pa = a.pure_grade(), pb = b.pure_grade();
    if (pa >= 0 && pb >= 0 && pb > pa && !(pa == 0 && pb == 0))
      if (pb > pa) throw std::invalid_argument("contract: grade(b) > grade(a)");
  }
  MultiVec<T> r(a.m);
  for (mask_t A = 0; A < a.c.size(); ++A) {
    if (scalar_is_zero(a.c[A])) continue;
    for (mask_t B = 0; B < b.c.size(); ++B) {
      if ((A & B) != B) continue;
      if (scalar_is_zero(b.c[B])) continue;
      const mask_t C = A & ~B;
      r.c[C] += a.c[A] * b.c[B] * double(sign_merge(B, C));
    }
  }
  return r;
}

namespace detail {
template <class T>
void bullet_basis(const MultiVec<T>& a, mask_t B, const T& coef, MultiVec<T>& out) {
  const int q = grade_of(B);
  if (q <= 1) {
    MultiVec<T> t = contract(a, MultiVec<T>::basis(a.m, B), /*check_grades=*/false);
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += t.c[i] * coef;
    return;
  }
  const int b1 = std::countr_zero(B);
  const mask_t Bp = B & (B - 1);  // e_B = e_{b1} ^ e_{B'}
  MultiVec<T> t1(a.m), t2(a.m);
  bullet_basis(a, mask_t(1) << b1, T(1.0), t1);
  bullet_basis(a, Bp, T(1.0), t2);
  MultiVec<T> w1 = wedge(t1, MultiVec<T>::basis(a.m, Bp));
  MultiVec<T> w2 = wedge(t2, MultiVec<T>::basis(a.m, mask_t(1) << b1));
  const double s = ((q - 1) & 1) ? -1.0 : 1.0;  // (-1)^{r s}, r = 1, s = q - 1
  for (std::size_t i = 0; i < out.c.size(); ++i)
    out.c[i] += (w1.c[i] + w2.c[i] * s) * coef;
}
}  // namespace detail

// a . b: equals a |_ b when b is a 1-vector (or scalar), extended to higher
// grade b by a.(b^c) = (a.b)^c + (-1)^{rs}(a.c)^b
template <class T>
MultiVec<T> bullet(const MultiVec<T>& a, const MultiVec<T>& b) {
  if (a.m != b.m) throw std::invalid_argument("bullet: dimension mismatch");
  MultiVec<T> r(a.m);
  for (mask_t B = 0; B < b.c.size(); ++B) {
    if (scalar_is_zero(b.c[B])) continue;
    detail::bullet_basis(a, B, b.c[B], r);
  }
  return r;
}

template <class T>
T inner(const MultiVec<T>& a, const MultiVec<T>& b) {
  T s(0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i) s += a.c[i] * b.c[i];
  return s;
}

template <class T>
T norm2(const MultiVec<T>& a) { return inner(a, a); }

template <class T>
std::vector<T> as_vector(const MultiVec<T>& a) {
  std::vector<T> v(std::size_t(a.m), T(0.0));
  for (int i = 0; i < a.m; ++i) v[std::size_t(i)] = a.c[mask_t(1) << i];
  return v;
}

}  // namespace conflab::exta
