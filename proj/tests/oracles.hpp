// Test-side oracles, independent of the library's implementation paths:
// set-based subset products, a worklist enumerator for minimal left ideals,
// and a small exact fraction type for the exhaustive cocycle grid.

#ifndef GLCM_TESTS_ORACLES_HPP_
#define GLCM_TESTS_ORACLES_HPP_

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "glcm/ellis.hpp"
#include "glcm/group.hpp"

namespace oracles {

/// Subset product by plain enumeration over std::set.
inline std::set<int> product_set(glcm::FiniteGroup const& g, std::set<int> const& a,
                                 std::set<int> const& b) {
  std::set<int> out;
  for (int x : a)
    for (int y : b) out.insert(g.mul(x, y));
  return out;
}

inline std::set<int> to_set(glcm::GSubset const& s) {
  std::set<int> out;
  s.bits.for_each([&](int e) { out.insert(e); });
  return out;
}

/// Minimal left ideals by worklist closure from every element plus an
/// explicit minimality verification: an ideal is minimal iff the closure of
/// each of its members recovers the whole set (any proper subideal would
/// contain the closure of one of its elements).
inline std::vector<glcm::Bits> brute_minimal_left_ideals(glcm::FiniteSemigroup const& s) {
  auto closure = [&](int x) {
    std::set<int> out = {x};
    std::vector<int> work = {x};
    while (!work.empty()) {
      int t = work.back();
      work.pop_back();
      for (int u = 0; u < s.order; ++u) {
        int v = s.at(u, t);
        if (out.insert(v).second) work.push_back(v);
      }
    }
    return out;
  };
  std::set<std::set<int>> candidates;
  std::vector<std::set<int>> closures(static_cast<size_t>(s.order));
  for (int x = 0; x < s.order; ++x) closures[static_cast<size_t>(x)] = closure(x);
  for (int x = 0; x < s.order; ++x) {
    auto const& m = closures[static_cast<size_t>(x)];
    bool minimal = true;
    for (int t : m) {
      if (closures[static_cast<size_t>(t)] != m) {
        minimal = false;
        break;
      }
    }
    if (minimal) candidates.insert(m);
  }
  std::vector<glcm::Bits> out;
  for (auto const& m : candidates) {
    glcm::Bits b(s.order);
    for (int e : m) b.set(e);
    out.push_back(std::move(b));
  }
  return out;
}

/// Exact fraction over int64 with overflow checks; fast enough for the
/// exhaustive half-integer grid.
struct Frac {
  long long num = 0, den = 1;

  Frac() = default;
  Frac(long long n) : num(n), den(1) {}
  Frac(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::overflow_error("Frac: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  static long long gcd(long long a, long long b) {
    while (b) {
      long long t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  static long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Frac: overflow");
    return r;
  }

  friend Frac operator*(Frac const& a, Frac const& b) {
    return Frac(checked_mul(a.num, b.num), checked_mul(a.den, b.den));
  }
  friend Frac operator+(Frac const& a, Frac const& b) {
    return Frac(checked_mul(a.num, b.den) + checked_mul(b.num, a.den), checked_mul(a.den, b.den));
  }
  friend Frac operator-(Frac const& a, Frac const& b) {
    return Frac(checked_mul(a.num, b.den) - checked_mul(b.num, a.den), checked_mul(a.den, b.den));
  }
  int sign() const { return num > 0 ? 1 : (num < 0 ? -1 : 0); }
  bool operator==(Frac const& o) const { return num == o.num && den == o.den; }
};

struct FMat {
  Frac a, b, c, d;
};

inline FMat fmul(FMat const& x, FMat const& y) {
  return FMat{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
              x.c * y.b + x.d * y.d};
}

inline int fsign_cd(Frac const& c, Frac const& d) { return c.sign() != 0 ? c.sign() : d.sign(); }

inline int fcocycle(FMat const& x, FMat const& y) {
  FMat p = fmul(x, y);
  int s1 = fsign_cd(x.c, x.d), s2 = fsign_cd(y.c, y.d), s3 = fsign_cd(p.c, p.d);
  if (s1 > 0 && s2 > 0 && s3 < 0) return 1;
  if (s1 < 0 && s2 < 0 && s3 > 0) return -1;
  return 0;
}

/// All determinant-one matrices with entries in {0, +-1/2, +-1, +-2}.
inline std::vector<FMat> half_integer_grid() {
  std::vector<Frac> vals = {Frac(0), Frac(1, 2), Frac(-1, 2), Frac(1), Frac(-1), Frac(2), Frac(-2)};
  std::vector<FMat> out;
  for (auto const& a : vals)
    for (auto const& b : vals)
      for (auto const& c : vals)
        for (auto const& d : vals)
          if (a * d - b * c == Frac(1)) out.push_back(FMat{a, b, c, d});
  return out;
}

}  // namespace oracles

#endif  // GLCM_TESTS_ORACLES_HPP_
