#ifndef GLCM_SL2_HPP_
#define GLCM_SL2_HPP_

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace glcm {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// A 2x2 rational matrix of determinant 1. Exact arithmetic keeps the sign
/// branches of the cocycle decidable near c = 0.
struct Mat2Q {
  Rat a, b, c, d;

  Mat2Q(Rat a_, Rat b_, Rat c_, Rat d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    if (a * d - b * c != 1) throw std::invalid_argument("Mat2Q: determinant must be 1");
  }

  static Mat2Q identity() { return Mat2Q(1, 0, 0, 1); }

  bool operator==(Mat2Q const& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

inline Mat2Q operator*(Mat2Q const& x, Mat2Q const& y) {
  return Mat2Q(x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
               x.c * y.b + x.d * y.d);
}

inline Mat2Q inverse(Mat2Q const& x) { return Mat2Q(x.d, -x.b, -x.c, x.a); }

/// c(d) = c when c != 0, else d.
inline Rat c_of_d(Rat const& c, Rat const& d) { return c != 0 ? c : d; }

inline int sign_of(Rat const& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

/// The integer 2-cocycle on SL2: +1 when both factors sit in the positive
/// branch of c(d) but the product flips negative, -1 in the mirrored case,
/// 0 otherwise. Values always land in {-1, 0, 1}.
inline int cocycle_h(Mat2Q const& x, Mat2Q const& y) {
  Mat2Q p = x * y;
  int s1 = sign_of(c_of_d(x.c, x.d));
  int s2 = sign_of(c_of_d(y.c, y.d));
  int s3 = sign_of(c_of_d(p.c, p.d));
  if (s1 > 0 && s2 > 0 && s3 < 0) return 1;
  if (s1 < 0 && s2 < 0 && s3 > 0) return -1;
  return 0;
}

/// An element (m, n) of the cover written as SL2 x Z with the twisted
/// product (m1, n1)(m2, n2) = (m1 m2, n1 + n2 + h(m1, m2)).
struct CoverElem {
  Mat2Q m;
  BigInt n;

  CoverElem(Mat2Q m_, BigInt n_) : m(std::move(m_)), n(std::move(n_)) {}
  static CoverElem identity() { return CoverElem(Mat2Q::identity(), 0); }
  bool operator==(CoverElem const& o) const { return m == o.m && n == o.n; }
};

inline CoverElem cover_mul(CoverElem const& x, CoverElem const& y) {
  return CoverElem(x.m * y.m, x.n + y.n + cocycle_h(x.m, y.m));
}

inline CoverElem cover_inv(CoverElem const& x) {
  Mat2Q mi = inverse(x.m);
  return CoverElem(mi, -x.n - cocycle_h(x.m, mi));
}

inline CoverElem cover_pow(CoverElem x, long e) {
  if (e < 0) {
    x = cover_inv(x);
    e = -e;
  }
  CoverElem acc = CoverElem::identity();
  for (long i = 0; i < e; ++i) acc = cover_mul(acc, x);
  return acc;
}

/// h(a,b) + h(ab,c) = h(a,bc) + h(b,c).
inline bool cocycle_identity_holds(Mat2Q const& a, Mat2Q const& b, Mat2Q const& c) {
  return cocycle_h(a, b) + cocycle_h(a * b, c) == cocycle_h(a, b * c) + cocycle_h(b, c);
}

inline bool same_sign_pattern(Mat2Q const& x, Mat2Q const& y) {
  return sign_of(x.a) == sign_of(y.a) && sign_of(x.b) == sign_of(y.b) &&
         sign_of(x.c) == sign_of(y.c) && sign_of(x.d) == sign_of(y.d);
}

/// For entrywise same-sign pairs: h(a^{-1}, b) = h(a, a^{-1}), and hence
/// (a,0)^{-1}(b,0) = (a^{-1}b, 0) in the cover. Precondition violations
/// throw; a failed equality returns false (a reportable finding about the
/// sign-pattern surrogate).
struct InverseSignVerdict {
  bool equality = true;       // h(a^{-1}, b) == h(a, a^{-1})
  bool cover_product = true;  // (a,0)^{-1}(b,0) == (a^{-1}b, 0)
  bool ok() const { return equality && cover_product; }
};

inline InverseSignVerdict inverse_sign_lemma(Mat2Q const& a, Mat2Q const& b) {
  if (!same_sign_pattern(a, b)) {
    throw std::invalid_argument("inverse_sign_lemma: matrices do not share a sign pattern");
  }
  InverseSignVerdict v;
  Mat2Q ai = inverse(a);
  v.equality = cocycle_h(ai, b) == cocycle_h(a, ai);
  CoverElem lhs = cover_mul(cover_inv(CoverElem(a, 0)), CoverElem(b, 0));
  CoverElem rhs = CoverElem(ai * b, 0);
  v.cover_product = lhs == rhs;
  return v;
}

/// The exponent chain for generics in the cover: a preimage bound x on the
/// slice step gives {B} x kZ in X^x, hence the identity slice in X^{4x},
/// the +-12 window in X^{48x}, and the full statement in X^{48x + 24}.
struct ExponentChain {
  long f_bound;
  long slice;   // 4 * f_bound
  long window;  // 12 * slice
  long total;   // window + 24
  std::vector<std::string> steps;
};

inline ExponentChain prop_cover_exponent_chain(long f_bound = 14) {
  ExponentChain c;
  c.f_bound = f_bound;
  c.slice = 4 * f_bound;
  c.window = 12 * c.slice;
  c.total = c.window + 24;
  c.steps = {
      "{B} x kZ inside X^" + std::to_string(f_bound),
      "(B,0)^4 = (I,1): {I} x (1+kZ) inside X^" + std::to_string(c.slice),
      "twelve-fold window: {I} x ({-12..12}+kZ) inside X^" + std::to_string(c.window),
      "24-step connectedness transfer: G x kZ inside X^" + std::to_string(c.total),
  };
  return c;
}

/// Seeded random SL2(Q) sampler over a bounded-height grid. Forces the
/// c = 0 branch on roughly an eighth of the draws so both arms of c(d) are
/// exercised.
class RandomSL2 {
 public:
  explicit RandomSL2(uint64_t seed, int height = 8) : rng_(seed), height_(height) {}

  Mat2Q next() {
    for (;;) {
      if (rng_() % 8 == 0) {
        // c = 0, a d = 1
        Rat a = nonzero();
        return Mat2Q(a, rational(), 0, Rat(1) / a);
      }
      Rat a = rational(), b = rational(), c = nonzero();
      if (a == 0) {
        // a = 0: need -bc = 1
        if (c == 0) continue;
        return Mat2Q(0, Rat(-1) / c, c, rational());
      }
      Rat d = (Rat(1) + b * c) / a;
      return Mat2Q(a, b, c, d);
    }
  }

  /// A matrix with the same sign pattern as `ref`, or ref itself when the
  /// pattern is hard to hit on the grid.
  Mat2Q next_with_pattern(Mat2Q const& ref, int tries = 200) {
    for (int i = 0; i < tries; ++i) {
      Mat2Q m = next();
      if (same_sign_pattern(m, ref)) return m;
    }
    return ref;
  }

 private:
  Rat rational() {
    long num = static_cast<long>(rng_() % (2 * static_cast<uint64_t>(height_) + 1)) - height_;
    long den = static_cast<long>(rng_() % 4) + 1;
    return Rat(num, den);
  }
  Rat nonzero() {
    for (;;) {
      Rat r = rational();
      if (r != 0) return r;
    }
  }
  std::mt19937_64 rng_;
  int height_;
};

}  // namespace glcm

#endif  // GLCM_SL2_HPP_
