#ifndef GLCM_UG_TYPES_HPP_
#define GLCM_UG_TYPES_HPP_

#include <array>
#include <string>

#include "tower.hpp"

namespace glcm {

/// 2x2 matrix over a tower, row major: [a b; c d].
using TMat = std::array<TowerElement, 4>;

inline TMat tmat_mul(TMat const& x, TMat const& y) {
  return TMat{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
              x[2] * y[1] + x[3] * y[3]};
}

inline TowerElement tmat_det(TMat const& m) { return m[0] * m[3] - m[1] * m[2]; }

inline TMat rational_tmat(Tower const& tw, Mat2Q const& m) {
  return TMat{TowerElement::rational(tw, m.a), TowerElement::rational(tw, m.b),
              TowerElement::rational(tw, m.c), TowerElement::rational(tw, m.d)};
}

/// One idempotent-type presentation block: infinite b then c (c dominating
/// every b-expression), a positive infinitesimal x coheir over everything
/// declared so far, and y > 0 with (1-x)^2 + y^2 = 1.
struct UgBlock {
  int block = -1;
  std::string b, c, x, y;
};

inline UgBlock add_ug_block(Tower& tw, std::string const& suffix = "") {
  UgBlock u;
  u.b = "b" + suffix;
  u.c = "c" + suffix;
  u.x = "x" + suffix;
  u.y = "y" + suffix;
  u.block = tw.add_block({u.b, u.c}, u.x, u.y);
  return u;
}

/// The matrix realizing the idempotent type:
///   [ (1-x) b      (1-x) c - y b^{-1} ]
///   [   y b          y c + (1-x) b^{-1} ]
/// Its determinant is exactly 1 via the defining relation of y.
inline TMat ug_matrix(Tower const& tw, UgBlock const& u) {
  TowerElement one = TowerElement::rational(tw, 1);
  TowerElement b = TowerElement::generator(tw, u.b);
  TowerElement binv = TowerElement::generator(tw, u.b, -1);
  TowerElement c = TowerElement::generator(tw, u.c);
  TowerElement x = TowerElement::generator(tw, u.x);
  TowerElement y = TowerElement::generator(tw, u.y);
  TowerElement omx = one - x;
  return TMat{omx * b, omx * c - y * binv, y * b, y * c + omx * binv};
}

/// Bottom-left entry of A' B A written out:
///   y'b' (alpha (1-x) b + beta y b)
///   + (y'c' + (1-x') b'^{-1}) (gamma (1-x) b + delta y b)
/// for B = [alpha beta; gamma delta]. Matches the matrix product entry,
/// which the tests assert.
inline TowerElement ug_sandwich_entry_closed_form(Tower const& tw, UgBlock const& inner,
                                                  UgBlock const& outer, TMat const& mid) {
  TowerElement one = TowerElement::rational(tw, 1);
  TowerElement b = TowerElement::generator(tw, inner.b);
  TowerElement x = TowerElement::generator(tw, inner.x);
  TowerElement y = TowerElement::generator(tw, inner.y);
  TowerElement bp = TowerElement::generator(tw, outer.b);
  TowerElement bpinv = TowerElement::generator(tw, outer.b, -1);
  TowerElement cp = TowerElement::generator(tw, outer.c);
  TowerElement xp = TowerElement::generator(tw, outer.x);
  TowerElement yp = TowerElement::generator(tw, outer.y);
  TowerElement const& alpha = mid[0];
  TowerElement const& beta = mid[1];
  TowerElement const& gamma = mid[2];
  TowerElement const& delta = mid[3];
  TowerElement omx = one - x;
  return yp * bp * (alpha * omx * b + beta * y * b) +
         (yp * cp + (one - xp) * bpinv) * (gamma * omx * b + delta * y * b);
}

/// Bottom-left entry of A' B A by direct matrix multiplication, where A
/// realizes the inner (earlier) block and A' the outer (later, milder)
/// block.
inline TowerElement ug_sandwich_entry(Tower const& tw, UgBlock const& inner, UgBlock const& outer,
                                      TMat const& mid) {
  TMat a = ug_matrix(tw, inner);
  TMat ap = ug_matrix(tw, outer);
  return tmat_mul(tmat_mul(ap, mid), a)[2];
}

/// c(d) branch selection with tower signs: the sign of c when c is provably
/// nonzero, else the sign of d. Exact zero detection is available because
/// the matrix entries entering the cocycle are division free.
inline int tower_c_of_d_sign(TowerElement const& c, TowerElement const& d) {
  if (c.provably_zero()) return d.sign();
  return c.sign();
}

/// The cocycle evaluated on two matrices over the tower. The left argument
/// is the later (coheir) one, matching the convention that h(p, q) picks a
/// realization of p finitely satisfiable over one of q.
inline int tower_cocycle_h(TMat const& left, TMat const& right) {
  TMat prod = tmat_mul(left, right);
  int s1 = tower_c_of_d_sign(left[2], left[3]);
  int s2 = tower_c_of_d_sign(right[2], right[3]);
  int s3 = tower_c_of_d_sign(prod[2], prod[3]);
  if (s1 > 0 && s2 > 0 && s3 < 0) return 1;
  if (s1 < 0 && s2 < 0 && s3 > 0) return -1;
  return 0;
}

}  // namespace glcm

#endif  // GLCM_UG_TYPES_HPP_
