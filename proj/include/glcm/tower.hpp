#ifndef GLCM_TOWER_HPP_
#define GLCM_TOWER_HPP_

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sl2.hpp"  // Rat

namespace glcm {

/// Sign determination failed at the current truncation depth; callers
/// re-evaluate with a larger depth (the expression evaluator does this
/// automatically up to kMaxSeriesDepth).
struct TowerDeepen : std::runtime_error {
  int suggested_depth;
  explicit TowerDeepen(int suggested)
      : std::runtime_error("sign undecided at current truncation depth; deepen to " +
                           std::to_string(suggested)),
        suggested_depth(suggested) {}
};

inline constexpr int kDefaultSeriesDepth = 8;
inline constexpr int kMaxSeriesDepth = 64;
inline constexpr int kMaxTowerTerms = 4096;

/// An ordered transcendental tower. Blocks are declared in order; each
/// block contributes infinite generators (a later-declared one dominates
/// the earlier ones of the same block) and at most one positive
/// infinitesimal parameter, optionally with a companion root y tied to the
/// parameter by y^2 = 2t - t^2.
///
/// Order semantics (the coheir surrogate): a later block realizes a type
/// finitely satisfiable over everything earlier. Magnitude comparisons
/// therefore scan blocks in declaration order, within a block the
/// generators in reverse declaration order and then the parameter scale; a
/// later block's infinitesimals exceed every earlier infinitesimal and
/// lose to every earlier positive non-infinitesimal.
class Tower {
 public:
  enum class VarKind { infinite_gen, infinitesimal, companion };

  struct Var {
    std::string name;
    VarKind kind;
    int block;
  };

  struct Block {
    std::vector<int> gens;
    int param = -1;
    int companion = -1;
  };

  int add_block(std::vector<std::string> gens, std::string param = "",
                std::string companion = "") {
    Block b;
    for (auto& g : gens) b.gens.push_back(add_var(std::move(g), VarKind::infinite_gen));
    if (!param.empty()) b.param = add_var(std::move(param), VarKind::infinitesimal);
    if (!companion.empty()) {
      if (b.param < 0) throw std::invalid_argument("Tower: companion requires a parameter");
      b.companion = add_var(std::move(companion), VarKind::companion);
    }
    blocks_.push_back(std::move(b));
    rebuild_key_layout();
    return static_cast<int>(blocks_.size()) - 1;
  }

  int n_vars() const { return static_cast<int>(vars_.size()); }
  Var const& var(int id) const { return vars_[static_cast<size_t>(id)]; }
  std::vector<Block> const& blocks() const { return blocks_; }

  int id_of(std::string const& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) throw std::invalid_argument("Tower: unknown generator " + name);
    return it->second;
  }
  bool has(std::string const& name) const { return by_name_.count(name) > 0; }

  struct KeySlot {
    int var;        // gen var id, or the param var id for a t-scale slot
    bool inverted;  // t-scale: larger value means smaller magnitude
  };
  std::vector<KeySlot> const& key_layout() const { return key_layout_; }

 private:
  int add_var(std::string name, VarKind kind) {
    if (by_name_.count(name)) throw std::invalid_argument("Tower: duplicate generator " + name);
    int id = static_cast<int>(vars_.size());
    by_name_[name] = id;
    vars_.push_back(Var{std::move(name), kind, static_cast<int>(blocks_.size())});
    return id;
  }

  void rebuild_key_layout() {
    key_layout_.clear();
    for (auto const& b : blocks_) {
      for (auto it = b.gens.rbegin(); it != b.gens.rend(); ++it) {
        key_layout_.push_back(KeySlot{*it, false});
      }
      if (b.param >= 0) key_layout_.push_back(KeySlot{b.param, true});
    }
  }

  std::vector<Var> vars_;
  std::vector<Block> blocks_;
  std::map<std::string, int> by_name_;
  std::vector<KeySlot> key_layout_;
};

/// A tower element in canonical form: finitely many terms
/// q * prod(gens^e) * t^e * y^{0|1}, sorted by decreasing magnitude, plus
/// an optional certified remainder bound |rest| <= coeff * val(key) from
/// series-expanded divisions. Companion degrees above one are rewritten
/// through y^2 = 2t - t^2, so distinct monomials always have distinct
/// magnitude keys (integer versus half-integer parameter scale).
class TowerElement {
 public:
  struct Term {
    Rat coeff;
    std::vector<int> exps;  // per var id; companions take only 0 or 1
  };
  using Key = std::vector<int>;
  struct Remainder {
    Rat coeff;  // nonnegative
    Key key;
  };

  TowerElement() : tower_(nullptr) {}

  static TowerElement rational(Tower const& t, Rat q) {
    TowerElement e(&t);
    if (q != 0) {
      e.terms_.push_back(Term{std::move(q), std::vector<int>(static_cast<size_t>(t.n_vars()), 0)});
    }
    return e;
  }

  static TowerElement generator(Tower const& t, std::string const& name, int exp = 1) {
    int id = t.id_of(name);
    if (t.var(id).kind == Tower::VarKind::companion && (exp < 0 || exp > 1)) {
      throw std::invalid_argument(
          "TowerElement: companion roots enter as degree one (invert via the defining relation)");
    }
    TowerElement e(&t);
    if (exp == 0) return rational(t, 1);
    Term term{Rat(1), std::vector<int>(static_cast<size_t>(t.n_vars()), 0)};
    term.exps[static_cast<size_t>(id)] = exp;
    e.terms_.push_back(std::move(term));
    return e;
  }

  Tower const* tower() const { return tower_; }
  std::vector<Term> const& terms() const { return terms_; }
  std::optional<Remainder> const& remainder() const { return rem_; }
  bool provably_zero() const { return terms_.empty() && (!rem_ || rem_->coeff == 0); }

  Key key_of(Term const& term) const { return key_of(*tower_, term); }

  static Key key_of(Tower const& tw, Term const& term) {
    Key k;
    k.reserve(tw.key_layout().size());
    for (auto const& slot : tw.key_layout()) {
      if (slot.inverted) {
        auto const& b = tw.blocks()[static_cast<size_t>(tw.var(slot.var).block)];
        int scale = 2 * term.exps[static_cast<size_t>(b.param)];
        if (b.companion >= 0) scale += term.exps[static_cast<size_t>(b.companion)];
        k.push_back(scale);
      } else {
        k.push_back(term.exps[static_cast<size_t>(slot.var)]);
      }
    }
    return k;
  }

  /// Lexicographic magnitude comparison: first differing slot decides;
  /// generator slots grow with magnitude, parameter scales shrink.
  static int compare_keys(Tower const& t, Key const& a, Key const& b) {
    auto const& layout = t.key_layout();
    for (size_t i = 0; i < layout.size(); ++i) {
      if (a[i] == b[i]) continue;
      bool bigger = layout[i].inverted ? a[i] < b[i] : a[i] > b[i];
      return bigger ? 1 : -1;
    }
    return 0;
  }

  friend TowerElement operator+(TowerElement const& x, TowerElement const& y) {
    require_same(x, y);
    TowerElement out(x.tower_);
    out.terms_ = x.terms_;
    out.terms_.insert(out.terms_.end(), y.terms_.begin(), y.terms_.end());
    out.rem_ = combine_remainders(*x.tower_, x.rem_, y.rem_);
    out.canonicalize();
    return out;
  }

  friend TowerElement operator-(TowerElement const& x) {
    TowerElement out = x;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
  }

  friend TowerElement operator-(TowerElement const& x, TowerElement const& y) { return x + (-y); }

  friend TowerElement operator*(TowerElement const& x, TowerElement const& y) {
    require_same(x, y);
    Tower const& tw = *x.tower_;
    TowerElement out(x.tower_);
    out.terms_.reserve(x.terms_.size() * y.terms_.size());
    int nv = tw.n_vars();
    for (auto const& a : x.terms_) {
      for (auto const& b : y.terms_) {
        Term t;
        t.coeff = a.coeff * b.coeff;
        t.exps.resize(static_cast<size_t>(nv));
        for (int v = 0; v < nv; ++v) {
          t.exps[static_cast<size_t>(v)] = a.exps[static_cast<size_t>(v)] + b.exps[static_cast<size_t>(v)];
        }
        out.terms_.push_back(std::move(t));
      }
    }
    // remainder pieces: terms * rem, rem * terms, rem * rem
    std::optional<Remainder> rem;
    if (!x.terms_.empty() && y.rem_ && y.rem_->coeff != 0) {
      rem = combine_remainders(
          tw, rem, Remainder{coeff_mass(x) * y.rem_->coeff, add_keys(x.lead_key(), y.rem_->key)});
    }
    if (!y.terms_.empty() && x.rem_ && x.rem_->coeff != 0) {
      rem = combine_remainders(
          tw, rem, Remainder{coeff_mass(y) * x.rem_->coeff, add_keys(x.rem_->key, y.lead_key())});
    }
    if (x.rem_ && x.rem_->coeff != 0 && y.rem_ && y.rem_->coeff != 0) {
      rem = combine_remainders(
          tw, rem, Remainder{x.rem_->coeff * y.rem_->coeff, add_keys(x.rem_->key, y.rem_->key)});
    }
    out.rem_ = rem;
    out.canonicalize();
    return out;
  }

  /// Division via the leading monomial and a truncated geometric series:
  /// den = L(1 + s) with s infinitesimal; 1/(1+s) expands to `depth` terms
  /// with the tail certified by |s|^{depth+1}/(1-|s|) <= 2 Q^{depth+1}
  /// val(key_s)^{depth+1}. Companion roots in the leading monomial are
  /// cleared first through the defining relation.
  TowerElement divide(TowerElement den, int depth = kDefaultSeriesDepth) const {
    require_same(*this, den);
    Tower const& tw = *tower_;
    if (den.provably_zero()) throw std::invalid_argument("TowerElement: division by zero");
    if (den.terms_.empty()) throw TowerDeepen(2 * depth);
    TowerElement num = *this;

    // clear companion roots from the leading monomial, blockwise
    for (;;) {
      bool cleared = true;
      for (auto const& b : tw.blocks()) {
        if (b.companion < 0) continue;
        if (den.terms_.front().exps[static_cast<size_t>(b.companion)] != 0) {
          TowerElement y = generator(tw, tw.var(b.companion).name);
          num = num * y;
          den = den * y;
          cleared = false;
          break;
        }
      }
      if (cleared) break;
    }

    Term lead = den.terms_.front();
    if (den.rem_ && den.rem_->coeff != 0 &&
        compare_keys(tw, den.lead_key(), den.rem_->key) <= 0) {
      throw TowerDeepen(2 * depth);
    }

    auto divide_by_lead = [&](TowerElement const& z) {
      TowerElement out(z.tower_);
      out.terms_ = z.terms_;
      for (auto& t : out.terms_) {
        t.coeff /= lead.coeff;
        for (int v = 0; v < tw.n_vars(); ++v) {
          t.exps[static_cast<size_t>(v)] -= lead.exps[static_cast<size_t>(v)];
        }
      }
      if (z.rem_ && z.rem_->coeff != 0) {
        Rat c = z.rem_->coeff / abs_rat(lead.coeff);
        out.rem_ = Remainder{std::move(c), sub_keys(z.rem_->key, key_of(tw, lead))};
      }
      // keep order; dividing by a monomial shifts all keys equally
      return out;
    };

    TowerElement unit = divide_by_lead(den);
    TowerElement s = unit - rational(tw, 1);
    TowerElement inv = rational(tw, 1);
    if (!s.provably_zero()) {
      Key zero_key(tw.key_layout().size(), 0);
      Key skey = s.terms_.empty() ? s.rem_->key : s.lead_key();
      if (compare_keys(tw, skey, zero_key) >= 0) {
        throw std::logic_error("TowerElement: residual series is not infinitesimal");
      }
      TowerElement acc = rational(tw, 1);
      for (int k = 1; k <= depth; ++k) {
        acc = acc * (-s);
        inv = inv + acc;
      }
      Rat q = coeff_mass(s) + (s.rem_ ? s.rem_->coeff : Rat(0));
      Rat tail = 2;
      for (int k = 0; k <= depth; ++k) tail *= q;
      Key tail_key(tw.key_layout().size(), 0);
      for (size_t i = 0; i < tail_key.size(); ++i) tail_key[i] = skey[i] * (depth + 1);
      inv.rem_ = combine_remainders(tw, inv.rem_, Remainder{std::move(tail), std::move(tail_key)});
    }
    return divide_by_lead(num) * inv;
  }

  /// -1, 0 or +1; throws TowerDeepen when the certified remainder swallows
  /// the would-be leading term.
  int sign() const {
    if (terms_.empty()) {
      if (!rem_ || rem_->coeff == 0) return 0;
      throw TowerDeepen(2 * kDefaultSeriesDepth);
    }
    if (rem_ && rem_->coeff != 0 && compare_keys(*tower_, lead_key(), rem_->key) <= 0) {
      throw TowerDeepen(2 * kDefaultSeriesDepth);
    }
    return terms_.front().coeff > 0 ? 1 : -1;
  }

  std::string to_string() const {
    if (terms_.empty() && (!rem_ || rem_->coeff == 0)) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto const& t : terms_) {
      Rat c = t.coeff;
      if (!first) {
        os << (c > 0 ? " + " : " - ");
        if (c < 0) c = -c;
      } else if (c < 0) {
        os << "-";
        c = -c;
      }
      first = false;
      bool printed = false;
      if (c != 1) {
        os << c;
        printed = true;
      }
      for (int v = 0; v < tower_->n_vars(); ++v) {
        int e = t.exps[static_cast<size_t>(v)];
        if (e == 0) continue;
        if (printed) os << "*";
        os << tower_->var(v).name;
        if (e != 1) os << "^" << e;
        printed = true;
      }
      if (!printed) os << c;
    }
    if (rem_ && rem_->coeff != 0) {
      os << (first ? "O(tail)" : " + O(tail)");
    }
    return os.str();
  }

  std::string leading_term_string() const {
    if (terms_.empty()) return "0";
    TowerElement lead(tower_);
    lead.terms_.push_back(terms_.front());
    return lead.to_string();
  }

 private:
  explicit TowerElement(Tower const* t) : tower_(t) {}

  static void require_same(TowerElement const& a, TowerElement const& b) {
    if (a.tower_ != b.tower_ || a.tower_ == nullptr) {
      throw std::invalid_argument("TowerElement: operands from different towers");
    }
  }

  static Rat abs_rat(Rat const& r) { return r < 0 ? -r : r; }

  Key lead_key() const { return key_of(terms_.front()); }

  /// Bound sum(|c_i| * 2^{companion degree}) with |term_i| <= that times
  /// val(lead key); companions are worth at most 2 sqrt(t).
  static Rat coeff_mass(TowerElement const& z) {
    Rat q = 0;
    for (auto const& t : z.terms_) {
      Rat c = abs_rat(t.coeff);
      for (auto const& b : z.tower_->blocks()) {
        if (b.companion >= 0 && t.exps[static_cast<size_t>(b.companion)] > 0) c *= 2;
      }
      q += c;
    }
    return q;
  }

  static Key add_keys(Key const& a, Key const& b) {
    Key out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
  }
  static Key sub_keys(Key const& a, Key const& b) {
    Key out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
  }

  static std::optional<Remainder> combine_remainders(Tower const& tw,
                                                     std::optional<Remainder> const& a,
                                                     std::optional<Remainder> const& b) {
    if (!a || a->coeff == 0) return (b && b->coeff != 0) ? b : std::optional<Remainder>();
    if (!b || b->coeff == 0) return a;
    Key const& k = compare_keys(tw, a->key, b->key) >= 0 ? a->key : b->key;
    return Remainder{a->coeff + b->coeff, k};
  }

  /// Rewrites companion powers via y^2 = 2t - t^2, merges equal monomials,
  /// sorts by decreasing magnitude.
  void canonicalize() {
    std::vector<Term> work = std::move(terms_);
    terms_.clear();
    while (!work.empty()) {
      Term t = std::move(work.back());
      work.pop_back();
      bool rewritten = false;
      for (auto const& b : tower_->blocks()) {
        if (b.companion < 0) continue;
        if (t.exps[static_cast<size_t>(b.companion)] >= 2) {
          Term t1 = t, t2 = t;
          t1.exps[static_cast<size_t>(b.companion)] -= 2;
          t1.exps[static_cast<size_t>(b.param)] += 1;
          t1.coeff *= 2;
          t2.exps[static_cast<size_t>(b.companion)] -= 2;
          t2.exps[static_cast<size_t>(b.param)] += 2;
          t2.coeff = -t2.coeff;
          work.push_back(std::move(t1));
          work.push_back(std::move(t2));
          rewritten = true;
          break;
        }
      }
      if (!rewritten) terms_.push_back(std::move(t));
      if (work.size() + terms_.size() > 4 * kMaxTowerTerms) {
        throw std::runtime_error("TowerElement: term budget exceeded during rewrite");
      }
    }
    std::map<std::vector<int>, Rat> merged;
    for (auto& t : terms_) merged[t.exps] += t.coeff;
    terms_.clear();
    for (auto& [exps, coeff] : merged) {
      if (coeff != 0) terms_.push_back(Term{std::move(coeff), exps});
    }
    if (terms_.size() > kMaxTowerTerms) {
      throw std::runtime_error("TowerElement: term budget exceeded");
    }
    std::sort(terms_.begin(), terms_.end(), [&](Term const& a, Term const& b) {
      return compare_keys(*tower_, key_of(a), key_of(b)) > 0;
    });
  }

  Tower const* tower_;
  std::vector<Term> terms_;
  std::optional<Remainder> rem_;
};

inline TowerElement operator/(TowerElement const& a, TowerElement const& b) { return a.divide(b); }

// ---------------------------------------------------------------------
// Numeric substitution oracle
// ---------------------------------------------------------------------

using BigFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<512>>;

/// Midpoint with an absolute error bound; enough head-room that the
/// dominance-respecting substitutions below never come close to the bound.
struct Ball {
  BigFloat mid = 0;
  BigFloat err = 0;

  static Ball exact(BigFloat v) { return Ball{std::move(v), 0}; }
};

namespace ball_ops {

inline BigFloat babs(BigFloat const& x) { return x < 0 ? BigFloat(-x) : x; }

inline BigFloat slack(BigFloat const& magnitude) {
  return babs(magnitude) * boost::multiprecision::ldexp(BigFloat(1), -480);
}

inline Ball add(Ball const& a, Ball const& b) {
  BigFloat m = a.mid + b.mid;
  return Ball{m, a.err + b.err + slack(m)};
}
inline Ball sub(Ball const& a, Ball const& b) {
  BigFloat m = a.mid - b.mid;
  return Ball{m, a.err + b.err + slack(m)};
}
inline Ball neg(Ball const& a) { return Ball{-a.mid, a.err}; }
inline Ball mul(Ball const& a, Ball const& b) {
  BigFloat m = a.mid * b.mid;
  BigFloat e = babs(a.mid) * b.err + babs(b.mid) * a.err + a.err * b.err + slack(m);
  return Ball{m, e};
}
inline Ball div(Ball const& a, Ball const& b) {
  if (babs(b.mid) <= 2 * b.err) throw std::runtime_error("ball division by near-zero");
  BigFloat m = a.mid / b.mid;
  BigFloat denom = babs(b.mid) - b.err;
  BigFloat e = (a.err + babs(m) * b.err) / denom + slack(m);
  return Ball{m, e};
}
inline Ball sqrt(Ball const& a) {
  if (a.mid <= 2 * a.err) throw std::runtime_error("ball sqrt of near-zero or negative");
  BigFloat m = boost::multiprecision::sqrt(a.mid);
  BigFloat e = a.err / m + slack(m);
  return Ball{m, e};
}
inline Ball pow(Ball a, int e) {
  if (e < 0) return div(Ball::exact(1), pow(a, -e));
  Ball out = Ball::exact(1);
  for (int i = 0; i < e; ++i) out = mul(out, a);
  return out;
}

/// +1 / -1 / 0 when certified, nullopt when the ball straddles zero.
inline std::optional<int> sign(Ball const& a) {
  if (a.mid == 0 && a.err == 0) return 0;
  BigFloat margin = a.err * boost::multiprecision::ldexp(BigFloat(1), 24);
  if (a.mid > margin) return 1;
  if (a.mid < -margin) return -1;
  if (a.mid == 0 && a.err == 0) return 0;
  return std::nullopt;
}

}  // namespace ball_ops

/// Dominance-respecting numeric values for every tower variable: scales are
/// assigned slot by slot from least to most significant so that a half-step
/// in any slot outweighs the combined range of everything below it, for
/// monomial exponents up to `exp_cap` and coefficient masses up to
/// 2^`coeff_bits`.
inline std::vector<Ball> numeric_substitution(Tower const& tw, int exp_cap = 4,
                                              int coeff_bits = 96) {
  auto const& layout = tw.key_layout();
  std::vector<long long> scale(layout.size(), 0);
  long long below = 0;
  for (size_t i = layout.size(); i-- > 0;) {
    long long l = 2 * (exp_cap * below + coeff_bits) + 64;
    scale[i] = l;
    below += l;
    if (below > 800000000LL) {
      throw std::invalid_argument("numeric_substitution: tower too deep for the float exponent range");
    }
  }
  std::vector<Ball> values(static_cast<size_t>(tw.n_vars()));
  for (size_t i = 0; i < layout.size(); ++i) {
    BigFloat val = boost::multiprecision::ldexp(
        BigFloat(1), static_cast<int>(layout[i].inverted ? -scale[i] : scale[i]));
    values[static_cast<size_t>(layout[i].var)] = Ball::exact(val);
  }
  for (auto const& b : tw.blocks()) {
    if (b.companion >= 0) {
      Ball t = values[static_cast<size_t>(b.param)];
      values[static_cast<size_t>(b.companion)] =
          ball_ops::sqrt(ball_ops::sub(ball_ops::mul(Ball::exact(2), t), ball_ops::mul(t, t)));
    }
  }
  return values;
}

/// Evaluates an element numerically under a substitution.
inline Ball evaluate_ball(TowerElement const& e, std::vector<Ball> const& values) {
  Tower const& tw = *e.tower();
  Ball acc = Ball::exact(0);
  for (auto const& t : e.terms()) {
    Ball term = Ball::exact(BigFloat(t.coeff));
    for (int v = 0; v < tw.n_vars(); ++v) {
      int ex = t.exps[static_cast<size_t>(v)];
      if (ex != 0) term = ball_ops::mul(term, ball_ops::pow(values[static_cast<size_t>(v)], ex));
    }
    acc = ball_ops::add(acc, term);
  }
  if (e.remainder() && e.remainder()->coeff != 0) {
    // widen by the certified remainder, evaluated at its key
    Ball mag = Ball::exact(BigFloat(e.remainder()->coeff));
    auto const& layout = tw.key_layout();
    for (size_t i = 0; i < layout.size(); ++i) {
      int k = e.remainder()->key[i];
      if (k == 0) continue;
      if (layout[i].inverted) {
        // parameter scale in half steps
        Ball t = values[static_cast<size_t>(layout[i].var)];
        Ball root = ball_ops::sqrt(t);
        mag = ball_ops::mul(mag, ball_ops::pow(root, k));
      } else {
        mag = ball_ops::mul(mag, ball_ops::pow(values[static_cast<size_t>(layout[i].var)], k));
      }
    }
    acc.err += ball_ops::babs(mag.mid) + mag.err;
  }
  return acc;
}

// ---------------------------------------------------------------------
// Expression input (prefix notation)
// ---------------------------------------------------------------------

/// Small prefix-notation expression tree: rationals, named generators, and
/// (+ ...), (- a b), (neg a), (* ...), (/ a b), (^ a n).
struct TExpr {
  enum class Kind { rational, variable, add, sub, neg, mul, div, pow };
  Kind kind = Kind::rational;
  Rat value;
  std::string name;
  std::vector<TExpr> args;
  int exponent = 1;
};

namespace detail {

inline void skip_ws(std::string const& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
}

inline TExpr parse_texpr_at(std::string const& s, size_t& i);

inline TExpr parse_atom(std::string const& s, size_t& i) {
  size_t start = i;
  while (i < s.size() && s[i] != ' ' && s[i] != ')' && s[i] != '(' && s[i] != '\t' &&
         s[i] != '\n' && s[i] != '\r') {
    ++i;
  }
  std::string tok = s.substr(start, i - start);
  if (tok.empty()) throw std::invalid_argument("expression parse error: empty token");
  TExpr e;
  bool numeric = (tok[0] == '-' && tok.size() > 1) || (tok[0] >= '0' && tok[0] <= '9');
  if (numeric) {
    e.kind = TExpr::Kind::rational;
    e.value = Rat(tok);
  } else {
    e.kind = TExpr::Kind::variable;
    e.name = tok;
  }
  return e;
}

inline TExpr parse_texpr_at(std::string const& s, size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw std::invalid_argument("expression parse error: unexpected end");
  if (s[i] != '(') return parse_atom(s, i);
  ++i;  // consume '('
  skip_ws(s, i);
  size_t start = i;
  while (i < s.size() && s[i] != ' ' && s[i] != ')') ++i;
  std::string op = s.substr(start, i - start);
  TExpr e;
  if (op == "+") {
    e.kind = TExpr::Kind::add;
  } else if (op == "-") {
    e.kind = TExpr::Kind::sub;
  } else if (op == "neg") {
    e.kind = TExpr::Kind::neg;
  } else if (op == "*") {
    e.kind = TExpr::Kind::mul;
  } else if (op == "/") {
    e.kind = TExpr::Kind::div;
  } else if (op == "^") {
    e.kind = TExpr::Kind::pow;
  } else {
    throw std::invalid_argument("expression parse error: unknown operator '" + op + "'");
  }
  for (;;) {
    skip_ws(s, i);
    if (i >= s.size()) throw std::invalid_argument("expression parse error: missing ')'");
    if (s[i] == ')') {
      ++i;
      break;
    }
    e.args.push_back(parse_texpr_at(s, i));
  }
  if (e.kind == TExpr::Kind::pow) {
    if (e.args.size() != 2 || e.args[1].kind != TExpr::Kind::rational ||
        denominator(e.args[1].value) != 1) {
      throw std::invalid_argument("expression parse error: (^ base integer) expected");
    }
    e.exponent = static_cast<int>(numerator(e.args[1].value));
    e.args.pop_back();
  }
  if ((e.kind == TExpr::Kind::sub || e.kind == TExpr::Kind::div) && e.args.size() != 2) {
    throw std::invalid_argument("expression parse error: binary operator arity");
  }
  if (e.kind == TExpr::Kind::neg && e.args.size() != 1) {
    throw std::invalid_argument("expression parse error: neg arity");
  }
  if (e.args.empty()) throw std::invalid_argument("expression parse error: empty application");
  return e;
}

}  // namespace detail

inline TExpr parse_texpr(std::string const& s) {
  size_t i = 0;
  TExpr e = detail::parse_texpr_at(s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) throw std::invalid_argument("expression parse error: trailing input");
  return e;
}

inline TowerElement evaluate_tower(Tower const& tw, TExpr const& e,
                                   int depth = kDefaultSeriesDepth) {
  switch (e.kind) {
    case TExpr::Kind::rational:
      return TowerElement::rational(tw, e.value);
    case TExpr::Kind::variable:
      return TowerElement::generator(tw, e.name);
    case TExpr::Kind::add: {
      TowerElement acc = evaluate_tower(tw, e.args[0], depth);
      for (size_t i = 1; i < e.args.size(); ++i) acc = acc + evaluate_tower(tw, e.args[i], depth);
      return acc;
    }
    case TExpr::Kind::sub:
      return evaluate_tower(tw, e.args[0], depth) - evaluate_tower(tw, e.args[1], depth);
    case TExpr::Kind::neg:
      return -evaluate_tower(tw, e.args[0], depth);
    case TExpr::Kind::mul: {
      TowerElement acc = evaluate_tower(tw, e.args[0], depth);
      for (size_t i = 1; i < e.args.size(); ++i) acc = acc * evaluate_tower(tw, e.args[i], depth);
      return acc;
    }
    case TExpr::Kind::div:
      return evaluate_tower(tw, e.args[0], depth).divide(evaluate_tower(tw, e.args[1], depth), depth);
    case TExpr::Kind::pow: {
      TowerElement base = evaluate_tower(tw, e.args[0], depth);
      TowerElement acc = TowerElement::rational(tw, 1);
      int ex = e.exponent;
      bool invert = ex < 0;
      if (invert) ex = -ex;
      for (int i = 0; i < ex; ++i) acc = acc * base;
      if (invert) acc = TowerElement::rational(tw, 1).divide(acc, depth);
      return acc;
    }
  }
  throw std::logic_error("evaluate_tower: unreachable");
}

inline Ball evaluate_ball(Tower const& tw, TExpr const& e, std::vector<Ball> const& values) {
  switch (e.kind) {
    case TExpr::Kind::rational:
      return Ball::exact(BigFloat(e.value));
    case TExpr::Kind::variable:
      return values[static_cast<size_t>(tw.id_of(e.name))];
    case TExpr::Kind::add: {
      Ball acc = evaluate_ball(tw, e.args[0], values);
      for (size_t i = 1; i < e.args.size(); ++i) {
        acc = ball_ops::add(acc, evaluate_ball(tw, e.args[i], values));
      }
      return acc;
    }
    case TExpr::Kind::sub:
      return ball_ops::sub(evaluate_ball(tw, e.args[0], values),
                           evaluate_ball(tw, e.args[1], values));
    case TExpr::Kind::neg:
      return ball_ops::neg(evaluate_ball(tw, e.args[0], values));
    case TExpr::Kind::mul: {
      Ball acc = evaluate_ball(tw, e.args[0], values);
      for (size_t i = 1; i < e.args.size(); ++i) {
        acc = ball_ops::mul(acc, evaluate_ball(tw, e.args[i], values));
      }
      return acc;
    }
    case TExpr::Kind::div:
      return ball_ops::div(evaluate_ball(tw, e.args[0], values),
                           evaluate_ball(tw, e.args[1], values));
    case TExpr::Kind::pow:
      return ball_ops::pow(evaluate_ball(tw, e.args[0], values), e.exponent);
  }
  throw std::logic_error("evaluate_ball: unreachable");
}

/// Result of a sign query: the verdict and the term that decided it.
struct SignReport {
  int sign = 0;
  int depth_used = kDefaultSeriesDepth;
  std::string leading_term;
};

/// Evaluates the expression and decides the sign, deepening the series
/// truncation on demand up to kMaxSeriesDepth.
inline SignReport sign_of_expression(Tower const& tw, TExpr const& e) {
  int depth = kDefaultSeriesDepth;
  for (;;) {
    try {
      TowerElement v = evaluate_tower(tw, e, depth);
      SignReport r;
      r.sign = v.sign();
      r.depth_used = depth;
      r.leading_term = v.leading_term_string();
      return r;
    } catch (TowerDeepen const&) {
      if (depth >= kMaxSeriesDepth) throw;
      depth = std::min(2 * depth, kMaxSeriesDepth);
    }
  }
}

}  // namespace glcm

#endif  // GLCM_TOWER_HPP_
