#ifndef GLCM_CERTIFICATE_HPP_
#define GLCM_CERTIFICATE_HPP_

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace glcm {

inline constexpr char kCertificateSchema[] = "glcm-certificate/1";
inline constexpr char kInstanceSchema[] = "glcm-instance/1";

/// One verified (or failed) check. `details` carries exponents and, on
/// failure, the offending elements; passes re-verify by re-running the
/// named check on the instance.
struct CheckResult {
  std::string id;
  bool pass = false;
  nlohmann::json details;
};

struct Certificate {
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (auto const& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  CheckResult const* find(std::string const& id) const {
    for (auto const& c : checks) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json checks_json;
    int pass = 0, fail = 0;
    for (auto const& c : checks) {
      nlohmann::json entry;
      entry["verdict"] = c.pass ? "pass" : "fail";
      if (!c.details.is_null()) entry["details"] = c.details;
      checks_json[c.id] = entry;
      (c.pass ? pass : fail)++;
    }
    nlohmann::json doc;
    doc["schema"] = kCertificateSchema;
    doc["checks"] = checks_json;
    doc["summary"] = {{"pass", pass}, {"fail", fail}};
    return doc;
  }
};

/// Registry of all check ids with the formula each one verifies, keyed by
/// the module that owns it. Used by the CLI `explain` verb; the uniqueness
/// of ids across modules is part of the test suite.
struct CheckInfo {
  std::string module;
  std::string formula;
};

inline std::map<std::string, CheckInfo> const& check_registry() {
  static const std::map<std::string, CheckInfo> reg = {
      // main-theorem certificate
      {"thm-main-error-f3", {"pipeline", "error_r(f) and error_l(f) land in pi[F~3 cap uM]"}},
      {"thm-main-c-f10", {"pipeline", "C is normal, symmetric, and contained in pi[F~10 cap uM]"}},
      {"thm-main-c30", {"pipeline", "f^{-1}[C] is contained in X^30"}},
      {"thm-main-u14", {"pipeline", "f^{-1}[U] is contained in X^14 for the neighborhood U = {identity}"}},
      {"thm-main-uc34", {"pipeline", "f^{-1}[U C] is contained in X^34 for U = {identity}"}},
      {"thm-main-sep-l2", {"pipeline", "C^2 Y disjoint from C^2 Z forces separation of f-preimages by an algebra member (l = 2)"}},
      {"thm-main-sep-two-sets", {"pipeline", "disjoint algebra members D1, D2 inside some X^n with f^{-1}[Y] in D1, f^{-1}[Z] in D2"}},
      {"thm-main-generic", {"pipeline", "f^{-1}[U C] is generic: explicit left translates cover the group"}},
      {"rem22-pow", {"pipeline", "f[X^i] is contained in f[X]^i C^{i-1}"}},
      {"lem-u-in-f1", {"pipeline", "the chosen idempotent u lies in F~1, and F~1 sits inside filtration level X^2"}},
      {"lem-fn-x2n", {"pipeline", "F_n is contained in X^{2n}"}},
      {"lem-preimage-n4", {"pipeline", "preimages under ugu of filtration level n inside uM land in X^{n+4}"}},
      {"lem-conj-f8", {"pipeline", "the uM-conjugation closure of F~7 cap uM stays inside F~8 cap uM"}},
      {"lem-h-f3", {"pipeline", "H(uM) is contained in F~3 cap uM"}},
      {"prop-fhat-f5", {"pipeline", "error_r and error_l of the atom-level map p -> u p u / H land in pi[F~5 cap uM]"}},
      // alternate error sets
      {"alt-c22", {"pipeline", "with the base-3 error set, f^{-1}[C] is contained in X^22"}},
      {"alt-uc26", {"pipeline", "with the base-3 error set, f^{-1}[U C] is contained in X^26 for U = {identity}"}},
      {"alt-c18", {"pipeline", "with the base-1 error set, f^{-1}[C] is contained in X^18"}},
      {"q331-evidence", {"pipeline", "evidence scan comparing F~n * F~m with F~{n+m}, both inclusions separately"}},
      // quasi-homomorphism calculus
      {"def21-items", {"quasihom", "quasi-homomorphism model checks: preimage bound i, image compactness (auto), separation witness l"}},
      {"def41-items", {"quasihom", "good quasi-homomorphism checks: witnesses n (h[S] in T^n) and m (T^m-separation of preimages)"}},
      {"rem42-nm", {"quasihom", "n_m = m*n + (m-1)*e satisfies h[S^m] in T^{n_m}"}},
      {"rem43-k", {"quasihom", "composite morphism exponent k = 4*k2 + k2*n_{k1}"}},
      {"thm47-ledger", {"quasihom", "universality ledger: h* error in S^{4l+1}, lift shift S^{12(4l+1)}, h~ error in S^{37(4l+1)}, h~(f(g)) in h(g) S^{16(4l+1)}"}},
      {"thm49-n", {"quasihom", "uniqueness bound n = 4*max(m2, k + 12(4l+1)) with rho(p) in h~(p) S^n"}},
      {"prop410-exp", {"quasihom", "equivalence of composites with exponent k2'*n_{l1} + l2 + k2'"}},
      // SL2 cover
      {"sl2-hbb", {"sl2", "h(B,B) = 1 and h(B^2,B^2) = -1 for B = (0,-1;1,0)"}},
      {"sl2-b4", {"sl2", "(B,0)^4 = (I,1) in the cover"}},
      {"sl2-cocycle-id", {"sl2", "h(a,b) + h(ab,c) = h(a,bc) + h(b,c) on random rational triples"}},
      {"sl2-inverse-sign", {"sl2", "h(a^{-1},b) = h(a,a^{-1}) for entrywise same-sign pairs, and (a,0)^{-1}(b,0) = (a^{-1}b,0)"}},
      {"sl2-chain-696", {"sl2", "exponent chain 14 -> 4*14 = 56 -> 56*12 = 672 -> 672+24 = 696"}},
      // nonstandard oracle
      {"nonstd-sandwich", {"nonstd", "sandwich sign verdicts: (0,-1;1,0) positive; rational lower-left > 0 positive, < 0 negative; infinitesimal (-1,0;g,-1) negative"}},
      {"nonstd-cocycle-types", {"nonstd", "cocycle values on types: h(p, u) = 0, h(u, g) = 0, h(u, g u) = 0 via the 2-cocycle identity"}},
      {"nonstd-soundness", {"nonstd", "tower signs agree with the dominance-respecting numeric substitution on random expressions"}},
      // ellis suite
      {"ellis-rees", {"ellis", "Rees fixtures: ideal count |Lambda|, |I| idempotents per ideal, all components isomorphic to the base group, matching the brute-force enumerator"}},
      {"ellis-collapse", {"ellis", "finite collapse: atom actions constant, u o Q = u Q, cl_tau discrete, H(uM) trivial"}},
      {"ellis-kernels", {"ellis", "kernel structure of the transformation monoid and the plain group case"}},
  };
  return reg;
}

inline std::string explain_check(std::string const& id) {
  auto const& reg = check_registry();
  auto it = reg.find(id);
  if (it == reg.end()) throw std::invalid_argument("explain: unknown check id '" + id + "'");
  return it->second.module + ": " + it->second.formula;
}

}  // namespace glcm

#endif  // GLCM_CERTIFICATE_HPP_
