#include <catch2/catch_amalgamated.hpp>

#include "glcm/quasihom.hpp"
#include "glcm/suites.hpp"

using namespace glcm;

static PipelineInstance coset_instance() {
  auto z6 = FiniteGroup::cyclic(6);
  PipelineOptions opts;
  opts.extra_seeds = {GSubset::of(z6, {0, 2, 4})};
  return make_pipeline_instance(z6, GSubset::full(z6), opts);
}

TEST_CASE("make_quasihom validates and finds the error exponent") {
  auto z6 = FiniteGroup::cyclic(6);
  auto z2 = FiniteGroup::cyclic(2);
  std::vector<int> proj(6);
  for (int g = 0; g < 6; ++g) proj[static_cast<size_t>(g)] = g % 2;
  auto q = make_quasihom(z6, z2, proj, GSubset::singleton(z2, 0));
  REQUIRE(q.err_exp == 0);  // a true homomorphism
  REQUIRE(!q.sampled_scan);

  // a constant-to-nonidentity map has non-vanishing error
  std::vector<int> constant(6, 1);
  REQUIRE_THROWS_AS(make_quasihom(z6, z2, constant, GSubset::singleton(z2, 0), 0),
                    std::invalid_argument);
  // but passes once the base covers the error
  auto q2 = make_quasihom(z6, z2, constant, GSubset::full(z2));
  REQUIRE(q2.err_exp <= 1);

  // an error base must be symmetric and conjugation-closed
  auto s3 = FiniteGroup::symmetric(3);
  int t3 = -1;
  for (int a = 0; a < 6; ++a) {
    if (a != s3->identity() && s3->mul(a, a) == s3->identity()) {
      t3 = a;
      break;
    }
  }
  std::vector<int> id6(6);
  for (int i = 0; i < 6; ++i) id6[static_cast<size_t>(i)] = i;
  REQUIRE_THROWS_AS(
      make_quasihom(s3, s3, id6, GSubset::of(s3, {s3->identity(), t3})),
      std::invalid_argument);  // a single transposition is not conjugation-closed
}

TEST_CASE("check_glcm on the pipeline model") {
  auto inst = coset_instance();
  auto tower = build_f_tower(inst);
  auto model = model_of(inst, tower);
  auto q = make_quasihom(inst.group, inst.quotient, model.f, model.c);
  auto v = check_glcm(q, inst.x, model.c, inst.algebra);
  REQUIRE(v.pass);
  REQUIRE(v.l2_holds);
  REQUIRE(v.l_min >= 1);
  REQUIRE(v.i_bound == 1);  // X = G here
  REQUIRE(v.item2_auto);
}

TEST_CASE("check_glcm identity homomorphism has l = 1") {
  auto z4 = FiniteGroup::cyclic(4);
  std::vector<int> id(4);
  for (int i = 0; i < 4; ++i) id[static_cast<size_t>(i)] = i;
  auto q = make_quasihom(z4, z4, id, GSubset::singleton(z4, 0));
  auto algebra = d_closure(generate_algebra(z4, {GSubset::singleton(z4, 0)}));
  auto v = check_glcm(q, GSubset::full(z4), GSubset::singleton(z4, 0), algebra);
  REQUIRE(v.pass);
  REQUIRE(v.l_min == 1);
}

TEST_CASE("check_glcm rejects a collapsing map with trivial error set") {
  auto s3 = FiniteGroup::symmetric(3);
  std::vector<int> to_id(6, s3->identity());
  // error of the constant-identity map is trivial, so this quasi-hom is fine;
  // the collapsing counterexample is the identity-valued map with X = G but
  // C = {e} failing separation of distinct fibers ... there are no distinct
  // fibers, so instead check a genuinely non-quasi-hom map
  std::vector<int> bad(6);
  for (int g = 0; g < 6; ++g) bad[static_cast<size_t>(g)] = g;  // identity map
  bad[1] = s3->mul(1, 1);  // break it at one point
  REQUIRE_THROWS_AS(make_quasihom(s3, s3, bad, GSubset::singleton(s3, s3->identity()), 0),
                    std::invalid_argument);
}

TEST_CASE("check_good on a quotient homomorphism") {
  auto z8 = FiniteGroup::cyclic(8);
  auto quo = quotient_by(z8, subgroup_closure(GSubset::singleton(z8, 4)));
  auto h = make_quasihom(z8, quo.group, quo.proj, GSubset::singleton(quo.group, 0));
  // S maps into T^n for small n: take S = {0,4} (kernel), T = {identity}
  auto s = GSubset::of(z8, {0, 4});
  auto t = GSubset::singleton(quo.group, 0);
  auto v = check_good(h, s, t);
  REQUIRE(v.pass);
  REQUIRE(v.n == 0);  // h[S] = {identity} = T^0
  REQUIRE(v.m >= 1);
  REQUIRE(v.items12_auto);
}

TEST_CASE("check_good identity map has witness n = 1") {
  auto z4 = FiniteGroup::cyclic(4);
  std::vector<int> id(4);
  for (int i = 0; i < 4; ++i) id[static_cast<size_t>(i)] = i;
  auto s = GSubset::of(z4, {0, 1, 3});
  auto h = make_quasihom(z4, z4, id, s);
  auto v = check_good(h, s, s);
  REQUIRE(v.pass);
  REQUIRE(v.n == 1);
}

TEST_CASE("check_good fails when the thickening smears the fibers") {
  auto z4 = FiniteGroup::cyclic(4);
  auto one = FiniteGroup::cyclic(1);
  std::vector<int> collapse(4, 0);
  auto h = make_quasihom(z4, one, collapse, GSubset::singleton(one, 0));
  // into the one-point target, item (4) holds vacuously
  auto v = check_good(h, GSubset::of(z4, {0}), GSubset::singleton(one, 0));
  REQUIRE(v.pass);

  // mod-2 projection with a thickening set that straddles both fibers:
  // {0} and {1} stay T^m-separated for every m (T = {e}), but the
  // S-thickened preimages overlap, so no witness m exists
  auto z2 = FiniteGroup::cyclic(2);
  std::vector<int> proj2(4);
  for (int g = 0; g < 4; ++g) proj2[static_cast<size_t>(g)] = g % 2;
  auto h2 = make_quasihom(z4, z2, proj2, GSubset::singleton(z2, 0));
  auto v2 = check_good(h2, GSubset::of(z4, {0, 1}), GSubset::singleton(z2, 0));
  REQUIRE(!v2.pass);
  REQUIRE(v2.counterexample.contains("item"));
}

TEST_CASE("derived exponents") {
  ErrorBudget b;
  SECTION("worked example: n = 2, e = 1, m = 3 gives 8") {
    REQUIRE(b.derive_n_m(2, 1, 3) == 8);
  }
  SECTION("m = 1 returns n") { REQUIRE(b.derive_n_m(5, 3, 1) == 5); }
  SECTION("true homomorphism: e = 0") { REQUIRE(b.derive_n_m(4, 0, 3) == 12); }
  SECTION("k_n and m_n recipes") {
    REQUIRE(b.derive_k_n(2, 2, 1) == 3);   // n_1 + e = 2 + 1
    REQUIRE(b.derive_m_n(2, 2, 1, 4) == 7);
  }
  SECTION("composition exponent") {
    // k1 = 2, k2 = 1, n_2 from (n, e): with n = 2, e = 1: n_2 = 5; k = 4 + 5
    long long n2 = b.derive_n_m(2, 1, 2);
    REQUIRE(b.derive_compose_k(1, n2) == 4 + n2);
  }
  SECTION("uniqueness bound example: l = 2, k = 3, m2 = 1 gives 444") {
    REQUIRE(b.derive_uniqueness_n(1, 3, 2) == 444);
  }
  SECTION("category exponent: l1 = l2 = 1, k2' = 1, n_1 = n") {
    REQUIRE(b.derive_category_exp(1, 7, 1) == 9);
  }
  REQUIRE_THROWS_AS(b.get("nonesuch"), std::invalid_argument);
}

TEST_CASE("morphism verification and composition of true homomorphisms") {
  auto inst = coset_instance();
  auto tower = build_f_tower(inst);
  Model f1 = model_of(inst, tower);
  // identity morphisms compose with exponent formula applied to k = 1 floors
  MorphismWitness id1;
  id1.rho.resize(static_cast<size_t>(inst.quotient->order()));
  for (int i = 0; i < inst.quotient->order(); ++i) id1.rho[static_cast<size_t>(i)] = i;
  id1.k = 1;
  REQUIRE(verify_morphism(f1, f1, id1.rho, 0));
  ErrorBudget budget;
  auto comp = compose_morphisms(f1, f1, f1, id1, id1, budget);
  REQUIRE(verify_morphism(f1, f1, comp.rho, 0));  // exact re-check at exponent 0
  REQUIRE(comp.k == budget.get("k"));
}

TEST_CASE("universality on the coset instance") {
  auto inst = coset_instance();
  auto tower = build_f_tower(inst);
  Model h = model_of(inst, tower);  // h := f itself
  auto q = make_quasihom(inst.group, inst.quotient, h.f, h.c);
  auto v = check_glcm(q, inst.x, h.c, inst.algebra);
  REQUIRE(v.pass);
  auto uni = universality_construct(inst, h, v.l_min);
  REQUIRE(uni.pass);
  REQUIRE(uni.hstar_err_ok);
  REQUIRE(uni.hbar_err_ok);
  REQUIRE(uni.lift_shift_ok);
  REQUIRE(uni.htilde_err_ok);
  REQUIRE(uni.factor_shift_ok);
  // deterministic choice; the seeded variant also satisfies the ledger
  auto uni2 = universality_construct(inst, h, v.l_min, uint64_t(7));
  REQUIRE(uni2.pass);
}

TEST_CASE("universality with a genuine homomorphism factors exactly") {
  auto inst = coset_instance();
  Model h;
  h.source = inst.group;
  h.target = inst.quotient;
  h.f = inst.f;
  h.x = inst.x;
  h.c = GSubset::singleton(inst.quotient, inst.quotient->identity());
  auto uni = universality_construct(inst, h, 2);
  REQUIRE(uni.pass);
  // with S = {e}, every ledger power collapses and h~ o f = h exactly
  for (int g = 0; g < inst.group->order(); ++g) {
    REQUIRE(uni.h_tilde[static_cast<size_t>(inst.f[static_cast<size_t>(g)])] ==
            h.f[static_cast<size_t>(g)]);
  }
}

TEST_CASE("uniqueness bound with rho = h~ holds trivially") {
  auto inst = coset_instance();
  auto tower = build_f_tower(inst);
  Model h = model_of(inst, tower);
  auto uni = universality_construct(inst, h, 2);
  MorphismWitness rho;
  rho.rho = uni.h_tilde;
  rho.k = 1;
  ErrorBudget budget;
  auto uq = uniqueness_bound(inst, h, rho, uni.h_tilde, 2, 1, budget);
  REQUIRE(uq.pass);
  REQUIRE(uq.n == budget.get("n_unique"));
}

TEST_CASE("quasihom suite aggregates clean over several rounds") {
  auto rep = quasihom_suite(77, 6);
  for (auto const& c : rep.checks) {
    INFO(c.id << " " << c.details.dump());
    REQUIRE(c.pass);
  }
}

TEST_CASE("morphism equivalence is transitive with summed witnesses") {
  auto inst = coset_instance();
  auto tower = build_f_tower(inst);
  Model f1 = model_of(inst, tower);
  // enlarge the error set so perturbations have room
  f1.c = normal_symmetric_closure(GSubset::full(inst.quotient));
  GroupPtr q = inst.quotient;
  std::mt19937_64 rng(31);
  auto proj_identity = [&]() {
    std::vector<int> v(static_cast<size_t>(q->order()));
    for (int i = 0; i < q->order(); ++i) v[static_cast<size_t>(i)] = i;
    return v;
  };
  auto rho = proj_identity();
  auto rho1 = glcm::detail::perturbed_projection(q, q, proj_identity(), f1.c, rng);
  auto rho2 = glcm::detail::perturbed_projection(q, q, proj_identity(), f1.c, rng);
  long long l_refl = glcm::detail::equivalence_witness(q, rho, rho, f1.c);
  REQUIRE(l_refl == 0);
  long long l01 = glcm::detail::equivalence_witness(q, rho, rho1, f1.c);
  long long l10 = glcm::detail::equivalence_witness(q, rho1, rho, f1.c);
  long long l12 = glcm::detail::equivalence_witness(q, rho1, rho2, f1.c);
  REQUIRE(l01 >= 0);
  REQUIRE(l10 >= 0);  // symmetry: a witness exists in the other direction too
  REQUIRE(l12 >= 0);
  // transitivity at the summed exponent: rho2(p) in rho(p) * C^{l01 + l12}
  SubsetPowers cp(q, f1.c.bits);
  Bits allowed = cp.pow(l01 + l12);
  for (int p = 0; p < q->order(); ++p) {
    REQUIRE(allowed.test(q->mul(q->inv(rho[static_cast<size_t>(p)]), rho2[static_cast<size_t>(p)])));
  }
}
