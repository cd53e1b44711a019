#include <catch2/catch_amalgamated.hpp>

#include "glcm/pipeline.hpp"
#include "glcm/suites.hpp"
#include "oracles.hpp"

using namespace glcm;

static PipelineInstance coset_instance() {
  auto z6 = FiniteGroup::cyclic(6);
  PipelineOptions opts;
  opts.extra_seeds = {GSubset::of(z6, {0, 2, 4})};
  return make_pipeline_instance(z6, GSubset::full(z6), opts);
}

TEST_CASE("coset instance: f is the mod-2 projection") {
  auto inst = coset_instance();
  REQUIRE(inst.algebra.n_atoms() == 2);
  REQUIRE(inst.quotient->order() == 2);
  int qid = inst.quotient->identity();
  for (int g = 0; g < 6; ++g) {
    REQUIRE((inst.f[static_cast<size_t>(g)] == qid) == (g % 2 == 0));
  }
  REQUIRE(inst.f[0] == qid);
  // fhat extends f and is the identity on the two atoms
  for (int p = 0; p < 2; ++p) REQUIRE(inst.fhat[static_cast<size_t>(p)] == inst.pi[static_cast<size_t>(p)]);
}

TEST_CASE("singleton instance: f embeds G") {
  auto z6 = FiniteGroup::cyclic(6);
  PipelineOptions opts;
  opts.extra_seeds = {GSubset::singleton(z6, 0)};
  auto inst = make_pipeline_instance(z6, GSubset::of(z6, {0, 1, 5}), opts);
  REQUIRE(inst.algebra.n_atoms() == 6);
  REQUIRE(inst.quotient->order() == 6);
  // f is injective, hence an isomorphism onto the quotient
  std::set<int> image(inst.f.begin(), inst.f.end());
  REQUIRE(image.size() == 6);
}

TEST_CASE("F tower on the coset instance") {
  auto inst = coset_instance();
  auto tower = build_f_tower(inst);
  REQUIRE(oracles::to_set(tower.f_pow[0]) == std::set<int>({0, 2, 4}));
  // F_n = F_1 here (it is a subgroup), F~n = {even atom} = {u}
  for (int n = 0; n < 3; ++n) {
    REQUIRE(tower.f_tilde[static_cast<size_t>(n)].count() == 1);
    REQUIRE(tower.f_tilde[static_cast<size_t>(n)].test(inst.u));
  }
  REQUIRE(tower.c_set.count() == 1);
  REQUIRE(tower.c_set.test(inst.quotient->identity()));
}

TEST_CASE("F tower with singleton atoms is trivial") {
  auto z6 = FiniteGroup::cyclic(6);
  PipelineOptions opts;
  opts.extra_seeds = {GSubset::singleton(z6, 0)};
  auto inst = make_pipeline_instance(z6, GSubset::of(z6, {0, 1, 5}), opts);
  auto tower = build_f_tower(inst);
  REQUIRE(tower.f_pow[0].count() == 1);
  REQUIRE(tower.c_set.count() == 1);
}

TEST_CASE("theorem certificate passes on the coset instance") {
  auto inst = coset_instance();
  auto cert = theorem_certificate(inst);
  for (auto const& c : cert.checks) {
    INFO(c.id << " " << c.details.dump());
    REQUIRE(c.pass);
  }
  // f^{-1}[C] = {0,2,4} inside X^30 = G
  auto tower = build_f_tower(inst);
  std::set<int> pre;
  for (int g = 0; g < 6; ++g) {
    if (tower.c_set.test(inst.f[static_cast<size_t>(g)])) pre.insert(g);
  }
  REQUIRE(pre == std::set<int>({0, 2, 4}));
}

TEST_CASE("singleton instance: all checks pass trivially") {
  auto z6 = FiniteGroup::cyclic(6);
  PipelineOptions opts;
  opts.extra_seeds = {GSubset::singleton(z6, 0)};
  auto inst = make_pipeline_instance(z6, GSubset::of(z6, {0, 1, 5}), opts);
  REQUIRE(theorem_certificate(inst).all_pass());
  REQUIRE(alt_error_sets(inst).all_pass());
  REQUIRE(collapse_certificate(inst).all_pass());
}

TEST_CASE("tower inverse shift: p in F~n cap uM implies p^{-1} in F~{n+1}") {
  auto d4 = FiniteGroup::dihedral(4);
  auto center = subgroup_closure(GSubset::singleton(d4, 2));
  auto x = product(center, GSubset::of(d4, {0, 1, 3, 4}));
  auto inst = make_pipeline_instance(d4, x, PipelineOptions{});
  auto tower = build_f_tower(inst);
  auto const& comp = inst.dec.components[0][0];
  for (int n = 1; n <= 6; ++n) {
    Bits level = tower.f_tilde[static_cast<size_t>(n - 1)] & inst.um;
    level.for_each([&](int p) {
      int inv = comp.elems[static_cast<size_t>(comp.table->inv(comp.local(p)))];
      REQUIRE(tower.f_tilde[static_cast<size_t>(n)].test(inv));
    });
  }
}

TEST_CASE("alternate error sets and question evidence") {
  auto inst = coset_instance();
  auto alt = alt_error_sets(inst);
  for (auto const& c : alt.checks) {
    INFO(c.id << " " << c.details.dump());
    REQUIRE(c.pass);
  }
  auto const* q = alt.find("q331-evidence");
  REQUIRE(q != nullptr);
  // on a group-quotient instance both inclusions hold on every pair
  REQUIRE(q->details.at("forward_inclusion_failures").get<int>() == 0);
  REQUIRE(q->details.at("reverse_inclusion_failures").get<int>() == 0);
}

TEST_CASE("collapse certificate on assorted instances") {
  auto inst = coset_instance();
  REQUIRE(collapse_certificate(inst).all_pass());

  auto d4 = FiniteGroup::dihedral(4);
  auto center = subgroup_closure(GSubset::singleton(d4, 2));
  auto x = product(center, GSubset::of(d4, {0, 1, 3, 4}));
  PipelineOptions opts;
  auto inst2 = make_pipeline_instance(d4, x, opts);
  REQUIRE(collapse_certificate(inst2).all_pass());
}

TEST_CASE("horizon refusal names the needed bound") {
  auto z6 = FiniteGroup::cyclic(6);
  PipelineOptions opts;
  opts.n_max = 10;
  auto inst = make_pipeline_instance(z6, GSubset::full(z6), opts);
  try {
    theorem_certificate(inst);
    FAIL("expected a horizon refusal");
  } catch (HorizonError const& e) {
    REQUIRE(e.needed == 34);
    REQUIRE(e.given == 10);
  }
}

TEST_CASE("instance over a non-generating X restricts to the subgroup") {
  auto z12 = FiniteGroup::cyclic(12);
  auto inst = make_pipeline_instance(z12, GSubset::of(z12, {0, 2, 10}), PipelineOptions{});
  REQUIRE(inst.group->order() == 6);
  REQUIRE(inst.original_order == 12);
}

TEST_CASE("coarse mode runs the whole pipeline on the two-sided algebra") {
  auto d4 = FiniteGroup::dihedral(4);
  auto center = subgroup_closure(GSubset::singleton(d4, 2));
  auto x = product(center, GSubset::of(d4, {0, 1, 3, 4}));
  PipelineOptions opts;
  opts.mode = EquivalenceMode::coarse_atoms;
  auto inst = make_pipeline_instance(d4, x, opts);
  REQUIRE(inst.mode == EquivalenceMode::coarse_atoms);
  REQUIRE(theorem_certificate(inst).all_pass());
  REQUIRE(alt_error_sets(inst).all_pass());
}

TEST_CASE("randomized instances: zero certificate failures") {
  auto batch = run_instance_batch(2024, 12, 2);
  std::string note = batch.failure_notes.empty() ? std::string() : batch.failure_notes.front();
  INFO(note);
  REQUIRE(batch.failures == 0);
}

TEST_CASE("subset powers cycle detection") {
  auto z6 = FiniteGroup::cyclic(6);
  // S = {1, 5}: powers cycle without ever containing the identity chain
  Bits s(6);
  s.set(1);
  s.set(5);
  SubsetPowers p(z6, s);
  REQUIRE(p.pow(0).count() == 1);
  REQUIRE(p.pow(1).count() == 2);
  // huge exponents resolve through the detected cycle
  Bits big = p.pow(1000001);
  bool cyc1 = (big == p.pow(1)) || (big == p.pow(3));
  REQUIRE(cyc1);
  Bits big2 = p.pow(1000002);
  bool cyc2 = (big2 == p.pow(2)) || (big2 == p.pow(4));
  REQUIRE(cyc2);
  // sanity against direct products
  Bits direct = s;
  for (int i = 1; i < 9; ++i) {
    Bits next(6);
    direct.for_each([&](int a) { s.for_each([&](int b) { next.set(z6->mul(a, b)); }); });
    direct = next;
    REQUIRE(p.pow(i + 1) == direct);
  }
}

TEST_CASE("certificate document is byte-identical across runs") {
  auto build = []() {
    auto inst = coset_instance();
    auto cert = theorem_certificate(inst);
    return cert.to_json().dump(2);
  };
  REQUIRE(build() == build());
}
