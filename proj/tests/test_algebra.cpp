#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "glcm/algebra.hpp"
#include "oracles.hpp"

using namespace glcm;

TEST_CASE("generate_algebra on Z/6") {
  auto z6 = FiniteGroup::cyclic(6);
  SECTION("coset seed") {
    auto alg = generate_algebra(z6, {GSubset::of(z6, {0, 2, 4})});
    REQUIRE(alg.n_atoms() == 2);
    REQUIRE(oracles::to_set(alg.atoms[0]) == std::set<int>({0, 2, 4}));
    REQUIRE(oracles::to_set(alg.atoms[1]) == std::set<int>({1, 3, 5}));
    REQUIRE(is_left_invariant(alg));
  }
  SECTION("point seed gives singletons") {
    auto alg = generate_algebra(z6, {GSubset::singleton(z6, 0)});
    REQUIRE(alg.n_atoms() == 6);
  }
  SECTION("full seed gives one atom") {
    auto alg = generate_algebra(z6, {GSubset::full(z6)});
    REQUIRE(alg.n_atoms() == 1);
  }
}

TEST_CASE("membership and atom queries") {
  auto z6 = FiniteGroup::cyclic(6);
  auto alg = generate_algebra(z6, {GSubset::of(z6, {0, 2, 4})});
  REQUIRE(alg.is_member(GSubset::of(z6, {0, 2, 4})));
  REQUIRE(alg.is_member(GSubset::full(z6)));
  REQUIRE(alg.is_member(GSubset::empty(z6)));
  REQUIRE(!alg.is_member(GSubset::of(z6, {0, 1})));
  REQUIRE(alg.atoms_meeting(GSubset::of(z6, {0, 1})).count() == 2);
  REQUIRE(alg.atoms_inside(GSubset::of(z6, {1, 3, 5})).count() == 1);
}

TEST_CASE("d operator on the Z/6 coset algebra") {
  auto z6 = FiniteGroup::cyclic(6);
  auto alg = generate_algebra(z6, {GSubset::of(z6, {0, 2, 4})});
  int odd_atom = alg.atom_of[1];
  auto odds = GSubset::of(z6, {1, 3, 5});
  // by hand: g + {1,3,5} inside {1,3,5} iff g is even
  auto d = d_operator(alg, odd_atom, odds);
  REQUIRE(oracles::to_set(d) == std::set<int>({0, 2, 4}));
  REQUIRE(d_operator(alg, odd_atom, GSubset::full(z6)) == GSubset::full(z6));
  REQUIRE(d_operator(alg, odd_atom, GSubset::empty(z6)) == GSubset::empty(z6));
  REQUIRE_THROWS_AS(d_operator(alg, odd_atom, GSubset::of(z6, {1})), std::invalid_argument);
}

TEST_CASE("d-closure fixpoints") {
  auto z6 = FiniteGroup::cyclic(6);
  auto power_set = generate_algebra(z6, {GSubset::singleton(z6, 0)});
  REQUIRE(is_d_closed(power_set));
  REQUIRE(d_closure(power_set).n_atoms() == 6);

  auto cosets = generate_algebra(z6, {GSubset::of(z6, {0, 2, 4})});
  REQUIRE(is_d_closed(cosets));
  REQUIRE(d_closure(cosets).n_atoms() == 2);

  auto trivial = generate_algebra(z6, {GSubset::full(z6)});
  REQUIRE(is_d_closed(trivial));
  REQUIRE(d_closure(trivial).n_atoms() == 1);
}

TEST_CASE("d-closure refines a non-normal coset partition") {
  // left cosets of a non-normal subgroup are left-invariant but not
  // d-closed; the closure lands on the normal core
  auto s3 = FiniteGroup::symmetric(3);
  int t = -1;
  for (int a = 0; a < 6; ++a) {
    if (a != s3->identity() && s3->mul(a, a) == s3->identity()) {
      t = a;
      break;
    }
  }
  REQUIRE(t >= 0);
  auto sub = GSubset::of(s3, {s3->identity(), t});  // order-2 subgroup, not normal
  auto alg = generate_algebra(s3, {sub});
  REQUIRE(alg.n_atoms() == 3);
  REQUIRE(is_left_invariant(alg));
  REQUIRE(!is_d_closed(alg));
  auto closed = d_closure(alg);
  REQUIRE(is_d_closed(closed));
  REQUIRE(closed.n_atoms() == 6);  // normal core of an order-2 subgroup of S3 is trivial
  // idempotent
  REQUIRE(d_closure(closed).n_atoms() == closed.n_atoms());
}

TEST_CASE("stone semigroup on the coset algebra") {
  auto z6 = FiniteGroup::cyclic(6);
  auto x = GSubset::full(z6);
  auto powers = power_filtration(x, 4);
  auto alg = d_closure(generate_algebra(z6, {x, GSubset::of(z6, {0, 2, 4})}));
  auto s = stone_semigroup(alg, powers);
  REQUIRE(s.n_atoms() == 2);
  int even = s.embed[0], odd = s.embed[1];
  REQUIRE(s.at(odd, odd) == even);
  REQUIRE(s.at(even, odd) == odd);
  // embed(e) is neutral
  for (int q = 0; q < 2; ++q) REQUIRE(s.at(s.embed[0], q) == q);
  REQUIRE(dump_op_table(s) == "0 1\n1 0\n");
}

TEST_CASE("stone semigroup on singleton atoms is the group itself") {
  auto d4 = FiniteGroup::dihedral(4);
  auto x = GSubset::full(d4);
  auto alg = d_closure(generate_algebra(d4, {GSubset::singleton(d4, d4->identity())}));
  auto s = stone_semigroup(alg, power_filtration(x, 3));
  REQUIRE(s.n_atoms() == d4->order());
  for (int a = 0; a < d4->order(); ++a)
    for (int b = 0; b < d4->order(); ++b)
      REQUIRE(s.at(s.embed[a], s.embed[b]) == s.embed[d4->mul(a, b)]);
}

TEST_CASE("stone semigroup rejects an algebra that is not d-closed") {
  auto s3 = FiniteGroup::symmetric(3);
  int t = -1;
  for (int a = 0; a < 6; ++a) {
    if (a != s3->identity() && s3->mul(a, a) == s3->identity()) {
      t = a;
      break;
    }
  }
  auto alg = generate_algebra(s3, {GSubset::of(s3, {s3->identity(), t})});
  REQUIRE_THROWS_AS(stone_semigroup(alg, power_filtration(GSubset::full(s3), 2)),
                    std::invalid_argument);
}

TEST_CASE("filtration shift: level(p) <= level(q) + level(r) when p*q = r") {
  // the analogue of the key product property of the filtration
  auto d4 = FiniteGroup::dihedral(4);
  std::vector<int> xs = {d4->identity(), 1, d4->inv(1), 4};
  for (int z : {0, 2}) {
    for (int s : std::vector<int>(xs)) xs.push_back(d4->mul(z, s));
  }
  auto x = GSubset::of(d4, xs);
  if (!is_symmetric(x)) {
    x = GSubset(d4, (x.bits | inverse_set(x).bits));
  }
  auto powers = power_filtration(x, 8);
  auto alg = d_closure(generate_algebra(d4, {powers.begin(), powers.end()}));
  auto s = stone_semigroup(alg, powers);
  int levels = s.level_count();
  auto level_of = [&](int atom) {
    for (int n = 0; n < levels; ++n) {
      if (s.filtration[static_cast<size_t>(n)].test(atom)) return n + 1;
    }
    return levels + 1;
  };
  for (int p = 0; p < s.n_atoms(); ++p) {
    for (int q = 0; q < s.n_atoms(); ++q) {
      int r = s.at(p, q);
      int lq = level_of(q), lr = level_of(r), lp = level_of(p);
      if (lq <= levels && lr <= levels && lq + lr <= levels) {
        REQUIRE(lp <= lq + lr);
      }
    }
  }
}

TEST_CASE("left translation representation") {
  auto z6 = FiniteGroup::cyclic(6);
  SECTION("regular representation is injective") {
    auto alg = d_closure(generate_algebra(z6, {GSubset::singleton(z6, 0)}));
    auto s = stone_semigroup(alg, power_filtration(GSubset::full(z6), 2));
    auto rep = left_translation_representation(s);
    REQUIRE(rep.injective);
    REQUIRE(rep.image_closed_under_composition);
  }
  SECTION("coset algebra gives two distinct maps") {
    auto alg = d_closure(generate_algebra(z6, {GSubset::full(z6), GSubset::of(z6, {0, 2, 4})}));
    auto s = stone_semigroup(alg, power_filtration(GSubset::full(z6), 2));
    auto rep = left_translation_representation(s);
    REQUIRE(rep.injective);
    REQUIRE(rep.image_closed_under_composition);
    REQUIRE(rep.maps.size() == 2);
  }
  SECTION("one-atom algebra") {
    auto alg = d_closure(generate_algebra(z6, {GSubset::full(z6)}));
    auto s = stone_semigroup(alg, power_filtration(GSubset::full(z6), 2));
    auto rep = left_translation_representation(s);
    REQUIRE(rep.injective);
  }
}

TEST_CASE("atom action is constant on atoms and matches the operation") {
  auto d4 = FiniteGroup::dihedral(4);
  auto center = subgroup_closure(GSubset::singleton(d4, 2));
  auto x = product(center, GSubset::of(d4, {0, 1, 3, 4}));
  REQUIRE(is_symmetric(x));
  auto powers = power_filtration(x, 6);
  std::vector<GSubset> seeds(powers.begin(), powers.end());
  auto alg = d_closure(generate_algebra(d4, seeds));
  auto s = stone_semigroup(alg, powers);
  for (int g = 0; g < d4->order(); ++g) {
    for (int q = 0; q < s.n_atoms(); ++q) {
      Bits image(d4->order());
      alg.atoms[static_cast<size_t>(q)].bits.for_each([&](int e) { image.set(d4->mul(g, e)); });
      int target = s.at(s.embed[static_cast<size_t>(g)], q);
      REQUIRE(image == alg.atoms[static_cast<size_t>(target)].bits);
    }
  }
}
