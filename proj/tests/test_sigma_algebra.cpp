#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "wce/sigma_algebra.hpp"

using namespace wce;

namespace {

template <typename E, typename F>
std::string code_of(F&& body) {
  try {
    body();
  } catch (const E& e) {
    return e.code();
  }
  return "<no exception>";
}

Fn make_fn(std::initializer_list<Complex> vals) {
  Fn f(static_cast<int>(vals.size()));
  int i = 0;
  for (Complex v : vals) f[i++] = v;
  return f;
}

long long bell_number(int n) {
  // triangle recurrence, kept independent from the enumeration under test
  std::vector<std::vector<long long>> row{{1}};
  for (int i = 1; i <= n; ++i) {
    std::vector<long long> next{row.back().back()};
    for (long long v : row.back()) next.push_back(next.back() + v);
    row.push_back(next);
  }
  return row[n][0];
}

}  // namespace

TEST_CASE("partition construction and canonical form") {
  Partition a = Partition::from_atoms({{2, 3}, {0, 1}}, 4);
  CHECK(a.atom_count() == 2);
  CHECK(a.atoms()[0] == PointSet{0, 1});  // reordered by smallest point
  CHECK(a.atoms()[1] == PointSet{2, 3});
  CHECK(a.atom_of() == std::vector<int>{0, 0, 1, 1});

  Partition b = Partition::from_labels({7, 7, 3, 3});
  CHECK(a == b);

  CHECK(Partition::discrete(3).atom_count() == 3);
  CHECK(Partition::trivial(3).atom_count() == 1);

  CHECK(code_of<InputError>([] { Partition::from_atoms({}, 0); }) ==
        "empty_space");
  CHECK(code_of<InputError>([] { Partition::from_atoms({{0}, {}}, 1); }) ==
        "empty_atom");
  CHECK(code_of<InputError>([] { Partition::from_atoms({{0}, {0}}, 1); }) ==
        "atoms_overlap");
  CHECK(code_of<InputError>([] { Partition::from_atoms({{0}}, 2); }) ==
        "atoms_gap");
  CHECK(code_of<InputError>([] { Partition::from_atoms({{0, 5}}, 2); }) ==
        "index_out_of_range");
}

TEST_CASE("set membership in the sigma-algebra") {
  Partition a = Partition::from_atoms({{0, 1}, {2, 3}}, 4);
  CHECK(a.contains_set({}));
  CHECK(a.contains_set({0, 1}));
  CHECK(a.contains_set({0, 1, 2, 3}));
  CHECK(!a.contains_set({0}));
  CHECK(!a.contains_set({0, 2}));
}

TEST_CASE("measurability gap") {
  Partition a = Partition::from_atoms({{0, 1}, {2}}, 3);
  Fn constant_on_atoms = make_fn({{2.0, 1.0}, {2.0, 1.0}, {5.0, 0.0}});
  CHECK(measurability_gap(constant_on_atoms, a) == doctest::Approx(0.0));
  CHECK(is_measurable(constant_on_atoms, a, 1e-12));

  Fn split = make_fn({{2.0, 0.0}, {2.5, 0.0}, {5.0, 0.0}});
  CHECK(measurability_gap(split, a) == doctest::Approx(0.5));
  CHECK(!is_measurable(split, a, 1e-9));
  // relative: gap 0.5 against scale 5 passes a coarse tolerance of 0.2
  CHECK(is_measurable(split, a, 0.2));
}

TEST_CASE("coarseness order") {
  Partition tri = Partition::trivial(4);
  Partition dis = Partition::discrete(4);
  Partition mid = Partition::from_atoms({{0, 1}, {2, 3}}, 4);

  CHECK(is_coarser(tri, mid));
  CHECK(is_coarser(mid, dis));
  CHECK(is_coarser(tri, dis));
  CHECK(!is_coarser(dis, mid));
  CHECK(is_coarser(mid, mid));

  Partition other = Partition::from_atoms({{0, 2}, {1, 3}}, 4);
  CHECK(!is_coarser(mid, other));
  CHECK(!is_coarser(other, mid));
}

TEST_CASE("join and meet") {
  Partition a = Partition::from_atoms({{0, 1}, {2, 3}}, 4);
  Partition b = Partition::from_atoms({{0, 2}, {1, 3}}, 4);

  CHECK(refine(a, b) == Partition::discrete(4));
  CHECK(intersect(a, b) == Partition::trivial(4));

  Partition c = Partition::from_atoms({{0}, {1}, {2, 3}}, 4);
  CHECK(refine(a, c) == c);
  CHECK(intersect(a, c) == a);

  // lattice laws on a fixed triple
  CHECK(is_coarser(a, refine(a, b)));
  CHECK(is_coarser(intersect(a, b), a));
  CHECK(refine(a, a) == a);
  CHECK(intersect(b, b) == b);
}

TEST_CASE("generated sigma-algebra from sets, functions, and a base") {
  // a single set generates a two-block partition
  Partition from_set =
      generated_by(3, SetFamily{{{0}}}, {}, std::nullopt, 1e-9);
  CHECK(from_set == Partition::from_atoms({{0}, {1, 2}}, 3));

  // function levels merge when a chain of close values connects them
  Fn close = make_fn({{0.0, 0.0}, {0.4e-9, 0.0}, {1.0, 0.0}});
  Partition lv = generated_by(3, SetFamily{}, {close}, std::nullopt, 1e-9);
  CHECK(lv == Partition::from_atoms({{0, 1}, {2}}, 3));

  // transitive: consecutive gaps below tol collapse the whole chain
  Fn chain = make_fn({{0.0, 0.0}, {0.8e-9, 0.0}, {1.6e-9, 0.0}});
  Partition all_one = generated_by(3, SetFamily{}, {chain}, std::nullopt, 1e-9);
  CHECK(all_one == Partition::trivial(3));

  // the base algebra is always refined into the result
  Partition base = Partition::from_atoms({{0, 1}, {2, 3}}, 4);
  Fn u = make_fn({{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  CHECK(generated_by(4, SetFamily{}, {u}, base, 1e-9) == base);

  Fn v = make_fn({{1.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  CHECK(generated_by(4, SetFamily{}, {v}, base, 1e-9) ==
        Partition::from_atoms({{0}, {1}, {2, 3}}, 4));

  CHECK(code_of<InputError>([] {
          generated_by(2, SetFamily{{{0, 7}}}, {}, std::nullopt, 1e-9);
        }) == "index_out_of_range");
  CHECK(code_of<InputError>([] {
          generated_by(2, SetFamily{}, {}, Partition::trivial(3), 1e-9);
        }) == "length_mismatch");
}

TEST_CASE("restricted family lists the unions compatible with a set") {
  Partition a = Partition::from_atoms({{0, 1}, {2}, {3}}, 4);

  // every atom is contained in or disjoint from {0,1,2}
  SetFamily all_clean = restricted_family({0, 1, 2}, a);
  CHECK(all_clean.sets.size() == 8);

  // {0,1} straddles {0,2}, leaving only the atoms {2} and {3}
  SetFamily two_clean = restricted_family({0, 2}, a);
  REQUIRE(two_clean.sets.size() == 4);
  CHECK(two_clean.sets[0] == PointSet{});
  CHECK(two_clean.sets[1] == PointSet{2});
  CHECK(two_clean.sets[2] == PointSet{3});
  CHECK(two_clean.sets[3] == PointSet{2, 3});

  // plain-definition cross-check: b qualifies iff b and b ∩ s are both
  // unions of atoms
  PointSet s{0, 2};
  std::set<PointSet> expected;
  for (int mask = 0; mask < 16; ++mask) {
    PointSet b;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) b.push_back(i);
    if (!a.contains_set(b)) continue;
    PointSet meet;
    std::set_intersection(b.begin(), b.end(), s.begin(), s.end(),
                          std::back_inserter(meet));
    if (a.contains_set(meet)) expected.insert(b);
  }
  std::set<PointSet> got(two_clean.sets.begin(), two_clean.sets.end());
  CHECK(got == expected);

  CHECK(code_of<CapError>([] {
          restricted_family({0}, Partition::discrete(21), 20);
        }) == "cap_exceeded_atoms");
}

TEST_CASE("partition enumeration in restricted-growth order") {
  std::vector<Partition> three = all_partitions(3);
  REQUIRE(three.size() == 5);
  CHECK(three[0] == Partition::trivial(3));
  CHECK(three[1] == Partition::from_atoms({{0, 1}, {2}}, 3));
  CHECK(three[2] == Partition::from_atoms({{0, 2}, {1}}, 3));
  CHECK(three[3] == Partition::from_atoms({{0}, {1, 2}}, 3));
  CHECK(three[4] == Partition::discrete(3));

  for (int n = 1; n <= 6; ++n) {
    auto parts = all_partitions(n);
    CHECK(static_cast<long long>(parts.size()) == bell_number(n));
    std::set<std::vector<int>> distinct;
    for (const auto& p : parts) distinct.insert(p.atom_of());
    CHECK(distinct.size() == parts.size());
  }

  // the stream yields the same sequence one at a time
  PartitionStream stream(4);
  std::vector<Partition> streamed;
  while (auto p = stream.next()) streamed.push_back(*p);
  CHECK(streamed == all_partitions(4));

  CHECK(code_of<CapError>([] { all_partitions(11); }) ==
        "cap_exceeded_partitions");
  CHECK_NOTHROW(all_partitions(11, 12));
}
