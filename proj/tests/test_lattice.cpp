#include <gtest/gtest.h>

#include <random>

#include "octadefect/lattice.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace octadefect {
namespace {

using testing_support::make_lattice;
using testing_support::mask_of;
using testing_support::R;
using testing_support::rows_of;

const RationalLattice kHalfDiagonal = make_lattice(2, {{1, 1}}, 2);
// <Z², (1/4,1/4), (1/4,3/4)>, i.e. q·(basis) for the ring-rank counterexample with p = 2.
const RationalLattice kQuarter = make_lattice(4, {{1, 1}, {1, 3}}, 2);

TEST(Normalize, DividesCommonFactor) {
  const auto l = normalize(make_lattice(4, {{2, 2}}, 2));
  EXPECT_EQ(l.q(), 2);
  EXPECT_EQ(l.A(), (IntMatrix{{1, 1}}));
}

TEST(Normalize, MinimalIsUnchanged) { EXPECT_EQ(normalize(kHalfDiagonal), kHalfDiagonal); }

TEST(Normalize, RepeatedPrimeFactors) {
  const RationalLattice raw = make_lattice(12, {{6, 6}}, 2);
  const auto l = normalize(raw);
  EXPECT_EQ(l.q(), 2);
  EXPECT_EQ(l.A(), (IntMatrix{{1, 1}}));
  EXPECT_EQ(oracle::cosets(12, rows_of(raw), 2).size(), 2u);
  for (const auto& x : {RationalVector{R(1, 2), R(1, 2)}, RationalVector{R(1, 2), R(0)},
                        RationalVector{R(1, 6), R(1, 6)}, RationalVector{R(3, 2), R(-1, 2)}})
    EXPECT_EQ(contains(raw, x), contains(l, x));
}

TEST(Lattice, EmptyGeneratorListIsIntegerLattice) {
  const RationalLattice l(5, IntMatrix(0, 3));
  EXPECT_EQ(l.m(), 1u);
  EXPECT_EQ(l.q(), 1);
  EXPECT_EQ(det(l), 1);
}

TEST(CanonicalBasis, Examples) {
  const RationalMatrix id{{R(1), R(0)}, {R(0), R(1)}};
  EXPECT_EQ(canonical_basis(make_lattice(1, {{1, 0}}, 2)), id);
  EXPECT_EQ(canonical_basis(kHalfDiagonal), (RationalMatrix{{R(1, 2), R(1, 2)}, {R(0), R(1)}}));
  EXPECT_EQ(canonical_basis(kQuarter), (RationalMatrix{{R(1, 4), R(1, 4)}, {R(0), R(1, 2)}}));
}

TEST(Det, Examples) {
  EXPECT_EQ(det(RationalLattice::integer_lattice(4)), 1);
  EXPECT_EQ(det(kHalfDiagonal), R(1, 2));
  EXPECT_EQ(det(kQuarter), R(1, 8));
}

TEST(Contains, Examples) {
  EXPECT_TRUE(contains(kHalfDiagonal, {R(3), R(-7)}));
  EXPECT_TRUE(contains(kHalfDiagonal, {R(1, 2), R(1, 2)}));
  EXPECT_FALSE(contains(kHalfDiagonal, {R(1, 2), R(0)}));
  EXPECT_THROW(contains(kHalfDiagonal, {R(1)}), Error);
}

TEST(CosetGroup, Examples) {
  const auto trivial = coset_group(RationalLattice::integer_lattice(3));
  ASSERT_EQ(trivial.size(), 1u);
  EXPECT_TRUE(trivial[0].is_identity());

  const auto half = coset_group(kHalfDiagonal);
  ASSERT_EQ(half.size(), 2u);
  EXPECT_EQ(half[0].numerators, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(half[1].numerators, (std::vector<std::int64_t>{1, 1}));

  EXPECT_EQ(coset_group(kQuarter).size(), 8u);
}

TEST(CosetGroup, GuardExceeded) {
  Guards tight;
  tight.max_cosets = 4;
  try {
    coset_group(kQuarter, tight);
    FAIL() << "expected guard error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::guard_exceeded);
  }
}

TEST(Intersect, Examples) {
  const auto z = intersect_coordinate_subspace(RationalLattice::integer_lattice(4), {0, 2});
  EXPECT_EQ(z.n(), 2u);
  EXPECT_EQ(z.q(), 1);

  const auto half = intersect_coordinate_subspace(kQuarter, {0});
  EXPECT_EQ(half.n(), 1u);
  EXPECT_EQ(half.q(), 2);
  EXPECT_EQ(canonical_basis(half), (RationalMatrix{{R(1, 2)}}));

  const auto whole = intersect_coordinate_subspace(kHalfDiagonal, {0});
  EXPECT_EQ(whole.q(), 1);

  const auto empty = intersect_coordinate_subspace(kQuarter, {});
  EXPECT_EQ(empty.n(), 0u);
  EXPECT_EQ(det(empty), 1);
}

TEST(Completable, Examples) {
  EXPECT_TRUE(completable(kQuarter, {}));
  EXPECT_TRUE(completable(kHalfDiagonal, {0}));
  EXPECT_FALSE(completable(kQuarter, {0}));
  EXPECT_FALSE(completable(kQuarter, {1}));
}

TEST(ExactDefect, IntegerLattice) {
  const auto r = exact_defect(RationalLattice::integer_lattice(5));
  EXPECT_EQ(r.defect, 0u);
  EXPECT_EQ(r.keep, IndexSet::all(5));
}

TEST(ExactDefect, HalfDiagonal) {
  const auto r = exact_defect(kHalfDiagonal);
  EXPECT_EQ(r.defect, 1u);
  EXPECT_EQ(r.keep, (IndexSet{0}));
  EXPECT_EQ(r.basis, (RationalMatrix{{R(1), R(0)}, {R(1, 2), R(1, 2)}}));
  EXPECT_EQ(abs(determinant(r.basis)), det(kHalfDiagonal));
}

TEST(ExactDefect, Quarter) {
  const auto r = exact_defect(kQuarter);
  EXPECT_EQ(r.defect, 2u);
  EXPECT_TRUE(r.keep.empty());
  EXPECT_TRUE(verify_basis(kQuarter, r.basis));
}

TEST(ExactDefect, Guard) {
  Guards g;
  g.max_defect_dim = 3;
  try {
    exact_defect(RationalLattice::integer_lattice(4), g);
    FAIL() << "expected guard error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::guard_exceeded);
  }
}

TEST(DetFormula, Examples) {
  EXPECT_TRUE(check_det_formula(RationalLattice::integer_lattice(3)));
  const auto sixth = make_lattice(6, {{1, 1}}, 2);
  EXPECT_EQ(det(sixth), R(1, 6));
  EXPECT_TRUE(check_det_formula(sixth));
  const auto doubled = make_lattice(2, {{1, 1}, {1, 1}}, 2);
  EXPECT_EQ(det(doubled), R(1, 2));
  EXPECT_TRUE(check_det_formula(doubled));
}

TEST(DetFormula, RejectsSquareDenominator) {
  try {
    check_det_formula(kQuarter);
    FAIL() << "expected square-free error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_square_free);
  }
}

// Random lattices checked against breadth-first coset enumeration.
class RandomLattices : public ::testing::Test {
 protected:
  struct Instance {
    RationalLattice lattice;
    std::set<oracle::Vec> group;
  };

  static std::vector<Instance> sample(std::uint64_t seed, int count, std::size_t max_n) {
    std::mt19937_64 rng(seed);
    const long qs[] = {2, 3, 4, 5, 6, 8, 9, 10, 12};
    std::vector<Instance> out;
    for (int i = 0; i < count; ++i) {
      const std::size_t n = 1 + rng() % max_n;
      const std::size_t m = 1 + rng() % 3;
      const long q = qs[rng() % 9];
      auto rows = oracle::random_rows(rng, m, n, q);
      out.push_back({make_lattice(q, rows, n), oracle::cosets(q, rows, n)});
    }
    return out;
  }
};

TEST_F(RandomLattices, CosetsAndDeterminant) {
  for (const auto& [lattice, group] : sample(101, 150, 4)) {
    const auto cosets = coset_group(lattice);
    EXPECT_EQ(cosets.size(), group.size());
    EXPECT_EQ(det(lattice), R(1, static_cast<long>(group.size())));
    // Same elements, rescaled to the oracle's denominator.
    const std::int64_t scale = lattice.q().get_si() / cosets.front().q;
    for (const auto& c : cosets) {
      oracle::Vec v(c.numerators.size());
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = c.numerators[j] * scale;
      EXPECT_TRUE(group.count(v));
    }
    // Closure under addition, spot-checked on the first few pairs.
    for (std::size_t a = 0; a < std::min<std::size_t>(cosets.size(), 4); ++a)
      for (std::size_t b = 0; b < std::min<std::size_t>(cosets.size(), 4); ++b) {
        CosetElement sum = cosets[a];
        for (std::size_t j = 0; j < sum.numerators.size(); ++j)
          sum.numerators[j] = (sum.numerators[j] + cosets[b].numerators[j]) % sum.q;
        EXPECT_TRUE(std::binary_search(cosets.begin(), cosets.end(), sum));
      }
  }
}

TEST_F(RandomLattices, CompletabilityMatchesOracle) {
  for (const auto& [lattice, group] : sample(102, 120, 5)) {
    const std::size_t n = lattice.n();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t j = 0; j < n; ++j)
        if (mask >> j & 1u) idx.push_back(j);
      const IndexSet I(idx);
      const bool ours = completable(lattice, I);
      EXPECT_EQ(ours, oracle::completable(group, mask));
      EXPECT_EQ(ours, complete_frame_basis(lattice, I).has_value());
      // Subsets of extendable frames are extendable.
      if (ours)
        for (std::size_t drop : idx) {
          IndexSet smaller;
          for (std::size_t j : idx)
            if (j != drop) smaller.insert(j);
          EXPECT_TRUE(completable(lattice, smaller));
        }
    }
  }
}

TEST_F(RandomLattices, ExactDefectMatchesOracle) {
  for (const auto& [lattice, group] : sample(103, 150, 6)) {
    const auto r = exact_defect(lattice);
    EXPECT_EQ(r.defect, oracle::defect(group, lattice.n()));
    EXPECT_EQ(r.keep.size(), lattice.n() - r.defect);
    EXPECT_TRUE(oracle::completable(group, mask_of(r.keep)));
    EXPECT_TRUE(verify_basis(lattice, r.basis));
    for (std::size_t k : r.keep) {
      RationalVector e(lattice.n(), R(0));
      e[k] = 1;
      EXPECT_EQ(r.basis[k], e);
    }
    // No subset one larger than keep is completable.
    for_each_subset(lattice.n(), r.keep.size() + 1, [&](const IndexSet& I) {
      EXPECT_FALSE(completable(lattice, I));
      return false;
    });
  }
}

TEST_F(RandomLattices, NormalizeIdempotentAndMembershipPreserving) {
  std::mt19937_64 rng(104);
  for (const auto& [lattice, group] : sample(104, 100, 4)) {
    const auto once = normalize(lattice);
    EXPECT_EQ(normalize(once), once);
    EXPECT_TRUE(once.is_normalized());
    EXPECT_EQ(det(once), det(lattice));
    const long q = lattice.q().get_si();
    for (const auto& v : group) {
      RationalVector x(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) x[j] = R(static_cast<long>(v[j]) + (static_cast<long>(rng() % 3) - 1) * q, q);
      EXPECT_TRUE(contains(once, x));
    }
  }
}

TEST_F(RandomLattices, DeterminantFormulaForSquareFreeDenominators) {
  std::mt19937_64 rng(105);
  const long qs[] = {2, 3, 5, 6, 10, 15, 30, 7, 42};
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 5, m = 1 + rng() % 3;
    const long q = qs[rng() % 9];
    const auto l = normalize(make_lattice(q, oracle::random_rows(rng, m, n, q), n));
    EXPECT_TRUE(check_det_formula(l));
  }
}

}  // namespace
}  // namespace octadefect
