#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ipbench/sparse/amd.hpp"
#include "ipbench/sparse/etree.hpp"
#include "ipbench/sparse/matrix_market.hpp"
#include "ipbench/sparse/scaling.hpp"
#include "ipbench/sparse/sym_csc.hpp"
#include "oracles.hpp"

using namespace ipbench;
using namespace ipbench::sparse;

namespace {

SymCsc tridiagonal(Index n, double diag = 2.0, double off = -1.0) {
  SymTriplet t{n, {}};
  for (Index i = 0; i < n; ++i) {
    t.entries.push_back({i, i, diag});
    if (i + 1 < n) t.entries.push_back({i + 1, i, off});
  }
  return from_triplets(t);
}

// Dense first row/column at `hub`.
SymCsc arrow(Index n, Index hub) {
  SymTriplet t{n, {}};
  for (Index i = 0; i < n; ++i) {
    t.entries.push_back({i, i, 4.0});
    if (i != hub) t.entries.push_back({std::max(i, hub), std::min(i, hub), 1.0});
  }
  return from_triplets(t);
}

SymCsc diagonal(const std::vector<double>& d) {
  SymTriplet t{static_cast<Index>(d.size()), {}};
  for (std::size_t i = 0; i < d.size(); ++i) t.entries.push_back({Index(i), Index(i), d[i]});
  return from_triplets(t);
}

}  // namespace

TEST(FromTriplets, DirectTranscription) {
  const SymCsc a = from_triplets({2, {{0, 0, 4}, {1, 0, 2}, {1, 1, 1}}});
  EXPECT_EQ(a.col_start, (std::vector<Index>{0, 2, 3}));
  EXPECT_EQ(a.row_idx, (std::vector<Index>{0, 1, 1}));
  EXPECT_EQ(a.values, (std::vector<double>{4, 2, 1}));
  EXPECT_TRUE(is_valid(a));
}

TEST(FromTriplets, DuplicatesAreSummed) {
  const SymCsc a = from_triplets({2, {{0, 0, 1}, {0, 0, 1}}});
  EXPECT_EQ(a.nnz(), 1);
  EXPECT_EQ(a.row_idx[0], 0);
  EXPECT_DOUBLE_EQ(a.values[0], 2.0);
}

TEST(FromTriplets, EmptyMatrix) {
  const SymCsc a = from_triplets({3, {}});
  EXPECT_EQ(a.col_start, (std::vector<Index>{0, 0, 0, 0}));
  EXPECT_TRUE(a.row_idx.empty());
  EXPECT_TRUE(a.values.empty());
}

TEST(FromTriplets, RejectsBadInput) {
  EXPECT_THROW(from_triplets({2, {{2, 0, 1.0}}}), InvalidInput);
  EXPECT_THROW(from_triplets({2, {{0, 1, 1.0}}}), InvalidInput);
  EXPECT_THROW(from_triplets({2, {{1, 0, std::nan("")}}}), InvalidInput);
  EXPECT_THROW(from_triplets({2, {{1, 0, kInf}}}), InvalidInput);
}

TEST(FromTriplets, DenseRoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Index> size(1, 50);
  std::uniform_real_distribution<double> val(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = size(rng);
    std::uniform_int_distribution<Index> idx(0, n - 1);
    SymTriplet t{n, {}};
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(n, n);
    const int count = static_cast<int>(idx(rng) * 3);
    for (int k = 0; k < count; ++k) {
      Index i = idx(rng), j = idx(rng);
      if (i < j) std::swap(i, j);
      const double v = val(rng);
      t.entries.push_back({i, j, v});
      expected(i, j) += v;
      if (i != j) expected(j, i) += v;
    }
    const SymCsc a = from_triplets(t);
    ASSERT_TRUE(is_valid(a));
    EXPECT_LE((oracle::to_eigen(to_dense(a)) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Ordering, DiagonalHasNoFill) {
  const SymCsc a = diagonal({1, 2, 3, 4});
  const Permutation p = fill_reducing_order(a);
  EXPECT_TRUE(Permutation::is_bijection(p.indices()));
  EXPECT_EQ(oracle::symbolic_factor_nnz(a, p.indices()), 0);
}

TEST(Ordering, ArrowHubGoesLast) {
  const SymCsc a = arrow(5, 0);
  const Permutation p = fill_reducing_order(a);
  EXPECT_EQ(p[4], 0);
  EXPECT_EQ(oracle::symbolic_factor_nnz(a, p.indices()) - a.strict_lower_nnz(), 0);
  EXPECT_EQ(oracle::symbolic_factor_nnz(a, Permutation::identity(5).indices()) - a.strict_lower_nnz(), 6);
}

TEST(Ordering, TridiagonalStaysFillFree) {
  const SymCsc a = tridiagonal(6);
  EXPECT_EQ(oracle::symbolic_factor_nnz(a, Permutation::identity(6).indices()), a.strict_lower_nnz());
  const Permutation p = fill_reducing_order(a);
  EXPECT_EQ(oracle::symbolic_factor_nnz(a, p.indices()), a.strict_lower_nnz());
}

TEST(Ordering, NaturalOptionIsIdentity) {
  EXPECT_EQ(fill_reducing_order(arrow(5, 0), OrderingMethod::Natural), Permutation::identity(5));
}

TEST(Ordering, BijectionProperty) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Index> size(1, 200);
  std::uniform_real_distribution<double> dens(0.0, 0.15);
  for (int trial = 0; trial < 150; ++trial) {
    const SymCsc a = oracle::random_symmetric(rng, size(rng), dens(rng));
    const Permutation p = fill_reducing_order(a);
    std::vector<Index> sorted = p.indices();
    std::sort(sorted.begin(), sorted.end());
    for (Index i = 0; i < a.n; ++i) ASSERT_EQ(sorted[i], i);
  }
}

TEST(Ordering, ZeroDiagonalColumnFollowsItsPartner) {
  // [H J^T; J 0] with H diagonal, J = [[1, 3, 0], [0, 0, 2]]: row 3 pairs
  // with column 1 (largest coupling), row 4 with column 2.
  SymTriplet t{5, {}};
  for (Index i = 0; i < 3; ++i) t.entries.push_back({i, i, 1.0});
  t.entries.push_back({3, 0, 1.0});
  t.entries.push_back({3, 1, 3.0});
  t.entries.push_back({4, 2, 2.0});
  const SymCsc a = from_triplets(t);
  const Permutation p = fill_reducing_order(a);
  ASSERT_TRUE(Permutation::is_bijection(p.indices()));
  const auto& q = p.indices();
  const auto pos = [&](Index v) { return std::find(q.begin(), q.end(), v) - q.begin(); };
  EXPECT_EQ(pos(3), pos(1) + 1);
  EXPECT_EQ(pos(4), pos(2) + 1);
}

TEST(Ordering, KktBijectionProperty) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const SymCsc a = oracle::random_kkt(rng, 2 + trial % 40, trial % 17, 0.1);
    EXPECT_TRUE(Permutation::is_bijection(fill_reducing_order(a).indices())) << trial;
  }
}

TEST(Ordering, BeatsNaturalOrderOnGrids) {
  // 2D 5-point Laplacian on a 12x12 grid.
  const Index g = 12, n = g * g;
  SymTriplet t{n, {}};
  for (Index i = 0; i < g; ++i)
    for (Index j = 0; j < g; ++j) {
      const Index k = i * g + j;
      t.entries.push_back({k, k, 4.0});
      if (j + 1 < g) t.entries.push_back({k + 1, k, -1.0});
      if (i + 1 < g) t.entries.push_back({k + g, k, -1.0});
    }
  const SymCsc a = from_triplets(t);
  const Index natural = oracle::symbolic_factor_nnz(a, Permutation::identity(n).indices());
  const Index amd = oracle::symbolic_factor_nnz(a, fill_reducing_order(a).indices());
  EXPECT_LT(amd, natural);
}

TEST(Etree, DiagonalIsAForestOfRoots) {
  const EliminationTree t = etree(diagonal({1, 2, 3}), Permutation::identity(3));
  for (Index i = 0; i < 3; ++i) EXPECT_TRUE(t.is_root(i));
}

TEST(Etree, Tridiagonal) {
  const EliminationTree t = etree(tridiagonal(4), Permutation::identity(4));
  EXPECT_EQ(t.parent, (std::vector<Index>{1, 2, 3, EliminationTree::kRoot}));
}

TEST(Etree, ArrowHubLast) {
  const EliminationTree t = etree(arrow(4, 0), Permutation({1, 2, 3, 0}));
  EXPECT_EQ(t.parent, (std::vector<Index>{3, 3, 3, EliminationTree::kRoot}));
}

TEST(Etree, ParentsIncreaseProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const SymCsc a = oracle::random_symmetric(rng, 1 + trial, 0.08);
    const EliminationTree t = etree(a, fill_reducing_order(a));
    for (Index i = 0; i < t.size(); ++i) {
      if (!t.is_root(i)) ASSERT_GT(t.parent[i], i);
    }
  }
}

TEST(MaxScaling, DiagonalBecomesIdentity) {
  const SymCsc a = diagonal({4, 9});
  const auto s = max_scaling(a);
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 1.0 / 3.0);
  const SymCsc scaled = apply_scaling(a, s);
  EXPECT_DOUBLE_EQ(scaled.values[0], 1.0);
  EXPECT_NEAR(scaled.values[1], 1.0, 1e-15);
}

TEST(MaxScaling, OffDiagonalPair) {
  const SymCsc a = from_triplets({2, {{1, 0, 2.0}}});
  const auto s = max_scaling(a);
  EXPECT_NEAR(s[0], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s[1], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(apply_scaling(a, s).values[0], 1.0, 1e-15);
}

TEST(MaxScaling, EmptyRowsGetOne) {
  const auto s = max_scaling(from_triplets({2, {}}));
  EXPECT_EQ(s, (std::vector<double>{1.0, 1.0}));
}

TEST(MaxScaling, BoundsEntriesAndPreservesInertia) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mag(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + trial % 50;
    SymCsc a = oracle::random_symmetric(rng, n, 0.1);
    for (double& v : a.values) v *= std::pow(10.0, mag(rng));
    const auto s = max_scaling(a);
    const SymCsc scaled = apply_scaling(a, s);
    EXPECT_LE(scaled.max_abs(), 1.0 + 1e-12);
    const auto before = oracle::eigen_inertia(oracle::to_eigen(a), 1e-13, 1e-13);
    const auto after = oracle::eigen_inertia(oracle::to_eigen(scaled), 1e-13, 1e-13);
    EXPECT_EQ(before.inertia.positive, after.inertia.positive);
    EXPECT_EQ(before.inertia.negative, after.inertia.negative);
  }
}

TEST(MatrixMarket, ReadsSymmetricCoordinate) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 4\n"
      "1 1 2.0\n"
      "2 1 -1.0\n"
      "3 3 5\n"
      "2 3 7\n");
  const SymCsc a = read_matrix_market(in);
  EXPECT_EQ(a.n, 3);
  EXPECT_EQ(a.nnz(), 4);
  const DenseMatrix d = to_dense(a);
  EXPECT_DOUBLE_EQ(d(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(d(1, 2), 7.0);
  EXPECT_DOUBLE_EQ(d(2, 2), 5.0);
}

TEST(MatrixMarket, WriteThenReadIsExact) {
  std::mt19937_64 rng(9);
  const SymCsc a = oracle::random_symmetric(rng, 30, 0.1);
  std::stringstream buf;
  write_matrix_market(buf, a);
  std::string header;
  std::getline(buf, header);
  EXPECT_EQ(header, kMatrixMarketHeader);
  buf.seekg(0);
  const SymCsc b = read_matrix_market(buf);
  EXPECT_TRUE(a.same_pattern(b));
  EXPECT_EQ(a.values, b.values);
}

TEST(MatrixMarket, RejectsGeneralMatrices) {
  std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 2 0\n");
  EXPECT_THROW(read_matrix_market(in), InvalidInput);
}

TEST(Permute, EntryMapTracksValues) {
  std::mt19937_64 rng(13);
  const SymCsc a = oracle::random_symmetric(rng, 25, 0.2);
  const Permutation p = fill_reducing_order(a);
  std::vector<Index> map;
  const SymCsc c = permute(a, p, &map);
  ASSERT_TRUE(is_valid(c));
  const auto inv = p.inverse();
  for (Index j = 0; j < a.n; ++j) {
    for (Index q = a.col_start[j]; q < a.col_start[j + 1]; ++q) {
      const Index slot = map[q];
      EXPECT_EQ(c.values[slot], a.values[q]);
      EXPECT_EQ(c.row_idx[slot], std::max(inv[a.row_idx[q]], inv[j]));
    }
  }
}
