#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "fracdpg/error.hpp"
#include "fracdpg/mesh.hpp"
#include "support/generators.hpp"

using namespace fracdpg;

namespace {

std::vector<double> node_vector(const Mesh& m) { return {m.nodes().begin(), m.nodes().end()}; }

// Naive closure: bisect marked elements, then bisect any element longer
// than twice a neighbour until none remains.
std::vector<double> naive_refine(const Mesh& mesh, const std::vector<int>& marked) {
  std::vector<double> nodes = node_vector(mesh);
  std::vector<double> mids;
  for (int e : marked) mids.push_back(0.5 * (mesh.left(e) + mesh.right(e)));
  nodes.insert(nodes.end(), mids.begin(), mids.end());
  std::sort(nodes.begin(), nodes.end());
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double h = nodes[i + 1] - nodes[i];
      const double left = i > 0 ? nodes[i] - nodes[i - 1] : h;
      const double right = i + 2 < nodes.size() ? nodes[i + 2] - nodes[i + 1] : h;
      if (h > 2.0 * left * (1 + 1e-12) || h > 2.0 * right * (1 + 1e-12)) {
        nodes.insert(nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1, 0.5 * (nodes[i] + nodes[i + 1]));
        changed = true;
        break;
      }
    }
  }
  return nodes;
}

double marked_sum(const std::vector<double>& ind, const std::vector<int>& set) {
  double s = 0.0;
  for (int e : set) s += ind[static_cast<std::size_t>(e)];
  return s;
}

// Smallest subset size meeting the bulk criterion, by enumeration.
int minimal_cardinality(const std::vector<double>& ind, double theta) {
  const int n = static_cast<int>(ind.size());
  const double total = std::accumulate(ind.begin(), ind.end(), 0.0);
  int best = n;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double s = 0.0;
    for (int e = 0; e < n; ++e)
      if (mask & (1u << e)) s += ind[static_cast<std::size_t>(e)];
    if (theta * total <= s) best = std::min(best, __builtin_popcount(mask));
  }
  return best;
}

}  // namespace

TEST(UniformMesh, FourElements) {
  EXPECT_EQ(node_vector(uniform_mesh(4)), (std::vector<double>{0, 0.25, 0.5, 0.75, 1}));
}

TEST(UniformMesh, SingleElement) { EXPECT_EQ(node_vector(uniform_mesh(1)), (std::vector<double>{0, 1})); }

TEST(UniformMesh, EqualLengthsAndRatio) {
  const Mesh m = uniform_mesh(8);
  for (int e = 0; e < 8; ++e) EXPECT_NEAR(m.length(e), 0.125, 1e-15);
  EXPECT_LE(m.max_neighbor_ratio(), 2.0);
}

TEST(UniformMesh, RejectsZeroElements) { EXPECT_THROW(uniform_mesh(0), InvalidArgument); }

TEST(MeshConstruction, RejectsBadNodes) {
  EXPECT_THROW(Mesh({0.0, 0.6, 0.5, 1.0}), InvalidArgument);
  EXPECT_THROW(Mesh({0.1, 1.0}), InvalidArgument);
  EXPECT_THROW(Mesh({0.0, 0.9}), InvalidArgument);
  EXPECT_THROW(Mesh({0.0, 0.1, 1.0}), InvalidArgument);  // ratio 9
}

TEST(MeshConstruction, LocateConvention) {
  const Mesh m = uniform_mesh(4);
  EXPECT_EQ(m.locate(0.0), 0);
  EXPECT_EQ(m.locate(0.25), 1);
  EXPECT_EQ(m.locate(0.3), 1);
  EXPECT_EQ(m.locate(1.0), 3);
}

TEST(Doerfler, SingleDominantElement) {
  const std::vector<double> ind{16, 1, 1, 1, 1};
  EXPECT_EQ(doerfler_mark(ind, 0.4).elements, (std::vector<int>{0}));
}

TEST(Doerfler, ThetaOneMarksAll) {
  const std::vector<double> ind{0.3, 2.0, 0.1, 5.0};
  EXPECT_EQ(doerfler_mark(ind, 1.0).elements, (std::vector<int>{0, 1, 2, 3}));
}

TEST(Doerfler, EqualIndicatorsNeedTwoLowestIndices) {
  const std::vector<double> ind{1, 1, 1, 1, 1};
  const MarkedSet m = doerfler_mark(ind, 0.4);
  EXPECT_EQ(m.elements, (std::vector<int>{0, 1}));
  EXPECT_EQ(minimal_cardinality(ind, 0.4), 2);
}

TEST(Doerfler, AllZeroIsConverged) {
  const MarkedSet m = doerfler_mark(std::vector<double>{0, 0, 0}, 0.4);
  EXPECT_TRUE(m.converged);
  EXPECT_TRUE(m.elements.empty());
}

TEST(Doerfler, RejectsBadInput) {
  EXPECT_THROW(doerfler_mark(std::vector<double>{1, 2}, 0.0), InvalidArgument);
  EXPECT_THROW(doerfler_mark(std::vector<double>{1, 2}, 1.5), InvalidArgument);
  EXPECT_THROW(doerfler_mark(std::vector<double>{1, -2}, 0.5), InvalidArgument);
}

TEST(Refine, BisectFirstOfTwo) {
  const Mesh m = refine(uniform_mesh(2), MarkedSet{{0}, false});
  EXPECT_EQ(node_vector(m), (std::vector<double>{0, 0.25, 0.5, 1}));
}

TEST(Refine, SingleBisection) {
  EXPECT_EQ(node_vector(refine(uniform_mesh(1), MarkedSet{{0}, false})), (std::vector<double>{0, 0.5, 1}));
}

TEST(Refine, RatioTwoNeedsNoClosure) {
  const Mesh m(std::vector<double>{0, 0.5, 1}, std::vector<int>{1, 0});
  EXPECT_EQ(node_vector(refine(m, MarkedSet{{0}, false})), (std::vector<double>{0, 0.25, 0.5, 1}));
}

TEST(Refine, ClosureTriggered) {
  const Mesh m = refine(uniform_mesh(2), MarkedSet{{0}, false});  // {0, .25, .5, 1}
  const Mesh r = refine(m, MarkedSet{{1}, false});
  EXPECT_EQ(node_vector(r), (std::vector<double>{0, 0.25, 0.375, 0.5, 0.75, 1}));
}

TEST(Refine, RejectsOutOfRange) { EXPECT_THROW(refine(uniform_mesh(2), MarkedSet{{2}, false}), InvalidArgument); }

TEST(MeshProperty, RefinementKeepsNodesAndRatio) {
  gen::Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const Mesh mesh = trial % 2 ? gen::random_refined_mesh(rng, rng.integer(0, 6)) : gen::random_mesh(rng, 1, 30);
    std::vector<int> marked;
    for (int e = 0; e < mesh.size(); ++e)
      if (rng.integer(0, 4) == 0) marked.push_back(e);
    const Mesh fine = refine(mesh, MarkedSet{marked, false});
    const auto coarse_nodes = node_vector(mesh);
    const auto fine_nodes = node_vector(fine);
    for (double x : coarse_nodes) EXPECT_TRUE(std::binary_search(fine_nodes.begin(), fine_nodes.end(), x));
    EXPECT_LE(fine.max_neighbor_ratio(), 2.0 * (1 + 1e-12));
    for (int e : marked) {
      const double mid = 0.5 * (mesh.left(e) + mesh.right(e));
      EXPECT_TRUE(std::binary_search(fine_nodes.begin(), fine_nodes.end(), mid));
    }
  }
}

TEST(MeshProperty, ClosureIsMinimalFixedPoint) {
  gen::Rng rng(202);
  for (int trial = 0; trial < 150; ++trial) {
    const Mesh mesh = gen::random_refined_mesh(rng, rng.integer(0, 7));
    std::vector<int> marked;
    for (int e = 0; e < mesh.size(); ++e)
      if (rng.integer(0, 3) == 0) marked.push_back(e);
    EXPECT_EQ(node_vector(refine(mesh, MarkedSet{marked, false})), naive_refine(mesh, marked)) << "trial " << trial;
  }
}

TEST(DoerflerProperty, InequalityMinimalityAndScaleInvariance) {
  gen::Rng rng(303);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.integer(1, 12);
    const auto ind = gen::random_indicators(rng, n);
    const double theta = rng.uniform(0.05, 1.0);
    const double total = std::accumulate(ind.begin(), ind.end(), 0.0);
    const MarkedSet m = doerfler_mark(ind, theta);
    if (total == 0.0) {
      EXPECT_TRUE(m.converged);
      continue;
    }
    EXPECT_FALSE(m.elements.empty());
    EXPECT_TRUE(std::is_sorted(m.elements.begin(), m.elements.end()));
    EXPECT_LE(theta * total, marked_sum(ind, m.elements) * (1 + 1e-14));
    EXPECT_EQ(static_cast<int>(m.elements.size()), minimal_cardinality(ind, theta));
    for (std::size_t drop = 0; drop < m.elements.size(); ++drop) {
      auto reduced = m.elements;
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(drop));
      EXPECT_GT(theta * total, marked_sum(ind, reduced));
    }
    std::vector<double> scaled = ind;
    const double s = std::exp2(rng.integer(-20, 20));
    for (double& v : scaled) v *= s;
    EXPECT_EQ(doerfler_mark(scaled, theta).elements, m.elements);
  }
}

TEST(DoerflerProperty, ThetaOneMarksPositive) {
  gen::Rng rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    auto ind = gen::random_indicators(rng, rng.integer(1, 20));
    if (ind.size() > 3) ind[2] = 0.0;
    std::vector<int> positive;
    for (std::size_t e = 0; e < ind.size(); ++e)
      if (ind[e] > 0.0) positive.push_back(static_cast<int>(e));
    EXPECT_EQ(doerfler_mark(ind, 1.0).elements, positive);
  }
}
