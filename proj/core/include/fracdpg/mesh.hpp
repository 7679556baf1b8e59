#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracdpg {

/// Ordered partition of I = (0,1) into N >= 1 intervals.
///
/// Element i is (nodes[i], nodes[i+1]). Every mesh satisfies the local
/// quasi-uniformity bound: adjacent element lengths differ by at most a
/// factor of two. Each element carries its bisection depth (generation).
class Mesh {
 public:
  /// Validating constructor. Throws InvalidArgument if nodes are not strictly
  /// increasing from 0 to 1 or the neighbour ratio bound is violated.
  explicit Mesh(std::vector<double> nodes, std::vector<int> generations = {});

  int size() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
  int node_count() const noexcept { return static_cast<int>(nodes_.size()); }

  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double left(int element) const { return node(element); }
  double right(int element) const { return node(element + 1); }
  double length(int element) const { return right(element) - left(element); }
  int generation(int element) const { return generations_[static_cast<std::size_t>(element)]; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const int> generations() const noexcept { return generations_; }

  /// Index of the element containing x; nodes belong to the element on their
  /// right except x = 1, which belongs to the last element.
  int locate(double x) const;

  double min_length() const;
  double max_length() const;
  /// max over adjacent pairs of diam(T)/diam(T').
  double max_neighbor_ratio() const;

  /// Image of the mesh under x -> 1 - x.
  Mesh reflected() const;

  bool operator==(const Mesh&) const = default;

 private:
  std::vector<double> nodes_;
  std::vector<int> generations_;
};

/// Elements selected by a marking strategy, sorted ascending.
struct MarkedSet {
  std::vector<int> elements;
  /// Set when every indicator vanished: nothing left to refine.
  bool converged = false;
};

/// N equal elements of length 1/N.
Mesh uniform_mesh(int n_elements);

/// Doerfler bulk criterion: the smallest set M with
/// theta * sum_T est(T)^2 <= sum_{T in M} est(T)^2.
///
/// Candidates are taken in order (indicator descending, index ascending), so
/// ties resolve to the lowest element index. theta = 1 returns every element
/// with a positive indicator.
MarkedSet doerfler_mark(std::span<const double> squared_indicators, double theta);

/// Bisects all marked elements, then bisects any element longer than twice a
/// neighbour until the quasi-uniformity bound holds again.
Mesh refine(const Mesh& mesh, const MarkedSet& marked);

/// Marks every element.
MarkedSet mark_all(const Mesh& mesh);

}  // namespace fracdpg
