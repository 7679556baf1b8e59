#include "fracdpg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fracdpg/error.hpp"

namespace fracdpg {

namespace {

// Relative slack for the factor-two neighbour bound; midpoints of non-dyadic
// elements are not exact.
constexpr double kRatioSlack = 1e-9;

bool too_long(double len, double neighbor) { return len > 2.0 * neighbor * (1.0 + kRatioSlack); }

}  // namespace

Mesh::Mesh(std::vector<double> nodes, std::vector<int> generations)
    : nodes_(std::move(nodes)), generations_(std::move(generations)) {
  if (nodes_.size() < 2) throw InvalidArgument("mesh needs at least one element");
  if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
    throw InvalidArgument("mesh nodes must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i + 1] > nodes_[i]))
      throw InvalidArgument("mesh nodes must be strictly increasing (node " + std::to_string(i + 1) + ")");
  }
  if (generations_.empty()) generations_.assign(nodes_.size() - 1, 0);
  if (generations_.size() != nodes_.size() - 1)
    throw InvalidArgument("generation count must equal element count");
  for (int i = 0; i + 1 < size(); ++i) {
    if (too_long(length(i), length(i + 1)) || too_long(length(i + 1), length(i)))
      throw InvalidArgument("neighbour length ratio exceeds 2 at node " + std::to_string(i + 1));
  }
}

int Mesh::locate(double x) const {
  if (x >= 1.0) return size() - 1;
  if (x <= 0.0) return 0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  return static_cast<int>(it - nodes_.begin()) - 1;
}

double Mesh::min_length() const {
  double h = 1.0;
  for (int i = 0; i < size(); ++i) h = std::min(h, length(i));
  return h;
}

double Mesh::max_length() const {
  double h = 0.0;
  for (int i = 0; i < size(); ++i) h = std::max(h, length(i));
  return h;
}

double Mesh::max_neighbor_ratio() const {
  double ratio = 1.0;
  for (int i = 0; i + 1 < size(); ++i) {
    const double a = length(i), b = length(i + 1);
    ratio = std::max(ratio, std::max(a / b, b / a));
  }
  return ratio;
}

Mesh Mesh::reflected() const {
  std::vector<double> nodes(nodes_.size());
  const std::size_t last = nodes_.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) nodes[i] = 1.0 - nodes_[last - i];
  nodes.front() = 0.0;
  nodes.back() = 1.0;
  std::vector<int> gens(generations_.rbegin(), generations_.rend());
  return Mesh(std::move(nodes), std::move(gens));
}

Mesh uniform_mesh(int n_elements) {
  if (n_elements < 1) throw InvalidArgument("uniform_mesh: element count must be positive");
  std::vector<double> nodes(static_cast<std::size_t>(n_elements) + 1);
  for (int i = 0; i <= n_elements; ++i) nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_elements;
  return Mesh(std::move(nodes));
}

MarkedSet mark_all(const Mesh& mesh) {
  MarkedSet marked;
  marked.elements.resize(static_cast<std::size_t>(mesh.size()));
  std::iota(marked.elements.begin(), marked.elements.end(), 0);
  return marked;
}

MarkedSet doerfler_mark(std::span<const double> squared_indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("doerfler_mark: theta must lie in (0,1]");
  double total = 0.0;
  for (double e : squared_indicators) {
    if (!std::isfinite(e) || e < 0.0) throw InvalidArgument("doerfler_mark: indicators must be finite and >= 0");
    total += e;
  }
  MarkedSet marked;
  if (total == 0.0) {
    marked.converged = true;
    return marked;
  }

  std::vector<int> order(squared_indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return squared_indicators[static_cast<std::size_t>(i)] > squared_indicators[static_cast<std::size_t>(j)];
  });

  if (theta == 1.0) {
    for (int i : order) {
      if (squared_indicators[static_cast<std::size_t>(i)] > 0.0) marked.elements.push_back(i);
    }
  } else {
    // Summing in sorted order keeps the result independent of a global rescaling.
    const double goal = theta * total;
    double sum = 0.0;
    for (int i : order) {
      marked.elements.push_back(i);
      sum += squared_indicators[static_cast<std::size_t>(i)];
      if (sum >= goal) break;
    }
  }
  std::sort(marked.elements.begin(), marked.elements.end());
  return marked;
}

Mesh refine(const Mesh& mesh, const MarkedSet& marked) {
  const int n = mesh.size();
  std::vector<double> left(mesh.nodes().begin(), mesh.nodes().end() - 1);
  std::vector<double> right(mesh.nodes().begin() + 1, mesh.nodes().end());
  std::vector<int> gen(mesh.generations().begin(), mesh.generations().end());

  std::vector<char> split(static_cast<std::size_t>(n), 0);
  for (int e : marked.elements) {
    if (e < 0 || e >= n) throw InvalidArgument("refine: marked element " + std::to_string(e) + " out of range");
    split[static_cast<std::size_t>(e)] = 1;
  }

  auto bisect = [&](const std::vector<char>& flags) {
    std::vector<double> l2, r2;
    std::vector<int> g2;
    l2.reserve(left.size() * 2);
    r2.reserve(left.size() * 2);
    g2.reserve(left.size() * 2);
    for (std::size_t i = 0; i < left.size(); ++i) {
      if (flags[i]) {
        const double mid = 0.5 * (left[i] + right[i]);
        l2.push_back(left[i]);
        r2.push_back(mid);
        g2.push_back(gen[i] + 1);
        l2.push_back(mid);
        r2.push_back(right[i]);
        g2.push_back(gen[i] + 1);
      } else {
        l2.push_back(left[i]);
        r2.push_back(right[i]);
        g2.push_back(gen[i]);
      }
    }
    left = std::move(l2);
    right = std::move(r2);
    gen = std::move(g2);
  };

  bisect(split);

  // Closure: bisect every element more than twice as long as a neighbour
  // until none is left.
  for (;;) {
    const std::size_t count = left.size();
    std::vector<char> flags(count, 0);
    bool any = false;
    for (std::size_t i = 0; i < count; ++i) {
      const double len = right[i] - left[i];
      const bool violates = (i > 0 && too_long(len, right[i - 1] - left[i - 1])) ||
                            (i + 1 < count && too_long(len, right[i + 1] - left[i + 1]));
      if (violates) {
        flags[i] = 1;
        any = true;
      }
    }
    if (!any) break;
    bisect(flags);
  }

  std::vector<double> nodes(left.begin(), left.end());
  nodes.push_back(1.0);
  return Mesh(std::move(nodes), std::move(gen));
}

}  // namespace fracdpg
