#include "vclust/linkage.hpp"

#include "vclust/error.hpp"

#include <cmath>
#include <limits>

namespace vclust {

std::string to_string(Linkage l) { return l == Linkage::Single ? "single" : "average"; }

Linkage parse_linkage(const std::string& s) {
  if (s == "single") {
    return Linkage::Single;
  }
  if (s == "average") {
    return Linkage::Average;
  }
  throw InvalidArgument("unknown linkage '" + s + "' (expected single or average)");
}

Matrix correlation_dissimilarity(const Matrix& cov) {
  const Eigen::Index p = cov.rows();
  Matrix d = Matrix::Ones(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double denom = std::sqrt(cov(i, i) * cov(j, j));
      if (denom > 0.0) {
        d(i, j) = d(j, i) = 1.0 - std::min(1.0, std::abs(cov(i, j)) / denom);
      }
    }
  }
  return d;
}

std::vector<std::vector<int>> hierarchical_cuts(const Matrix& dissimilarity, Linkage method) {
  const Eigen::Index p = dissimilarity.rows();
  if (p < 1 || dissimilarity.cols() != p) {
    throw InvalidArgument("linkage: dissimilarity must be square and non-empty");
  }
  // Cluster distances are kept in `dist`, indexed by the lowest member id.
  Matrix dist = dissimilarity;
  std::vector<int> size(p, 1);
  std::vector<bool> active(p, true);
  std::vector<int> owner(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    owner[i] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> cuts(p);
  const auto snapshot = [&] {
    std::vector<int> labels(p);
    for (Eigen::Index i = 0; i < p; ++i) {
      labels[i] = owner[i];
    }
    return labels;
  };
  cuts[p - 1] = snapshot();
  for (Eigen::Index remaining = p; remaining > 1; --remaining) {
    Eigen::Index bi = -1;
    Eigen::Index bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p; ++i) {
      if (!active[i]) {
        continue;
      }
      for (Eigen::Index j = i + 1; j < p; ++j) {
        if (active[j] && dist(i, j) < best) {
          best = dist(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    for (Eigen::Index m = 0; m < p; ++m) {
      if (!active[m] || m == bi || m == bj) {
        continue;
      }
      const double merged = method == Linkage::Single
                                ? std::min(dist(bi, m), dist(bj, m))
                                : (size[bi] * dist(bi, m) + size[bj] * dist(bj, m)) /
                                      static_cast<double>(size[bi] + size[bj]);
      dist(bi, m) = dist(m, bi) = merged;
    }
    size[bi] += size[bj];
    active[bj] = false;
    for (int& o : owner) {
      if (o == bj) {
        o = static_cast<int>(bi);
      }
    }
    cuts[remaining - 2] = snapshot();
  }
  return cuts;
}

}  // namespace vclust
