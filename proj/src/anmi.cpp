#include "vclust/anmi.hpp"

#include "vclust/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vclust {

Contingency Contingency::of(const Clustering& a, const Clustering& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("contingency: partitions differ in length");
  }
  Contingency t;
  t.counts.assign(a.num_clusters(), std::vector<long>(b.num_clusters(), 0));
  t.row_sums.assign(a.num_clusters(), 0);
  t.col_sums.assign(b.num_clusters(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++t.counts[a.label(i)][b.label(i)];
    ++t.row_sums[a.label(i)];
    ++t.col_sums[b.label(i)];
  }
  t.total = static_cast<long>(a.size());
  return t;
}

namespace {

double entropy(const std::vector<long>& sums, long total) {
  double h = 0.0;
  for (long s : sums) {
    if (s > 0) {
      const double q = static_cast<double>(s) / total;
      h -= q * std::log(q);
    }
  }
  return h;
}

double log_factorial(long x) { return std::lgamma(static_cast<double>(x) + 1.0); }

}  // namespace

double mutual_information(const Contingency& t) {
  const double n = static_cast<double>(t.total);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.row_sums.size(); ++i) {
    for (std::size_t j = 0; j < t.col_sums.size(); ++j) {
      const long nij = t.counts[i][j];
      if (nij > 0) {
        mi += nij / n * std::log(n * nij / (static_cast<double>(t.row_sums[i]) * t.col_sums[j]));
      }
    }
  }
  return mi;
}

double expected_mutual_information(const Contingency& t) {
  const long n = t.total;
  const double nd = static_cast<double>(n);
  const double lf_n = log_factorial(n);
  double emi = 0.0;
  for (long a : t.row_sums) {
    for (long b : t.col_sums) {
      const double fixed =
          log_factorial(a) + log_factorial(b) + log_factorial(n - a) + log_factorial(n - b) - lf_n;
      for (long nij = std::max(1L, a + b - n); nij <= std::min(a, b); ++nij) {
        const double log_p = fixed - log_factorial(nij) - log_factorial(a - nij) -
                             log_factorial(b - nij) - log_factorial(n - a - b + nij);
        emi += nij / nd * std::log(nd * nij / (static_cast<double>(a) * b)) * std::exp(log_p);
      }
    }
  }
  return emi;
}

double anmi(const Clustering& a, const Clustering& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("anmi: partitions differ in length");
  }
  if (a == b) {
    return 1.0;
  }
  const Contingency t = Contingency::of(a, b);
  const double mi = mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double h = std::max(entropy(t.row_sums, t.total), entropy(t.col_sums, t.total));
  const double denom = h - emi;
  if (denom <= 0.0) {
    return 0.0;
  }
  return (mi - emi) / denom;
}

MeanStd aggregate(const std::vector<double>& runs) {
  if (runs.empty()) {
    throw InvalidArgument("aggregate: no values");
  }
  MeanStd m;
  for (double v : runs) {
    m.mean += v;
  }
  m.mean /= static_cast<double>(runs.size());
  if (runs.size() > 1) {
    double ss = 0.0;
    for (double v : runs) {
      ss += (v - m.mean) * (v - m.mean);
    }
    m.std = std::sqrt(ss / static_cast<double>(runs.size() - 1));
  }
  return m;
}

namespace {

std::string two_decimals(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v + 0.0);
  std::string s = buf;
  if (s == "-0.00") {
    s = "0.00";
  }
  if (s.back() == '0') {
    s.pop_back();
  }
  return s;
}

}  // namespace

std::string format_mean_std(const MeanStd& m) {
  return two_decimals(m.mean) + " (" + two_decimals(m.std) + ")";
}

}  // namespace vclust
