#include "vclust/special.hpp"

#include "vclust/error.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace vclust {

double multigamma_log(int p, double a) {
  if (p < 1) {
    throw InvalidArgument("multigamma_log: dimension must be positive");
  }
  if (!(a > 0.5 * (p - 1))) {
    throw InvalidArgument("multigamma_log: argument must exceed (p-1)/2");
  }
  double out = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int i = 1; i <= p; ++i) {
    out += std::lgamma(a + 0.5 * (1 - i));
  }
  return out;
}

double digamma(double a) {
  if (a <= 0.0 && a == std::floor(a)) {
    throw InvalidArgument("digamma: pole at non-positive integer");
  }
  return boost::math::digamma(a);
}

double trigamma(double a) {
  if (a <= 0.0 && a == std::floor(a)) {
    throw InvalidArgument("trigamma: pole at non-positive integer");
  }
  return boost::math::trigamma(a);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) {
    return b;
  }
  if (b == -std::numeric_limits<double>::infinity()) {
    return a;
  }
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace vclust
