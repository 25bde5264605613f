#pragma once

namespace vclust {

/// log Γ_p(a) = p(p−1)/4·log π + Σ_{i=1..p} log Γ(a + (1−i)/2). Requires a > (p−1)/2.
double multigamma_log(int p, double a);

/// ψ(a). Throws InvalidArgument at the poles (a ∈ {0, −1, −2, ...}).
double digamma(double a);

/// ψ'(a).
double trigamma(double a);

/// log(exp(a) + exp(b)) without overflow; handles −∞ operands.
double log_add_exp(double a, double b);

}  // namespace vclust
