#pragma once

#include <cstddef>
#include <vector>

#include "tailasym/copula.hpp"
#include "tailasym/paired_sample.hpp"
#include "tailasym/rng.hpp"

namespace tailasym {

/// iid pairs from `model` on the uniform scale, every entry in (0, 1).
///
/// Clayton theta > 0 uses gamma-frailty mixing; Clayton theta < 0, AMH, Frank
/// and FGM invert the conditional CDF in closed form; Plackett, Gumbel and
/// BB7 invert it by bracketed root finding (tolerance 1e-12 in u2); Gaussian
/// maps a correlated normal pair through the normal CDF.
PairedSample sample_copula(const CopulaModel& model, std::size_t n, SeedSpec seed);

/// u2 with dC/du1(u1, u2) = p, i.e. the conditional quantile of U2 given U1 = u1.
/// Throws NumericalError when root finding fails to converge in 200 steps.
double conditional_quantile(const CopulaModel& model, double p, double u1);

/// Clayton copula with standard Cauchy margins, on the raw scale.
PairedSample sample_clayton_cauchy(double theta, std::size_t n, SeedSpec seed);

double cauchy_cdf(double x);
double cauchy_quantile(double u);

/// d-dimensional Clayton(theta > 0) via one shared gamma frailty; returns d
/// uniform-scale columns of length n.
std::vector<std::vector<double>> sample_clayton_frailty(double theta, std::size_t d, std::size_t n,
                                                        SeedSpec seed);

} // namespace tailasym
