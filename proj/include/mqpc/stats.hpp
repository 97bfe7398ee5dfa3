#pragma once

#include <vector>

namespace mqpc {

// Pearson statistic for observed counts against a uniform expectation.
double chi_square_statistic(const std::vector<long long>& counts);

// Upper-tail p-value of the chi-square distribution with df degrees of
// freedom.
double chi_square_pvalue(double statistic, int df);

// Convenience: p-value that the counts came from a uniform distribution over
// their index set (df = bins - 1).
double chi_square_uniform_pvalue(const std::vector<long long>& counts);

} // namespace mqpc
