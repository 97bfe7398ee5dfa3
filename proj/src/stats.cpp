#include "mqpc/stats.hpp"

#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "mqpc/errors.hpp"

namespace mqpc {

double chi_square_statistic(const std::vector<long long>& counts) {
    if (counts.size() < 2) throw OutOfDomainError("need at least two bins");
    const long long total = std::accumulate(counts.begin(), counts.end(), 0LL);
    if (total <= 0) throw OutOfDomainError("need at least one observation");
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (long long c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

double chi_square_pvalue(double statistic, int df) {
    if (df < 1) throw OutOfDomainError("degrees of freedom must be positive");
    if (statistic < 0.0) throw OutOfDomainError("chi-square statistic cannot be negative");
    boost::math::chi_squared dist(static_cast<double>(df));
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double chi_square_uniform_pvalue(const std::vector<long long>& counts) {
    return chi_square_pvalue(chi_square_statistic(counts),
                             static_cast<int>(counts.size()) - 1);
}

} // namespace mqpc
