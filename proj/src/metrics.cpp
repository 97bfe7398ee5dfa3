#include "mqpc/metrics.hpp"

#include <numeric>

#include "mqpc/errors.hpp"

namespace mqpc {

Rational::Rational(long long n, long long d) {
    if (d <= 0) throw OutOfDomainError("denominator must be positive");
    if (n < 0) throw OutOfDomainError("numerator must be non-negative");
    const long long g = std::gcd(n, d);
    num = n / g;
    den = d / g;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

EfficiencyReport efficiency_closed_form(int n) {
    if (n < 2) throw OutOfDomainError("a comparison needs at least two users");
    EfficiencyReport report;
    report.x = 2LL * n;
    report.y = 2LL * n;
    report.z = 1;
    report.eta = Rational(report.z, report.x + report.y);
    return report;
}

EfficiencyReport efficiency_from_transcript(const Transcript& transcript) {
    if (!transcript.completed)
        throw IncompleteRunError("efficiency is defined only for completed runs");
    EfficiencyReport report;
    report.x = transcript.qudit_count;
    report.y = transcript.classical_dit_count;
    report.z = 1;
    if (report.x + report.y <= 0)
        throw IncompleteRunError("transcript carries no transmission counts");
    report.eta = Rational(report.z, report.x + report.y);
    return report;
}

} // namespace mqpc
