#pragma once

#include <string>

#include "mqpc/protocol_engine.hpp"

namespace mqpc {

// Exact non-negative fraction kept in lowest terms, so efficiency figures
// compare with == instead of a tolerance.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d); // reduces; throws on d <= 0 or n < 0

    bool operator==(const Rational&) const = default;
    std::string str() const; // "1/16", integers without the denominator
};

// Qudit efficiency of one comparison: compared secrets per transmitted qudit
// plus classical dit.
struct EfficiencyReport {
    long long x = 0; // qudits sent over quantum channels (decoys excluded)
    long long y = 0; // classical dits carrying protocol payload
    long long z = 1; // secrets compared per run
    Rational eta;    // z / (x + y)
};

// Closed form for an n-user run: x = 2n, y = 2n, eta = 1 / (4n).
EfficiencyReport efficiency_closed_form(int n);

// The same figure read off a recorded transcript's counters. Throws
// IncompleteRunError for an aborted run.
EfficiencyReport efficiency_from_transcript(const Transcript& transcript);

} // namespace mqpc
