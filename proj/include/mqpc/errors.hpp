#pragma once

#include <stdexcept>
#include <string>

namespace mqpc {

// Distinct error types so callers (and tests) can tell failure modes apart.
// A failed eavesdropping check is NOT an error; it is a protocol outcome
// (see protocol_engine::Aborted).

struct InvalidDimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidDigitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NormalizationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidAttackError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parties disagree about message shape (lengths, positions, already-consumed
// qudits). Indicates a broken simulation setup, not an in-protocol event.
struct ProtocolDesyncError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfDomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NoClosedFormError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EnumerationBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompleteRunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace mqpc
