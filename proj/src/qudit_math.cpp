#include "mqpc/qudit_math.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mqpc/errors.hpp"

namespace mqpc {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void check_dimension(int d) {
    if (d < 2) throw InvalidDimensionError("dimension must be >= 2, got " + std::to_string(d));
}

void check_digit(int x, int d, const char* name) {
    check_dimension(d);
    if (x < 0 || x >= d)
        throw InvalidDigitError(std::string(name) + " = " + std::to_string(x) +
                                " out of range [0, " + std::to_string(d) + ")");
}

cxd unit_phase(double turns_numerator, int d) {
    const double angle = kTwoPi * turns_numerator / static_cast<double>(d);
    return {std::cos(angle), std::sin(angle)};
}

std::size_t product_of(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (const int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

} // namespace

DimensionParams DimensionParams::for_dimension(int d) {
    check_dimension(d);
    return {d, d % 2 == 0 ? d / 2 : (d - 1) / 2};
}

AmplitudeState::AmplitudeState(std::vector<int> subsystem_dims, std::vector<cxd> amplitudes)
    : dims_(std::move(subsystem_dims)), amps_(std::move(amplitudes)) {
    for (const int d : dims_) check_dimension(d);
    if (amps_.size() != product_of(dims_))
        throw InvalidDimensionError("amplitude count " + std::to_string(amps_.size()) +
                                    " does not match outcome space size " +
                                    std::to_string(product_of(dims_)));
    const double n2 = norm_sq();
    if (std::abs(n2 - 1.0) > kAmplitudeTol)
        throw NormalizationError("state norm^2 = " + std::to_string(n2) + " is not 1");
}

AmplitudeState AmplitudeState::basis_state(int value, int d) {
    check_digit(value, d, "value");
    std::vector<cxd> amps(static_cast<std::size_t>(d), cxd{0.0, 0.0});
    amps[static_cast<std::size_t>(value)] = cxd{1.0, 0.0};
    return AmplitudeState({d}, std::move(amps));
}

std::size_t AmplitudeState::flatten(std::span<const int> digits) const {
    std::size_t idx = 0;
    for (std::size_t s = 0; s < dims_.size(); ++s)
        idx = idx * static_cast<std::size_t>(dims_[s]) + static_cast<std::size_t>(digits[s]);
    return idx;
}

std::size_t AmplitudeState::stride(int subsystem) const {
    std::size_t st = 1;
    for (std::size_t s = static_cast<std::size_t>(subsystem) + 1; s < dims_.size(); ++s)
        st *= static_cast<std::size_t>(dims_[s]);
    return st;
}

AmplitudeState AmplitudeState::tensor(const AmplitudeState& other) const {
    std::vector<int> dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    std::vector<cxd> amps(amps_.size() * other.amps_.size());
    std::size_t k = 0;
    for (const cxd& a : amps_)
        for (const cxd& b : other.amps_) amps[k++] = a * b;
    return AmplitudeState(std::move(dims), std::move(amps));
}

double AmplitudeState::norm_sq() const {
    double n = 0.0;
    for (const cxd& a : amps_) n += std::norm(a);
    return n;
}

int mod_add(int a, int b, int d) {
    check_digit(a, d, "a");
    check_digit(b, d, "b");
    return (a + b) % d;
}

int mod_sub(int a, int b, int d) {
    check_digit(a, d, "a");
    check_digit(b, d, "b");
    return (a - b + d) % d;
}

AmplitudeState fourier_state(int t, int d) {
    check_digit(t, d, "t");
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<cxd> amps(static_cast<std::size_t>(d));
    for (int alpha = 0; alpha < d; ++alpha)
        amps[static_cast<std::size_t>(alpha)] =
            scale * unit_phase(static_cast<double>(alpha) * t, d);
    return AmplitudeState({d}, std::move(amps));
}

AmplitudeState prepared_state(BasisChoice basis, int value, int d) {
    return basis == BasisChoice::T1 ? AmplitudeState::basis_state(value, d)
                                    : fourier_state(value, d);
}

AmplitudeState bell_state(int u, int v, int d) {
    check_digit(u, d, "u");
    check_digit(v, d, "v");
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<cxd> amps(static_cast<std::size_t>(d) * static_cast<std::size_t>(d),
                          cxd{0.0, 0.0});
    for (int j = 0; j < d; ++j) {
        const std::size_t idx =
            static_cast<std::size_t>(j) * static_cast<std::size_t>(d) +
            static_cast<std::size_t>((j + v) % d);
        amps[idx] = scale * unit_phase(static_cast<double>(j) * u, d);
    }
    return AmplitudeState({d, d}, std::move(amps));
}

Eigen::MatrixXcd fourier_matrix(int d) {
    check_dimension(d);
    Eigen::MatrixXcd f(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int alpha = 0; alpha < d; ++alpha)
        for (int t = 0; t < d; ++t)
            f(alpha, t) = scale * unit_phase(static_cast<double>(alpha) * t, d);
    return f;
}

AmplitudeState apply_unitary(const AmplitudeState& state, const Eigen::MatrixXcd& u,
                             std::span<const int> subsystems) {
    const auto& dims = state.subsystem_dims();
    std::size_t block = 1;
    for (const int s : subsystems) {
        if (s < 0 || s >= state.subsystem_count())
            throw InvalidDimensionError("subsystem index out of range");
        block *= static_cast<std::size_t>(dims[static_cast<std::size_t>(s)]);
    }
    if (static_cast<std::size_t>(u.rows()) != block ||
        static_cast<std::size_t>(u.cols()) != block)
        throw InvalidDimensionError("operator dimension does not match target subsystems");

    // Flat-index offsets of every combined target value, relative to a base
    // index whose target digits are all zero.
    std::vector<std::size_t> strides;
    strides.reserve(subsystems.size());
    for (const int s : subsystems) strides.push_back(state.stride(s));
    std::vector<std::size_t> offsets(block, 0);
    for (std::size_t j = 0; j < block; ++j) {
        std::size_t rest = j;
        std::size_t off = 0;
        for (std::size_t t = subsystems.size(); t-- > 0;) {
            const auto dim_t =
                static_cast<std::size_t>(dims[static_cast<std::size_t>(subsystems[t])]);
            off += (rest % dim_t) * strides[t];
            rest /= dim_t;
        }
        offsets[j] = off;
    }

    const auto& in = state.amplitudes();
    std::vector<cxd> out(in.size());
    std::vector<cxd> column(block);
    for (std::size_t idx = 0; idx < in.size(); ++idx) {
        // Base indices have all target digits equal to zero.
        bool base = true;
        for (std::size_t t = 0; t < subsystems.size(); ++t) {
            const auto dim_t =
                static_cast<std::size_t>(dims[static_cast<std::size_t>(subsystems[t])]);
            if ((idx / strides[t]) % dim_t != 0) {
                base = false;
                break;
            }
        }
        if (!base) continue;
        for (std::size_t j = 0; j < block; ++j) column[j] = in[idx + offsets[j]];
        for (std::size_t i = 0; i < block; ++i) {
            cxd acc{0.0, 0.0};
            for (std::size_t j = 0; j < block; ++j) acc += u(static_cast<Eigen::Index>(i),
                                                             static_cast<Eigen::Index>(j)) *
                                                           column[j];
            out[idx + offsets[i]] = acc;
        }
    }
    return AmplitudeState(dims, std::move(out));
}

AmplitudeState apply_fourier(const AmplitudeState& state, int subsystem, bool inverse) {
    const int d = state.subsystem_dims()[static_cast<std::size_t>(subsystem)];
    Eigen::MatrixXcd f = fourier_matrix(d);
    if (inverse) f = f.adjoint().eval();
    const int subs[1] = {subsystem};
    return apply_unitary(state, f, subs);
}

std::vector<double> outcome_probabilities(const AmplitudeState& state, int subsystem,
                                          BasisChoice basis) {
    if (subsystem < 0 || subsystem >= state.subsystem_count())
        throw InvalidDimensionError("subsystem index out of range");
    const AmplitudeState working =
        basis == BasisChoice::T2 ? apply_fourier(state, subsystem, /*inverse=*/true) : state;
    const int d = working.subsystem_dims()[static_cast<std::size_t>(subsystem)];
    const std::size_t st = working.stride(subsystem);
    std::vector<double> probs(static_cast<std::size_t>(d), 0.0);
    const auto& amps = working.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        const auto digit = (idx / st) % static_cast<std::size_t>(d);
        probs[digit] += std::norm(amps[idx]);
    }
    return probs;
}

std::pair<double, std::optional<AmplitudeState>> project(const AmplitudeState& state,
                                                         int subsystem, BasisChoice basis,
                                                         int value) {
    const int d = state.subsystem_dims()[static_cast<std::size_t>(subsystem)];
    check_digit(value, d, "value");
    const AmplitudeState working =
        basis == BasisChoice::T2 ? apply_fourier(state, subsystem, /*inverse=*/true) : state;
    const std::size_t st = working.stride(subsystem);
    const auto& amps = working.amplitudes();

    double prob = 0.0;
    for (std::size_t idx = 0; idx < amps.size(); ++idx)
        if ((idx / st) % static_cast<std::size_t>(d) == static_cast<std::size_t>(value))
            prob += std::norm(amps[idx]);

    if (prob <= kAmplitudeTol * kAmplitudeTol) return {0.0, std::nullopt};
    if (working.subsystem_count() == 1) return {prob, std::nullopt};

    std::vector<int> rest_dims;
    for (int s = 0; s < working.subsystem_count(); ++s)
        if (s != subsystem) rest_dims.push_back(working.subsystem_dims()[static_cast<std::size_t>(s)]);

    std::vector<cxd> rest(amps.size() / static_cast<std::size_t>(d));
    const double scale = 1.0 / std::sqrt(prob);
    std::size_t k = 0;
    for (std::size_t idx = 0; idx < amps.size(); ++idx)
        if ((idx / st) % static_cast<std::size_t>(d) == static_cast<std::size_t>(value))
            rest[k++] = amps[idx] * scale;
    return {prob, AmplitudeState(std::move(rest_dims), std::move(rest))};
}

MeasurementRecord measure(const AmplitudeState& state, int subsystem, BasisChoice basis,
                          RandomStream& rng) {
    if (std::abs(state.norm_sq() - 1.0) > kAmplitudeTol)
        throw NormalizationError("cannot measure a non-normalized state");
    const std::vector<double> probs = outcome_probabilities(state, subsystem, basis);

    const double r = rng.next_double();
    double cum = 0.0;
    int outcome = -1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (r < cum) {
            outcome = static_cast<int>(i);
            break;
        }
    }
    if (outcome < 0) {
        // r landed in the rounding slack past the final cumulative bin; take
        // the last outcome with nonzero probability.
        for (std::size_t i = probs.size(); i-- > 0;)
            if (probs[i] > 0.0) {
                outcome = static_cast<int>(i);
                break;
            }
    }

    auto [prob, post] = project(state, subsystem, basis, outcome);
    (void)prob;
    return {outcome, std::move(post)};
}

std::pair<int, int> measure_pair_computational(int u, int v, int d, RandomStream& rng) {
    check_digit(u, d, "u");
    check_digit(v, d, "v");
    const int m1 = rng.uniform_digit(d);
    return {m1, mod_add(m1, v, d)};
}

cxd inner_product(const AmplitudeState& a, const AmplitudeState& b) {
    if (a.subsystem_dims() != b.subsystem_dims())
        throw InvalidDimensionError("inner product of states over different outcome spaces");
    cxd acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    return acc;
}

double fidelity(const AmplitudeState& a, const AmplitudeState& b) {
    return std::norm(inner_product(a, b));
}

} // namespace mqpc
