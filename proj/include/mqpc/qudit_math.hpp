#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mqpc/rng.hpp"

namespace mqpc {

using cxd = std::complex<double>;

// Absolute tolerance for every amplitude-level equality and normalization
// check. Dimensions stay small (d <= ~64), so conditioning is never an issue.
inline constexpr double kAmplitudeTol = 1e-9;

// Protocol dimension d plus the derived input bound h: private integers live
// in {0..h}, h = d/2 for even d and (d-1)/2 for odd d.
struct DimensionParams {
    int d;
    int h;

    static DimensionParams for_dimension(int d);
};

// The two conjugate measurement bases: T1 is computational, T2 is its
// discrete-Fourier image. Measuring a state prepared in one basis with the
// other yields a uniformly random outcome.
enum class BasisChoice { T1, T2 };

// Normalized pure state over an ordered list of qudit subsystems. Amplitudes
// are indexed row-major by the mixed-radix outcome tuple (last subsystem
// varies fastest). Values are immutable after construction; every operation
// returns a new state.
class AmplitudeState {
public:
    AmplitudeState(std::vector<int> subsystem_dims, std::vector<cxd> amplitudes);

    static AmplitudeState basis_state(int value, int d);

    const std::vector<int>& subsystem_dims() const { return dims_; }
    const std::vector<cxd>& amplitudes() const { return amps_; }
    int subsystem_count() const { return static_cast<int>(dims_.size()); }
    std::size_t size() const { return amps_.size(); }

    // Row-major flat index of an outcome tuple.
    std::size_t flatten(std::span<const int> digits) const;
    // Stride of one subsystem in the row-major layout.
    std::size_t stride(int subsystem) const;

    AmplitudeState tensor(const AmplitudeState& other) const;

    double norm_sq() const;

private:
    std::vector<int> dims_;
    std::vector<cxd> amps_;
};

struct MeasurementRecord {
    int outcome;
    std::optional<AmplitudeState> post_state; // nullopt when fully consumed
};

// Modulo-d digit arithmetic, the protocol's masking operators.
int mod_add(int a, int b, int d);
int mod_sub(int a, int b, int d);

// Single-qudit Fourier-basis state: amplitude exp(2*pi*i*alpha*t/d)/sqrt(d)
// on outcome alpha.
AmplitudeState fourier_state(int t, int d);

// Decoy-photon preparation: |value> in T1, F|value> in T2.
AmplitudeState prepared_state(BasisChoice basis, int value, int d);

// Two-qudit maximally entangled state: amplitude exp(2*pi*i*j*u/d)/sqrt(d)
// on the outcome pair (j, j+v mod d), zero elsewhere.
AmplitudeState bell_state(int u, int v, int d);

// d x d discrete Fourier transform matrix F[alpha][t] = w^(alpha*t)/sqrt(d).
Eigen::MatrixXcd fourier_matrix(int d);

// Apply a unitary to the listed subsystems (their combined index is row-major
// in the listed order). The matrix dimension must match the product of the
// listed subsystem dimensions.
AmplitudeState apply_unitary(const AmplitudeState& state, const Eigen::MatrixXcd& u,
                             std::span<const int> subsystems);

AmplitudeState apply_fourier(const AmplitudeState& state, int subsystem, bool inverse);

// Exact Born-rule outcome distribution for measuring one subsystem in the
// chosen basis.
std::vector<double> outcome_probabilities(const AmplitudeState& state, int subsystem,
                                          BasisChoice basis);

// Project one subsystem onto a basis value. Returns the outcome probability
// and the renormalized conditional state of the remaining subsystems
// (nullopt when no subsystems remain or the probability vanishes).
std::pair<double, std::optional<AmplitudeState>> project(const AmplitudeState& state,
                                                         int subsystem, BasisChoice basis,
                                                         int value);

// Sampled projective measurement of one subsystem. A T2 measurement is the
// inverse Fourier transform on that subsystem followed by a computational
// measurement. The measured subsystem is removed from the post state.
MeasurementRecord measure(const AmplitudeState& state, int subsystem, BasisChoice basis,
                          RandomStream& rng);

// Shortcut backend for T1 measurements of both halves of bell_state(u, v, d):
// m1 uniform, m2 = m1 + v mod d. Agrees in distribution with two sequential
// `measure` calls on the exact state (u only enters phases).
std::pair<int, int> measure_pair_computational(int u, int v, int d, RandomStream& rng);

cxd inner_product(const AmplitudeState& a, const AmplitudeState& b);
double fidelity(const AmplitudeState& a, const AmplitudeState& b);

} // namespace mqpc
