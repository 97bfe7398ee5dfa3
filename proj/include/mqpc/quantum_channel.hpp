#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mqpc/qudit_math.hpp"
#include "mqpc/rng.hpp"

namespace mqpc {

// Shared register holding the joint state of one or more possibly entangled
// particles. Particles are addressed by stable ids that survive measurements
// of siblings; measuring a particle removes its subsystem and collapses the
// rest. One register per independent state (a decoy, a Bell pair plus any
// attached eavesdropper probes).
class QuditRegister {
public:
    explicit QuditRegister(AmplitudeState state);

    static std::shared_ptr<QuditRegister> make(AmplitudeState state) {
        return std::make_shared<QuditRegister>(std::move(state));
    }

    int dim_of(int id) const;
    bool alive(int id) const;
    const AmplitudeState& state() const { return state_; }

    int measure(int id, BasisChoice basis, RandomStream& rng);
    // Tensor a fresh single-particle state onto the register; returns its id.
    int attach(const AmplitudeState& extra);
    void apply(const Eigen::MatrixXcd& u, std::span<const int> ids);

    // Drop a particle that leaves the simulation (e.g. an eavesdropper keeps
    // it and never touches it again). Realized as an unrecorded computational
    // measurement, which leaves the distribution of every remaining
    // observable unchanged because the dropped particle is never acted on
    // afterwards.
    void detach(int id, RandomStream& rng);

private:
    int subsystem_of(int id) const;

    AmplitudeState state_;
    std::vector<int> live_; // id -> subsystem index, -1 once consumed
};

// One in-flight particle: either an owned/shared exact state, or a symbolic
// untouched Bell half used by the bulk (honest-channel) protocol backend.
struct QuditRef {
    std::shared_ptr<QuditRegister> reg;
    int id = 0;
};

struct BellHalfTag {
    int pair_index = 0;
    int half = 0; // 0 = first particle, 1 = second
};

using SlotPayload = std::variant<QuditRef, BellHalfTag>;

SlotPayload make_qudit(AmplitudeState state);

// Sender-side ground truth for one decoy photon.
struct DecoySpec {
    BasisChoice basis;
    int value;
    int position;
};

// Carrier qudits interleaved with decoy photons. The ledger is private to
// the sender; positions listed in it are decoy slots, everything else is a
// carrier in original order.
struct DressedSequence {
    std::vector<SlotPayload> slots;
    std::vector<DecoySpec> ledger;

    int carrier_count() const { return static_cast<int>(slots.size() - ledger.size()); }
};

struct Honest {};

struct InterceptResend {
    double attack_probability = 1.0;
};

struct MeasureResend {
    double attack_probability = 1.0;
};

struct EntangleMeasure {
    Eigen::MatrixXcd unitary; // acts on (particle x probe), row-major index s*probe_dim + e
    int probe_dim = 2;
    double attack_probability = 1.0;
};

using EavesdropperModel = std::variant<Honest, InterceptResend, MeasureResend, EntangleMeasure>;

std::string model_name(const EavesdropperModel& model);
bool is_unitary(const Eigen::MatrixXcd& u, double tol = kAmplitudeTol);
// Throws InvalidAttackError when an EntangleMeasure operator is not unitary
// on dimension d * probe_dim.
void validate_model(const EavesdropperModel& model, int d);

struct SecurityCheckReport {
    int checked = 0;
    int mismatches = 0;
    bool passed = true;
};

// Dress carriers with L decoy photons at uniformly random distinct positions,
// each prepared with an independent uniform (basis, value).
DressedSequence insert_decoys(std::vector<SlotPayload> carriers, int L, int d,
                              RandomStream& rng);

// Pass every slot through the eavesdropper model. Honest is the identity;
// intercept-resend swaps in fresh random states and keeps the originals;
// measure-resend measures in a random basis and forwards the collapsed state;
// entangle-measure couples each slot to a fresh probe via the attack unitary
// (the probe stays in the attacker's register, entangled but never measured).
DressedSequence transmit(DressedSequence seq, const EavesdropperModel& model, int d,
                         RandomStream& rng);

// Measure every ledgered decoy in its preparation basis and compare with the
// recorded value. Collapses the decoys; carriers are untouched.
SecurityCheckReport security_check(const std::vector<DecoySpec>& ledger,
                                   DressedSequence& received, RandomStream& rng);

// Carriers in original order, once the check has consumed the decoys.
std::vector<SlotPayload> strip_decoys(const DressedSequence& seq,
                                      const std::vector<DecoySpec>& ledger);

// Closed-form aggregate detection probability over L decoys:
// 1 - (1/d)^L for intercept-resend, 1 - ((d+1)/(2d))^L for measure-resend.
// Honest and entangle-measure have no closed form.
double detection_probability(const EavesdropperModel& model, int d, int L);

} // namespace mqpc
