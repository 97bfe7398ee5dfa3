#include "mqpc/quantum_channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "mqpc/errors.hpp"

namespace mqpc {

QuditRegister::QuditRegister(AmplitudeState state) : state_(std::move(state)) {
    live_.resize(static_cast<std::size_t>(state_.subsystem_count()));
    for (std::size_t i = 0; i < live_.size(); ++i) live_[i] = static_cast<int>(i);
}

int QuditRegister::subsystem_of(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= live_.size() || live_[static_cast<std::size_t>(id)] < 0)
        throw ProtocolDesyncError("qudit " + std::to_string(id) + " already consumed or unknown");
    return live_[static_cast<std::size_t>(id)];
}

int QuditRegister::dim_of(int id) const {
    return state_.subsystem_dims()[static_cast<std::size_t>(subsystem_of(id))];
}

bool QuditRegister::alive(int id) const {
    return id >= 0 && static_cast<std::size_t>(id) < live_.size() &&
           live_[static_cast<std::size_t>(id)] >= 0;
}

int QuditRegister::measure(int id, BasisChoice basis, RandomStream& rng) {
    const int sub = subsystem_of(id);
    MeasurementRecord rec = mqpc::measure(state_, sub, basis, rng);
    if (rec.post_state) {
        state_ = std::move(*rec.post_state);
    } else {
        // Fully consumed: a zero-subsystem scalar keeps the register valid.
        state_ = AmplitudeState({}, {cxd{1.0, 0.0}});
    }
    live_[static_cast<std::size_t>(id)] = -1;
    for (auto& s : live_)
        if (s > sub) --s;
    return rec.outcome;
}

int QuditRegister::attach(const AmplitudeState& extra) {
    if (extra.subsystem_count() != 1)
        throw InvalidDimensionError("attach expects a single-particle state");
    state_ = state_.tensor(extra);
    live_.push_back(state_.subsystem_count() - 1);
    return static_cast<int>(live_.size()) - 1;
}

void QuditRegister::apply(const Eigen::MatrixXcd& u, std::span<const int> ids) {
    std::vector<int> subs;
    subs.reserve(ids.size());
    for (const int id : ids) subs.push_back(subsystem_of(id));
    state_ = apply_unitary(state_, u, subs);
}

void QuditRegister::detach(int id, RandomStream& rng) {
    measure(id, BasisChoice::T1, rng);
}

SlotPayload make_qudit(AmplitudeState state) {
    return QuditRef{QuditRegister::make(std::move(state)), 0};
}

std::string model_name(const EavesdropperModel& model) {
    if (std::holds_alternative<Honest>(model)) return "honest";
    if (std::holds_alternative<InterceptResend>(model)) return "intercept_resend";
    if (std::holds_alternative<MeasureResend>(model)) return "measure_resend";
    return "entangle_measure";
}

bool is_unitary(const Eigen::MatrixXcd& u, double tol) {
    if (u.rows() != u.cols()) return false;
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return (gram - eye).cwiseAbs().maxCoeff() <= tol;
}

void validate_model(const EavesdropperModel& model, int d) {
    if (const auto* em = std::get_if<EntangleMeasure>(&model)) {
        if (em->probe_dim < 2) throw InvalidAttackError("probe dimension must be >= 2");
        const auto expected = static_cast<Eigen::Index>(d) * em->probe_dim;
        if (em->unitary.rows() != expected || em->unitary.cols() != expected)
            throw InvalidAttackError("attack operator must act on dimension d * probe_dim = " +
                                     std::to_string(expected));
        if (!is_unitary(em->unitary))
            throw InvalidAttackError("attack operator is not unitary within tolerance");
    }
}

DressedSequence insert_decoys(std::vector<SlotPayload> carriers, int L, int d,
                              RandomStream& rng) {
    if (L < 0) throw OutOfDomainError("decoy count must be >= 0");
    const int total = static_cast<int>(carriers.size()) + L;

    // Uniform random L-subset of positions via selection sampling; emits the
    // chosen positions in ascending order.
    std::vector<int> positions;
    positions.reserve(static_cast<std::size_t>(L));
    int needed = L;
    for (int pos = 0; pos < total && needed > 0; ++pos) {
        const int remaining = total - pos;
        if (rng.next_double() * remaining < needed) {
            positions.push_back(pos);
            --needed;
        }
    }

    DressedSequence seq;
    seq.slots.reserve(static_cast<std::size_t>(total));
    seq.ledger.reserve(static_cast<std::size_t>(L));
    std::size_t next_decoy = 0;
    std::size_t next_carrier = 0;
    for (int pos = 0; pos < total; ++pos) {
        if (next_decoy < positions.size() && positions[next_decoy] == pos) {
            const BasisChoice basis =
                rng.uniform_digit(2) == 0 ? BasisChoice::T1 : BasisChoice::T2;
            const int value = rng.uniform_digit(d);
            seq.slots.push_back(make_qudit(prepared_state(basis, value, d)));
            seq.ledger.push_back({basis, value, pos});
            ++next_decoy;
        } else {
            seq.slots.push_back(std::move(carriers[next_carrier++]));
        }
    }
    return seq;
}

namespace {

QuditRef& exact_payload(SlotPayload& slot) {
    if (auto* ref = std::get_if<QuditRef>(&slot)) return *ref;
    throw ProtocolDesyncError("attack models require exact carrier states");
}

void intercept_resend_slot(SlotPayload& slot, int d, RandomStream& rng) {
    QuditRef& ref = exact_payload(slot);
    // Eve keeps the original unmeasured; for everything she leaves behind
    // that is equivalent to dropping the particle from the simulation.
    ref.reg->detach(ref.id, rng);
    const BasisChoice basis = rng.uniform_digit(2) == 0 ? BasisChoice::T1 : BasisChoice::T2;
    const int value = rng.uniform_digit(d);
    slot = make_qudit(prepared_state(basis, value, d));
}

void measure_resend_slot(SlotPayload& slot, RandomStream& rng) {
    QuditRef& ref = exact_payload(slot);
    const int d = ref.reg->dim_of(ref.id);
    const BasisChoice basis = rng.uniform_digit(2) == 0 ? BasisChoice::T1 : BasisChoice::T2;
    const int outcome = ref.reg->measure(ref.id, basis, rng);
    slot = make_qudit(prepared_state(basis, outcome, d));
}

void entangle_measure_slot(SlotPayload& slot, const EntangleMeasure& em) {
    QuditRef& ref = exact_payload(slot);
    const int probe_id = ref.reg->attach(AmplitudeState::basis_state(0, em.probe_dim));
    const int ids[2] = {ref.id, probe_id};
    ref.reg->apply(em.unitary, ids);
    // The probe stays attached to the register: retained by the attacker,
    // never measured in-protocol.
}

} // namespace

DressedSequence transmit(DressedSequence seq, const EavesdropperModel& model, int d,
                         RandomStream& rng) {
    validate_model(model, d);
    if (std::holds_alternative<Honest>(model)) return seq;

    for (auto& slot : seq.slots) {
        if (const auto* ir = std::get_if<InterceptResend>(&model)) {
            if (ir->attack_probability < 1.0 && !rng.bernoulli(ir->attack_probability)) continue;
            intercept_resend_slot(slot, d, rng);
        } else if (const auto* mr = std::get_if<MeasureResend>(&model)) {
            if (mr->attack_probability < 1.0 && !rng.bernoulli(mr->attack_probability)) continue;
            measure_resend_slot(slot, rng);
        } else if (const auto* em = std::get_if<EntangleMeasure>(&model)) {
            if (em->attack_probability < 1.0 && !rng.bernoulli(em->attack_probability)) continue;
            entangle_measure_slot(slot, *em);
        }
    }
    return seq;
}

SecurityCheckReport security_check(const std::vector<DecoySpec>& ledger,
                                   DressedSequence& received, RandomStream& rng) {
    SecurityCheckReport report;
    for (const DecoySpec& spec : ledger) {
        if (spec.position < 0 ||
            static_cast<std::size_t>(spec.position) >= received.slots.size())
            throw ProtocolDesyncError("decoy position " + std::to_string(spec.position) +
                                      " out of range");
        auto* ref = std::get_if<QuditRef>(&received.slots[static_cast<std::size_t>(spec.position)]);
        if (ref == nullptr || !ref->reg->alive(ref->id))
            throw ProtocolDesyncError("ledger points at a slot without a measurable decoy");
        const int outcome = ref->reg->measure(ref->id, spec.basis, rng);
        ++report.checked;
        if (outcome != spec.value) ++report.mismatches;
    }
    report.passed = report.mismatches == 0;
    return report;
}

std::vector<SlotPayload> strip_decoys(const DressedSequence& seq,
                                      const std::vector<DecoySpec>& ledger) {
    std::vector<bool> is_decoy(seq.slots.size(), false);
    for (const DecoySpec& spec : ledger) {
        if (spec.position < 0 || static_cast<std::size_t>(spec.position) >= seq.slots.size())
            throw ProtocolDesyncError("decoy position out of range");
        is_decoy[static_cast<std::size_t>(spec.position)] = true;
    }
    std::vector<SlotPayload> carriers;
    carriers.reserve(seq.slots.size() - ledger.size());
    for (std::size_t pos = 0; pos < seq.slots.size(); ++pos)
        if (!is_decoy[pos]) carriers.push_back(seq.slots[pos]);
    return carriers;
}

double detection_probability(const EavesdropperModel& model, int d, int L) {
    if (d < 2) throw InvalidDimensionError("dimension must be >= 2");
    if (L < 0) throw OutOfDomainError("decoy count must be >= 0");
    if (std::holds_alternative<InterceptResend>(model))
        return 1.0 - std::pow(1.0 / d, L);
    if (std::holds_alternative<MeasureResend>(model))
        return 1.0 - std::pow((d + 1.0) / (2.0 * d), L);
    throw NoClosedFormError("no closed-form detection probability for model '" +
                            model_name(model) + "'");
}

} // namespace mqpc
