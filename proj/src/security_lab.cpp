#include "mqpc/security_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mqpc/errors.hpp"
#include "mqpc/stats.hpp"

namespace mqpc {

AttackExperimentResult attack_experiment(const EavesdropperModel& model, int d, int L,
                                         long long trials, const RandomStream& base) {
    validate_model(model, d);
    DimensionParams::for_dimension(d);
    if (L < 1) throw OutOfDomainError("a detection experiment needs at least one decoy");
    if (trials < 1) throw OutOfDomainError("trial count must be positive");

    AttackExperimentResult result;
    result.model = model_name(model);
    result.d = d;
    result.L = L;
    result.trials = trials;
    for (long long t = 0; t < trials; ++t) {
        RandomStream rng = base.split(static_cast<std::uint64_t>(t));
        DressedSequence seq = insert_decoys({}, L, d, rng);
        seq = transmit(std::move(seq), model, d, rng);
        const SecurityCheckReport report = security_check(seq.ledger, seq, rng);
        if (!report.passed) ++result.detections;
    }
    result.empirical =
        static_cast<double>(result.detections) / static_cast<double>(trials);
    try {
        result.theoretical = detection_probability(model, d, L);
    } catch (const NoClosedFormError&) {
        result.theoretical = std::numeric_limits<double>::quiet_NaN();
    }
    const double p = std::isfinite(result.theoretical) ? result.theoretical : result.empirical;
    result.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return result;
}

namespace {

// Probe state conditioned on the data qudit keeping value t, for the input
// |t>|0> expressed in the computational basis. Returned unnormalized.
Eigen::VectorXcd conditioned_probe_t1(const Eigen::MatrixXcd& unitary, int t,
                                      int probe_dim) {
    Eigen::VectorXcd phi(probe_dim);
    for (int e = 0; e < probe_dim; ++e)
        phi(e) = unitary(static_cast<Eigen::Index>(t) * probe_dim + e,
                         static_cast<Eigen::Index>(t) * probe_dim);
    return phi;
}

// Same for the conjugate basis: input column t of the Fourier matrix, output
// projected back onto that same state.
Eigen::VectorXcd conditioned_probe_t2(const Eigen::MatrixXcd& unitary,
                                      const Eigen::MatrixXcd& f, int t, int d,
                                      int probe_dim) {
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * probe_dim);
    for (int alpha = 0; alpha < d; ++alpha)
        in(static_cast<Eigen::Index>(alpha) * probe_dim) = f(alpha, t);
    const Eigen::VectorXcd out = unitary * in;
    Eigen::VectorXcd phi(probe_dim);
    for (int e = 0; e < probe_dim; ++e) {
        cxd amp{0.0, 0.0};
        for (int alpha = 0; alpha < d; ++alpha)
            amp += std::conj(f(alpha, t)) *
                   out(static_cast<Eigen::Index>(alpha) * probe_dim + e);
        phi(e) = amp;
    }
    return phi;
}

Eigen::VectorXcd normalized_or_zero(Eigen::VectorXcd phi) {
    const double nrm = phi.norm();
    if (nrm > kAmplitudeTol) phi /= nrm;
    else phi.setZero();
    return phi;
}

} // namespace

EntangleMeasureVerdict entangle_measure_audit(const Eigen::MatrixXcd& unitary, int d,
                                              int probe_dim, double stealth_tol) {
    DimensionParams::for_dimension(d);
    if (probe_dim < 1) throw InvalidDimensionError("probe dimension must be at least 1");
    const int total = d * probe_dim;
    if (unitary.rows() != total || unitary.cols() != total)
        throw InvalidAttackError("attack operator must act on data x probe");
    if (!is_unitary(unitary)) throw InvalidAttackError("attack operator must be unitary");

    EntangleMeasureVerdict verdict;
    const Eigen::MatrixXcd f = fourier_matrix(d);
    for (int t = 0; t < d; ++t) {
        verdict.max_error_t1 =
            std::max(verdict.max_error_t1,
                     1.0 - conditioned_probe_t1(unitary, t, probe_dim).squaredNorm());
        verdict.max_error_t2 =
            std::max(verdict.max_error_t2,
                     1.0 - conditioned_probe_t2(unitary, f, t, d, probe_dim).squaredNorm());
    }
    verdict.stealthy =
        verdict.max_error_t1 <= stealth_tol && verdict.max_error_t2 <= stealth_tol;
    if (!verdict.stealthy) return verdict;

    // Stealthy: gather all 2d conditioned probes and report how close to
    // identical they stay (minimum pairwise fidelity).
    std::vector<Eigen::VectorXcd> probes;
    probes.reserve(2 * static_cast<std::size_t>(d));
    for (int t = 0; t < d; ++t)
        probes.push_back(normalized_or_zero(conditioned_probe_t1(unitary, t, probe_dim)));
    for (int t = 0; t < d; ++t)
        probes.push_back(
            normalized_or_zero(conditioned_probe_t2(unitary, f, t, d, probe_dim)));
    double min_fid = 1.0;
    for (std::size_t s = 0; s < probes.size(); ++s)
        for (std::size_t t = s + 1; t < probes.size(); ++t)
            min_fid = std::min(min_fid, std::norm(probes[s].dot(probes[t])));
    verdict.probe_independence = min_fid;
    return verdict;
}

TheoremScanSummary theorem_scan(int d, int probe_dim, int count, RandomStream& rng,
                                double stealth_tol, double fidelity_tol) {
    if (count < 0) throw OutOfDomainError("scan count cannot be negative");
    TheoremScanSummary summary;
    for (int i = 0; i < count; ++i) {
        const Eigen::MatrixXcd u = haar_unitary(d * probe_dim, rng);
        const EntangleMeasureVerdict v = entangle_measure_audit(u, d, probe_dim, stealth_tol);
        ++summary.examined;
        if (v.stealthy) {
            ++summary.stealthy_count;
            if (!v.probe_independence || *v.probe_independence < 1.0 - fidelity_tol)
                ++summary.violations;
        }
        summary.closest_stealth_gap =
            std::min(summary.closest_stealth_gap, std::max(v.max_error_t1, v.max_error_t2));
    }
    return summary;
}

Eigen::MatrixXcd haar_unitary(int dim, RandomStream& rng) {
    if (dim < 1) throw InvalidDimensionError("unitary dimension must be at least 1");
    Eigen::MatrixXcd g(dim, dim);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = scale * cxd{rng.normal(), rng.normal()};
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR so the result is Haar-distributed.
    for (int c = 0; c < dim; ++c) {
        const cxd diag = r(c, c);
        const double mag = std::abs(diag);
        q.col(c) *= mag > 0.0 ? diag / mag : cxd{1.0, 0.0};
    }
    return q;
}

Eigen::MatrixXcd controlled_shift_unitary(int d, int probe_dim) {
    DimensionParams::for_dimension(d);
    if (probe_dim < 1) throw InvalidDimensionError("probe dimension must be at least 1");
    const int total = d * probe_dim;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(total, total);
    for (int t = 0; t < d; ++t)
        for (int e = 0; e < probe_dim; ++e)
            u(static_cast<Eigen::Index>(t) * probe_dim + (e + t) % probe_dim,
              static_cast<Eigen::Index>(t) * probe_dim + e) = 1.0;
    return u;
}

Eigen::MatrixXcd probe_only_unitary(int d, int probe_dim, RandomStream& rng) {
    DimensionParams::for_dimension(d);
    const Eigen::MatrixXcd v = haar_unitary(probe_dim, rng);
    const int total = d * probe_dim;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(total, total);
    for (int t = 0; t < d; ++t)
        u.block(static_cast<Eigen::Index>(t) * probe_dim,
                static_cast<Eigen::Index>(t) * probe_dim, probe_dim, probe_dim) = v;
    return u;
}

OtpUniformityReport otp_uniformity_test(int d, int p, int m2, long long samples,
                                        RandomStream& rng) {
    const DimensionParams dims = DimensionParams::for_dimension(d);
    if (p < 0 || p > dims.h) throw OutOfDomainError("comparison input must lie in [0, h]");
    if (m2 < 0 || m2 >= d) throw InvalidDigitError("measurement outcome out of range");
    if (samples < 100LL * d)
        throw OutOfDomainError("need at least 100 samples per outcome bin");

    OtpUniformityReport report;
    report.d = d;
    report.samples = samples;
    report.counts.assign(static_cast<std::size_t>(d), 0);
    const int base = mod_add(m2, p, d);
    for (long long i = 0; i < samples; ++i)
        ++report.counts[static_cast<std::size_t>(mod_add(base, rng.uniform_digit(d), d))];
    report.statistic = chi_square_statistic(report.counts);
    report.p_value = chi_square_pvalue(report.statistic, d - 1);
    return report;
}

bool otp_bijection_holds(int d) {
    const DimensionParams dims = DimensionParams::for_dimension(d);
    std::vector<char> seen(static_cast<std::size_t>(d));
    for (int m2 = 0; m2 < d; ++m2) {
        for (int p = 0; p <= dims.h; ++p) {
            std::fill(seen.begin(), seen.end(), 0);
            for (int k = 0; k < d; ++k) {
                const int r2 = mod_add(mod_add(m2, p, d), k, d);
                if (seen[static_cast<std::size_t>(r2)]) return false;
                seen[static_cast<std::size_t>(r2)] = 1;
            }
        }
    }
    return true;
}

namespace {

void validate_coalition(const Coalition& c, int n) {
    if (c.tp1 && c.tp2)
        throw InvalidAttackError("the trust model forbids the two third parties colluding");
    for (int idx : c.users)
        if (idx < 1 || idx > n) throw OutOfDomainError("coalition user index out of range");
}

} // namespace

CoalitionView view_of(const ProtocolParams& params, const RunResult& run,
                      const Coalition& coalition, bool include_announcement) {
    if (!run.completed())
        throw IncompleteRunError("coalition analysis needs a completed run");
    const int n = params.n;
    validate_coalition(coalition, n);

    CoalitionView view;
    view.d = params.dims.d;
    view.n = n;
    view.h = params.dims.h;
    view.coalition = coalition;
    view.r2 = run.r2;
    view.r = run.r;
    view.k.assign(static_cast<std::size_t>(n), std::nullopt);
    view.m1.assign(static_cast<std::size_t>(n), std::nullopt);
    view.m2.assign(static_cast<std::size_t>(n), std::nullopt);
    view.v.assign(static_cast<std::size_t>(n), std::nullopt);
    view.p.assign(static_cast<std::size_t>(n), std::nullopt);

    if (coalition.tp2) {
        view.q = run.q;
        for (int i = 0; i < n; ++i) {
            view.k[static_cast<std::size_t>(i)] = run.k[static_cast<std::size_t>(i)];
            view.m1[static_cast<std::size_t>(i)] = run.m1[static_cast<std::size_t>(i)];
        }
    }
    if (coalition.tp1)
        for (int i = 0; i < n; ++i)
            view.v[static_cast<std::size_t>(i)] = run.v[static_cast<std::size_t>(i)];
    for (int idx : coalition.users) {
        const auto i = static_cast<std::size_t>(idx - 1);
        view.k[i] = run.k[i];
        view.m2[i] = run.m2[i];
        // The run records only derived values; a user's own input is m2-free:
        // p = r2 - m2 - k mod d, which equals the configured secret.
        view.p[i] = mod_sub(run.r2[i], mod_add(run.m2[i], run.k[i], view.d), view.d);
    }
    if (include_announcement) view.announcement = run.announcement();
    return view;
}

namespace {

// Solve one user's hidden variables for a hypothesized (p, q) and report the
// comparable value M, or nothing when every key choice contradicts the view.
// `spent` advances once per elementary attempt for the budget guard.
std::optional<int> complete_user(const CoalitionView& view, int j, int p, int q,
                                 long long& spent, long long budget) {
    const int d = view.d;
    const auto ji = static_cast<std::size_t>(j);
    const int r2 = view.r2[ji];
    const int r = view.r[ji];
    const int k_lo = view.k[ji] ? *view.k[ji] : 0;
    const int k_hi = view.k[ji] ? *view.k[ji] : d - 1;
    for (int k = k_lo; k <= k_hi; ++k) {
        if (++spent > budget)
            throw EnumerationBudgetError("consistent-set search exceeded its budget");
        const int m1 = mod_sub(mod_add(r, r2, d), mod_add(q, k, d), d);
        if (view.m1[ji] && *view.m1[ji] != m1) continue;
        const int m2 = mod_sub(r2, mod_add(p, k, d), d);
        if (view.m2[ji] && *view.m2[ji] != m2) continue;
        const int v = mod_sub(m2, m1, d);
        if (view.v[ji] && *view.v[ji] != v) continue;
        return (d - 1) - mod_add(r, v, d);
    }
    return std::nullopt;
}

} // namespace

std::vector<int> coalition_consistent_set(const CoalitionView& view, int target,
                                          long long budget) {
    const int d = view.d;
    const int n = view.n;
    const int h = view.h;
    DimensionParams::for_dimension(d);
    validate_coalition(view.coalition, n);
    if (target < 1 || target > n) throw OutOfDomainError("target user index out of range");
    for (int idx : view.coalition.users)
        if (idx == target)
            throw OutOfDomainError("target user must lie outside the coalition");
    if (static_cast<int>(view.r2.size()) != n || static_cast<int>(view.r.size()) != n)
        throw ProtocolDesyncError("view payload lengths do not match the user count");
    for (const auto* rec : {&view.k, &view.m1, &view.m2, &view.v, &view.p})
        if (static_cast<int>(rec->size()) != n)
            throw ProtocolDesyncError("view record lengths do not match the user count");

    std::vector<int> q_candidates;
    if (view.q) {
        if (*view.q < h || *view.q >= d)
            throw OutOfDomainError("recorded shared offset out of range");
        q_candidates.push_back(*view.q);
    } else {
        for (int q = h; q < d; ++q) q_candidates.push_back(q);
    }

    // Users whose input must be guessed alongside the target's.
    std::vector<int> open;
    for (int j = 0; j < n; ++j)
        if (j != target - 1 && !view.p[static_cast<std::size_t>(j)]) open.push_back(j);

    const int tgt = target - 1;
    long long spent = 0;
    std::vector<int> feasible;
    std::vector<int> p_vec(static_cast<std::size_t>(n));
    std::vector<int> m_vec(static_cast<std::size_t>(n));

    for (int cand = 0; cand <= h; ++cand) {
        bool found = false;
        for (int q : q_candidates) {
            std::vector<int> guess(open.size(), 0);
            while (!found) {
                for (int j = 0; j < n; ++j)
                    p_vec[static_cast<std::size_t>(j)] =
                        view.p[static_cast<std::size_t>(j)]
                            ? *view.p[static_cast<std::size_t>(j)]
                            : 0;
                p_vec[static_cast<std::size_t>(tgt)] = cand;
                for (std::size_t g = 0; g < open.size(); ++g)
                    p_vec[static_cast<std::size_t>(open[g])] = guess[g];

                bool ok = true;
                for (int j = 0; j < n && ok; ++j) {
                    const auto m = complete_user(view, j, p_vec[static_cast<std::size_t>(j)],
                                                 q, spent, budget);
                    if (!m) ok = false;
                    else m_vec[static_cast<std::size_t>(j)] = *m;
                }
                if (ok && view.announcement &&
                    !(descending_ordering(m_vec) == *view.announcement))
                    ok = false;
                if (ok) {
                    found = true;
                    break;
                }

                // Advance the guess odometer; a full wrap ends this q.
                std::size_t pos = 0;
                while (pos < guess.size()) {
                    if (++guess[pos] <= h) break;
                    guess[pos] = 0;
                    ++pos;
                }
                if (pos == guess.size()) break;
            }
            if (found) break;
        }
        if (found) feasible.push_back(cand);
    }
    return feasible;
}

std::vector<int> announcement_permitted_set(const Announcement& announcement, int target,
                                            int h) {
    if (h < 0) throw OutOfDomainError("input bound must be non-negative");
    int above = -1;
    const int classes = static_cast<int>(announcement.ordering.size());
    for (int c = 0; c < classes; ++c)
        for (int idx : announcement.ordering[static_cast<std::size_t>(c)])
            if (idx == target) above = c;
    if (above < 0) throw OutOfDomainError("target user not present in the announcement");
    const int below = classes - above - 1;
    std::vector<int> range;
    for (int p = below; p <= h - above; ++p) range.push_back(p);
    return range;
}

} // namespace mqpc
