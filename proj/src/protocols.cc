#include "fockherald/protocols.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fockherald/numerics.h"
#include "fockherald/squeezer.h"

namespace fockherald {

namespace {

constexpr double kNlsClaimedProbability = 0.0425;

void check_gamma(double gamma, const char *name) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0,1), got " + std::to_string(gamma));
    }
}

PureState phase_fixed(const PureState &state) {
    if (state.empty()) {
        return state;
    }
    Amplitude first = state.terms().begin()->second;
    PureState rotated = state.scaled(std::conj(first) / std::abs(first));
    // Rounding in the rotation leaves ~1e-17 of imaginary part; pin it to zero.
    PureState::TermMap terms = rotated.terms();
    terms.begin()->second = std::abs(first);
    return PureState::from_terms(
        rotated.modes(), rotated.cutoff(), std::move(terms), rotated.leaked_norm(), rotated.drop_threshold());
}

bool satisfies_teleport_constraint(const GateParams &params) {
    if (!(params.gamma2 > 0.0 && params.gamma2 < 0.5)) {
        return false;
    }
    double expected = params.gamma2 / ((1 - 2 * params.gamma2) * (1 - 2 * params.gamma2));
    return std::abs(expected - params.gamma1) <= 1e-12 * std::max(1.0, expected);
}

/// c0|0> + c1|1> + c2|2> on a single unpolarized mode.
PureState number_superposition(const ModeSet &modes, std::span<const Amplitude> coefficients, int cutoff) {
    PureState::TermMap terms;
    for (std::size_t n = 0; n < coefficients.size(); ++n) {
        terms[{static_cast<int>(n)}] += coefficients[n];
    }
    return PureState::from_terms(modes, cutoff, std::move(terms));
}

/// c0|0,0> + c1|1_H,0_V> + c2|0_H,1_V> on one polarized path.
PureState polarization_superposition(int path, const InputCoefficients &c, int cutoff) {
    ModeSet modes({h_mode(path), v_mode(path)});
    PureState::TermMap terms;
    terms[{0, 0}] += c.c0;
    terms[{1, 0}] += c.c1;
    terms[{0, 1}] += c.c2.value_or(Amplitude{});
    return PureState::from_terms(modes, cutoff, std::move(terms));
}

ProtocolResult finish(
    Protocol protocol,
    const GateParams &params,
    const PureState &circuit_state,
    const DetectionPattern &herald,
    PureState target,
    std::optional<double> claimed) {
    std::vector<ModeLabel> detected;
    for (const auto &[label, count] : herald.assignments) {
        detected.push_back(label);
    }
    HeraldOutcome outcome = project(circuit_state, herald);

    ProtocolResult result;
    result.protocol = protocol;
    result.params = params;
    result.output_state = phase_fixed(outcome.conditional_state);
    result.target_state = std::move(target);
    result.success_probability = outcome.probability;
    result.claimed_probability = claimed;
    result.fidelity =
        outcome.probability > kZeroNormThreshold ? fidelity(result.target_state, result.output_state) : 0.0;
    result.leaked_norm = circuit_state.leaked_norm();
    result.herald_distribution = outcome_distribution(circuit_state, detected);
    return result;
}

ProtocolResult run_unpolarized_circuit(
    Protocol protocol, const InputCoefficients &c, const GateParams &params, int cutoff) {
    params.validate();
    auto ingested = normalize_on_ingest(c).coefficients;

    std::vector<Amplitude> amplitudes{ingested.c0, ingested.c1};
    if (ingested.c2) amplitudes.push_back(*ingested.c2);
    PureState input = number_superposition(ModeSet({path_mode(1)}), amplitudes, cutoff);
    PureState ancilla = PureState::basis(ModeSet({path_mode(2), path_mode(3)}), {0, 0}, cutoff);

    PureState state = tensor(input, ancilla);
    state = apply_two_mode_squeezer(state, {path_mode(2), path_mode(3), params.gamma1});
    state = apply_two_mode_squeezer(state, {path_mode(1), path_mode(2), params.gamma2});

    DetectionPattern herald{{{path_mode(1), 1}, {path_mode(2), 1}}};

    // NLS flips the sign of the two-photon amplitude; teleportation copies.
    std::vector<Amplitude> target_amplitudes{ingested.c0, ingested.c1};
    if (protocol == Protocol::kNls) {
        target_amplitudes.push_back(-ingested.c2.value_or(Amplitude{}));
    }
    PureState target = number_superposition(ModeSet({path_mode(3)}), target_amplitudes, cutoff);

    std::optional<double> claimed;
    if (protocol == Protocol::kNls) {
        GateParams solved = solve_nls_params();
        if (std::abs(solved.gamma1 - params.gamma1) < 1e-9 && std::abs(solved.gamma2 - params.gamma2) < 1e-9) {
            claimed = kNlsClaimedProbability;
        }
    } else if (satisfies_teleport_constraint(params)) {
        claimed = 2 * (1 - params.gamma1) * (1 - params.gamma2) * params.gamma2;
    }
    return finish(protocol, params, state, herald, std::move(target), claimed);
}

}  // namespace

std::string_view protocol_name(Protocol protocol) {
    switch (protocol) {
        case Protocol::kNls:
            return "nls";
        case Protocol::kTeleportQubit:
            return "teleport-qubit";
        case Protocol::kTeleportQutrit:
            return "teleport-qutrit";
    }
    return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
    for (Protocol p : {Protocol::kNls, Protocol::kTeleportQubit, Protocol::kTeleportQutrit}) {
        if (protocol_name(p) == name) return p;
    }
    return std::nullopt;
}

double InputCoefficients::norm_squared() const {
    return std::norm(c0) + std::norm(c1) + (c2 ? std::norm(*c2) : 0.0);
}

IngestedCoefficients normalize_on_ingest(const InputCoefficients &coefficients) {
    double norm = std::sqrt(coefficients.norm_squared());
    if (!std::isfinite(norm)) {
        throw std::invalid_argument("input coefficients must be finite");
    }
    if (!(norm > kZeroNormThreshold)) {
        throw std::invalid_argument("input coefficients must not all be zero");
    }
    IngestedCoefficients out{coefficients, std::abs(norm - 1.0) > kNumericalTolerance, norm};
    if (norm != 1.0) {
        out.coefficients.c0 /= norm;
        out.coefficients.c1 /= norm;
        if (out.coefficients.c2) *out.coefficients.c2 /= norm;
    }
    return out;
}

void GateParams::validate() const {
    check_gamma(gamma1, "gamma1");
    check_gamma(gamma2, "gamma2");
}

NlsResiduals nls_residuals(const GateParams &params) {
    double s1 = std::sqrt(params.gamma1);
    double s2 = std::sqrt(params.gamma2);
    return {
        s2 - s1 * (1 - 2 * params.gamma2),
        s2 + params.gamma1 * s2 * (3 * params.gamma2 - 2),
    };
}

GateParams solve_nls_params() {
    // With gamma1 = g / (1 - 2g)^2 the second equality reduces to
    // gamma1 (2 - 3g) = 1, which changes sign once on [0, 0.25].
    auto balance = [](double g) {
        double d = 1 - 2 * g;
        return g * (2 - 3 * g) / (d * d) - 1.0;
    };
    double gamma2 = bisect_root(balance, 0.0, kTeleportGamma2Max).root;
    GateParams params{solve_teleport_constraint(gamma2), gamma2};
    NlsResiduals r = nls_residuals(params);
    if (!(std::abs(r.vacuum_vs_one) < 1e-12 && std::abs(r.vacuum_vs_two) < 1e-12)) {
        throw std::runtime_error("NLS parameter solve did not converge");
    }
    return params;
}

double solve_teleport_constraint(double gamma2) {
    if (!(gamma2 > 0.0 && gamma2 < 0.5)) {
        throw std::invalid_argument("gamma2 must lie in (0,0.5)");
    }
    double d = 1 - 2 * gamma2;
    double gamma1 = gamma2 / (d * d);
    if (!(gamma1 < 1.0)) {
        throw std::invalid_argument(
            "gamma2 = " + std::to_string(gamma2) + " requires gamma1 = " + std::to_string(gamma1) +
            " >= 1 (gamma2 must be below 0.25)");
    }
    return gamma1;
}

ProtocolResult run_nls(const InputCoefficients &coefficients, const GateParams &params, int cutoff) {
    if (cutoff < 8) {
        throw std::invalid_argument("NLS runs need cutoff >= 8, got " + std::to_string(cutoff));
    }
    InputCoefficients c = coefficients;
    if (!c.c2) c.c2 = Amplitude{};
    return run_unpolarized_circuit(Protocol::kNls, c, params, cutoff);
}

ProtocolResult run_qubit_teleport(const InputCoefficients &coefficients, double gamma2, int cutoff) {
    return run_qubit_teleport(coefficients, GateParams{solve_teleport_constraint(gamma2), gamma2}, cutoff);
}

ProtocolResult run_qubit_teleport(const InputCoefficients &coefficients, const GateParams &params, int cutoff) {
    if (cutoff < 2) {
        throw std::invalid_argument("teleport runs need cutoff >= 2, got " + std::to_string(cutoff));
    }
    if (coefficients.c2 && *coefficients.c2 != Amplitude{}) {
        throw std::invalid_argument("qubit teleportation takes no c2 coefficient");
    }
    InputCoefficients c = coefficients;
    c.c2.reset();
    return run_unpolarized_circuit(Protocol::kTeleportQubit, c, params, cutoff);
}

ProtocolResult run_qutrit_teleport(const InputCoefficients &coefficients, double gamma2, int cutoff) {
    return run_qutrit_teleport(coefficients, GateParams{solve_teleport_constraint(gamma2), gamma2}, cutoff);
}

ProtocolResult run_qutrit_teleport(const InputCoefficients &coefficients, const GateParams &params, int cutoff) {
    if (cutoff < 2) {
        throw std::invalid_argument("teleport runs need cutoff >= 2, got " + std::to_string(cutoff));
    }
    params.validate();
    InputCoefficients c = normalize_on_ingest(coefficients).coefficients;
    if (!c.c2) c.c2 = Amplitude{};

    PureState input = polarization_superposition(1, c, cutoff);
    PureState ancilla = PureState::basis(ModeSet({h_mode(2), v_mode(2), h_mode(3), v_mode(3)}), {0, 0, 0, 0}, cutoff);
    PureState state = tensor(input, ancilla);
    state = apply_type2_pdc(state, {2, 3, params.gamma1});
    state = apply_type2_pdc(state, {1, 2, params.gamma2});

    DetectionPattern herald{{{h_mode(1), 1}, {v_mode(1), 1}, {h_mode(2), 1}, {v_mode(2), 1}}};
    PureState target = polarization_superposition(3, c, cutoff);

    std::optional<double> claimed;
    if (satisfies_teleport_constraint(params)) {
        double base = (1 - params.gamma1) * (1 - params.gamma2) * params.gamma2;
        claimed = 3 * base * base;
    }
    return finish(Protocol::kTeleportQutrit, params, state, herald, std::move(target), claimed);
}

ProtocolResult run_protocol(
    Protocol protocol, const InputCoefficients &coefficients, const GateParams &params, int cutoff) {
    switch (protocol) {
        case Protocol::kNls:
            return run_nls(coefficients, params, cutoff);
        case Protocol::kTeleportQubit:
            return run_qubit_teleport(coefficients, params, cutoff);
        case Protocol::kTeleportQutrit:
            return run_qutrit_teleport(coefficients, params, cutoff);
    }
    throw std::invalid_argument("unknown protocol");
}

double fidelity(const PureState &a, const PureState &b) {
    double na = a.norm_squared();
    double nb = b.norm_squared();
    if (!(na > kZeroNormThreshold * kZeroNormThreshold) || !(nb > kZeroNormThreshold * kZeroNormThreshold)) {
        throw std::invalid_argument("fidelity of a zero-norm state is undefined");
    }
    return std::norm(inner_product(a, b)) / (na * nb);
}

TeleportOptimum optimize_teleport_success(Protocol protocol, double lo, double hi, double tolerance, int cutoff) {
    if (protocol == Protocol::kNls) {
        throw std::invalid_argument("optimization applies to the teleportation protocols only");
    }
    if (!(lo > 0.0 && hi < 0.5 && lo <= hi)) {
        throw std::invalid_argument("gamma2 range must satisfy 0 < lo <= hi < 0.5");
    }
    if (!(tolerance > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    if (lo >= kTeleportGamma2Max) {
        throw std::invalid_argument("gamma1 >= 1 over the whole gamma2 range");
    }
    hi = std::min(hi, std::nextafter(kTeleportGamma2Max, 0.0));

    // Once the constraint holds the herald probability does not depend on the
    // input amplitudes; an equal-weight input exercises every branch.
    InputCoefficients input{Amplitude{1.0}, Amplitude{1.0}, std::nullopt};
    if (protocol == Protocol::kTeleportQutrit) input.c2 = Amplitude{1.0};
    auto probability = [&](double gamma2) {
        return run_protocol(protocol, input, GateParams{solve_teleport_constraint(gamma2), gamma2}, cutoff)
            .success_probability;
    };
    MaximumResult best = golden_section_maximize(probability, lo, hi, tolerance);
    return {best.argmax, best.value};
}

std::vector<SweepRow> sweep(
    Protocol protocol,
    std::span<const double> gamma2_grid,
    const InputCoefficients &coefficients,
    int cutoff,
    int threads) {
    if (protocol == Protocol::kNls) {
        throw std::invalid_argument("sweeps apply to the teleportation protocols only");
    }
    std::vector<SweepRow> rows(gamma2_grid.size());
    auto evaluate = [&](std::size_t i) {
        SweepRow &row = rows[i];
        row.gamma2 = gamma2_grid[i];
        try {
            double gamma1 = solve_teleport_constraint(row.gamma2);
            row.gamma1 = gamma1;
            ProtocolResult r = run_protocol(protocol, coefficients, GateParams{gamma1, row.gamma2}, cutoff);
            row.probability = r.success_probability;
            row.fidelity = r.fidelity;
            row.leaked_norm = r.leaked_norm;
        } catch (const std::exception &e) {
            row.gamma1.reset();
            row.error = e.what();
        }
    };

    std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(1, rows.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) evaluate(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++) evaluate(i);
        });
    }
    for (auto &t : pool) t.join();
    return rows;
}

}  // namespace fockherald
