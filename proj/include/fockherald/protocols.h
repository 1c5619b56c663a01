#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fockherald/fock_state.h"
#include "fockherald/heralding.h"

namespace fockherald {

enum class Protocol { kNls, kTeleportQubit, kTeleportQutrit };

/// "nls", "teleport-qubit", "teleport-qutrit".
std::string_view protocol_name(Protocol protocol);
std::optional<Protocol> parse_protocol(std::string_view name);

/// Cutoff for the strong-coupling NLS circuit (gamma1 ~ 0.757).
inline constexpr int kStrongCouplingCutoff = 64;
/// Cutoff for the weak-coupling teleportation circuits.
inline constexpr int kWeakCouplingCutoff = 16;
/// Above this gamma2 the teleportation constraint demands gamma1 >= 1.
inline constexpr double kTeleportGamma2Max = 0.25;

/// Input amplitudes on path 1. For the qutrit protocol c1 multiplies |H> and
/// c2 multiplies |V>; the qubit protocol has no c2.
struct InputCoefficients {
    Amplitude c0{1.0, 0.0};
    Amplitude c1{};
    std::optional<Amplitude> c2;

    double norm_squared() const;
};

struct IngestedCoefficients {
    InputCoefficients coefficients;
    /// True when the input was rescaled (callers may want to warn).
    bool rescaled = false;
    double original_norm = 1.0;
};

/// Normalizes the coefficients; throws std::invalid_argument if they are all zero.
IngestedCoefficients normalize_on_ingest(const InputCoefficients &coefficients);

/// Couplings of the first (ancilla) and second (input-coupling) squeezers.
struct GateParams {
    double gamma1 = 0.0;
    double gamma2 = 0.0;

    void validate() const;
};

struct NlsResiduals {
    /// sqrt(g2) - sqrt(g1) (1 - 2 g2)
    double vacuum_vs_one = 0.0;
    /// sqrt(g2) + g1 sqrt(g2) (3 g2 - 2)
    double vacuum_vs_two = 0.0;
};

NlsResiduals nls_residuals(const GateParams &params);

/// Couplings at which the heralded NLS circuit maps |0>,|1>,|2> amplitudes
/// with equal weight and a sign flip on |2>. gamma2 is found by bisection on
/// gamma1 (2 - 3 gamma2) = 1 with gamma1 eliminated through the teleportation
/// constraint; throws std::runtime_error if the residuals are not below 1e-12.
GateParams solve_nls_params();

/// gamma1 = gamma2 / (1 - 2 gamma2)^2, the coupling that balances the |0> and
/// |1> heralded amplitudes. Throws std::invalid_argument outside (0, 0.5) or
/// when the result is not below 1.
double solve_teleport_constraint(double gamma2);

struct ProtocolResult {
    Protocol protocol = Protocol::kNls;
    GateParams params;
    /// Normalized conditional output with the global phase fixed so that the
    /// first stored amplitude is real and nonnegative.
    PureState output_state;
    PureState target_state;
    /// Weight of the single herald pattern the protocol counts as success.
    double success_probability = 0.0;
    /// Success probability as quoted in the literature for this setting, when
    /// one exists; recorded for comparison only.
    std::optional<double> claimed_probability;
    /// Zero when the herald has zero probability.
    double fidelity = 0.0;
    /// Truncation leak of the full circuit state before heralding.
    double leaked_norm = 0.0;
    /// Every pattern on the detected modes with its weight.
    std::vector<PatternProbability> herald_distribution;
};

/// Squeezer gamma1 on modes (2,3), squeezer gamma2 on modes (1,2), herald one
/// photon on each of modes 1 and 2, output on mode 3. Target c0|0> + c1|1> - c2|2>.
ProtocolResult run_nls(
    const InputCoefficients &coefficients, const GateParams &params, int cutoff = kStrongCouplingCutoff);

/// The NLS circuit fed with c0|0> + c1|1>; gamma1 from solve_teleport_constraint.
ProtocolResult run_qubit_teleport(
    const InputCoefficients &coefficients, double gamma2, int cutoff = kWeakCouplingCutoff);
ProtocolResult run_qubit_teleport(const InputCoefficients &coefficients, const GateParams &params, int cutoff);

/// Type-II PDC gamma1 on paths (2,3), type-II PDC gamma2 on paths (1,2),
/// herald one H and one V photon on each of paths 1 and 2, output on path 3.
ProtocolResult run_qutrit_teleport(
    const InputCoefficients &coefficients, double gamma2, int cutoff = kWeakCouplingCutoff);
ProtocolResult run_qutrit_teleport(const InputCoefficients &coefficients, const GateParams &params, int cutoff);

ProtocolResult run_protocol(
    Protocol protocol, const InputCoefficients &coefficients, const GateParams &params, int cutoff);

/// |<a|b>|^2 / (<a|a><b|b>). Throws std::invalid_argument on a zero-norm input.
double fidelity(const PureState &a, const PureState &b);

struct TeleportOptimum {
    double gamma2 = 0.0;
    double probability = 0.0;
};

/// Maximizes the simulated herald probability of a teleportation protocol over
/// gamma2 (gamma1 tied by the teleportation constraint) with golden-section
/// search. The range must lie inside (0, 0.5); it is clipped to the physical
/// part gamma2 < 0.25 and rejected if nothing physical remains.
TeleportOptimum optimize_teleport_success(
    Protocol protocol, double lo, double hi, double tolerance, int cutoff = kWeakCouplingCutoff);

struct SweepRow {
    double gamma2 = 0.0;
    std::optional<double> gamma1;
    double probability = 0.0;
    double fidelity = 0.0;
    double leaked_norm = 0.0;
    /// Empty for valid rows.
    std::string error;
};

/// One teleportation run per grid value with gamma1 from the constraint.
/// Rows come back in grid order whatever the thread count.
std::vector<SweepRow> sweep(
    Protocol protocol,
    std::span<const double> gamma2_grid,
    const InputCoefficients &coefficients,
    int cutoff = kWeakCouplingCutoff,
    int threads = 1);

}  // namespace fockherald
