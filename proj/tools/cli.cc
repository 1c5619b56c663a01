#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockherald/protocols.h"
#include "fockherald/serialization.h"
#include "fockherald/squeezer.h"
#include "fockherald/taylor_oracle.h"

namespace fockherald::cli {

namespace {

constexpr double kFidelityContract = 1e-9;
constexpr double kResidualContract = 1e-12;
constexpr double kOracleContract = 1e-9;
constexpr int kOracleMaxCutoff = 16;

/// Raised for invalid flag combinations discovered after parsing.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string num(double value, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

void report_error(std::ostream &err, const std::string &message, int code) {
    err << nlohmann::json{{"error", message}, {"exit_code", code}}.dump() << "\n";
}

struct CoefficientFlags {
    std::optional<double> real[3];
    std::optional<double> re[3];
    std::optional<double> im[3];

    void attach(CLI::App &app) {
        for (int k = 0; k < 3; ++k) {
            std::string name = "--c" + std::to_string(k);
            app.add_option(name, real[k], "Real amplitude shorthand for coefficient " + std::to_string(k));
            app.add_option(name + "-re", re[k], "Real part of coefficient " + std::to_string(k));
            app.add_option(name + "-im", im[k], "Imaginary part of coefficient " + std::to_string(k));
        }
    }

    bool any(int k) const { return real[k] || re[k] || im[k]; }

    std::optional<Amplitude> get(int k) const {
        if (!any(k)) return std::nullopt;
        if (real[k] && (re[k] || im[k])) {
            std::string name = "--c" + std::to_string(k);
            throw UsageError(name + " cannot be combined with " + name + "-re/" + name + "-im");
        }
        if (real[k]) return Amplitude{*real[k], 0.0};
        return Amplitude{re[k].value_or(0.0), im[k].value_or(0.0)};
    }

    InputCoefficients resolve(Protocol protocol) const {
        InputCoefficients c;
        bool none = !any(0) && !any(1) && !any(2);
        c.c0 = none ? Amplitude{1.0} : get(0).value_or(Amplitude{});
        c.c1 = get(1).value_or(Amplitude{});
        c.c2 = get(2);
        if (protocol == Protocol::kTeleportQubit && c.c2) {
            throw UsageError("teleport-qubit takes no --c2 coefficient");
        }
        return c;
    }
};

Protocol parse_protocol_or_throw(const std::string &name) {
    auto p = parse_protocol(name);
    if (!p) {
        throw UsageError("unknown protocol '" + name + "' (expected nls, teleport-qubit or teleport-qutrit)");
    }
    return *p;
}

int default_cutoff(Protocol protocol) {
    if (const char *env = std::getenv("FOCKHERALD_CUTOFF")) {
        try {
            std::size_t used = 0;
            int value = std::stoi(env, &used);
            if (used == std::string(env).size() && value >= 0) {
                return value;
            }
        } catch (const std::exception &) {
        }
        throw UsageError(std::string("FOCKHERALD_CUTOFF must be a nonnegative integer, got '") + env + "'");
    }
    return protocol == Protocol::kNls ? kStrongCouplingCutoff : kWeakCouplingCutoff;
}

InputCoefficients ingest(const InputCoefficients &c, std::ostream &err) {
    auto ingested = normalize_on_ingest(c);
    if (ingested.rescaled) {
        err << "warning: input coefficients normalized (norm was " << num(ingested.original_norm, 12) << ")\n";
    }
    return ingested.coefficients;
}

std::string occupation_ket(const PureState &state, const OccupationVector &occupation) {
    std::string out = "|";
    for (std::size_t i = 0; i < occupation.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(occupation[i]);
    }
    out += ">";
    if (state.modes().size() > 1) {
        out += state.modes().str();
    } else if (state.modes().size() == 1) {
        out += "_" + state.modes()[0].str();
    }
    return out;
}

void print_pretty(const ProtocolResult &r, std::ostream &out) {
    out << "protocol             " << protocol_name(r.protocol) << "\n";
    out << "gamma1               " << num(r.params.gamma1, 12) << "\n";
    out << "gamma2               " << num(r.params.gamma2, 12) << "\n";
    out << "success_probability  " << num(r.success_probability, 12) << "\n";
    out << "claimed_probability  " << (r.claimed_probability ? num(*r.claimed_probability, 12) : "none") << "\n";
    out << "fidelity             " << num(r.fidelity, 15) << "\n";
    out << "leaked_norm          " << num(r.leaked_norm, 6) << "\n";

    std::vector<std::pair<OccupationVector, Amplitude>> terms(
        r.output_state.terms().begin(), r.output_state.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto &a, const auto &b) {
        return std::abs(a.second) > std::abs(b.second);
    });
    out << "output terms (largest " << std::min<std::size_t>(10, terms.size()) << " of " << terms.size() << "):\n";
    for (std::size_t i = 0; i < terms.size() && i < 10; ++i) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%+.12f %+.12fi", terms[i].second.real(), terms[i].second.imag());
        out << "  " << occupation_ket(r.output_state, terms[i].first) << "  " << buf << "\n";
    }

    auto outcomes = r.herald_distribution;
    double total = 0.0;
    for (const auto &o : outcomes) total += o.probability;
    std::stable_sort(outcomes.begin(), outcomes.end(), [](const auto &a, const auto &b) {
        return a.probability > b.probability;
    });
    out << "herald outcomes (largest " << std::min<std::size_t>(10, outcomes.size()) << " of " << outcomes.size()
        << ", total " << num(total, 12) << "):\n";
    for (std::size_t i = 0; i < outcomes.size() && i < 10; ++i) {
        out << "  " << outcomes[i].pattern.str() << "  " << num(outcomes[i].probability, 12) << "\n";
    }
}

void print_csv(const ProtocolResult &r, std::ostream &out) {
    out << "protocol,gamma1,gamma2,success_probability,paper_claimed_probability,fidelity,leaked_norm\n";
    out << protocol_name(r.protocol) << "," << num(r.params.gamma1) << "," << num(r.params.gamma2) << ","
        << num(r.success_probability) << "," << (r.claimed_probability ? num(*r.claimed_probability) : "") << ","
        << num(r.fidelity) << "," << num(r.leaked_norm) << "\n";
}

// ---------------------------------------------------------------------------
// params

struct ParamsArgs {
    std::string protocol;
    std::optional<double> gamma2;
    std::string format = "pretty";
};

int cmd_params(const ParamsArgs &args, std::ostream &out) {
    nlohmann::json report;
    double residual = 0.0;
    if (args.protocol == "nls") {
        if (args.gamma2) {
            throw UsageError("params nls takes no --gamma2; both couplings are solved for");
        }
        GateParams p = solve_nls_params();
        NlsResiduals r = nls_residuals(p);
        residual = std::max(std::abs(r.vacuum_vs_one), std::abs(r.vacuum_vs_two));
        report = {
            {"protocol", "nls"},
            {"gamma1", p.gamma1},
            {"gamma2", p.gamma2},
            {"residual_vacuum_vs_one", r.vacuum_vs_one},
            {"residual_vacuum_vs_two", r.vacuum_vs_two},
        };
    } else if (args.protocol == "teleport" || args.protocol == "teleport-qubit" ||
               args.protocol == "teleport-qutrit") {
        if (!args.gamma2) {
            throw UsageError("params " + args.protocol + " requires --gamma2");
        }
        double gamma1 = solve_teleport_constraint(*args.gamma2);
        NlsResiduals r = nls_residuals({gamma1, *args.gamma2});
        residual = std::abs(r.vacuum_vs_one);
        report = {
            {"protocol", args.protocol},
            {"gamma1", gamma1},
            {"gamma2", *args.gamma2},
            {"residual_vacuum_vs_one", r.vacuum_vs_one},
        };
    } else {
        throw UsageError("unknown protocol '" + args.protocol + "' (expected nls or teleport)");
    }

    if (args.format == "json") {
        out << report.dump(2) << "\n";
    } else {
        for (const char *key : {"protocol", "gamma1", "gamma2", "residual_vacuum_vs_one", "residual_vacuum_vs_two"}) {
            if (!report.contains(key)) continue;
            const auto &v = report[key];
            out << key << "=" << (v.is_string() ? v.get<std::string>() : num(v.get<double>())) << "\n";
        }
    }
    return residual < kResidualContract ? kExitOk : kExitContractBreach;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
    std::string protocol;
    CoefficientFlags coefficients;
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    bool auto_params = false;
    std::optional<int> cutoff;
    std::string format = "pretty";
};

int cmd_run(const RunArgs &args, std::ostream &out, std::ostream &err) {
    Protocol protocol = parse_protocol_or_throw(args.protocol);
    InputCoefficients c = ingest(args.coefficients.resolve(protocol), err);
    int cutoff = args.cutoff.value_or(default_cutoff(protocol));

    GateParams params;
    bool contract = false;  // parameters chosen so that the target is reached exactly
    if (protocol == Protocol::kNls) {
        if (args.auto_params || (!args.gamma1 && !args.gamma2)) {
            if (args.gamma1 || args.gamma2) {
                throw UsageError("--auto-params cannot be combined with --gamma1/--gamma2");
            }
            params = solve_nls_params();
            contract = true;
        } else {
            if (!args.gamma1 || !args.gamma2) {
                throw UsageError("run nls needs both --gamma1 and --gamma2 (or --auto-params)");
            }
            params = {*args.gamma1, *args.gamma2};
        }
    } else {
        if (!args.gamma2) {
            throw UsageError("run " + args.protocol + " requires --gamma2");
        }
        if (args.gamma1 && args.auto_params) {
            throw UsageError("--auto-params cannot be combined with --gamma1");
        }
        if (args.gamma1) {
            params = {*args.gamma1, *args.gamma2};
        } else {
            params = {solve_teleport_constraint(*args.gamma2), *args.gamma2};
            contract = true;
        }
    }

    ProtocolResult result = run_protocol(protocol, c, params, cutoff);
    if (args.format == "json") {
        out << result_to_json(result).dump(2) << "\n";
    } else if (args.format == "csv") {
        print_csv(result, out);
    } else {
        print_pretty(result, out);
    }

    if (contract && !(std::abs(1.0 - result.fidelity) <= kFidelityContract)) {
        report_error(err, "fidelity " + num(result.fidelity) + " misses the 1e-9 contract", kExitContractBreach);
        return kExitContractBreach;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::string protocol;
    CoefficientFlags coefficients;
    std::vector<double> grid;
    std::optional<double> from;
    std::optional<double> to;
    std::optional<int> points;
    bool log_spacing = false;
    std::optional<int> cutoff;
    int threads = 1;
};

std::vector<double> build_grid(const SweepArgs &args) {
    bool ranged = args.from || args.to || args.points;
    if (!args.grid.empty() && ranged) {
        throw UsageError("--grid cannot be combined with --from/--to/--points");
    }
    if (!args.grid.empty()) {
        return args.grid;
    }
    if (!args.from || !args.to || !args.points) {
        throw UsageError("sweep needs --grid or all of --from, --to and --points");
    }
    int n = *args.points;
    if (n < 1) {
        throw UsageError("--points must be at least 1");
    }
    double lo = *args.from;
    double hi = *args.to;
    if (args.log_spacing && !(lo > 0.0 && hi > 0.0)) {
        throw UsageError("--log needs positive --from and --to");
    }
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        grid[i] = args.log_spacing ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
    }
    // Keep the requested endpoints exact.
    grid.front() = lo;
    if (n > 1) grid.back() = hi;
    return grid;
}

std::string csv_field(const std::string &text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

int cmd_sweep(const SweepArgs &args, std::ostream &out, std::ostream &err) {
    Protocol protocol = parse_protocol_or_throw(args.protocol);
    if (protocol == Protocol::kNls) {
        throw UsageError("sweep supports teleport-qubit and teleport-qutrit");
    }
    InputCoefficients c = ingest(args.coefficients.resolve(protocol), err);
    int cutoff = args.cutoff.value_or(default_cutoff(protocol));
    std::vector<double> grid = build_grid(args);

    auto rows = sweep(protocol, grid, c, cutoff, args.threads);
    out << "gamma2,gamma1,probability,fidelity,leaked_norm,error\n";
    for (const auto &row : rows) {
        out << num(row.gamma2) << ",";
        if (row.error.empty()) {
            out << num(*row.gamma1) << "," << num(row.probability) << "," << num(row.fidelity) << ","
                << num(row.leaked_norm) << ",\n";
        } else {
            out << ",,,," << csv_field(row.error) << "\n";
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle-check

struct OracleArgs {
    double gamma = 0.0;
    int cutoff = 12;
    int theta_terms = 80;
};

/// Deterministic amplitudes in [-1, 1) (splitmix64), independent of the
/// standard library's distribution implementations.
class SplitMix {
   public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    double uniform() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }

   private:
    std::uint64_t state_;
};

int cmd_oracle_check(const OracleArgs &args, std::ostream &out) {
    if (args.cutoff < 1 || args.cutoff > kOracleMaxCutoff) {
        throw UsageError("oracle-check needs 1 <= --cutoff <= " + std::to_string(kOracleMaxCutoff));
    }
    ModeSet modes({path_mode(1), path_mode(2)});
    const int n = args.cutoff;
    std::vector<std::pair<std::string, PureState>> probes{
        {"vacuum", PureState::basis(modes, {0, 0}, n)},
        {"|1,1>", PureState::basis(modes, {1, 1}, n)},
        {"|2,0>", PureState::basis(modes, {2, 0}, n)},
        {"|cutoff,cutoff>", PureState::basis(modes, {n, n}, n)},
    };
    SplitMix rng(0x5eed);
    PureState::TermMap terms;
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; b <= n; ++b) {
            terms[{a, b}] = Amplitude{rng.uniform(), rng.uniform()};
        }
    }
    probes.emplace_back("random", normalize(PureState::from_terms(modes, n, std::move(terms))).first);

    SqueezerSpec spec{path_mode(1), path_mode(2), args.gamma};
    double worst = 0.0;
    out << "gamma=" << num(args.gamma) << " cutoff=" << n << " theta_terms=" << args.theta_terms << "\n";
    for (const auto &[name, probe] : probes) {
        PureState factored = apply_two_mode_squeezer(probe, spec);
        TaylorOracleResult taylor = apply_squeezer_taylor_oracle(probe, spec, args.theta_terms);
        double deviation = max_amplitude_deviation(factored, taylor.state);
        worst = std::max(worst, deviation);
        out << "  " << name << ": deviation=" << num(deviation, 6) << " tail_bound=" << num(taylor.tail_bound, 6)
            << " substeps=" << taylor.substeps << " workspace=" << taylor.workspace_cutoff << "\n";
    }
    bool pass = worst < kOracleContract;
    out << "max_deviation=" << num(worst, 6) << " " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitContractBreach;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Heralded parametric-amplifier circuit simulator", "fockherald"};
    app.require_subcommand(1);

    ParamsArgs params_args;
    auto *params_cmd = app.add_subcommand("params", "Solve the squeezer couplings of a protocol");
    params_cmd->add_option("protocol", params_args.protocol, "nls | teleport")->required();
    params_cmd->add_option("--gamma2", params_args.gamma2, "Second squeezer coupling (teleport)");
    params_cmd->add_option("--format", params_args.format)->check(CLI::IsMember({"pretty", "json"}));

    RunArgs run_args;
    auto *run_cmd = app.add_subcommand("run", "Simulate one protocol run");
    run_cmd->add_option("protocol", run_args.protocol, "nls | teleport-qubit | teleport-qutrit")->required();
    run_args.coefficients.attach(*run_cmd);
    run_cmd->add_option("--gamma1", run_args.gamma1, "Override the first squeezer coupling");
    run_cmd->add_option("--gamma2", run_args.gamma2, "Second squeezer coupling");
    run_cmd->add_flag("--auto-params", run_args.auto_params, "Use the solved couplings");
    run_cmd->add_option("--cutoff", run_args.cutoff, "Per-mode photon cutoff");
    run_cmd->add_option("--format", run_args.format)->check(CLI::IsMember({"pretty", "json", "csv"}));

    SweepArgs sweep_args;
    auto *sweep_cmd = app.add_subcommand("sweep", "Tabulate a teleportation protocol over gamma2 as CSV");
    sweep_cmd->add_option("protocol", sweep_args.protocol, "teleport-qubit | teleport-qutrit")->required();
    sweep_args.coefficients.attach(*sweep_cmd);
    sweep_cmd->add_option("--grid", sweep_args.grid, "Explicit gamma2 values")->delimiter(',');
    sweep_cmd->add_option("--from", sweep_args.from, "First gamma2");
    sweep_cmd->add_option("--to", sweep_args.to, "Last gamma2");
    sweep_cmd->add_option("--points", sweep_args.points, "Number of grid points");
    sweep_cmd->add_flag("--log", sweep_args.log_spacing, "Logarithmic spacing");
    sweep_cmd->add_option("--cutoff", sweep_args.cutoff, "Per-mode photon cutoff");
    sweep_cmd->add_option("--threads", sweep_args.threads, "Worker threads")->check(CLI::PositiveNumber);

    OracleArgs oracle_args;
    auto *oracle_cmd = app.add_subcommand("oracle-check", "Compare the factored squeezer with its Taylor series");
    oracle_cmd->add_option("--gamma", oracle_args.gamma, "Squeezer coupling")->required();
    oracle_cmd->add_option("--cutoff", oracle_args.cutoff, "Per-mode photon cutoff (<= 16)");
    oracle_cmd->add_option("--theta-terms", oracle_args.theta_terms, "Series order cap per substep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*params_cmd) return cmd_params(params_args, out);
        if (*run_cmd) return cmd_run(run_args, out, err);
        if (*sweep_cmd) return cmd_sweep(sweep_args, out, err);
        if (*oracle_cmd) return cmd_oracle_check(oracle_args, out);
    } catch (const std::invalid_argument &e) {
        report_error(err, e.what(), kExitUsage);
        return kExitUsage;
    } catch (const std::exception &e) {
        report_error(err, e.what(), kExitContractBreach);
        return kExitContractBreach;
    }
    return kExitUsage;
}

}  // namespace fockherald::cli
