#include "fockherald/taylor_oracle.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fockherald {

namespace {

// Ladder of states |base_a + j, base_b + j> sharing a photon-number difference
// and the occupations of all spectator modes.
struct Ladder {
    std::vector<Amplitude> amplitudes;
};

int workspace_margin(double gamma, int cutoff) {
    if (gamma <= 0.0) {
        return 0;
    }
    // Amplitude d rungs above an input of occupation <= cutoff is at most
    // gamma^{d/2} C(d + cutoff, cutoff) (1 - gamma)^{(cutoff + 1)/2}; grow d until
    // that envelope is below 1e-18.
    const double c = cutoff;
    const double target = std::log(1e-18);
    for (int d = 16; d < 6000; ++d) {
        double log_envelope = 0.5 * d * std::log(gamma) + std::lgamma(d + c + 1) - std::lgamma(d + 1.0) -
                              std::lgamma(c + 1) + 0.5 * (c + 1) * std::log1p(-gamma);
        if (log_envelope < target) {
            return d;
        }
    }
    return 6000;
}

}  // namespace

TaylorOracleResult apply_squeezer_taylor_oracle(const PureState &state, const SqueezerSpec &spec, int theta_terms) {
    spec.validate();
    if (theta_terms < 1) {
        throw std::invalid_argument("theta_terms must be at least 1");
    }
    const std::size_t ia = state.modes().index_of(spec.mode_a);
    const std::size_t ib = state.modes().index_of(spec.mode_b);
    const int cutoff = state.cutoff();
    const double theta = spec.theta();
    const int workspace = cutoff + workspace_margin(spec.gamma, cutoff);

    std::map<OccupationVector, Ladder> ladders;
    for (const auto &[occupation, amplitude] : state.terms()) {
        int j = std::min(occupation[ia], occupation[ib]);
        OccupationVector base = occupation;
        base[ia] -= j;
        base[ib] -= j;
        auto &ladder = ladders[base];
        if (ladder.amplitudes.empty()) {
            ladder.amplitudes.assign(workspace - std::max(base[ia], base[ib]) + 1, Amplitude{});
        }
        ladder.amplitudes[j] = amplitude;
    }

    // Row sums of |theta * generator| are at most 2 theta (workspace + 1).
    const double generator_bound = 2.0 * theta * (workspace + 1);
    const int substeps = theta == 0.0 ? 0 : static_cast<int>(std::ceil(generator_bound));
    const double step = substeps == 0 ? 0.0 : theta / substeps;
    const double x = substeps == 0 ? 0.0 : generator_bound / substeps;

    double tail_bound = 0.0;
    PureState::TermMap out;
    std::vector<Amplitude> term, next;
    for (auto &[base, ladder] : ladders) {
        auto &v = ladder.amplitudes;
        const std::size_t size = v.size();
        std::vector<double> up(size);  // <j+1| a^dag b^dag |j>
        for (std::size_t j = 0; j < size; ++j) {
            up[j] = std::sqrt(static_cast<double>(base[ia] + j + 1) * (base[ib] + j + 1));
        }
        term.resize(size);
        next.resize(size);

        for (int s = 0; s < substeps; ++s) {
            double start_norm = 0.0;
            for (const auto &a : v) start_norm += std::norm(a);
            start_norm = std::sqrt(start_norm);
            if (start_norm == 0.0) {
                break;
            }
            term = v;
            for (int k = 1; k <= theta_terms; ++k) {
                const double scale = step / k;
                for (std::size_t j = 0; j < size; ++j) {
                    Amplitude raised = j > 0 ? up[j - 1] * term[j - 1] : Amplitude{};
                    Amplitude lowered = j + 1 < size ? up[j] * term[j + 1] : Amplitude{};
                    next[j] = scale * (raised - lowered);
                }
                term.swap(next);
                double term_norm = 0.0;
                for (std::size_t j = 0; j < size; ++j) {
                    v[j] += term[j];
                    term_norm += std::norm(term[j]);
                }
                term_norm = std::sqrt(term_norm);
                if (term_norm <= 1e-18 * start_norm || k == theta_terms) {
                    tail_bound += term_norm * x / (k + 1 - x);
                    break;
                }
            }
        }
        tail_bound += std::abs(v.back());

        OccupationVector occupation = base;
        for (std::size_t j = 0; j < size; ++j) {
            occupation[ia] = base[ia] + static_cast<int>(j);
            occupation[ib] = base[ib] + static_cast<int>(j);
            if (occupation[ia] > cutoff || occupation[ib] > cutoff) {
                break;
            }
            if (v[j] != Amplitude{}) {
                out.emplace(occupation, v[j]);
            }
        }
    }

    double kept = 0.0;
    for (const auto &[occupation, amplitude] : out) kept += std::norm(amplitude);
    double truncated = std::max(0.0, state.norm_squared() - kept);
    return TaylorOracleResult{
        PureState::from_terms(
            state.modes(), cutoff, std::move(out), state.leaked_norm() + truncated, state.drop_threshold()),
        tail_bound,
        substeps,
        workspace,
    };
}

double max_amplitude_deviation(const PureState &a, const PureState &b) {
    if (a.modes() != b.modes()) {
        throw std::invalid_argument("max_amplitude_deviation: mode sets differ");
    }
    double worst = 0.0;
    for (const auto &[occupation, amplitude] : a.terms()) {
        worst = std::max(worst, std::abs(amplitude - b.amplitude(occupation)));
    }
    for (const auto &[occupation, amplitude] : b.terms()) {
        if (!a.terms().contains(occupation)) {
            worst = std::max(worst, std::abs(amplitude));
        }
    }
    return worst;
}

}  // namespace fockherald
