#include "fockherald/squeezer.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fockherald {

void SqueezerSpec::validate() const {
    if (mode_a == mode_b) {
        throw std::invalid_argument("squeezer modes must differ, got " + mode_a.str() + " twice");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("squeezer gamma must lie in [0,1), got " + std::to_string(gamma));
    }
}

double SqueezerSpec::theta() const { return std::atanh(std::sqrt(gamma)); }

void PdcSpec::validate() const {
    if (path_a == path_b) {
        throw std::invalid_argument("PDC paths must differ, got path " + std::to_string(path_a) + " twice");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("PDC gamma must lie in [0,1), got " + std::to_string(gamma));
    }
}

double gamma_from_theta(double theta) {
    double t = std::tanh(theta);
    return t * t;
}

double squeezer_matrix_element(int m, int n, int mp, int np, double gamma) {
    if (m < 0 || n < 0 || mp < 0 || np < 0) {
        throw std::invalid_argument("squeezer_matrix_element: occupations must be nonnegative");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("squeezer_matrix_element: gamma must lie in [0,1)");
    }
    if (mp - np != m - n) {
        return 0.0;
    }
    const double s = std::sqrt(gamma);
    const double one_minus = 1.0 - gamma;

    double total = 0.0;
    double lower = 1.0;  // (-s)^k / k! * sqrt(m! n! / ((m-k)! (n-k)!))
    for (int k = 0; k <= std::min(m, n); ++k) {
        if (k > 0) {
            lower *= -s * std::sqrt(static_cast<double>(m - k + 1) * (n - k + 1)) / k;
        }
        int j = mp - (m - k);
        if (j < 0) {
            continue;
        }
        double raise = 1.0;  // s^j / j! * sqrt(mp! np! / ((m-k)! (n-k)!))
        for (int i = 1; i <= j; ++i) {
            raise *= s * std::sqrt(static_cast<double>(m - k + i) * (n - k + i)) / i;
        }
        total += raise * std::pow(one_minus, 0.5 * (m + n - 2 * k + 1)) * lower;
    }
    return total;
}

PureState apply_two_mode_squeezer(const PureState &state, const SqueezerSpec &spec) {
    spec.validate();
    const std::size_t ia = state.modes().index_of(spec.mode_a);
    const std::size_t ib = state.modes().index_of(spec.mode_b);
    const int cutoff = state.cutoff();
    const double s = std::sqrt(spec.gamma);
    const double one_minus = 1.0 - spec.gamma;

    // exp(-s a b): finite lowering series.
    PureState::TermMap lowered;
    for (const auto &[occupation, amplitude] : state.terms()) {
        const int m = occupation[ia];
        const int n = occupation[ib];
        OccupationVector target = occupation;
        double coefficient = 1.0;
        for (int k = 0; k <= std::min(m, n); ++k) {
            if (k > 0) {
                coefficient *= -s * std::sqrt(static_cast<double>(m - k + 1) * (n - k + 1)) / k;
                if (coefficient == 0.0) {
                    break;
                }
            }
            target[ia] = m - k;
            target[ib] = n - k;
            lowered[target] += coefficient * amplitude;
        }
    }

    // (1 - gamma)^{(n_a + n_b + 1)/2}.
    for (auto &[occupation, amplitude] : lowered) {
        amplitude *= std::pow(one_minus, 0.5 * (occupation[ia] + occupation[ib] + 1));
    }

    // exp(s a^dag b^dag): raising series cut at the cutoff.
    PureState::TermMap raised;
    for (const auto &[occupation, amplitude] : lowered) {
        const int m = occupation[ia];
        const int n = occupation[ib];
        OccupationVector target = occupation;
        double coefficient = 1.0;
        for (int j = 0; m + j <= cutoff && n + j <= cutoff; ++j) {
            if (j > 0) {
                coefficient *= s * std::sqrt(static_cast<double>(m + j) * (n + j)) / j;
                if (coefficient == 0.0) {
                    break;
                }
            }
            target[ia] = m + j;
            target[ib] = n + j;
            raised[target] += coefficient * amplitude;
        }
    }

    // The operator is unitary, so whatever norm is missing went above the cutoff.
    double kept = 0.0;
    for (const auto &[occupation, amplitude] : raised) {
        kept += std::norm(amplitude);
    }
    double truncated = std::max(0.0, state.norm_squared() - kept);
    return PureState::from_terms(
        state.modes(), cutoff, std::move(raised), state.leaked_norm() + truncated, state.drop_threshold());
}

PureState apply_type2_pdc(const PureState &state, const PdcSpec &spec) {
    spec.validate();
    for (int path : {spec.path_a, spec.path_b}) {
        if (!state.modes().contains(h_mode(path)) || !state.modes().contains(v_mode(path))) {
            throw std::invalid_argument("PDC path " + std::to_string(path) + " needs both H and V modes");
        }
    }
    return apply_two_mode_squeezer(apply_two_mode_squeezer(state, spec.hv_pair()), spec.vh_pair());
}

}  // namespace fockherald
