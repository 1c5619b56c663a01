#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "fockherald/protocols.h"
#include "support/random_inputs.h"

using namespace fockherald;

namespace {

// Closed forms: gamma1 = (21 - 7 sqrt2) / (9 + 4 sqrt2), gamma2 = (3 - sqrt2) / 7.
constexpr double kGamma1 = 0.757359312880714853594933827371;
constexpr double kGamma2 = 0.226540919660986421599758753684;
constexpr double kNlsProbability = 0.0425155330752088;

InputCoefficients random_qubit(testing::InputGenerator &gen) {
    auto v = gen.unit_vector(2);
    return {v[0], v[1], std::nullopt};
}

InputCoefficients random_qutrit(testing::InputGenerator &gen) {
    auto v = gen.unit_vector(3);
    return {v[0], v[1], v[2]};
}

double teleport_probability(double g2) {
    double g1 = g2 / ((1 - 2 * g2) * (1 - 2 * g2));
    return (1 - g1) * (1 - g2) * g2;
}

}  // namespace

TEST_CASE("protocol names round-trip") {
    for (auto p : {Protocol::kNls, Protocol::kTeleportQubit, Protocol::kTeleportQutrit}) {
        CHECK(parse_protocol(protocol_name(p)) == p);
    }
    CHECK_FALSE(parse_protocol("teleport").has_value());
}

TEST_CASE("NLS parameters match the closed forms") {
    auto params = solve_nls_params();
    CHECK(std::abs(params.gamma1 - kGamma1) < 1e-12);
    CHECK(std::abs(params.gamma2 - kGamma2) < 1e-12);
    auto res = nls_residuals(params);
    CHECK(std::abs(res.vacuum_vs_one) < 1e-12);
    CHECK(std::abs(res.vacuum_vs_two) < 1e-12);
}

TEST_CASE("teleportation constraint") {
    CHECK(solve_teleport_constraint(0.1) == doctest::Approx(0.15625).epsilon(1e-15));
    CHECK(solve_teleport_constraint(0.2) == doctest::Approx(0.2 / 0.36).epsilon(1e-15));
    for (double bad : {0.0, 0.5, 0.6, -0.1, std::numeric_limits<double>::quiet_NaN()}) {
        CHECK_THROWS_WITH_AS(solve_teleport_constraint(bad), "gamma2 must lie in (0,0.5)", std::invalid_argument);
    }
    CHECK_THROWS_AS(solve_teleport_constraint(0.25), std::invalid_argument);
    CHECK_THROWS_AS(solve_teleport_constraint(0.4), std::invalid_argument);
}

TEST_CASE("input coefficients are normalized on ingest") {
    auto in = normalize_on_ingest({3.0, 4.0, std::nullopt});
    CHECK(in.rescaled);
    CHECK(in.original_norm == doctest::Approx(5.0));
    CHECK(in.coefficients.c0.real() == doctest::Approx(0.6));
    CHECK(in.coefficients.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));

    auto unit = normalize_on_ingest({1.0, 0.0, std::nullopt});
    CHECK_FALSE(unit.rescaled);

    CHECK_THROWS_AS(normalize_on_ingest({0.0, 0.0, Amplitude{0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(normalize_on_ingest({std::numeric_limits<double>::infinity(), 0.0, std::nullopt}),
                    std::invalid_argument);
}

TEST_CASE("gate parameter validation") {
    CHECK_NOTHROW((GateParams{0.0, 0.2}.validate()));
    CHECK_THROWS_AS((GateParams{1.0, 0.2}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GateParams{0.2, -0.1}.validate()), std::invalid_argument);
}

TEST_CASE("NLS gate on its design point") {
    auto params = solve_nls_params();
    const double w = 1 / std::sqrt(3.0);
    auto result = run_nls({w, w, Amplitude{w}}, params);
    CHECK(std::abs(result.success_probability - kNlsProbability) < 1e-12);
    CHECK(result.fidelity == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(result.claimed_probability.has_value());
    CHECK(*result.claimed_probability == 0.0425);
    CHECK(result.output_state.amplitude({2}).real() < 0);

    SUBCASE("probability and fidelity are input independent") {
        testing::InputGenerator gen(1);
        for (int trial = 0; trial < 10; ++trial) {
            auto r = run_nls(random_qutrit(gen), params);
            CHECK(std::abs(r.success_probability - kNlsProbability) < 1e-12);
            CHECK(std::abs(1 - r.fidelity) < 1e-12);
        }
    }
}

TEST_CASE("NLS circuit off the design point") {
    // gamma1 = 0 leaves mode 3 in vacuum; only the |0> input heralds.
    auto r = run_nls({1.0, 0.0, Amplitude{0.0}}, GateParams{0.0, 0.2}, 16);
    CHECK(r.success_probability == doctest::Approx(0.16).epsilon(1e-14));
    CHECK_FALSE(r.claimed_probability.has_value());
    CHECK(r.fidelity == doctest::Approx(1.0));

    auto none = run_nls({0.0, 1.0, Amplitude{0.0}}, GateParams{0.0, 0.5}, 16);
    CHECK(none.success_probability < 1e-30);
    CHECK(none.fidelity == 0.0);

    CHECK_THROWS_AS(run_nls({1.0, 0.0, std::nullopt}, GateParams{0.3, 0.2}, 4), std::invalid_argument);
}

TEST_CASE("qubit teleportation") {
    auto r = run_qubit_teleport({1 / std::sqrt(2.0), 1 / std::sqrt(2.0), std::nullopt}, 0.1);
    CHECK(r.params.gamma1 == doctest::Approx(0.15625));
    CHECK(std::abs(r.success_probability - 0.0759375) < 1e-14);
    CHECK(std::abs(1 - r.fidelity) < 1e-12);
    REQUIRE(r.claimed_probability.has_value());
    CHECK(*r.claimed_probability == doctest::Approx(2 * 0.0759375));
    CHECK(r.output_state.modes() == ModeSet({path_mode(3)}));

    testing::InputGenerator gen(2);
    for (int trial = 0; trial < 20; ++trial) {
        double g2 = gen.uniform(0.01, 0.24);
        auto in = random_qubit(gen);
        auto out = run_qubit_teleport(in, g2);
        CHECK(std::abs(out.success_probability - teleport_probability(g2)) < 1e-13);
        CHECK(std::abs(1 - out.fidelity) < 1e-12);
        // The first stored amplitude carries no phase.
        auto first = out.output_state.terms().begin()->second;
        CHECK(first.imag() == 0.0);
        CHECK(first.real() >= 0.0);
    }

    CHECK_THROWS_AS(run_qubit_teleport({1.0, 0.0, Amplitude{0.5}}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(run_qubit_teleport({1.0, 0.0, std::nullopt}, 0.3), std::invalid_argument);
}

TEST_CASE("qutrit teleportation") {
    testing::InputGenerator gen(3);
    for (int trial = 0; trial < 5; ++trial) {
        double g2 = gen.uniform(0.02, 0.24);
        auto out = run_qutrit_teleport(random_qutrit(gen), g2, 8);
        double single = teleport_probability(g2);
        CHECK(std::abs(out.success_probability - single * single) < 1e-13);
        CHECK(std::abs(1 - out.fidelity) < 1e-12);
        REQUIRE(out.claimed_probability.has_value());
        CHECK(*out.claimed_probability == doctest::Approx(3 * single * single));
        CHECK(out.output_state.modes() == ModeSet({h_mode(3), v_mode(3)}));
    }
}

TEST_CASE("fidelity") {
    ModeSet one({path_mode(0)});
    auto a = PureState::basis(one, {0}, 2);
    auto b = PureState::basis(one, {1}, 2);
    CHECK(fidelity(a, a.scaled(Amplitude{0.0, 3.0})) == doctest::Approx(1.0));
    CHECK(fidelity(a, b) == 0.0);
    CHECK_THROWS_AS(fidelity(a, PureState::zero(one, 2)), std::invalid_argument);
}

TEST_CASE("teleportation success is maximized near gamma2 = 0.1502") {
    auto qubit = optimize_teleport_success(Protocol::kTeleportQubit, 0.001, 0.3, 1e-9);
    CHECK(std::abs(qubit.gamma2 - 0.15021378063289387) < 1e-6);
    CHECK(std::abs(qubit.probability - 0.08846965273972918) < 1e-12);

    auto qutrit = optimize_teleport_success(Protocol::kTeleportQutrit, 0.001, 0.3, 1e-6, 6);
    CHECK(std::abs(qutrit.gamma2 - 0.15021378063289387) < 1e-5);
    CHECK(std::abs(qutrit.probability - 0.08846965273972918 * 0.08846965273972918) < 1e-12);

    CHECK_THROWS_AS(optimize_teleport_success(Protocol::kNls, 0.001, 0.3, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(optimize_teleport_success(Protocol::kTeleportQubit, 0.25, 0.3, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(optimize_teleport_success(Protocol::kTeleportQubit, 0.0, 0.3, 1e-6), std::invalid_argument);
}

TEST_CASE("sweep") {
    std::vector<double> grid{0.05, 0.1, 0.5, 0.2, 0.3};
    InputCoefficients in{1 / std::sqrt(2.0), 1 / std::sqrt(2.0), std::nullopt};
    auto rows = sweep(Protocol::kTeleportQubit, grid, in);
    REQUIRE(rows.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(rows[i].gamma2 == grid[i]);

    CHECK(rows[1].error.empty());
    CHECK(rows[1].probability == doctest::Approx(0.0759375).epsilon(1e-13));
    CHECK(*rows[1].gamma1 == doctest::Approx(0.15625));
    CHECK(rows[2].error == "gamma2 must lie in (0,0.5)");
    CHECK_FALSE(rows[2].gamma1.has_value());
    CHECK_FALSE(rows[4].error.empty());

    SUBCASE("thread count does not change the rows") {
        auto threaded = sweep(Protocol::kTeleportQubit, grid, in, kWeakCouplingCutoff, 4);
        REQUIRE(threaded.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(threaded[i].probability == rows[i].probability);
            CHECK(threaded[i].fidelity == rows[i].fidelity);
            CHECK(threaded[i].error == rows[i].error);
        }
    }

    CHECK(sweep(Protocol::kTeleportQubit, std::span<const double>{}, in).empty());
    CHECK_THROWS_AS(sweep(Protocol::kNls, grid, in), std::invalid_argument);
}
