#include "qsim/collision.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace qsim;

namespace {

ChainSpec make_spec(int L, double J, double Delta, std::vector<double> h) {
    ChainSpec s;
    s.L = L;
    s.J = J;
    s.Delta = Delta;
    s.h = std::move(h);
    return s;
}

Mat random_qubit(std::mt19937_64& eng) {
    std::normal_distribution<double> g;
    Mat a(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = cplx(g(eng), g(eng));
    Mat rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

}  // namespace

TEST_CASE("theta map") {
    CHECK(theta_from_gamma_tau(1, 0.05) == doctest::Approx(0.2226).epsilon(3e-3));
    CHECK(theta_from_gamma_tau(1, 0.2) == doctest::Approx(0.4398).epsilon(2e-3));
    CHECK(theta_from_gamma_tau(3.7, 0) == doctest::Approx(0));

    // inverse relation and monotonicity
    for (double gamma : {0.5, 1.0, 2.0})
        for (double tau : {0.01, 0.1, 0.4}) {
            double th = theta_from_gamma_tau(gamma, tau);
            double s = std::sin(th);
            CHECK(s * s == doctest::Approx(1 - std::exp(-gamma * tau)).epsilon(1e-14));
            CHECK(theta_from_gamma_tau(gamma + 0.1, tau) > th);
            CHECK(theta_from_gamma_tau(gamma, tau + 0.01) > th);
        }
}

TEST_CASE("partial iswap endpoints and block structure") {
    CHECK(frob_distance(partial_iswap(0), Mat::Identity(4, 4)) < 1e-14);

    Mat S = Mat::Zero(4, 4);
    S(0, 0) = S(1, 2) = S(2, 1) = S(3, 3) = 1;
    Mat full = partial_iswap(std::numbers::pi / 2);
    // central block is -i times the swap block; corners stay exactly 1
    CHECK(std::abs(full(0, 0) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(full(3, 3) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(full(1, 2) - cplx(0, -1)) < 1e-14);
    CHECK(std::abs(full(1, 1)) < 1e-14);

    double th = 0.2226;
    Mat u = partial_iswap(th);
    CHECK(u(1, 1).real() == doctest::Approx(0.97534).epsilon(1e-4));
    CHECK(u(1, 2).imag() == doctest::Approx(-0.22075).epsilon(1e-4));
    CHECK(is_unitary(u));
}

TEST_CASE("amplitude damping equivalence") {
    std::mt19937_64 eng(1);
    std::uniform_real_distribution<double> uth(0, std::numbers::pi / 2);
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
        Mat rho = random_qubit(eng);
        double th = uth(eng);
        Mat u = partial_iswap(th);
        Mat big = u * kron(rho, basis_state({0})) * u.adjoint();
        Mat out = partial_trace(big, {1}, 2);
        double lam = std::sin(th) * std::sin(th);
        double p = rho(0, 0).real();
        cplx q = rho(0, 1);
        Mat expect(2, 2);
        expect << lam + p * (1 - lam), q * std::sqrt(1 - lam),
            std::conj(q) * std::sqrt(1 - lam), (1 - p) * (1 - lam);
        worst = std::max(worst, (out - expect).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("trotter matches exact propagator when terms commute") {
    auto spec = make_spec(4, 0, 0.8, {0.3, -0.2, 0.5, 0.1});
    Mat exact = herm_expm(full_hamiltonian(spec), 0.05);
    Mat trot = trotter_unitary(spec, 0.01, 5);
    CHECK(frob_distance(trot, exact) < 1e-12);
}

TEST_CASE("trotter error scaling") {
    auto spec = make_spec(4, 1, 1.5, {0, 0, 0, 0});
    Mat H = full_hamiltonian(spec);
    double e1 = frob_distance(trotter_step(spec, 0.02), herm_expm(H, 0.02));
    double e2 = frob_distance(trotter_step(spec, 0.01), herm_expm(H, 0.01));
    CHECK(e1 / e2 == doctest::Approx(8).epsilon(0.2));
}

TEST_CASE("trotter additivity and merging consistency") {
    auto spec = make_spec(4, 1, 1.5, {0.1, 0, -0.1, 0.2});
    Mat a = trotter_unitary(spec, 0.01, 3);
    Mat b = trotter_unitary(spec, 0.01, 2);
    Mat c = trotter_unitary(spec, 0.01, 5);
    CHECK(frob_distance(a * b, c) < 1e-12);

    Mat step = trotter_step(spec, 0.01);
    Mat pow = step;
    for (int k = 1; k < 5; ++k) pow = step * pow;
    CHECK(frob_distance(pow, c) < 1e-13);
    CHECK(is_unitary(c));
}

TEST_CASE("theta=0 collisions conserve total magnetization") {
    auto spec = make_spec(3, 1, 0.7, {0.2, -0.1, 0.3});
    BathSpec baths(1.0, 1.0, 0.0);
    CollisionParams params;
    params.tau = 0.1;
    params.dt = 0.05;
    params.n_collisions = 20;
    params.theta = 0.0;
    Mat rho0 = default_initial_state(3);
    auto rec = run_collisional(spec, baths, params, rho0);
    double m0 = 0;
    for (double v : rec.mags.front()) m0 += v;
    for (const auto& mg : rec.mags) {
        double tot = 0;
        for (double v : mg) tot += v;
        CHECK(std::abs(tot - m0) < 1e-10);
    }
}

TEST_CASE("collisions map density matrices to density matrices") {
    auto spec = make_spec(2, 1, 1.5, {0, 0});
    BathSpec baths(1.0, 1.0, 0.0);
    CollisionParams params;
    params.tau = 0.2;
    params.dt = 0.01;
    params.n_collisions = 30;
    auto rec = run_collisional(spec, baths, params, default_initial_state(2));
    CHECK(is_density_matrix(rec.final_rho, 1e-10, 1e-10, 1e-9));
    for (const auto& mg : rec.mags)
        for (double v : mg) CHECK(std::abs(v) <= 1 + 1e-10);
}

TEST_CASE("two-spin chain reaches steady state in about 25 collisions") {
    auto spec = make_spec(2, 1, 1.5, {0, 0});
    BathSpec baths(1.0, 1.0, 0.0);
    CollisionParams params;
    params.tau = 0.2;
    params.dt = 0.01;
    params.n_collisions = 60;
    auto rec = run_collisional(spec, baths, params, default_initial_state(2));
    std::vector<double> j1;
    for (const auto& c : rec.currents) j1.push_back(c[0]);
    auto idx = detect_steady(j1, 10, 1e-3);
    REQUIRE(idx.has_value());
    CHECK(*idx >= 20);
    CHECK(*idx <= 35);
}

TEST_CASE("determinism and the sigma=0 noise path") {
    auto spec = make_spec(2, 1, 1.5, {0, 0});
    BathSpec baths(1.0, 1.0, 0.0);
    CollisionParams params;
    params.tau = 0.2;
    params.dt = 0.1;
    params.n_collisions = 10;
    Mat rho0 = default_initial_state(2);

    NoiseSpec off{0.0, 42};
    auto a = run_collisional(spec, baths, params, rho0);
    auto b = run_collisional(spec, baths, params, rho0, &off);
    NoiseSpec on{1e-3, 42};
    auto c = run_collisional(spec, baths, params, rho0, &on);
    auto d = run_collisional(spec, baths, params, rho0, &on);

    for (size_t m = 0; m < a.currents.size(); ++m) {
        CHECK(a.currents[m][0] == b.currents[m][0]);  // bit-for-bit
        CHECK(c.currents[m][0] == d.currents[m][0]);
    }
    bool differs = false;
    for (size_t m = 0; m < a.currents.size(); ++m)
        differs = differs || a.currents[m][0] != c.currents[m][0];
    CHECK(differs);
}

TEST_CASE("detect_steady basics") {
    std::vector<double> flat(30, 0.5);
    CHECK(detect_steady(flat, 10, 1e-3) == 10);

    std::vector<double> ramp;
    for (int i = 0; i < 50; ++i) ramp.push_back(0.1 * i);
    CHECK(!detect_steady(ramp, 10, 1e-3).has_value());

    CHECK_THROWS_AS(detect_steady(flat, 1, 1e-3), std::invalid_argument);
}

TEST_CASE("collision params validation") {
    CollisionParams p;
    p.tau = 0.2;
    p.dt = 0.03;
    p.n_collisions = 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.dt = 0.01;
    CHECK_NOTHROW(p.validate());
    CHECK(p.steps_per_collision() == 20);
}
