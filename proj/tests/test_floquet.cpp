#include "fixtures.hpp"

#include "wgf/floquet.hpp"
#include "wgf/propagator.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace wgf;
using std::numbers::pi;

namespace {

double floquet_residual(const SystemConfig& c, const FloquetSpectrum& s, int alpha, double z) {
    const Eigen::VectorXcd u = mode_profile(s, alpha, z);
    const Eigen::VectorXcd du = mode_profile_derivative(s, alpha, z);
    const Eigen::VectorXcd r = coupling_at(c, z).dense() * u - cplx(0.0, 1.0) * du -
                               s.modes[alpha].quasienergy * u;
    return r.norm();
}

}  // namespace

TEST_CASE("static embedding is block diagonal") {
    SystemConfig c = fixture::harmonic(0.0, 3);
    c.modulation = NoModulation{};
    const double w = 5.0;
    const auto h = build_extended_matrix(c, 1, w);
    REQUIRE(h.rows() == 12);
    const Eigen::MatrixXcd m = coupling_at(c, 0.0).dense();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
    CHECK((h.block(0, 0, 4, 4) - (m - w * id)).norm() == 0.0);
    CHECK((h.block(4, 4, 4, 4) - m).norm() == 0.0);
    CHECK((h.block(8, 8, 4, 4) - (m + w * id)).norm() == 0.0);
    CHECK(h.block(0, 4, 4, 8).norm() == 0.0);
    CHECK(h.block(4, 8, 4, 4).norm() == 0.0);
}

TEST_CASE("harmonic extended matrix couples neighbouring harmonics only") {
    const auto c = fixture::harmonic(3.0, 3);
    const int N = 3, d = 4;
    const auto h = build_extended_matrix(c, N);
    CHECK((h - h.adjoint()).norm() == 0.0);
    for (int n = 0; n < 2 * N + 1; ++n) {
        for (int m = 0; m < 2 * N + 1; ++m) {
            const Eigen::MatrixXcd blk = h.block(n * d, m * d, d, d);
            if (std::abs(n - m) > 1) {
                CHECK(blk.norm() == 0.0);
            } else if (std::abs(n - m) == 1) {
                CHECK(blk(0, 1) == cplx(1.5));
                CHECK(blk(1, 0) == cplx(1.5));
                CHECK(blk.norm() == doctest::Approx(1.5 * std::sqrt(2.0)));
            }
        }
    }
}

TEST_CASE("step extended matrix is Hermitian") {
    const auto h = build_extended_matrix(fixture::step(1.0, 5), 6);
    CHECK((h - h.adjoint()).norm() < 1e-12);
    const auto r = build_solver_matrix(fixture::step(1.0, 5), 6);
    CHECK((r - r.transpose()).norm() < 1e-12);
}

TEST_CASE("unmodulated spectra are folded eigenvalues") {
    SystemConfig c = fixture::harmonic(0.0, 9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(coupling_at(c, 0.0).dense());
    std::vector<double> ref;
    for (int i = 0; i < es.eigenvalues().size(); ++i) ref.push_back(fold_into_zone(es.eigenvalues()(i), 8.0));
    const auto s = solve_spectrum(c, 10);
    CHECK(max_quasienergy_shift(s.quasienergies(), ref, 8.0) < 1e-10);

    SystemConfig stat = c;
    stat.modulation = NoModulation{};
    stat.kappa12_static = 0.6;
    const auto e = solve_static_spectrum(stat, 8.0, 4);
    CHECK(max_quasienergy_shift(e.quasienergies(), ref, 8.0) < 1e-10);
    // each mode occupies a single harmonic; modes already inside the zone sit in m = 0
    int constant = 0;
    for (std::size_t a = 0; a < e.size(); ++a) {
        const auto& mode = e.modes[a];
        int occupied = 0, which = 0;
        for (int m = mode.first_harmonic; m <= mode.last_harmonic(); ++m) {
            if (mode.component(m).norm() > 1e-10) {
                ++occupied;
                which = m;
            }
        }
        CHECK(occupied == 1);
        if (which == 0) {
            const int ai = static_cast<int>(a);
            CHECK((mode_profile(e, ai, 0.0) - mode_profile(e, ai, 0.37)).norm() < 1e-12);
            ++constant;
        }
    }
    CHECK(constant == 9);  // the array band lies inside the zone, the principal level does not

    auto flat = fixture::step(0.0, 9);
    const auto sf = solve_spectrum(flat, 6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ef(coupling_at(flat, 0.0).dense());
    std::vector<double> rf;
    for (int i = 0; i < ef.eigenvalues().size(); ++i) rf.push_back(fold_into_zone(ef.eigenvalues()(i), 8.0));
    CHECK(max_quasienergy_shift(sf.quasienergies(), rf, 8.0) < 1e-10);
}

TEST_CASE("spectrum structure") {
    for (const auto& c : {fixture::harmonic(3.0, 12), fixture::step(4.0, 12)}) {
        const auto s = solve_spectrum(c, 0);
        const double w = s.omega;
        REQUIRE(s.size() == 13);
        const auto q = s.quasienergies();
        CHECK(std::is_sorted(q.begin(), q.end()));
        for (const auto& m : s.modes) {
            CHECK(m.quasienergy > -w / 2);
            CHECK(m.quasienergy <= w / 2);
            CHECK(m.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
        }
        // replicas eps + n omega are present in the raw eigenvalues
        for (double e : q) {
            for (int n = -2; n <= 2; ++n) {
                double best = 1e9;
                for (double r : s.raw_eigenvalues) best = std::min(best, std::abs(r - (e + n * w)));
                CHECK(best < 1e-7);
            }
        }
        // {u(0)} is an orthonormal basis
        Eigen::MatrixXcd v(13, 13);
        for (int a = 0; a < 13; ++a) v.col(a) = mode_profile(s, a, 0.0);
        CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(13, 13)).norm() < 1e-6);
    }
}

TEST_CASE("mode profiles are periodic and solve the Floquet equation") {
    const auto c = fixture::harmonic(6.5, 10);
    const auto s = solve_spectrum(c, 0);
    const double Z = 2.0 * pi / 8.0;
    double worst = 0.0;
    for (int a = 0; a < 11; ++a) {
        CHECK((mode_profile(s, a, 0.0) - mode_profile(s, a, Z)).norm() < 1e-12);
        for (double z : {0.0, 0.13, 0.41, 0.7, 2.9}) worst = std::max(worst, floquet_residual(c, s, a, z));
    }
    CHECK(worst < 1e-6);

    const auto st = fixture::step(1.0, 6);
    const auto ss = solve_spectrum(st, 0);
    for (int a = 0; a < 7; ++a) {
        CHECK((mode_profile(ss, a, 0.1) - mode_profile(ss, a, 0.1 + 0.25 * pi)).norm() < 1e-12);
    }
}

TEST_CASE("Floquet and monodromy agree") {
    for (const auto& c : {fixture::harmonic(3.0, 16), fixture::step(1.0, 16), fixture::step(7.0, 16)}) {
        const auto s = solve_spectrum(c, 0);
        const auto u = monodromy(c);
        const auto mq = monodromy_quasienergies(u, *period(c));
        CHECK(max_quasienergy_shift(s.quasienergies(), mq, s.omega) < 1e-6);
    }
}

TEST_CASE("lab and co-moving frames agree for steps") {
    const auto c = fixture::step(3.0, 6);
    FloquetOptions lab;
    lab.force_lab_frame = true;
    lab.n_harmonics = 150;
    const auto a = solve_spectrum(c, lab);
    const auto b = solve_spectrum(c, 0);
    CHECK(b.frame == FloquetFrame::CoMoving);
    CHECK(a.frame == FloquetFrame::Lab);
    CHECK(max_quasienergy_shift(a.quasienergies(), b.quasienergies(), a.omega) < 1e-3);
    CHECK(max_quasienergy_shift(b.quasienergies(),
                                monodromy_quasienergies(exact_monodromy(c), 0.25 * pi), b.omega) < 1e-9);
}

TEST_CASE("truncation convergence") {
    for (const auto& c : {fixture::harmonic(3.0, 12), fixture::step(1.0, 12)}) {
        const int n = default_harmonics(c);
        const auto a = solve_spectrum(c, n);
        const auto b = solve_spectrum(c, n + 5);
        CHECK(max_quasienergy_shift(a.quasienergies(), b.quasienergies(), a.omega) < 1e-8);
    }
    FloquetOptions opt;
    opt.n_harmonics = 2;
    opt.verify_convergence = true;
    opt.convergence_tol = 1e-14;
    opt.max_doublings = 1;
    CHECK_THROWS_AS(solve_spectrum(fixture::step(6.0, 4), opt), ConvergenceFailure);
    opt.n_harmonics = 0;
    opt.convergence_tol = 1e-8;
    opt.max_doublings = 2;
    CHECK_NOTHROW(solve_spectrum(fixture::harmonic(3.0, 4), opt));
}

TEST_CASE("argument checks") {
    SystemConfig c = fixture::harmonic(0.0, 3);
    c.modulation = NoModulation{};
    CHECK_THROWS_AS(solve_spectrum(c, 3), ConfigError);
    CHECK_THROWS_AS(build_extended_matrix(fixture::harmonic(1.0, 3), 0), std::invalid_argument);
    CHECK(max_quasienergy_shift({3.9}, {-3.95}, 8.0) == doctest::Approx(0.15));
}
