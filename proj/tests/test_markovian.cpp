#include "fixtures.hpp"
#include "oracles.hpp"

#include "wgf/markovian.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wgf;
using std::numbers::pi;

namespace {

cplx filter_quadrature(const HarmonicCoupling& p, double beta, double z) {
    return oracle::integrate_c(
               [&](double t) { return std::exp(cplx(0.0, beta * t)) * (p.a * std::cos(p.omega * t) + p.b); }, 0.0,
               z) /
           std::sqrt(2.0 * pi);
}

}  // namespace

TEST_CASE("noise spectrum") {
    const auto c = fixture::harmonic(3.0, 200);
    const auto n = array_noise_spectrum(c);
    REQUIRE(n.beta_k.size() == 200);
    CHECK(n.total_weight() == doctest::Approx(1.0).epsilon(1e-13));
    const auto [lo, hi] = band_edges(c);
    for (double b : n.beta_k) {
        CHECK(b > lo);
        CHECK(b < hi);
    }
    CHECK(n.weight.front() == n.weight.back());
}

TEST_CASE("filter function") {
    const HarmonicCoupling flat{0.0, 8.0, 0.6};
    CHECK(std::abs(filter_function(flat, 0.0, 3.0) - cplx(0.6 * 3.0 / std::sqrt(2.0 * pi))) < 1e-14);
    CHECK(std::abs(filter_function(HarmonicCoupling{3.0, 8.0, 0.6}, 1.3, 0.0)) == 0.0);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        const HarmonicCoupling p{6.0 * u(rng), 2.0 + 8.0 * u(rng), u(rng)};
        const double z = 0.5 + 15.0 * u(rng);
        for (double beta : {10.0 * u(rng) - 5.0, 0.0, p.omega, -p.omega, p.omega + 1e-11, 1e-13}) {
            CHECK(std::abs(filter_function(p, beta, z) - filter_quadrature(p, beta, z)) < 1e-10);
        }
    }

    // resonance line grows linearly
    const HarmonicCoupling p{3.0, 8.0, 0.6};
    const double z = 400.0;
    CHECK(std::abs(filter_function(p, p.omega, z)) / (p.a * z / (2.0 * std::sqrt(2.0 * pi))) ==
          doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("accumulated coupling") {
    const HarmonicCoupling flat{0.0, 8.0, 0.6};
    CHECK(accumulated_coupling(flat, 7.0) == doctest::Approx(0.36 * 7.0).epsilon(1e-14));
    const HarmonicCoupling p{1.0, 8.0, 0.6};
    const double Z = 2.0 * pi / 8.0;
    for (int n : {1, 3, 40}) {
        CHECK(accumulated_coupling(p, n * Z) == doctest::Approx((0.5 + 0.36) * n * Z).epsilon(1e-12));
    }
    const double ref = oracle::integrate([&](double t) { return std::pow(std::cos(8.0 * t) + 0.6, 2); }, 0.0, 1.0);
    CHECK(std::abs(accumulated_coupling(p, 1.0) - ref) < 1e-10);

    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const HarmonicCoupling q{6.0 * u(rng), 1.0 + 9.0 * u(rng), u(rng)};
        const double z = 20.0 * u(rng);
        const double r = oracle::integrate(
            [&](double t) { return std::pow(q.a * std::cos(q.omega * t) + q.b, 2); }, 0.0, z);
        CHECK(std::abs(accumulated_coupling(q, z) - r) < 1e-10);
    }
}

TEST_CASE("damping exponent") {
    const auto c = fixture::harmonic(3.0, 200);
    const auto noise = array_noise_spectrum(c);
    const auto& p = std::get<HarmonicCoupling>(c.modulation);
    CHECK(damping_exponent(noise, p, 6.5, 0.0) == 0.0);
    CHECK(damping_exponent(noise, p, 6.5, 1e-6) < 1e-10);
    CHECK(markov_intensity(noise, p, 6.5, 1e-6) == doctest::Approx(1.0));

    const double Z = 2.0 * pi / 8.0;
    double prev = 1.0;
    for (int n = 1; n <= 200; n += 7) {
        const double z = n * Z;
        CHECK(damping_rate(noise, p, 6.5, z) >= 0.0);
        CHECK(accumulated_coupling(p, z) >= 0.0);
        const double m = markov_intensity(noise, p, 6.5, z);
        CHECK(m <= prev + 1e-12);
        prev = m;
        // overlap form: R Q equals 2 pi times the weighted |D|^2 sum
        double sum = 0.0;
        for (std::size_t k = 0; k < noise.beta_k.size(); ++k)
            sum += noise.weight[k] * std::norm(filter_function(p, noise.beta_k[k] - 6.5, z));
        CHECK(damping_exponent(noise, p, 6.5, z) == doctest::Approx(2.0 * pi * sum).epsilon(1e-12));
        CHECK(damping_rate(noise, p, 6.5, z) * accumulated_coupling(p, z) ==
              doctest::Approx(damping_exponent(noise, p, 6.5, z)).epsilon(1e-12));
    }
}

TEST_CASE("band discretisation is converged") {
    for (double a : {1.0, 3.0, 6.0}) {
        const auto c = fixture::harmonic(a, 200);
        const auto fine = fixture::harmonic(a, 400);
        const auto& p = std::get<HarmonicCoupling>(c.modulation);
        const auto n1 = array_noise_spectrum(c);
        const auto n2 = array_noise_spectrum(fine);
        for (double z : {5.0, 20.0, 60.0, 100.0}) {
            const double e1 = damping_exponent(n1, p, 6.5, z);
            const double e2 = damping_exponent(n2, p, 6.5, z);
            CHECK(std::abs(e1 - e2) < 0.01 * e2);
        }
    }
}

TEST_CASE("weak-coupling estimate decays for the harmonic family") {
    for (double a : {1.0, 3.0, 6.0}) {
        const auto c = fixture::harmonic(a, 200);
        const auto noise = array_noise_spectrum(c);
        CHECK(markov_intensity(noise, std::get<HarmonicCoupling>(c.modulation), 6.5, 100.0) < 0.05);
    }
}

TEST_CASE("comparison record") {
    const auto cmp = compare_with_exact(fixture::harmonic(3.0, 10), 2.0, 0.002, 50);
    REQUIRE(cmp.z.size() == 21);
    CHECK(cmp.markov.size() == 21);
    CHECK(cmp.exact.size() == 21);
    CHECK(cmp.markov.front() == 1.0);
    CHECK(cmp.exact.front() == 1.0);
    CHECK_THROWS_AS(compare_with_exact(fixture::step(1.0, 4), 1.0), ConfigError);
}
