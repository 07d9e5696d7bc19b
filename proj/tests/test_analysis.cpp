#include "fixtures.hpp"

#include "wgf/analysis.hpp"
#include "wgf/floquet.hpp"
#include "wgf/propagator.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wgf;
using std::numbers::pi;

TEST_CASE("gap criterion") {
    CHECK(gap_exists(fixture::harmonic(1.0, 4, 8.0)).exists);
    CHECK(gap_exists(fixture::harmonic(1.0, 4, 8.0)).width == doctest::Approx(4.0));
    CHECK_FALSE(gap_exists(fixture::harmonic(1.0, 4, 4.0)).exists);
    CHECK(gap_exists(fixture::harmonic(1.0, 4, 4.0)).width == 0.0);
    CHECK_FALSE(gap_exists(fixture::harmonic(1.0, 4, 3.0)).exists);
    CHECK(gap_exists(fixture::step(1.0, 4)).width == doctest::Approx(4.0));
    SystemConfig c = fixture::two_level();
    c.kappa = 2.0;
    CHECK(gap_exists(c, 10.0).width == doctest::Approx(2.0));
}

TEST_CASE("folded band") {
    auto c = fixture::harmonic(1.0, 4);
    auto band = folded_band(c, 8.0);
    REQUIRE(band.size() == 1);
    CHECK(band[0].lo == doctest::Approx(-1.8));
    CHECK(band[0].hi == doctest::Approx(2.2));
    c.beta = 3.5;  // [1.5, 5.5] straddles the zone edge at 4
    band = folded_band(c, 8.0);
    REQUIRE(band.size() == 2);
    CHECK(distance_to_band(band, 3.0, 8.0) == 0.0);
    CHECK(distance_to_band(band, -3.0, 8.0) == 0.0);
    CHECK(distance_to_band(band, 0.5, 8.0) == doctest::Approx(1.0));
    CHECK(distance_to_band(band, -2.0, 8.0) == doctest::Approx(0.5));
    CHECK(folded_band(c, 3.0).size() == 1);
    CHECK(folded_band(c, 3.0)[0].hi - folded_band(c, 3.0)[0].lo == doctest::Approx(3.0));
}

TEST_CASE("FBM detection on a short array") {
    // L = 40 is long enough to separate the band from the isolated branch
    const auto r0 = find_fbm(fixture::harmonic(0.5, 40));
    const auto r1 = find_fbm(fixture::harmonic(3.0, 40));
    const auto r2 = find_fbm(fixture::harmonic(6.5, 40));
    CHECK(r0.count == 0);
    CHECK(r1.count == 1);
    CHECK(r2.count == 2);
    for (const auto& r : {r0, r1, r2}) {
        CHECK(r.quasienergies.size() == static_cast<std::size_t>(r.count));
        CHECK(r.overlaps.size() == static_cast<std::size_t>(r.count));
        CHECK(r.gap_width == doctest::Approx(4.0));
        for (int l = 0; l < r.count; ++l) {
            CHECK(distance_to_band(r.band, r.quasienergies[l], 8.0) > 8e-3);
            CHECK(r.principal_weights[l] > 0.05);
        }
    }
    const auto g = find_fbm(fixture::gap_family(3.0, 40));
    CHECK(g.gap_absent);
    CHECK(g.count == 0);
    CHECK(g.gap_width == 0.0);
}

TEST_CASE("FBM count limit") {
    const auto c = fixture::harmonic(6.5, 40);
    const auto s = solve_spectrum(c, 0);
    FbmOptions loose;
    loose.tol_gap_factor = -1.0;  // every mode qualifies
    loose.w_min = 0.0;
    CHECK_THROWS_AS(detect_fbm(s, c, loose), FbmCountError);
}

TEST_CASE("asymptotic intensity") {
    const auto c1 = fixture::harmonic(3.0, 40);
    const auto s1 = solve_spectrum(c1, 0);
    const auto r1 = detect_fbm(s1, c1);
    REQUIRE(r1.count == 1);
    const double Z = 2.0 * pi / 8.0;
    for (double z : {10.0, 33.3, 71.0}) {
        CHECK(std::abs(asymptotic_intensity(r1, s1, z) - asymptotic_intensity(r1, s1, z + Z)) < 1e-10);
        CHECK(asymptotic_terms(r1, s1, z).interference == 0.0);
    }

    FbmReport none;
    CHECK(asymptotic_intensity(none, s1, 5.0) == 0.0);

    const auto c2 = fixture::harmonic(6.5, 40);
    const auto s2 = solve_spectrum(c2, 0);
    const auto r2 = detect_fbm(s2, c2);
    REQUIRE(r2.count == 2);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    double spread = 0.0;
    for (int i = 0; i < 30; ++i) {
        const double z = u(rng);
        const auto t = asymptotic_terms(r2, s2, z);
        CHECK(t.total() == doctest::Approx(asymptotic_intensity(r2, s2, z)).epsilon(1e-12));
        // diagonal part is Z-periodic, the interference beats at eps_1 - eps_2
        CHECK(t.diagonal == doctest::Approx(asymptotic_terms(r2, s2, z + Z).diagonal).epsilon(1e-10));
        spread = std::max(spread, std::abs(t.interference));
    }
    CHECK(spread > 1e-3);
}

TEST_CASE("asymptotic formula tracks the exact intensity") {
    // L = 100: echoes from the far end of the array return only after z ~ 100
    const auto c = fixture::harmonic(3.0, 100);
    const auto s = solve_spectrum(c, 0);
    const auto r = detect_fbm(s, c);
    REQUIRE(r.count == 1);
    const auto trace = propagate(c, 90.0, 0.0, 20);
    double worst = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace.z[i] < 40.0) continue;
        worst = std::max(worst, std::abs(trace.principal_intensity(i) - asymptotic_intensity(r, s, trace.z[i])));
    }
    CHECK(worst < 0.03);
}
