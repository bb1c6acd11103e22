#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "relhartree/observables.hpp"
#include "relhartree/spectral.hpp"
#include "support/fields.hpp"
#include "support/oracles.hpp"

using namespace relhartree;

TEST_CASE("make_grid basic fields and examples") {
    auto g = make_grid(8, 8.0);
    CHECK(g->dx() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g->dxi() == doctest::Approx(2.0 * M_PI / 8.0).epsilon(1e-15));
    CHECK(g->dxi() == doctest::Approx(0.7853981634).epsilon(1e-9));
    CHECK(g->dx() * g->n() == doctest::Approx(g->extent()).epsilon(1e-15));

    auto g2 = make_grid(256, 128.0);
    CHECK(g2->dx() == doctest::Approx(0.5));
    CHECK(g2->nyquist() == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("make_grid rejects bad parameters") {
    CHECK_THROWS_AS(make_grid(7, 8.0), ConfigError);
    CHECK_THROWS_AS(make_grid(4, 8.0), ConfigError);   // below minimum
    CHECK_THROWS_AS(make_grid(12, 8.0), ConfigError);  // not a power of two
    CHECK_THROWS_AS(make_grid(64, 0.0), ConfigError);
    CHECK_THROWS_AS(make_grid(64, -3.0), ConfigError);
}

TEST_CASE("frequency lattice symmetric except Nyquist") {
    auto g = make_grid(16, 4.0);
    const auto& fr = g->freq_lattice();
    // storage order: k = 0..7, -8..-1
    CHECK(fr[0] == 0.0);
    for (int k = 1; k < 8; ++k) CHECK(fr[std::size_t(k)] == -fr[std::size_t(16 - k)]);
    CHECK(fr[8] == doctest::Approx(-M_PI * 16.0 / 4.0)); // lone Nyquist entry
}

TEST_CASE("constant field transforms to DC = extent^2") {
    auto g = make_grid(64, 8.0);
    Field one(g, Space::physical);
    for (auto& v : one.values()) v = 1.0;
    const Field hat = to_spectral(one);
    CHECK(hat[0].real() == doctest::Approx(64.0).epsilon(1e-12));
    CHECK(std::abs(hat[0].imag()) < 1e-10);
    double off = 0.0;
    for (std::size_t i = 1; i < hat.size(); ++i) off = std::max(off, std::abs(hat[i]));
    CHECK(off < 1e-10);
}

TEST_CASE("Gaussian transform matches quadrature oracle") {
    auto g = make_grid(128, 16.0);
    const Field f = testfields::gaussian(g, 1.0);
    const Field hat = to_spectral(f);
    // oracle: separable 1D quadrature of the continuum transform
    for (std::size_t i : {std::size_t(0), std::size_t(3), std::size_t(5 * 128 + 2),
                          std::size_t(120 * 128 + 126)}) {
        const Vec2 xi = g->freq_at(i);
        const double expected = oracles::gaussian_ft_1d(xi.x) * oracles::gaussian_ft_1d(xi.y);
        if (std::abs(expected) < 1e-12) continue;
        CHECK(hat[i].real() == doctest::Approx(expected).epsilon(1e-8));
        CHECK(std::abs(hat[i].imag()) < 1e-10);
        // closed form 2 pi e^{-|xi|^2/2} for sanity
        CHECK(expected == doctest::Approx(2.0 * M_PI * std::exp(-0.5 * norm2(xi))).epsilon(1e-8));
    }
}

TEST_CASE("roundtrip is the identity to 1e-12") {
    auto g = make_grid(64, 20.0);
    Rng rng(7);
    for (int rep = 0; rep < 3; ++rep) {
        const Field f = testfields::random_field(g, rng);
        CHECK(testfields::rel_l2_diff(to_physical(to_spectral(f)), f) < 1e-12);
        const Field s = testfields::random_field(g, rng, Space::spectral);
        CHECK(testfields::rel_l2_diff(to_spectral(to_physical(s)), s) < 1e-12);
    }
}

TEST_CASE("wrong-space inputs are rejected") {
    auto g = make_grid(8, 8.0);
    Field phys(g, Space::physical);
    Field spec(g, Space::spectral);
    CHECK_THROWS_AS(to_spectral(spec), UsageError);
    CHECK_THROWS_AS(to_physical(phys), UsageError);
}

TEST_CASE("discrete Parseval on 100 random fields") {
    auto g = make_grid(32, 12.0);
    Rng rng(11);
    for (int rep = 0; rep < 100; ++rep) {
        const Field f = testfields::random_field(g, rng);
        const Field hat = to_spectral(f);
        double phys2 = 0.0, spec2 = 0.0;
        for (const auto& v : f.values()) phys2 += std::norm(v);
        phys2 *= g->dx() * g->dx();
        for (const auto& v : hat.values()) spec2 += std::norm(v);
        spec2 *= g->dxi() * g->dxi();
        CHECK(phys2 == doctest::Approx(spec2 / (4.0 * M_PI * M_PI)).epsilon(1e-12));
    }
}

TEST_CASE("apply_multiplier: identity, zero mode, errors") {
    auto g = make_grid(32, 16.0);
    Rng rng(3);
    const Field f = testfields::random_field(g, rng);

    const Field id = apply_multiplier(f, [](Vec2) { return cplx(1.0); });
    CHECK(testfields::rel_l2_diff(id, f) < 1e-12);
    CHECK(id.space() == Space::physical);

    // spectral input stays spectral and is multiplied in place of a transform
    const Field hat = to_spectral(f);
    const Field hat_scaled = apply_multiplier(hat, [](Vec2) { return cplx(2.0); });
    CHECK(hat_scaled.space() == Space::spectral);
    CHECK(testfields::rel_l2_diff(hat_scaled, cplx(2.0) * hat) == 0.0);

    // <xi> on a constant field: only the zero mode is populated, <0> = 1
    Field one(g, Space::physical);
    for (auto& v : one.values()) v = 1.0;
    const Field scaled = apply_multiplier(one, [](Vec2 xi) { return cplx(bracket(xi)); });
    CHECK(testfields::rel_l2_diff(scaled, one) < 1e-12);

    CHECK_THROWS_AS(apply_multiplier(f,
                                     [](Vec2 xi) {
                                         return cplx(1.0 / norm(xi)); // inf at 0
                                     }),
                    NumericError);
    try {
        apply_multiplier(f, [](Vec2 xi) { return cplx(1.0 / norm(xi)); });
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("xi = (0, 0)") != std::string::npos);
    }
}

TEST_CASE("|xi|^2 multiplier equals the Laplacian of a Gaussian") {
    auto g = make_grid(256, 32.0);
    const Field f = testfields::gaussian(g, 1.0);
    const Field lap = apply_multiplier(f, [](Vec2 xi) { return cplx(norm2(xi)); });
    double worst = 0.0;
    for (std::size_t i = 0; i < lap.size(); ++i) {
        const double r2 = norm2(g->coord_at(i));
        const double expected = (2.0 - r2) * std::exp(-0.5 * r2);
        worst = std::max(worst, std::abs(lap[i].real() - expected) + std::abs(lap[i].imag()));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("apply_multiplier is linear and composes") {
    auto g = make_grid(32, 10.0);
    Rng rng(5);
    const Field f = testfields::random_field(g, rng);
    const Field h = testfields::random_field(g, rng);
    const Symbol a = [](Vec2 xi) { return cplx(std::cos(xi.x), 0.3 * std::sin(xi.y)); };
    const Symbol b = [](Vec2 xi) { return cplx(1.0 / (1.0 + norm2(xi)), 0.1); };

    const cplx alpha(0.7, -0.2), beta(-1.3, 0.4);
    const Field lhs = apply_multiplier(alpha * f + beta * h, a);
    const Field rhs = alpha * apply_multiplier(f, a) + beta * apply_multiplier(h, a);
    CHECK(testfields::rel_l2_diff(lhs, rhs) < 1e-12);

    const Field two_step = apply_multiplier(apply_multiplier(f, a), b);
    const Field one_step = apply_multiplier(f, [&](Vec2 xi) { return a(xi) * b(xi); });
    CHECK(testfields::rel_l2_diff(two_step, one_step) < 1e-12);
}
