#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wbsw/equilibrium.hpp"

using namespace wbsw;

namespace {

// Plain bisection on the Bernoulli relation between explicit bounds.
double bisect_height(double m, double E, double b, double lo, double hi) {
    auto r = [&](double h) { return energy(h, m, b) - E; };
    double rlo = r(lo);
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double rm = r(mid);
        if ((rm > 0) == (rlo > 0)) {
            lo = mid;
            rlo = rm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("energy examples") {
    CHECK(energy(2.0, 4.42, 0.0) == doctest::Approx(22.06605).epsilon(1e-15));
    CHECK(energy(0.66, 1.53, 0.0) == doctest::Approx(1.53 * 1.53 / (2 * 0.66 * 0.66) + 9.812 * 0.66));
    CHECK(energy(1.0, 0.0, 0.0) == doctest::Approx(9.812));
    CHECK_THROWS_AS(energy(0.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(energy(-1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("froude examples") {
    CHECK(froude(2.0, 4.42) == doctest::Approx(0.499).epsilon(1e-3));
    CHECK(froude(critical_depth(1.53), 1.53) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(froude(1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(froude(0.0, 1.0), std::domain_error);
}

TEST_CASE("solve_height examples") {
    CHECK(solve_height({4.42, 22.06605}, 0.0, Branch::Subcritical) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(solve_height({0.0, 9.812}, 0.3, Branch::Subcritical) == doctest::Approx(0.7).epsilon(1e-14));
    const double h = solve_height({4.42, 22.06605}, 0.2, Branch::Subcritical);
    const double oracle = bisect_height(4.42, 22.06605, 0.2, critical_depth(4.42), 10.0);
    CHECK(std::abs(h - oracle) < 1e-12);
    CHECK(h == doctest::Approx(1.708).epsilon(1e-3));
    CHECK(rel(energy(h, 4.42, 0.2), 22.06605) <= 1e-12);
}

TEST_CASE("solve_height errors") {
    CHECK_THROWS_AS(solve_height({0.0, 9.812}, 0.3, Branch::Supercritical), std::domain_error);
    const double Ec = critical_energy(1.53, 0.2);
    try {
        solve_height({1.53, Ec - 0.5}, 0.2, Branch::Subcritical);
        FAIL("expected NoRootError");
    } catch (const NoRootError& e) {
        CHECK(e.deficit() == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("critical energy yields the critical depth on both branches") {
    const double m = 1.53, b = 0.2;
    const double hc = critical_depth(m);
    CHECK(hc == doctest::Approx(std::cbrt(1.53 * 1.53 / 9.812)).epsilon(1e-15));
    CHECK(std::abs(hc - 0.6204) < 1e-3);
    const double Ec = critical_energy(m, b);
    CHECK(solve_height({m, Ec}, b, Branch::Subcritical) == doctest::Approx(hc).epsilon(1e-12));
    CHECK(solve_height({m, Ec}, b, Branch::Supercritical) == doctest::Approx(hc).epsilon(1e-12));
}

TEST_CASE("transform examples and round trip") {
    const Conserved still = conservative_from_equilibrium({0.0, 9.812}, 0.0, Branch::Subcritical);
    CHECK(still.h == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(still.hu == 0.0);
    const Conserved a = conservative_from_equilibrium({4.42, 22.06605}, 0.0, Branch::Subcritical);
    CHECK(a.h == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(a.hu == 4.42);

    EquilibriumVariables v = equilibrium_from_conservative({2.0, 4.42}, 0.0);
    CHECK(v.m == 4.42);
    CHECK(v.E == doctest::Approx(22.06605).epsilon(1e-15));
    v = equilibrium_from_conservative({0.7, 0.0}, 0.3);
    CHECK(v.E == doctest::Approx(9.812).epsilon(1e-15));
    v = equilibrium_from_conservative({0.66, 1.53}, 0.0);
    CHECK(v.E == doctest::Approx(9.1629).epsilon(1e-4));
    CHECK_THROWS_AS(equilibrium_from_conservative({0.0, 1.0}, 0.0), std::domain_error);
}

TEST_CASE("randomized solve and round trip on both branches") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> um(0.05, 6.0), ub(0.0, 0.3), ufr(0.05, 0.95);
    for (int trial = 0; trial < 2000; ++trial) {
        const double m = um(rng), b = ub(rng);
        const double hc = critical_depth(m);
        // pick a depth by Froude number, then recover it
        const bool sub = trial % 2 == 0;
        const double fr = sub ? ufr(rng) : 1.0 / ufr(rng);
        const double h = std::cbrt(m * m / (kGravity * fr * fr));
        const Branch br = sub ? Branch::Subcritical : Branch::Supercritical;
        const EquilibriumVariables v{m, energy(h, m, b)};
        const double hs = solve_height(v, b, br);
        CHECK(rel(energy(hs, m, b), v.E) <= 1e-12);
        CHECK(std::abs(hs - h) <= 1e-9 * h);
        CHECK((sub ? hs > hc : hs < hc));
        CHECK(classify(hs, m, br) == br);
        const EquilibriumVariables back = equilibrium_from_conservative(conservative_from_equilibrium(v, b, br), b);
        CHECK(back.m == m);
        CHECK(rel(back.E, v.E) <= 1e-12);
    }
}

TEST_CASE("classify uses the hint only at criticality") {
    const double m = 1.0, hc = critical_depth(m);
    CHECK(classify(2.0 * hc, m, Branch::Supercritical) == Branch::Subcritical);
    CHECK(classify(0.5 * hc, m, Branch::Subcritical) == Branch::Supercritical);
    CHECK(classify(hc, m, Branch::Supercritical) == Branch::Supercritical);
    CHECK(classify(hc, m, Branch::Subcritical) == Branch::Subcritical);
}

TEST_CASE("reference equilibrium recovers sampled equilibria") {
    const Bathymetry bump = Bathymetry::bump();
    const Grid grid(0.0, 25.0, 100);
    const SteadyProfile profile =
        SteadyProfile::uniform({4.42, 22.06605}, Branch::Subcritical, bump, 0.0, 25.0);
    const ConservedState avg = profile.cell_averages(grid);
    for (int i = 0; i < 100; ++i) {
        const ReferenceResult r = reference_equilibrium({avg.h[i], avg.hu[i]}, i, grid, bump, Branch::Subcritical);
        CHECK_FALSE(r.fallback);
        CHECK(r.v.m == 4.42);
        CHECK(rel(r.v.E, 22.06605) <= 1e-12);
    }
}

TEST_CASE("reference equilibrium of still water") {
    const Bathymetry bump = Bathymetry::bump();
    const Grid grid(0.0, 25.0, 100);
    for (int i : {10, 33, 39, 40, 45}) {
        const double hbar = 1.0 - bump.average(grid.left(i), grid.right(i));
        const ReferenceResult r = reference_equilibrium({hbar, 0.0}, i, grid, bump, Branch::Subcritical);
        CHECK(r.v.m == 0.0);
        CHECK(rel(r.v.E, kGravity * 1.0) <= 1e-13);
    }
}

TEST_CASE("reference equilibrium against a nested bisection oracle") {
    const Bathymetry bump = Bathymetry::bump();
    const Grid grid(0.0, 25.0, 50);
    const int i = 19;  // cell [9.5, 10.0], b from 0.1875 to 0.2
    const double a = grid.left(i), bb = grid.right(i);
    const double m = 3.0;
    const double hbar = 1.5;
    // fine midpoint averaging, bisection over E
    auto mean_depth = [&](double E) {
        const int k = 4000;
        double s = 0.0;
        for (int j = 0; j < k; ++j) {
            const double x = a + (j + 0.5) * (bb - a) / k;
            const double b = bump(x);
            s += bisect_height(m, E, b, critical_depth(m), 50.0);
        }
        return s / k;
    };
    double lo = critical_energy(m, 0.2), hi = 40.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mean_depth(mid) < hbar ? lo : hi) = mid;
    }
    const ReferenceResult r = reference_equilibrium({hbar, m}, i, grid, bump, Branch::Subcritical);
    CHECK_FALSE(r.fallback);
    CHECK(r.v.E == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
}

TEST_CASE("reference equilibrium randomized recovery over the bump grid") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> um(0.1, 5.0), ufr(0.2, 0.8);
    const Bathymetry bump = Bathymetry::bump();
    const Grid grid(0.0, 25.0, 50);
    for (int trial = 0; trial < 10; ++trial) {
        const double m = um(rng);
        const bool sub = trial % 2 == 0;
        const Branch br = sub ? Branch::Subcritical : Branch::Supercritical;
        // choose E realizable at the crest with margin
        const double fr = sub ? ufr(rng) : 1.0 / ufr(rng);
        const double h = std::cbrt(m * m / (kGravity * fr * fr));
        const EquilibriumVariables v{m, energy(h, m, 0.2)};
        const SteadyProfile p = SteadyProfile::uniform(v, br, bump, 0.0, 25.0);
        const ConservedState avg = p.cell_averages(grid);
        for (int i = 0; i < grid.n_cells(); ++i) {
            const ReferenceResult r = reference_equilibrium({avg.h[i], avg.hu[i]}, i, grid, bump, br);
            CHECK_FALSE(r.fallback);
            CHECK(rel(r.v.E, v.E) <= 1e-12);
        }
    }
}

TEST_CASE("reference equilibrium falls back when no energy fits") {
    const Bathymetry bump = Bathymetry::bump();
    const Grid grid(0.0, 25.0, 100);
    // supercritical-branch depth far above critical cannot be matched on that branch
    const ReferenceResult r = reference_equilibrium({5.0, 0.5}, 40, grid, bump, Branch::Supercritical);
    if (r.fallback) {
        CHECK(r.v.E == doctest::Approx(energy(5.0, 0.5, bump(grid.center(40)))));
    }
    CHECK(r.v.m == 0.5);
}

TEST_CASE("shock position and Rankine-Hugoniot residual") {
    const double g = kGravity, m = 0.18;
    const double Eu = 1.5 * std::pow(g * m, 2.0 / 3.0) + g * 0.2;
    const double Ed = m * m / (2 * 0.33 * 0.33) + g * 0.33;
    const Bathymetry bump = Bathymetry::bump();
    const double xs = shock_position(m, Eu, Ed, bump);
    CHECK(std::abs(xs - 11.665504281554291) < 1e-6);
    const double hsup = solve_height({m, Eu}, bump(xs), Branch::Supercritical);
    const double hsub = solve_height({m, Ed}, bump(xs), Branch::Subcritical);
    CHECK(std::abs(momentum_flux(hsup, m) - momentum_flux(hsub, m)) < 1e-10);
    CHECK_THROWS_AS(shock_position(m, Eu, Eu, bump), std::invalid_argument);
}

TEST_CASE("steady profiles of the benchmark cases") {
    const Bathymetry bump = Bathymetry::bump();
    CaseSpec a;
    a.energy_upstream = a.energy_downstream = 22.06605;
    const SteadyProfile pa = steady_profile(a, bump);
    CHECK(pa.depth(3.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(pa.depth(20.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(pa.branch_at(10.0) == Branch::Subcritical);

    CaseSpec b;
    b.flow = FlowCase::Transcritical;
    b.discharge = 1.53;
    const SteadyProfile pb = steady_profile(b, bump);
    CHECK(pb.depth(10.0) == doctest::Approx(critical_depth(1.53)).epsilon(1e-10));
    CHECK(froude(pb.depth(5.0), 1.53) < 1.0);
    CHECK(froude(pb.depth(15.0), 1.53) > 1.0);
    // Froude crosses one exactly once
    int crossings = 0;
    double prev = froude(pb.depth(0.05), 1.53) - 1.0;
    for (int k = 1; k < 500; ++k) {
        const double cur = froude(pb.depth(0.05 * k + 0.025), 1.53) - 1.0;
        crossings += (cur > 0) != (prev > 0);
        prev = cur;
    }
    CHECK(crossings == 1);

    CaseSpec c;
    c.flow = FlowCase::TranscriticalShock;
    c.discharge = 0.18;
    c.energy_upstream = 1.5 * std::pow(kGravity * 0.18, 2.0 / 3.0) + kGravity * 0.2;
    c.energy_downstream = 0.18 * 0.18 / (2 * 0.33 * 0.33) + kGravity * 0.33;
    const SteadyProfile pc = steady_profile(c, bump);
    REQUIRE(pc.shock());
    CHECK(std::abs(*pc.shock() - 11.665504281554291) < 1e-6);
    CHECK(pc.branch_at(11.0) == Branch::Supercritical);
    CHECK(pc.branch_at(12.0) == Branch::Subcritical);
    CHECK(pc.branch_at(5.0) == Branch::Subcritical);
    CHECK(pc.depth(20.0) == doctest::Approx(0.33).epsilon(1e-12));
    CHECK(pc.equilibrium_at(5.0).E == doctest::Approx(c.energy_upstream));
}

TEST_CASE("unrealizable profile names the failing cell") {
    CaseSpec b;
    b.flow = FlowCase::Subcritical;
    b.discharge = 1.53;
    b.energy_upstream = b.energy_downstream = 1.53 * 1.53 / (2 * 0.66 * 0.66) + kGravity * 0.66;
    try {
        steady_profile(b, Bathymetry::bump());
        FAIL("expected an error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("cell") != std::string::npos);
    }
}
