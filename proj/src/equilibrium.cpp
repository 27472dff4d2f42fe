#include "wbsw/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wbsw {

namespace {

// Energies closer than this (relative) to the critical energy snap to the
// critical depth; the two roots there differ only by round-off amplification.
constexpr double kCriticalSnap = 1e-13;

double scale_of(double E) { return std::max(1.0, std::abs(E)); }

}  // namespace

double energy(double h, double m, double b, double g) {
    if (!(h > 0.0)) throw std::domain_error("energy: depth must be positive");
    return m * m / (2.0 * h * h) + g * (h + b);
}

double froude(double h, double m, double g) {
    if (!(h > 0.0)) throw std::domain_error("froude: depth must be positive");
    return std::abs(m) / (h * std::sqrt(g * h));
}

double critical_depth(double m, double g) { return std::cbrt(m * m / g); }

double critical_energy(double m, double b, double g) {
    return 1.5 * g * critical_depth(m, g) + g * b;
}

double momentum_flux(double h, double m, double g) { return m * m / h + 0.5 * g * h * h; }

Branch classify(double h, double m, Branch hint, double g) {
    if (m == 0.0) return Branch::Subcritical;
    const double fr = froude(h, m, g);
    if (std::abs(fr - 1.0) <= 1e-9) return hint;
    return fr < 1.0 ? Branch::Subcritical : Branch::Supercritical;
}

double solve_height(EquilibriumVariables v, double b, Branch branch, double g) {
    const double m = v.m;
    const double E = v.E;
    if (m == 0.0) {
        if (branch == Branch::Supercritical) {
            throw std::domain_error("solve_height: supercritical branch undefined for zero discharge");
        }
        const double h = E / g - b;
        if (!(h > 0.0)) {
            throw NoRootError("solve_height: still water below the bottom", g * b - E);
        }
        return h;
    }

    const double hc = critical_depth(m, g);
    const double deficit = critical_energy(m, b, g) - E;
    const double snap = kCriticalSnap * scale_of(E);
    if (!(deficit <= snap)) {
        std::ostringstream msg;
        msg << "solve_height: no root on branch (m=" << m << ", E=" << E << ", b=" << b
            << ", energy deficit " << deficit << ")";
        throw NoRootError(msg.str(), deficit);
    }
    if (deficit >= -snap) return hc;

    // f(h) = energy - E is convex in h with its minimum at hc, so Newton started
    // on the far side of the root converges monotonically. The bracket guards
    // against round-off near the minimum.
    const double m2 = m * m;
    auto f = [&](double h) { return m2 / (2.0 * h * h) + g * (h + b) - E; };
    auto df = [&](double h) { return g - m2 / (h * h * h); };

    double neg;  // f < 0
    double pos;  // f > 0
    double h;
    if (branch == Branch::Subcritical) {
        neg = hc;
        pos = E / g - b;
        h = pos;
    } else {
        neg = hc;
        pos = std::abs(m) / std::sqrt(2.0 * (E - g * b));
        h = pos;
    }

    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * scale_of(E);
    for (int iter = 0; iter < 200; ++iter) {
        const double fh = f(h);
        if (std::abs(fh) <= tol) return h;
        if (fh < 0.0) neg = h; else pos = h;
        const double slope = df(h);
        double next = h - fh / slope;
        const double lo = std::min(neg, pos);
        const double hi = std::max(neg, pos);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - h) <= 2.0 * std::numeric_limits<double>::epsilon() * h) return next;
        h = next;
    }
    return h;
}

Conserved conservative_from_equilibrium(EquilibriumVariables v, double b, Branch branch, double g) {
    return {solve_height(v, b, branch, g), v.m};
}

EquilibriumVariables equilibrium_from_conservative(Conserved u, double b, double g) {
    return {u.hu, energy(u.h, u.hu, b, g)};
}

ReferenceResult reference_equilibrium(Conserved u_bar, const CellQuadrature& quadrature,
                                      std::span<const double> b_nodes, double b_max,
                                      double b_center, Branch hint, double g) {
    if (!(u_bar.h > 0.0)) throw std::domain_error("reference_equilibrium: depth must be positive");
    const double m = u_bar.hu;
    const double target = u_bar.h;
    const Branch branch = classify(target, m, hint, g);
    const ReferenceResult fallback{{m, energy(target, m, b_center, g)}, branch, true};

    if (m == 0.0) {
        // Still water: h = E/g - b is affine in E, so the average inverts exactly.
        const double b_mean = quadrature.mean([&](int k) { return b_nodes[k]; });
        const double E = g * (target + b_mean);
        if (!(E / g - b_max > 0.0)) return fallback;
        return {{0.0, E}, branch, false};
    }

    const double sign = branch == Branch::Subcritical ? 1.0 : -1.0;
    std::vector<double> depths(b_nodes.size());
    // Residual oriented to increase with E on either branch.
    auto residual = [&](double E, double* slope) {
        for (std::size_t k = 0; k < depths.size(); ++k) {
            depths[k] = solve_height({m, E}, b_nodes[k], branch, g);
        }
        const double mean = quadrature.mean([&](int k) { return depths[k]; });
        if (slope) {
            // dh/dE = 1 / (g - m^2 / h^3) along the Bernoulli relation.
            *slope = sign * quadrature.mean([&](int k) {
                const double h = depths[k];
                return 1.0 / (g - m * m / (h * h * h));
            });
        }
        return sign * (mean - target);
    };

    const double e_min = critical_energy(m, b_max, g);
    const double r_min = residual(e_min, nullptr);
    if (r_min >= 0.0) {
        if (r_min <= 1e-12 * target) return {{m, e_min}, branch, false};
        return fallback;
    }

    double lo = e_min;
    double hi;
    double x = std::max(fallback.v.E, e_min);
    if (residual(x, nullptr) >= 0.0) {
        hi = x;
    } else {
        lo = x;
        double step = std::max(x - e_min, 1e-3 * scale_of(x));
        hi = x + step;
        int guard = 0;
        while (residual(hi, nullptr) < 0.0) {
            lo = hi;
            step *= 2.0;
            hi = lo + step;
            if (++guard > 200) return fallback;
        }
    }

    const double tol = 8.0 * std::numeric_limits<double>::epsilon() * target;
    for (int iter = 0; iter < 200; ++iter) {
        double slope = 0.0;
        const double r = residual(x, &slope);
        if (std::abs(r) <= tol) break;
        if (r < 0.0) lo = x; else hi = x;
        double next = x - r / slope;
        if (!std::isfinite(next) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
            x = next;
            break;
        }
        x = next;
    }
    return {{m, x}, branch, false};
}

ReferenceResult reference_equilibrium(Conserved u_bar, int cell, const Grid& grid,
                                      const Bathymetry& bathymetry, Branch hint, double g) {
    const CellQuadrature q(grid.left(cell), grid.right(cell), bathymetry.kinks());
    std::vector<double> b_nodes(q.nodes.size());
    std::transform(q.nodes.begin(), q.nodes.end(), b_nodes.begin(),
                   [&](double x) { return bathymetry(x); });
    return reference_equilibrium(u_bar, q, b_nodes, bathymetry.max_on(q.a, q.b),
                                 bathymetry(grid.center(cell)), hint, g);
}

// ---------------------------------------------------------------------------

SteadyProfile::SteadyProfile(double discharge, std::vector<ProfileSegment> segments,
                             Bathymetry bathymetry, double g, std::optional<double> shock)
    : m_(discharge),
      segments_(std::move(segments)),
      bathymetry_(std::move(bathymetry)),
      g_(g),
      shock_(shock) {
    if (segments_.empty()) throw std::invalid_argument("SteadyProfile: no segments");
}

SteadyProfile SteadyProfile::uniform(EquilibriumVariables v, Branch branch, Bathymetry bathymetry,
                                     double x_min, double x_max, double g) {
    return SteadyProfile(v.m, {{x_min, x_max, v.E, branch}}, std::move(bathymetry), g);
}

const ProfileSegment& SteadyProfile::segment_at(double x) const {
    for (const auto& s : segments_) {
        if (x < s.x_end) return s;
    }
    return segments_.back();
}

EquilibriumVariables SteadyProfile::equilibrium_at(double x) const {
    return {m_, segment_at(x).energy};
}

double SteadyProfile::depth(double x) const {
    const auto& s = segment_at(x);
    return solve_height({m_, s.energy}, bathymetry_(x), s.branch, g_);
}

std::vector<double> SteadyProfile::breakpoints() const {
    std::vector<double> cuts(bathymetry_.kinks().begin(), bathymetry_.kinks().end());
    for (std::size_t s = 0; s + 1 < segments_.size(); ++s) cuts.push_back(segments_[s].x_end);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

ConservedState SteadyProfile::cell_averages(const Grid& grid) const {
    const auto cuts = breakpoints();
    ConservedState state(grid.n_cells());
    for (int i = 0; i < grid.n_cells(); ++i) {
        state.h[i] = cell_average([this](double x) { return depth(x); }, i, grid, cuts);
        state.hu[i] = m_;
    }
    return state;
}

std::vector<Branch> SteadyProfile::cell_branches(const Grid& grid) const {
    std::vector<Branch> out(grid.n_cells());
    for (int i = 0; i < grid.n_cells(); ++i) out[i] = branch_at(grid.center(i));
    return out;
}

double shock_position(double m, double energy_up, double energy_down, const Bathymetry& bathymetry,
                      Interval search, double g) {
    if (energy_up == energy_down) {
        throw std::invalid_argument("shock_position: equal energies admit no stationary jump");
    }
    auto downstream_exists = [&](double x) {
        return critical_energy(m, bathymetry(x), g) <= energy_down;
    };
    auto mismatch = [&](double x) {
        const double b = bathymetry(x);
        const double h_sup = solve_height({m, energy_up}, b, Branch::Supercritical, g);
        const double h_sub = solve_height({m, energy_down}, b, Branch::Subcritical, g);
        return momentum_flux(h_sup, m, g) - momentum_flux(h_sub, m, g);
    };

    double lo = search.lo;
    double hi = search.hi;
    if (!downstream_exists(hi)) {
        throw std::runtime_error("shock_position: downstream state not realizable on the interval");
    }
    if (!downstream_exists(lo)) {
        // Move the lower end onto the edge of the downstream state's existence.
        double a = lo;
        double c = hi;
        for (int it = 0; it < 200 && c - a > 0.0; ++it) {
            const double mid = 0.5 * (a + c);
            if (mid == a || mid == c) break;
            if (downstream_exists(mid)) c = mid; else a = mid;
        }
        lo = c;
    }

    double f_lo = mismatch(lo);
    const double f_hi = mismatch(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw std::runtime_error("shock_position: momentum-flux mismatch has no sign change");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f_mid = mismatch(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

SteadyProfile steady_profile(const CaseSpec& spec, const Bathymetry& bathymetry) {
    const double g = spec.g;
    const double m = spec.discharge;
    std::optional<SteadyProfile> profile;

    auto crest = [&]() {
        if (bathymetry.crests().empty()) {
            throw std::invalid_argument("steady_profile: transcritical case needs a crest");
        }
        return bathymetry.crests().front();
    };

    switch (spec.flow) {
        case FlowCase::Subcritical:
            profile = SteadyProfile::uniform({m, spec.energy_upstream}, Branch::Subcritical,
                                             bathymetry, spec.x_min, spec.x_max, g);
            break;
        case FlowCase::Transcritical: {
            const double xc = crest();
            const double e_star = critical_energy(m, bathymetry(xc), g);
            profile = SteadyProfile(m,
                                    {{spec.x_min, xc, e_star, Branch::Subcritical},
                                     {xc, spec.x_max, e_star, Branch::Supercritical}},
                                    bathymetry, g);
            break;
        }
        case FlowCase::TranscriticalShock: {
            const double xc = crest();
            const double xs = shock_position(m, spec.energy_upstream, spec.energy_downstream,
                                             bathymetry, {xc, spec.x_max}, g);
            profile = SteadyProfile(m,
                                    {{spec.x_min, xc, spec.energy_upstream, Branch::Subcritical},
                                     {xc, xs, spec.energy_upstream, Branch::Supercritical},
                                     {xs, spec.x_max, spec.energy_downstream, Branch::Subcritical}},
                                    bathymetry, g, xs);
            break;
        }
        case FlowCase::LakeAtRest:
            profile = SteadyProfile::uniform({0.0, g * spec.surface}, Branch::Subcritical, bathymetry,
                                             spec.x_min, spec.x_max, g);
            break;
    }

    const Grid grid = spec.grid();
    const auto cuts = profile->breakpoints();
    for (int i = 0; i < grid.n_cells(); ++i) {
        const CellQuadrature q(grid.left(i), grid.right(i), cuts);
        std::vector<double> probes = q.nodes;
        probes.push_back(q.a);
        probes.push_back(q.b);
        for (double x : probes) {
            try {
                (void)profile->depth(x);
            } catch (const NoRootError& err) {
                std::ostringstream msg;
                msg << "steady_profile: case " << to_string(spec.flow)
                    << " not realizable in cell " << i << " at x=" << x << ": " << err.what();
                throw NoRootError(msg.str(), err.deficit());
            }
        }
    }
    return *profile;
}

}  // namespace wbsw
