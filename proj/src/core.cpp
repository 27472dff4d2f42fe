#include "wbsw/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace wbsw {

Grid::Grid(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells), dx_(0.0) {
    if (n_cells <= 0 || !(x_max > x_min)) {
        throw std::invalid_argument("Grid: need x_max > x_min and n_cells > 0");
    }
    dx_ = (x_max - x_min) / n_cells;
}

double wave_speed(Conserved u, double g) { return std::abs(u.hu / u.h) + std::sqrt(g * u.h); }

void require_positive_depth(const ConservedState& state, const std::string& context) {
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!(state.h[i] > 0.0) || !std::isfinite(state.hu[i])) {
            std::ostringstream msg;
            msg << context << ": non-positive or non-finite state in cell " << i
                << " (h=" << state.h[i] << ", hu=" << state.hu[i] << ")";
            throw FatalDiagnostic(msg.str());
        }
    }
}

// Legendre roots mapped from [-1, 1] to [0, 1].
const std::array<double, GaussRule::kPoints> GaussRule::nodes = {
    0.5 - 0.5 * 0.906179845938663992797626878299,
    0.5 - 0.5 * 0.538469310105683091036314420700,
    0.5,
    0.5 + 0.5 * 0.538469310105683091036314420700,
    0.5 + 0.5 * 0.906179845938663992797626878299,
};
const std::array<double, GaussRule::kPoints> GaussRule::weights = {
    0.5 * 0.236926885056189087514264040720,
    0.5 * 0.478628670499366468041291514836,
    0.5 * 0.568888888888888888888888888889,
    0.5 * 0.478628670499366468041291514836,
    0.5 * 0.236926885056189087514264040720,
};

CellQuadrature::CellQuadrature(double a_, double b_, std::span<const double> breakpoints)
    : a(a_), b(b_) {
    cuts.push_back(a);
    for (double x : breakpoints) {
        if (x > a && x < b) cuts.push_back(x);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        for (int k = 0; k < GaussRule::kPoints; ++k) {
            nodes.push_back(cuts[s] + GaussRule::nodes[k] * (cuts[s + 1] - cuts[s]));
        }
    }
}

double interval_average(const std::function<double(double)>& f, double a, double b,
                        std::span<const double> breakpoints) {
    const CellQuadrature q(a, b, breakpoints);
    return q.mean([&](int k) { return f(q.nodes[k]); });
}

double cell_average(const std::function<double(double)>& f, int i, const Grid& grid,
                    std::span<const double> breakpoints) {
    return interval_average(f, grid.left(i), grid.right(i), breakpoints);
}

double bump_elevation(double x) {
    if (x >= 8.0 && x <= 12.0) return 0.2 - 0.05 * (x - 10.0) * (x - 10.0);
    return 0.0;
}

double bump_slope(double x) {
    if (x > 8.0 && x < 12.0) return -0.1 * (x - 10.0);
    return 0.0;
}

Bathymetry::Bathymetry(std::string name, Profile elevation, Profile slope,
                       std::vector<double> kinks, std::vector<double> crests)
    : name_(std::move(name)),
      elevation_(std::move(elevation)),
      slope_(std::move(slope)),
      kinks_(std::move(kinks)),
      crests_(std::move(crests)) {
    std::sort(kinks_.begin(), kinks_.end());
}

Bathymetry Bathymetry::bump() {
    return Bathymetry("bump", bump_elevation, bump_slope, {8.0, 12.0}, {10.0});
}

Bathymetry Bathymetry::flat() {
    return Bathymetry("flat", [](double) { return 0.0; }, [](double) { return 0.0; });
}

Bathymetry Bathymetry::gaussian(double height, double center, double width) {
    auto b = [=](double x) {
        const double s = (x - center) / width;
        return height * std::exp(-s * s);
    };
    auto db = [=](double x) {
        const double s = (x - center) / width;
        return -2.0 * s / width * height * std::exp(-s * s);
    };
    return Bathymetry("gaussian", b, db, {}, {center});
}

double Bathymetry::average(double a, double b) const {
    return interval_average(elevation_, a, b, kinks_);
}

double Bathymetry::max_on(double a, double b) const {
    double top = std::max(elevation_(a), elevation_(b));
    for (double c : crests_) {
        if (c > a && c < b) top = std::max(top, elevation_(c));
    }
    return top;
}

BottomSamples::BottomSamples(const Bathymetry& bathymetry, const Grid& grid)
    : face(grid.n_cells() + 2 * kGhost + 1),
      center(grid.n_cells() + 2 * kGhost),
      average(grid.n_cells() + 2 * kGhost),
      maximum(grid.n_cells() + 2 * kGhost),
      n(grid.n_cells()) {
    for (int j = -kGhost; j <= n + kGhost; ++j) {
        face[j + kGhost] = bathymetry(grid.face(j));
    }
    for (int i = -kGhost; i < n + kGhost; ++i) {
        center[i + kGhost] = bathymetry(grid.center(i));
        average[i + kGhost] = bathymetry.average(grid.left(i), grid.right(i));
        maximum[i + kGhost] = bathymetry.max_on(grid.left(i), grid.right(i));
    }
}

ConservedState apply_perturbation(const ConservedState& state, const Grid& grid,
                                  Interval interval, double amplitude) {
    ConservedState out = state;
    for (int i = 0; i < grid.n_cells(); ++i) {
        if (interval.contains(grid.center(i))) out.h[i] += amplitude;
    }
    require_positive_depth(out, "apply_perturbation");
    return out;
}

ConservedState apply_smooth_perturbation(const ConservedState& state, const Grid& grid,
                                         Interval interval, double amplitude) {
    const double c = 0.5 * (interval.lo + interval.hi);
    const double w = interval.hi - interval.lo;
    auto shape = [=](double x) {
        if (x <= interval.lo || x >= interval.hi) return 0.0;
        const double s = std::cos(std::numbers::pi * (x - c) / w);
        return amplitude * s * s * s * s;
    };
    const std::array<double, 2> ends{interval.lo, interval.hi};
    ConservedState out = state;
    for (int i = 0; i < grid.n_cells(); ++i) {
        out.h[i] += cell_average(shape, i, grid, ends);
    }
    require_positive_depth(out, "apply_smooth_perturbation");
    return out;
}

void CaseSpec::validate() const {
    if (!(x_max > x_min)) throw std::invalid_argument("case: empty domain");
    if (n_cells < 1) throw std::invalid_argument("case: n_cells must be positive");
    if (!(g > 0.0)) throw std::invalid_argument("case: gravity must be positive");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("case: CFL must lie in (0, 1]");
    if (perturbation.lo < x_min || perturbation.hi > x_max || perturbation.lo > perturbation.hi) {
        throw std::invalid_argument("case: perturbation interval must lie inside the domain");
    }
    if (t_end < 0.0) throw std::invalid_argument("case: negative end time");
}

Bathymetry make_bathymetry(const std::string& name) {
    if (name == "bump") return Bathymetry::bump();
    if (name == "flat") return Bathymetry::flat();
    if (name == "gaussian") return Bathymetry::gaussian(0.2, 10.0, 1.0);
    throw std::invalid_argument("unknown bathymetry '" + name + "'");
}

std::string to_string(FlowCase flow) {
    switch (flow) {
        case FlowCase::Subcritical: return "a";
        case FlowCase::Transcritical: return "b";
        case FlowCase::TranscriticalShock: return "c";
        case FlowCase::LakeAtRest: return "lake";
    }
    return "?";
}

}  // namespace wbsw
