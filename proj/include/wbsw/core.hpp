#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wbsw {

inline constexpr double kGravity = 9.812;

/// Number of ghost cells on each side of the domain (WENO5 stencil half-width).
inline constexpr int kGhost = 3;

/// Raised on unrecoverable solver states such as loss of positive depth.
class FatalDiagnostic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform 1D grid. Cells are indexed 0..n_cells-1; ghost cells use negative
/// indices and indices >= n_cells. Face j is the left face of cell j.
class Grid {
public:
    Grid(double x_min, double x_max, int n_cells);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int n_cells() const { return n_cells_; }
    double dx() const { return dx_; }

    double center(int i) const { return x_min_ + (i + 0.5) * dx_; }
    double face(int j) const { return x_min_ + j * dx_; }
    double left(int i) const { return face(i); }
    double right(int i) const { return face(i + 1); }

    bool operator==(const Grid&) const = default;

private:
    double x_min_;
    double x_max_;
    int n_cells_;
    double dx_;
};

/// Point value of the conserved variables (h, hu).
struct Conserved {
    double h = 0.0;
    double hu = 0.0;
};

/// Flux or source vector in (mass, momentum) components.
using Flux = std::array<double, 2>;

/// f(U) = (hu, hu^2/h + g h^2/2).
inline Flux physical_flux(Conserved u, double g = kGravity) {
    return {u.hu, u.hu * u.hu / u.h + 0.5 * g * u.h * u.h};
}

/// |u| + sqrt(g h).
double wave_speed(Conserved u, double g = kGravity);

/// Cell averages of depth and discharge.
struct ConservedState {
    std::vector<double> h;
    std::vector<double> hu;

    ConservedState() = default;
    explicit ConservedState(std::size_t n) : h(n, 0.0), hu(n, 0.0) {}

    std::size_t size() const { return h.size(); }
};

/// Throws FatalDiagnostic naming the first cell with h <= 0 or a non-finite value.
void require_positive_depth(const ConservedState& state, const std::string& context);

/// Cell data extended by kGhost cells per side. Accessors take the logical
/// cell index i in [-kGhost, n + kGhost).
struct PaddedState {
    std::vector<double> h;
    std::vector<double> hu;
    int n = 0;

    explicit PaddedState(int n_cells = 0)
        : h(n_cells + 2 * kGhost, 0.0), hu(n_cells + 2 * kGhost, 0.0), n(n_cells) {}

    double& depth(int i) { return h[i + kGhost]; }
    double depth(int i) const { return h[i + kGhost]; }
    double& discharge(int i) { return hu[i + kGhost]; }
    double discharge(int i) const { return hu[i + kGhost]; }
};

/// Maps interior cell averages to a padded state with populated ghost cells.
using BoundaryFill = std::function<PaddedState(const ConservedState&)>;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Five-point Gauss-Legendre rule on the unit interval [0, 1]; weights sum to 1.
struct GaussRule {
    static constexpr int kPoints = 5;
    static const std::array<double, kPoints> nodes;
    static const std::array<double, kPoints> weights;
};

/// Quadrature nodes for one interval, split at interior breakpoints into
/// sub-intervals that each carry a five-point Gauss rule.
struct CellQuadrature {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> cuts;   ///< a, interior breakpoints..., b
    std::vector<double> nodes;  ///< GaussRule::kPoints per sub-interval

    CellQuadrature(double a, double b, std::span<const double> breakpoints = {});

    /// Mean over [a, b] given the integrand at each node (same ordering as `nodes`).
    template <class ValueAt>
    double mean(ValueAt&& value_at) const {
        const std::size_t pieces = cuts.size() - 1;
        if (pieces == 1) {
            double sum = 0.0;
            for (int k = 0; k < GaussRule::kPoints; ++k) sum += GaussRule::weights[k] * value_at(k);
            return sum;
        }
        double integral = 0.0;
        for (std::size_t s = 0; s < pieces; ++s) {
            double sum = 0.0;
            for (int k = 0; k < GaussRule::kPoints; ++k) {
                sum += GaussRule::weights[k] * value_at(static_cast<int>(s) * GaussRule::kPoints + k);
            }
            integral += (cuts[s + 1] - cuts[s]) * sum;
        }
        return integral / (b - a);
    }
};

/// Mean of f over [a, b]; the interval is split at any breakpoint strictly
/// inside it so that piecewise-smooth integrands are integrated exactly.
double interval_average(const std::function<double(double)>& f, double a, double b,
                        std::span<const double> breakpoints = {});

/// Mean of f over cell i of the grid.
double cell_average(const std::function<double(double)>& f, int i, const Grid& grid,
                    std::span<const double> breakpoints = {});

// ---------------------------------------------------------------------------
// Bathymetry
// ---------------------------------------------------------------------------

double bump_elevation(double x);
double bump_slope(double x);

/// Analytic bottom elevation with its derivative, derivative discontinuities
/// (kinks) and local maxima (crests).
class Bathymetry {
public:
    using Profile = std::function<double(double)>;

    Bathymetry(std::string name, Profile elevation, Profile slope,
               std::vector<double> kinks = {}, std::vector<double> crests = {});

    /// 0.2 - 0.05 (x - 10)^2 on [8, 12], zero elsewhere.
    static Bathymetry bump();
    static Bathymetry flat();
    /// Smooth Gaussian hump of the given height centred at `center`.
    static Bathymetry gaussian(double height, double center, double width);

    double operator()(double x) const { return elevation_(x); }
    double slope(double x) const { return slope_(x); }
    const std::string& name() const { return name_; }

    double average(double a, double b) const;
    double max_on(double a, double b) const;
    std::span<const double> kinks() const { return kinks_; }
    std::span<const double> crests() const { return crests_; }

private:
    std::string name_;
    Profile elevation_;
    Profile slope_;
    std::vector<double> kinks_;
    std::vector<double> crests_;
};

/// Bathymetry sampled on a grid, ghost cells included.
struct BottomSamples {
    std::vector<double> face;     ///< b(x_{j}) at faces j = -kGhost .. n + kGhost
    std::vector<double> center;   ///< b(x_i) at cell centres, padded
    std::vector<double> average;  ///< cell averages, padded
    std::vector<double> maximum;  ///< max of b over each cell (endpoints included), padded
    int n = 0;

    BottomSamples(const Bathymetry& bathymetry, const Grid& grid);

    double at_face(int j) const { return face[j + kGhost]; }
    double at_center(int i) const { return center[i + kGhost]; }
    double mean(int i) const { return average[i + kGhost]; }
    double max_in(int i) const { return maximum[i + kGhost]; }
};

// ---------------------------------------------------------------------------
// Perturbations
// ---------------------------------------------------------------------------

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Adds `amplitude` to the depth of every cell whose centre lies in `interval`.
ConservedState apply_perturbation(const ConservedState& state, const Grid& grid,
                                  Interval interval, double amplitude);

/// Adds the cell average of amplitude * cos^4(pi (x - c) / w) supported on the
/// interval (c its midpoint, w its width) to the depth.
ConservedState apply_smooth_perturbation(const ConservedState& state, const Grid& grid,
                                         Interval interval, double amplitude);

// ---------------------------------------------------------------------------
// Benchmark description
// ---------------------------------------------------------------------------

enum class FlowCase { Subcritical, Transcritical, TranscriticalShock, LakeAtRest };
enum class PerturbationShape { Box, Smooth };

/// Full description of a perturbed-equilibrium benchmark.
struct CaseSpec {
    FlowCase flow = FlowCase::Subcritical;
    double x_min = 0.0;
    double x_max = 25.0;
    int n_cells = 100;
    std::string bathymetry = "bump";

    double discharge = 4.42;       ///< background m
    double energy_upstream = 0.0;  ///< background E (upstream of any shock)
    double energy_downstream = 0.0;
    double surface = 0.0;          ///< lake-at-rest free surface

    double amplitude = 0.05;
    Interval perturbation{5.75, 6.25};
    PerturbationShape shape = PerturbationShape::Box;

    double inflow_discharge = 4.42;
    double outflow_depth = 2.0;

    double t_end = 1.5;
    double cfl = 0.6;
    double g = kGravity;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
    Grid grid() const { return Grid(x_min, x_max, n_cells); }
};

Bathymetry make_bathymetry(const std::string& name);

std::string to_string(FlowCase flow);

}  // namespace wbsw
