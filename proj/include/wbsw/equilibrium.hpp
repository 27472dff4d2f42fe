#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wbsw/core.hpp"

namespace wbsw {

/// Root of the Bernoulli relation selected for a given (m, E, b).
enum class Branch { Subcritical, Supercritical };

/// Moving-water equilibrium variables: discharge m and specific energy E.
struct EquilibriumVariables {
    double m = 0.0;
    double E = 0.0;
};

/// No positive depth exists on the requested branch for (m, E, b).
class NoRootError : public std::runtime_error {
public:
    NoRootError(const std::string& what, double deficit)
        : std::runtime_error(what), deficit_(deficit) {}
    /// Critical energy at b minus E; positive when the state is non-realizable.
    double deficit() const { return deficit_; }

private:
    double deficit_;
};

/// m^2 / (2 h^2) + g (h + b).
double energy(double h, double m, double b, double g = kGravity);
/// |m| / (h sqrt(g h)).
double froude(double h, double m, double g = kGravity);
/// (m^2 / g)^(1/3).
double critical_depth(double m, double g = kGravity);
/// Minimum specific energy over h at bottom b: (3/2) g h_c + g b.
double critical_energy(double m, double b, double g = kGravity);
/// m^2 / h + g h^2 / 2.
double momentum_flux(double h, double m, double g = kGravity);

/// Branch of a point state; within 1e-9 of Fr = 1 (or for m = 0) the hint wins.
Branch classify(double h, double m, Branch hint, double g = kGravity);

/// Depth on the requested branch with energy(h, v.m, b) = v.E. States whose
/// energy lies within round-off of the critical energy return the critical depth.
double solve_height(EquilibriumVariables v, double b, Branch branch, double g = kGravity);

Conserved conservative_from_equilibrium(EquilibriumVariables v, double b, Branch branch,
                                        double g = kGravity);
EquilibriumVariables equilibrium_from_conservative(Conserved u, double b, double g = kGravity);

struct ReferenceResult {
    EquilibriumVariables v;
    Branch branch = Branch::Subcritical;
    /// The implicit solve had no root and the pointwise transform was used.
    bool fallback = false;
};

/// Reference equilibrium of a cell: the (m, E) whose equilibrium depth profile
/// over the cell has the same quadrature average as u_bar. `b_nodes` holds the
/// bottom at the quadrature nodes, `b_max` the largest bottom value in the
/// cell and `b_center` the bottom at the cell centre.
ReferenceResult reference_equilibrium(Conserved u_bar, const CellQuadrature& quadrature,
                                      std::span<const double> b_nodes, double b_max,
                                      double b_center, Branch hint, double g = kGravity);

/// Convenience overload that samples the bathymetry of cell i.
ReferenceResult reference_equilibrium(Conserved u_bar, int cell, const Grid& grid,
                                      const Bathymetry& bathymetry, Branch hint,
                                      double g = kGravity);

// ---------------------------------------------------------------------------
// Background steady states
// ---------------------------------------------------------------------------

struct ProfileSegment {
    double x_begin = 0.0;
    double x_end = 0.0;
    double energy = 0.0;
    Branch branch = Branch::Subcritical;
};

/// Piecewise moving-water steady state: constant discharge, energy and branch
/// constant on each segment.
class SteadyProfile {
public:
    SteadyProfile(double discharge, std::vector<ProfileSegment> segments, Bathymetry bathymetry,
                  double g = kGravity, std::optional<double> shock = std::nullopt);

    static SteadyProfile uniform(EquilibriumVariables v, Branch branch, Bathymetry bathymetry,
                                 double x_min, double x_max, double g = kGravity);

    double discharge() const { return m_; }
    double gravity() const { return g_; }
    std::optional<double> shock() const { return shock_; }
    std::span<const ProfileSegment> segments() const { return segments_; }
    const Bathymetry& bathymetry() const { return bathymetry_; }

    const ProfileSegment& segment_at(double x) const;
    EquilibriumVariables equilibrium_at(double x) const;
    Branch branch_at(double x) const { return segment_at(x).branch; }
    double depth(double x) const;
    double velocity(double x) const { return m_ / depth(x); }

    /// Segment ends and bathymetry kinks, used to split cell quadrature.
    std::vector<double> breakpoints() const;
    ConservedState cell_averages(const Grid& grid) const;
    std::vector<Branch> cell_branches(const Grid& grid) const;

private:
    double m_;
    std::vector<ProfileSegment> segments_;
    Bathymetry bathymetry_;
    double g_;
    std::optional<double> shock_;
};

/// Stationary shock location where the momentum flux of the supercritical
/// upstream state (E_up) matches that of the subcritical downstream state (E_down).
double shock_position(double m, double energy_up, double energy_down, const Bathymetry& bathymetry,
                      Interval search = {10.0, 12.0}, double g = kGravity);

/// Background steady state of a benchmark case; throws naming the first cell
/// where the state is not realizable.
SteadyProfile steady_profile(const CaseSpec& spec, const Bathymetry& bathymetry);

}  // namespace wbsw
