#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wbsw/core.hpp"
#include "wbsw/equilibrium.hpp"
#include "wbsw/scheme.hpp"
#include "wbsw/weno.hpp"

namespace wbsw {

/// Relative spread of neighbouring reference values at or below which a cell
/// is treated as lying on a single equilibrium.
inline constexpr double kEquilibriumSpread = 1e-12;

/// Everything the limited reconstruction needs for one cell.
struct ReconstructionInput {
    Window h{};       ///< depth averages of cells i-2..i+2
    Window hu{};      ///< discharge averages of cells i-2..i+2
    Window b_mean{};  ///< bottom averages of cells i-2..i+2 (reconstructed bottom only)
    double b_face_left = 0.0;   ///< b(x_{i-1/2})
    double b_face_right = 0.0;  ///< b(x_{i+1/2})
    double b_center = 0.0;      ///< b(x_i)
    std::array<EquilibriumVariables, 3> references{};  ///< V_bar of cells i-1, i, i+1
    Branch branch = Branch::Subcritical;               ///< branch of the cell reference
    BottomMode bottom = BottomMode::Sampled;
};

/// One side of a cell after limiting in equilibrium variables.
struct LimitedValue {
    EquilibriumVariables v;  ///< limited equilibrium variables
    double b = 0.0;          ///< bottom at which they are evaluated
    Branch branch = Branch::Subcritical;
    Conserved u;             ///< U(v, b) on `branch`
    std::array<double, 2> phi{1.0, 1.0};  ///< limiter factors for (m, E)
    bool fallback = false;   ///< U(v, b) had no root; critical depth was used
};

struct LimitedReconstruction {
    LimitedValue left;    ///< at x_{i-1/2} from inside cell i
    LimitedValue right;   ///< at x_{i+1/2} from inside cell i
    LimitedValue center;  ///< at x_i
};

/// WENO reconstruction of (h, hu), transformed to (m, E) and blended towards the
/// cell reference: V~ = V_bar_i + phi (V - V_bar_i) per component with
/// phi = min(1, D / |V - V_bar_i|), D the largest jump between neighbouring
/// references, and phi = 0 once D is at round-off level. Data on one
/// equilibrium therefore gives V~ = V_bar_i exactly.
LimitedReconstruction limited_equilibrium_reconstruction(const ReconstructionInput& in,
                                                         double g = kGravity);

struct InterfaceStates {
    Conserved minus;
    Conserved plus;
    double b_hat = 0.0;
    int fallbacks = 0;
};

/// Both sides of a face transformed back to conserved variables at the common
/// bottom b_hat = min(b_minus, b_plus).
InterfaceStates interface_states(EquilibriumVariables v_minus, EquilibriumVariables v_plus,
                                 double b_minus, double b_plus, Branch branch_minus,
                                 Branch branch_plus, double g = kGravity);

/// Well-balanced quadrature of -int g h b_x between two points:
///   -g/2 (h_L + h_R)(b_R - b_L) + s_hat,
///   s_hat = f2(U(v_ref, b_R)) - f2(U(v_ref, b_L)) + g/2 (h*_L + h*_R)(b_R - b_L),
/// with h* the depth of the reference equilibrium and f2 the momentum flux.
/// If v_ref is not realizable at b_L or b_R only the hydrostatic part is kept
/// and `*fallback` is set.
double source_interior(Conserved u_left, Conserved u_right, double b_left, double b_right,
                       EquilibriumVariables v_ref, Branch branch, double g = kGravity,
                       bool* fallback = nullptr);

struct CellSourceInput {
    LimitedValue left;    ///< U~^+_{i-1/2}
    LimitedValue right;   ///< U~^-_{i+1/2}
    LimitedValue center;  ///< U~_i
    Conserved hat_left;   ///< U^^+_{i-1/2}
    Conserved hat_right;  ///< U^^-_{i+1/2}
    EquilibriumVariables reference;
    Branch branch = Branch::Subcritical;
};

/// Total cell source: the Richardson-extrapolated interior quadrature
/// (4 S2 - S1) / 3 plus the flux corrections that move the interface states
/// from their own bottom to b_hat.
Flux source_total(const CellSourceInput& in, double g = kGravity, bool* fallback = nullptr);

struct MovingSchemeOptions {
    BottomMode bottom = BottomMode::Sampled;
    double g = kGravity;
};

/// Counters of the non-fatal fallbacks taken since construction.
struct MovingDiagnostics {
    std::size_t reference_fallbacks = 0;
    std::size_t transform_fallbacks = 0;
    std::size_t source_fallbacks = 0;
    std::size_t total() const { return reference_fallbacks + transform_fallbacks + source_fallbacks; }
};

/// Finite-volume WENO scheme exactly balanced for moving-water equilibria.
class MovingWaterScheme : public SemiDiscreteScheme {
public:
    MovingWaterScheme(Grid grid, Bathymetry bathymetry, BoundaryFill fill,
                      std::vector<Branch> branches, MovingSchemeOptions options = {});

    std::string name() const override { return "moving"; }
    SemiDiscrete evaluate(const ConservedState& state) override;
    double max_wave_speed(const ConservedState& state) const override;
    void end_step(const ConservedState& state) override;

    const std::vector<Branch>& branches() const { return branches_; }
    const MovingDiagnostics& diagnostics() const { return diagnostics_; }

    /// Per-cell data of the last evaluation, cells -1..n stored at index i + 1.
    const std::vector<LimitedReconstruction>& reconstructions() const { return recon_; }
    /// Reference equilibria of the last evaluation, cells -2..n+1 stored at index i + 2.
    const std::vector<ReferenceResult>& references() const { return refs_; }

private:
    Grid grid_;
    Bathymetry bathymetry_;
    BoundaryFill fill_;
    std::vector<Branch> branches_;
    MovingSchemeOptions options_;
    BottomSamples bottom_;
    std::vector<CellQuadrature> quadrature_;       // padded cells
    std::vector<std::vector<double>> node_bottom_;  // padded cells
    MovingDiagnostics diagnostics_;
    std::vector<LimitedReconstruction> recon_;
    std::vector<ReferenceResult> refs_;
};

}  // namespace wbsw
