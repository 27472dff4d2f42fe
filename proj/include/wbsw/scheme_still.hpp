#pragma once

#include <span>
#include <vector>

#include "wbsw/core.hpp"
#include "wbsw/scheme.hpp"
#include "wbsw/weno.hpp"

namespace wbsw {

/// Reconstructed data at one face, seen from the cell on its left (minus) and
/// on its right (plus).
struct InterfaceData {
    Conserved minus;
    Conserved plus;
    double b_minus = 0.0;
    double b_plus = 0.0;
    double surface_minus = 0.0;
    double surface_plus = 0.0;
};

/// Global max over cells of |u| + sqrt(g h); throws FatalDiagnostic on h <= 0.
double max_wave_speed(const ConservedState& state, double g = kGravity);

/// Lax-Friedrichs flux whose dissipation acts on (h + b, hu) so that a flat
/// surface at rest produces no numerical mass flux across a bottom jump.
Flux lf_flux(Conserved u_minus, Conserved u_plus, double surface_minus, double surface_plus,
             double alpha, double g = kGravity);

/// Bottom values on both sides of a face.
struct FaceBottom {
    double minus = 0.0;
    double plus = 0.0;
    double mean() const { return 0.5 * (minus + plus); }
    double mean_square() const { return 0.5 * (minus * minus + plus * plus); }
};

/// Momentum source of one cell (first component is always zero):
///   g/2 (b2_{i+1/2} - b2_{i-1/2}) - g s_i (b_{i+1/2} - b_{i-1/2})
///   - int_cell g (s(x) - s_i) b_x dx,
/// with s the free surface, s_i its cell average, s(x) the quartic through the
/// surface window and the face averages b, b2 taken from `left`/`right`.
Flux source_still(const Window& surface_window, FaceBottom left, FaceBottom right,
                  const CellQuadrature& quadrature, std::span<const double> slope_at_nodes,
                  double g = kGravity);

struct StillSchemeOptions {
    BottomMode bottom = BottomMode::Reconstructed;
    bool local_alpha = false;
    double g = kGravity;
};

/// Fifth-order WENO finite-volume scheme, exactly balanced for water at rest.
class StillWaterScheme : public SemiDiscreteScheme {
public:
    StillWaterScheme(Grid grid, Bathymetry bathymetry, BoundaryFill fill,
                     StillSchemeOptions options = {});

    std::string name() const override { return "still"; }
    SemiDiscrete evaluate(const ConservedState& state) override;
    double max_wave_speed(const ConservedState& state) const override;

    /// Face data (faces 0..n) of the last evaluation.
    const std::vector<InterfaceData>& interfaces() const { return faces_; }
    const BottomSamples& bottom() const { return bottom_; }

private:
    Grid grid_;
    Bathymetry bathymetry_;
    BoundaryFill fill_;
    StillSchemeOptions options_;
    BottomSamples bottom_;
    std::vector<CellQuadrature> quadrature_;
    std::vector<std::vector<double>> slope_;
    std::vector<InterfaceData> faces_;
};

}  // namespace wbsw
