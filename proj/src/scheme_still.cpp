#include "wbsw/scheme_still.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wbsw {

double max_wave_speed(const ConservedState& state, double g) {
    require_positive_depth(state, "max_wave_speed");
    double alpha = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        alpha = std::max(alpha, wave_speed({state.h[i], state.hu[i]}, g));
    }
    return alpha;
}

Flux lf_flux(Conserved u_minus, Conserved u_plus, double surface_minus, double surface_plus,
             double alpha, double g) {
    const Flux fm = physical_flux(u_minus, g);
    const Flux fp = physical_flux(u_plus, g);
    return {0.5 * (fm[0] + fp[0] - alpha * (surface_plus - surface_minus)),
            0.5 * (fm[1] + fp[1] - alpha * (u_plus.hu - u_minus.hu))};
}

Flux source_still(const Window& surface_window, FaceBottom left, FaceBottom right,
                  const CellQuadrature& quadrature, std::span<const double> slope_at_nodes,
                  double g) {
    const double s_bar = surface_window[2];
    const double dx = quadrature.b - quadrature.a;
    const double xc = 0.5 * (quadrature.a + quadrature.b);
    const double remainder = dx * quadrature.mean([&](int k) {
        const double xi = (quadrature.nodes[k] - xc) / dx;
        return (quartic_point_value(surface_window, xi) - s_bar) * slope_at_nodes[k];
    });
    return {0.0, 0.5 * g * (right.mean_square() - left.mean_square()) -
                     g * s_bar * (right.mean() - left.mean()) - g * remainder};
}

StillWaterScheme::StillWaterScheme(Grid grid, Bathymetry bathymetry, BoundaryFill fill,
                                   StillSchemeOptions options)
    : grid_(grid),
      bathymetry_(std::move(bathymetry)),
      fill_(std::move(fill)),
      options_(options),
      bottom_(bathymetry_, grid_) {
    const int n = grid_.n_cells();
    quadrature_.reserve(n);
    slope_.reserve(n);
    for (int i = 0; i < n; ++i) {
        quadrature_.emplace_back(grid_.left(i), grid_.right(i), bathymetry_.kinks());
        std::vector<double> s;
        for (double x : quadrature_.back().nodes) s.push_back(bathymetry_.slope(x));
        slope_.push_back(std::move(s));
    }
}

double StillWaterScheme::max_wave_speed(const ConservedState& state) const {
    return wbsw::max_wave_speed(state, options_.g);
}

SemiDiscrete StillWaterScheme::evaluate(const ConservedState& state) {
    const int n = grid_.n_cells();
    const double g = options_.g;
    const PaddedState padded = fill_(state);

    auto surface = [&](int i) { return padded.depth(i) + bottom_.mean(i); };
    auto window = [&](auto&& value, int i) {
        return Window{value(i - 2), value(i - 1), value(i), value(i + 1), value(i + 2)};
    };

    faces_.assign(n + 1, InterfaceData{});
    double alpha = max_wave_speed(state);

    // Cells -1..n each supply one side of faces 0..n.
    for (int i = -1; i <= n; ++i) {
        const Window s_win = window(surface, i);
        const StencilWeights weights = frozen_weights(s_win);
        const InterfacePair s_rec = apply_frozen(weights, s_win);
        const InterfacePair q_rec =
            weno5_reconstruct(window([&](int k) { return padded.discharge(k); }, i));

        InterfacePair b_rec;
        if (options_.bottom == BottomMode::Reconstructed) {
            b_rec = apply_frozen(weights, window([&](int k) { return bottom_.mean(k); }, i));
        } else {
            b_rec = {bottom_.at_face(i + 1), bottom_.at_face(i)};
        }

        const Conserved right{s_rec.right - b_rec.right, q_rec.right};
        const Conserved left{s_rec.left - b_rec.left, q_rec.left};
        for (const Conserved& u : {right, left}) {
            if (!(u.h > 0.0)) {
                std::ostringstream msg;
                msg << "still scheme: non-positive reconstructed depth in cell " << i;
                throw FatalDiagnostic(msg.str());
            }
            alpha = std::max(alpha, wave_speed(u, g));
        }
        if (i + 1 <= n) {
            auto& f = faces_[i + 1];
            f.minus = right;
            f.b_minus = b_rec.right;
            f.surface_minus = s_rec.right;
        }
        if (i >= 0) {
            auto& f = faces_[i];
            f.plus = left;
            f.b_plus = b_rec.left;
            f.surface_plus = s_rec.left;
        }
    }

    SemiDiscrete out{ConservedState(n), std::vector<Flux>(n + 1)};
    for (int j = 0; j <= n; ++j) {
        const auto& f = faces_[j];
        const double a = options_.local_alpha
                             ? std::max(wave_speed(f.minus, g), wave_speed(f.plus, g))
                             : alpha;
        out.face_flux[j] = lf_flux(f.minus, f.plus, f.surface_minus, f.surface_plus, a, g);
    }

    const double dx = grid_.dx();
    for (int i = 0; i < n; ++i) {
        const FaceBottom left{faces_[i].b_minus, faces_[i].b_plus};
        const FaceBottom right{faces_[i + 1].b_minus, faces_[i + 1].b_plus};
        const Flux src = source_still(window(surface, i), left, right, quadrature_[i], slope_[i], g);
        out.dudt.h[i] = (-(out.face_flux[i + 1][0] - out.face_flux[i][0]) + src[0]) / dx;
        out.dudt.hu[i] = (-(out.face_flux[i + 1][1] - out.face_flux[i][1]) + src[1]) / dx;
    }
    return out;
}

}  // namespace wbsw
