#include "wbsw/scheme_moving.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wbsw {

namespace {

double component(EquilibriumVariables v, int c) { return c == 0 ? v.m : v.E; }

void set_component(EquilibriumVariables& v, int c, double value) {
    (c == 0 ? v.m : v.E) = value;
}

Conserved transform_or_critical(EquilibriumVariables v, double b, Branch branch, double g,
                                bool& fallback) {
    if (v.m == 0.0) branch = Branch::Subcritical;
    try {
        return conservative_from_equilibrium(v, b, branch, g);
    } catch (const NoRootError&) {
        fallback = true;
        return {v.m == 0.0 ? 0.0 : critical_depth(v.m, g), v.m};
    }
}

LimitedValue limit_side(Conserved raw, double b, const ReconstructionInput& in, double g) {
    const auto& refs = in.references;
    const EquilibriumVariables raw_v = equilibrium_from_conservative(raw, b, g);

    LimitedValue out;
    out.b = b;
    out.v = refs[1];
    for (int c = 0; c < 2; ++c) {
        const double center = component(refs[1], c);
        const double spread = std::max(std::abs(component(refs[2], c) - center),
                                       std::abs(center - component(refs[0], c)));
        const double deviation = std::abs(component(raw_v, c) - center);
        double phi;
        if (spread <= kEquilibriumSpread * std::max(1.0, std::abs(center))) {
            phi = 0.0;
        } else {
            phi = deviation > spread ? spread / deviation : 1.0;
        }
        out.phi[c] = phi;
        set_component(out.v, c, center + phi * (component(raw_v, c) - center));
    }

    const bool on_equilibrium = out.phi[0] == 0.0 && out.phi[1] == 0.0;
    out.branch = on_equilibrium ? in.branch : classify(raw.h, raw.hu, in.branch, g);
    out.u = transform_or_critical(out.v, b, out.branch, g, out.fallback);
    return out;
}

}  // namespace

LimitedReconstruction limited_equilibrium_reconstruction(const ReconstructionInput& in, double g) {
    const StencilWeights weights = frozen_weights(in.h);
    const InterfacePair h_rec = apply_frozen(weights, in.h);
    const InterfacePair q_rec = weno5_reconstruct(in.hu);

    double b_left = in.b_face_left;
    double b_right = in.b_face_right;
    if (in.bottom == BottomMode::Reconstructed) {
        const InterfacePair b_rec = apply_frozen(weights, in.b_mean);
        b_left = b_rec.left;
        b_right = b_rec.right;
    }

    if (!(h_rec.left > 0.0) || !(h_rec.right > 0.0)) {
        throw FatalDiagnostic("moving scheme: non-positive reconstructed depth");
    }
    Conserved center{central_point_value(in.h), central_point_value(in.hu)};
    if (!(center.h > 0.0)) center = {in.h[2], in.hu[2]};

    return {limit_side({h_rec.left, q_rec.left}, b_left, in, g),
            limit_side({h_rec.right, q_rec.right}, b_right, in, g),
            limit_side(center, in.b_center, in, g)};
}

InterfaceStates interface_states(EquilibriumVariables v_minus, EquilibriumVariables v_plus,
                                 double b_minus, double b_plus, Branch branch_minus,
                                 Branch branch_plus, double g) {
    InterfaceStates out;
    out.b_hat = std::min(b_minus, b_plus);
    auto side = [&](EquilibriumVariables v, double own_b, Branch branch) {
        if (v.m == 0.0) branch = Branch::Subcritical;
        try {
            return conservative_from_equilibrium(v, out.b_hat, branch, g);
        } catch (const NoRootError&) {
            ++out.fallbacks;
        }
        bool critical = false;
        return transform_or_critical(v, own_b, branch, g, critical);
    };
    out.minus = side(v_minus, b_minus, branch_minus);
    out.plus = side(v_plus, b_plus, branch_plus);
    return out;
}

double source_interior(Conserved u_left, Conserved u_right, double b_left, double b_right,
                       EquilibriumVariables v_ref, Branch branch, double g, bool* fallback) {
    const double db = b_right - b_left;
    if (db == 0.0) return 0.0;
    if (v_ref.m == 0.0) branch = Branch::Subcritical;
    try {
        const double star_left = solve_height(v_ref, b_left, branch, g);
        const double star_right = solve_height(v_ref, b_right, branch, g);
        // Written so that states on v_ref cancel the hydrostatic terms exactly.
        return momentum_flux(star_right, v_ref.m, g) - momentum_flux(star_left, v_ref.m, g) -
               0.5 * g * ((u_left.h - star_left) + (u_right.h - star_right)) * db;
    } catch (const NoRootError&) {
        if (fallback) *fallback = true;
        return -0.5 * g * (u_left.h + u_right.h) * db;
    }
}

Flux source_total(const CellSourceInput& in, double g, bool* fallback) {
    const auto& l = in.left;
    const auto& r = in.right;
    const auto& c = in.center;
    const double s1 = source_interior(l.u, r.u, l.b, r.b, in.reference, in.branch, g, fallback);
    const double s2 = source_interior(l.u, c.u, l.b, c.b, in.reference, in.branch, g, fallback) +
                      source_interior(c.u, r.u, c.b, r.b, in.reference, in.branch, g, fallback);

    const Flux f_hat_r = physical_flux(in.hat_right, g);
    const Flux f_til_r = physical_flux(r.u, g);
    const Flux f_hat_l = physical_flux(in.hat_left, g);
    const Flux f_til_l = physical_flux(l.u, g);
    return {(f_hat_r[0] - f_til_r[0]) - (f_hat_l[0] - f_til_l[0]),
            (4.0 * s2 - s1) / 3.0 + (f_hat_r[1] - f_til_r[1]) - (f_hat_l[1] - f_til_l[1])};
}

// ---------------------------------------------------------------------------

MovingWaterScheme::MovingWaterScheme(Grid grid, Bathymetry bathymetry, BoundaryFill fill,
                                     std::vector<Branch> branches, MovingSchemeOptions options)
    : grid_(grid),
      bathymetry_(std::move(bathymetry)),
      fill_(std::move(fill)),
      branches_(std::move(branches)),
      options_(options),
      bottom_(bathymetry_, grid_) {
    const int n = grid_.n_cells();
    if (static_cast<int>(branches_.size()) != n) {
        throw std::invalid_argument("MovingWaterScheme: one branch per cell required");
    }
    for (int i = -kGhost; i < n + kGhost; ++i) {
        quadrature_.emplace_back(grid_.left(i), grid_.right(i), bathymetry_.kinks());
        std::vector<double> b;
        for (double x : quadrature_.back().nodes) b.push_back(bathymetry_(x));
        node_bottom_.push_back(std::move(b));
    }
}

double MovingWaterScheme::max_wave_speed(const ConservedState& state) const {
    require_positive_depth(state, "max_wave_speed");
    double alpha = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        alpha = std::max(alpha, wave_speed({state.h[i], state.hu[i]}, options_.g));
    }
    return alpha;
}

void MovingWaterScheme::end_step(const ConservedState& state) {
    for (std::size_t i = 0; i < branches_.size(); ++i) {
        branches_[i] = classify(state.h[i], state.hu[i], branches_[i], options_.g);
    }
}

SemiDiscrete MovingWaterScheme::evaluate(const ConservedState& state) {
    const int n = grid_.n_cells();
    const double g = options_.g;
    const PaddedState padded = fill_(state);

    auto hint = [&](int i) { return branches_[std::clamp(i, 0, n - 1)]; };

    refs_.assign(n + 4, ReferenceResult{});
    for (int i = -2; i <= n + 1; ++i) {
        const int p = i + kGhost;
        auto& ref = refs_[i + 2];
        ref = reference_equilibrium({padded.depth(i), padded.discharge(i)}, quadrature_[p],
                                    node_bottom_[p], bottom_.max_in(i), bottom_.at_center(i),
                                    hint(i), g);
        if (ref.fallback) ++diagnostics_.reference_fallbacks;
    }
    auto ref = [&](int i) -> const ReferenceResult& { return refs_[i + 2]; };

    recon_.assign(n + 2, LimitedReconstruction{});
    for (int i = -1; i <= n; ++i) {
        ReconstructionInput in;
        for (int k = 0; k < 5; ++k) {
            in.h[k] = padded.depth(i - 2 + k);
            in.hu[k] = padded.discharge(i - 2 + k);
            in.b_mean[k] = bottom_.mean(i - 2 + k);
        }
        in.b_face_left = bottom_.at_face(i);
        in.b_face_right = bottom_.at_face(i + 1);
        in.b_center = bottom_.at_center(i);
        in.references = {ref(i - 1).v, ref(i).v, ref(i + 1).v};
        in.branch = ref(i).branch;
        in.bottom = options_.bottom;
        try {
            recon_[i + 1] = limited_equilibrium_reconstruction(in, g);
        } catch (const FatalDiagnostic& err) {
            std::ostringstream msg;
            msg << err.what() << " (cell " << i << ")";
            throw FatalDiagnostic(msg.str());
        }
        const auto& r = recon_[i + 1];
        diagnostics_.transform_fallbacks += r.left.fallback + r.right.fallback + r.center.fallback;
    }
    auto recon = [&](int i) -> const LimitedReconstruction& { return recon_[i + 1]; };

    std::vector<InterfaceStates> faces(n + 1);
    SemiDiscrete out{ConservedState(n), std::vector<Flux>(n + 1)};
    for (int j = 0; j <= n; ++j) {
        const LimitedValue& minus = recon(j - 1).right;
        const LimitedValue& plus = recon(j).left;
        faces[j] = interface_states(minus.v, plus.v, minus.b, plus.b, minus.branch, plus.branch, g);
        diagnostics_.transform_fallbacks += faces[j].fallbacks;

        const Conserved& um = faces[j].minus;
        const Conserved& up = faces[j].plus;
        const double alpha = std::max(wave_speed(um, g), wave_speed(up, g));
        const Flux fm = physical_flux(um, g);
        const Flux fp = physical_flux(up, g);
        out.face_flux[j] = {0.5 * (fm[0] + fp[0] - alpha * (up.h - um.h)),
                            0.5 * (fm[1] + fp[1] - alpha * (up.hu - um.hu))};
    }

    const double dx = grid_.dx();
    for (int i = 0; i < n; ++i) {
        const auto& r = recon(i);
        CellSourceInput in{r.left, r.right, r.center, faces[i].plus, faces[i + 1].minus,
                           ref(i).v, ref(i).branch};
        bool fallback = false;
        const Flux src = source_total(in, g, &fallback);
        if (fallback) ++diagnostics_.source_fallbacks;
        out.dudt.h[i] = (-(out.face_flux[i + 1][0] - out.face_flux[i][0]) + src[0]) / dx;
        out.dudt.hu[i] = (-(out.face_flux[i + 1][1] - out.face_flux[i][1]) + src[1]) / dx;
    }
    return out;
}

}  // namespace wbsw
