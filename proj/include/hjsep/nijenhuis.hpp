#pragma once

// Nijenhuis torsion of (1,1) tensors, on the base as well as on the phase
// bundles, plus the derivation identity used to cross-check the formula.

#include <hjsep/lifts.hpp>

namespace hjsep {

// Torsion components N^a_{bc} together with a per-component scale
// 1 + max |summand|, so callers can form relative residuals.
struct Torsion {
    int dim = 0;
    std::vector<double> comp, scale;

    double at(int a, int b, int c) const {
        return comp[(static_cast<size_t>(a) * dim + b) * dim + c];
    }
    double scale_at(int a, int b, int c) const {
        return scale[(static_cast<size_t>(a) * dim + b) * dim + c];
    }
    double max_abs() const;
    double max_rel() const;
};

// Torsion of the base tensor over the coordinates (t, q^1..q^n).
Torsion torsion_base(const TensorEval& ev);

// Torsion of a phase-space tensor whose entries carry first derivatives
// over the phase coordinates.
Torsion torsion_from_d1(const Grid<D1d>& L);

// Relative defect of d_L(L a)(X, Y) = da(LX, LY) + a(N_L(X, Y)) for constant
// vectors X, Y and a 1-form `alpha` carrying first derivatives.
double derivation_identity_residual(const Grid<D1d>& L, const std::vector<D1d>& alpha,
                       const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

}  // namespace hjsep
