#pragma once

// Complete lifts of the base tensor to the two phase bundles, the horizontal
// lift 1-form and the presymplectic 2-form obtained as its differential.
//
// The assemblers are templated over the scalar ring so the same formulas
// produce plain values (S = double) and values with phase-space gradients
// (S = D1d), which downstream checks need for Lie derivatives and
// exterior differentials.

#include <hjsep/geometry.hpp>

#include <span>
#include <vector>

namespace hjsep {

template <typename S>
struct Grid {
    int rows = 0, cols = 0;
    std::vector<S> a;

    Grid() = default;
    Grid(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    S& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const S& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

Eigen::MatrixXd grid_to_matrix(const Grid<double>& g);

// Tensor components and their base derivatives in a generic scalar ring.
// R(a, b) indexes the full (n+1) x (n+1) matrix (row 0 is zero) and
// dR(a, b, c) its derivative along base slot c (0 = t, k = q^k).
template <typename S>
struct TensorAt {
    int n = 0;
    std::vector<S> comp;   // (n+1)^2 row-major
    std::vector<S> dcomp;  // (n+1)^2 * (n+1)

    const S& R(int a, int b) const { return comp[static_cast<size_t>(a) * (n + 1) + b]; }
    const S& dR(int a, int b, int c) const {
        return dcomp[(static_cast<size_t>(a) * (n + 1) + b) * (n + 1) + c];
    }
};

TensorAt<double> tensor_at_values(const TensorEval& ev);

// Values and first derivatives promoted to D1 scalars whose gradient runs
// over the phase coordinates of the chosen bundle (base slots filled from
// the jet, momentum slots zero).
TensorAt<D1d> tensor_at_d1(const TensorEval& ev, Bundle bundle);

// Momenta as D1 variables seeded at their coordinate slots.
std::vector<D1d> momenta_d1(Bundle bundle, const Eigen::VectorXd& p);

// Complete lift to the dual bundle: (2n+1) x (2n+1) matrix in the basis
// (d/dt, d/dq^j, d/dp_j).
template <typename S>
Grid<S> lift_dual_matrix(const TensorAt<S>& at, std::span<const S> p) {
    const int n = at.n;
    Grid<S> M(2 * n + 1, 2 * n + 1);
    for (int i = 1; i <= n; ++i) {
        M(i, 0) = at.R(i, 0);
        for (int j = 1; j <= n; ++j) {
            M(i, j) = at.R(i, j);
            M(n + j, n + i) = at.R(i, j);
        }
    }
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
            S acc{};
            for (int i = 1; i <= n; ++i)
                acc = acc + p[i - 1] * (at.dR(i, j, k) - at.dR(i, k, j));
            M(n + j, k) = acc;
        }
    for (int k = 1; k <= n; ++k) {
        S acc{};
        for (int i = 1; i <= n; ++i)
            acc = acc + p[i - 1] * (at.dR(i, k, 0) - at.dR(i, 0, k));
        M(n + k, 0) = acc;
    }
    return M;
}

// Complete lift to the cotangent bundle: (2n+2) x (2n+2) matrix in the
// basis (d/dt, d/dq^j, d/dp_0, d/dp_j).
template <typename S>
Grid<S> lift_cotangent_matrix(const TensorAt<S>& at, std::span<const S> p) {
    const int n = at.n;
    Grid<S> M(2 * n + 2, 2 * n + 2);
    for (int i = 1; i <= n; ++i) {
        M(i, 0) = at.R(i, 0);
        M(n + 1, n + 1 + i) = at.R(i, 0);
        for (int j = 1; j <= n; ++j) {
            M(i, j) = at.R(i, j);
            M(n + 1 + j, n + 1 + i) = at.R(i, j);
        }
    }
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
            S acc{};
            for (int i = 1; i <= n; ++i)
                acc = acc + p[i - 1] * (at.dR(i, j, k) - at.dR(i, k, j));
            M(n + 1 + j, k) = acc;
        }
    for (int k = 1; k <= n; ++k) {
        S acc{}, acc0{};
        for (int i = 1; i <= n; ++i) {
            acc = acc + p[i - 1] * (at.dR(i, k, 0) - at.dR(i, 0, k));
            acc0 = acc0 + p[i - 1] * (at.dR(i, 0, k) - at.dR(i, k, 0));
        }
        M(n + 1 + k, 0) = acc;
        M(n + 1, k) = acc0;
    }
    return M;
}

// Horizontal lift 1-form on the dual bundle: p_i R^i_j dq^j + p_i R^i_0 dt.
template <typename S>
std::vector<S> horizontal_lift_covector(const TensorAt<S>& at, std::span<const S> p) {
    const int n = at.n;
    std::vector<S> beta(2 * n + 1);
    for (int b = 0; b <= n; ++b) {
        S acc{};
        for (int i = 1; i <= n; ++i) acc = acc + p[i - 1] * at.R(i, b);
        beta[b] = acc;
    }
    return beta;
}

// Presymplectic form on the dual bundle, the exterior differential of the
// horizontal lift.  Entry (a, b) is omega(e_a, e_b); the upper triangle is
// filled by exact negation so antisymmetry holds bitwise.
template <typename S>
Grid<S> omega_R_matrix(const TensorAt<S>& at, std::span<const S> p) {
    const int n = at.n;
    Grid<S> W(2 * n + 1, 2 * n + 1);
    for (int a = 1; a <= n; ++a)
        for (int b = 0; b < a; ++b) {
            S acc{};
            for (int l = 1; l <= n; ++l)
                acc = acc + p[l - 1] * (at.dR(l, b, a) - at.dR(l, a, b));
            W(a, b) = acc;
        }
    for (int j = 1; j <= n; ++j)
        for (int b = 0; b <= n; ++b) W(n + j, b) = at.R(j, b);
    for (int a = 0; a < 2 * n + 1; ++a)
        for (int b = a + 1; b < 2 * n + 1; ++b) W(a, b) = -W(b, a);
    return W;
}

// Canonical symplectic form dp_0 ^ dt + dp_i ^ dq^i on the cotangent bundle.
Grid<double> omega_E_form(int n);

// Plain-value facades.
Eigen::MatrixXd lift_dual(const TensorEval& ev, const Eigen::VectorXd& p);
Eigen::MatrixXd lift_cotangent(const TensorEval& ev, const Eigen::VectorXd& p);
Eigen::VectorXd horizontal_lift(const TensorEval& ev, const Eigen::VectorXd& p);
Eigen::MatrixXd omega_R(const TensorEval& ev, const Eigen::VectorXd& p);
Eigen::MatrixXd omega_E(int n);

// Variants carrying first derivatives over the bundle's phase coordinates.
Grid<D1d> lift_dual_d1(const TensorEval& ev, const Eigen::VectorXd& p);
Grid<D1d> lift_cotangent_d1(const TensorEval& ev, const Eigen::VectorXd& p);
Grid<D1d> omega_R_d1(const TensorEval& ev, const Eigen::VectorXd& p);

}  // namespace hjsep
