#pragma once

// The separability tests themselves: coordinatewise second-derivative
// conditions, the Lie-derivative integrability conditions on both bundles,
// and the eigenbasis pairings available once the tensor is diagonal.

#include <hjsep/dynamics.hpp>
#include <hjsep/nijenhuis.hpp>

namespace hjsep {

// Pointwise residuals of the classical coordinatewise conditions.  eq1 is
// indexed by unordered pairs i < j (no summation anywhere):
//   H_{p_i}(H_{q^i q^j} H_{p_j} - H_{q^i p_j} H_{q^j})
//     - H_{q^i}(H_{p_i q^j} H_{p_j} - H_{p_i p_j} H_{q^j}) = 0,
// and eq2 by single indices: H_{p_i} H_{q^i t} - H_{q^i} H_{p_i t} = 0.
struct ForbatResult {
    Eigen::MatrixXd eq1, scale1;  // n x n, upper triangle i < j
    Eigen::VectorXd eq2, scale2;  // n
    double max_rel() const;
};

ForbatResult forbat_residuals(const Jet2& H, int n);

// Lie derivative of a 2-form along a vector field, both carrying first
// derivatives: Leibniz route and Cartan route (valid for closed forms).
Grid<double> lie_derivative_direct(const Grid<D1d>& W, const std::vector<D1d>& X);
Grid<double> lie_derivative_cartan(const Grid<D1d>& W, const std::vector<D1d>& X);

// max |A - B| / (1 + max |A|, |B|) entrywise
double grid_difference_rel(const Grid<double>& A, const Grid<double>& B);

// max over basis column pairs of |form(v_a, v_b)| / (1 + max |summand|),
// remembering which pair was worst.
struct PairResidual {
    double residual = 0.0;
    int worst_a = -1, worst_b = -1;
};
PairResidual pair_residual(const Grid<double>& form, const Eigen::MatrixXd& basis);
PairResidual pair_residual(const Eigen::MatrixXd& form, const Eigen::MatrixXd& basis);

// Integrability of the distribution spanned by the iterated fields, tested
// through the Lie derivative of the presymplectic form (dual bundle) or the
// exterior differential of the derived 1-form (cotangent bundle).  The
// result is meaningful only where the span has full rank n+1.
struct IntegrabilityResult {
    double residual = 0.0;
    int worst_a = -1, worst_b = -1;
    int rank = -1;
    bool rank_ok = false;
    double route_difference = 0.0;  // dual only: Leibniz vs Cartan agreement
};

IntegrabilityResult integrability_dual(const TensorEval& ev, const Jet2& H,
                                       const Eigen::VectorXd& p, double rank_tol = 1e-9);
IntegrabilityResult integrability_cotangent(const TensorEval& ev, const Jet2& H,
                                            const Eigen::VectorXd& p,
                                            double rank_tol = 1e-9);

// max over k = 1..n of the relative defect of
//   i_{M^(k-1) X} omega + pullback of (L^k dHtilde) = 0,
// the contraction identity linking the two bundles through the section.
double aux_identity_residual(const TensorEval& ev, const Jet2& H,
                             const Eigen::VectorXd& p);

// Regular-point diagnostic: expand the vector R^i_j H_{p_j} + R^i_0 in the
// eigenbasis of the leading block.  Separation coordinates exist near the
// point only if every coefficient is nonzero; min_coeff reports the
// smallest magnitude relative to the largest.  Only defined when the block
// has real distinct eigenvalues.
struct TransversalityResult {
    bool defined = false;
    double min_coeff = 0.0;
};

TransversalityResult transversality(const TensorEval& ev, const Jet2& H);

// Eigenvector basis available once the tensor is diagonal in the current
// coordinates: columns d/dt and K_{p_i} d/dq^i - K_{q^i} d/dp_i.
Eigen::MatrixXd eigenbasis_dual(const Jet2& K, int n);

// Pairings of the Lie derivative with that basis, next to the closed forms
// they must equal when the tensor is diag(lambda_1..lambda_n) with each
// lambda_i a function of q^i alone:
//   (i, 0): lambda_i (K_{q^i t} K_{p_i} - K_{p_i t} K_{q^i})
//   (i, j): (lambda_j - lambda_i)(K_{p_i q^j} K_{q^i} K_{p_j}
//            + K_{p_j q^i} K_{q^j} K_{p_i} - K_{q^i q^j} K_{p_i} K_{p_j}
//            - K_{p_i p_j} K_{q^i} K_{q^j})
struct DnPairings {
    Eigen::MatrixXd numeric, closed_form, scale;
    double max_diff_rel() const;
};

DnPairings dn_pairings(const TensorEval& ev, const Jet2& K, const Eigen::VectorXd& p);

}  // namespace hjsep
