#pragma once

// Time-dependent point transformations Q = Q(t, q), their cotangent lifts,
// and the induced Hamiltonian and tensor on the new coordinates.  All
// derivatives are propagated exactly by evaluating the coordinate
// expressions over nested derivative rings, so the composed objects carry
// correct second-order jets (which needs third derivatives of the
// coordinate functions).

#include <hjsep/dynamics.hpp>

#include <stdexcept>

namespace hjsep {

struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pair of mutually inverse base maps.  `forward` entries are expressions
// in (t, q1..qn) giving the new coordinates; `inverse` entries are
// expressions in (t, Q1..Qn) recovering the old ones.  Momenta transform by
// the cotangent lift: P_i = p_l dq^l/dQ^i.
class PointTransform {
public:
    PointTransform() = default;
    PointTransform(std::vector<Expr> forward, std::vector<Expr> inverse,
                   std::vector<double> params);

    static PointTransform parse(const std::vector<std::string>& forward,
                                const std::vector<std::string>& inverse,
                                const std::map<std::string, double>& parameters = {});

    int dim() const { return static_cast<int>(forward_.size()); }

    Eigen::VectorXd forward_base(double t, const Eigen::VectorXd& q) const;
    Eigen::VectorXd inverse_base(double t, const Eigen::VectorXd& Q) const;

    // Full (n+1) x (n+1) Jacobians with slot 0 = t, so row 0 is (1, 0..0).
    Eigen::MatrixXd forward_jacobian(double t, const Eigen::VectorXd& q) const;
    Eigen::MatrixXd inverse_jacobian(double t, const Eigen::VectorXd& Q) const;

    // Cotangent-lifted phase maps; throw TransformError where the inverse
    // Jacobian block is singular.
    PointDual forward_phase(const PointDual& x) const;
    PointDual inverse_phase(const PointDual& X) const;

    // max relative mismatch of inverse(forward) and forward(inverse) at the
    // base point, and of the Jacobian product against the identity
    double roundtrip_residual(double t, const Eigen::VectorXd& q) const;
    double jacobian_consistency(double t, const Eigen::VectorXd& q) const;

    // Relative defect of the canonical 2-form under the full lifted map
    // (t, q, p0, p) -> (T, Q, P0, P), evaluated through derivative rings.
    double canonicity_residual(const PointDual& x, double p0 = 0.0) const;

    double inverse_block_determinant(double t, const Eigen::VectorXd& Q) const;

    const std::vector<Expr>& forward_exprs() const { return forward_; }
    const std::vector<Expr>& inverse_exprs() const { return inverse_; }
    const std::vector<double>& params() const { return params_; }

private:
    std::vector<Expr> forward_, inverse_;
    std::vector<double> params_;
};

// Hamiltonian induced on the new coordinates:
//   K(t, Q, P) = H(t, q(t, Q), p(t, Q, P)) - p_l dq^l/dt,
// with p solving the lifted momentum relation.  The jet is exact.
class CompositeHamiltonian final : public HamiltonianField {
public:
    CompositeHamiltonian(ExprHamiltonian base, PointTransform map)
        : base_(std::move(base)), map_(std::move(map)) {}

    int dim() const override { return map_.dim(); }
    Jet2 eval(const PointDual& X) const override;

private:
    ExprHamiltonian base_;
    PointTransform map_;
};

// The base tensor pushed forward along the transformation,
//   R'(T, Q) = A R B  with A, B the forward and inverse Jacobians,
// evaluated as a tensor field over the new base coordinates.
class PushforwardTensorField final : public TensorField {
public:
    PushforwardTensorField(BaseTensor tensor, std::vector<double> tensor_params,
                           PointTransform map)
        : tensor_(std::move(tensor)), tparams_(std::move(tensor_params)),
          map_(std::move(map)) {}

    int dim() const override { return tensor_.dim(); }
    TensorEval eval(double t, const Eigen::VectorXd& q) const override;

private:
    BaseTensor tensor_;
    std::vector<double> tparams_;
    PointTransform map_;
};

// max relative difference of value, gradient and Hessian between two
// Hamiltonian fields at a point
double hamiltonian_difference(const HamiltonianField& a, const HamiltonianField& b,
                              const PointDual& x);

}  // namespace hjsep
