#pragma once

// Hamiltonian functions on the dual bundle, the Hamiltonian vector fields on
// both phase bundles, and the distributions spanned by repeated application
// of the lifted tensor.

#include <hjsep/lifts.hpp>

namespace hjsep {

// A Hamiltonian evaluated as a second-order jet over the dual-bundle
// coordinates (t, q^1..q^n, p_1..p_n).
class HamiltonianField {
public:
    virtual ~HamiltonianField() = default;
    virtual int dim() const = 0;
    virtual Jet2 eval(const PointDual& x) const = 0;
};

class ExprHamiltonian final : public HamiltonianField {
public:
    ExprHamiltonian(Expr h, int n, std::vector<double> params)
        : h_(std::move(h)), n_(n), params_(std::move(params)) {}

    static ExprHamiltonian parse(const std::string& source, int n,
                                 const std::map<std::string, double>& parameters = {});

    int dim() const override { return n_; }
    Jet2 eval(const PointDual& x) const override;
    const Expr& expr() const { return h_; }
    const std::vector<double>& params() const { return params_; }

private:
    Expr h_;
    int n_ = 0;
    std::vector<double> params_;
};

// X_h = d/dt + H_p d/dq - H_q d/dp on the dual bundle.
Eigen::VectorXd xh_dual(const Jet2& H, int n);

// The lifted Hamiltonian p_0 + H generates
// X = d/dt + H_p d/dq - H_t d/dp0 - H_q d/dp on the cotangent bundle.
Eigen::VectorXd xh_cotangent(const Jet2& H, int n);

// X_h with first derivatives over the dual coordinates.
std::vector<D1d> xh_dual_d1(const Jet2& H, int n);

// Differential of p_0 + H on the cotangent bundle: (H_t, H_q, 1, H_p).
Eigen::VectorXd dH_cotangent(const Jet2& H, int n);

// Same covector with first derivatives over the cotangent coordinates
// (entries do not depend on p_0).
std::vector<D1d> dH_cotangent_d1(const Jet2& H, int n);

// Columns X, MX, ..., M^(count-1) X.
Eigen::MatrixXd iterated_basis(const Eigen::MatrixXd& M, const Eigen::VectorXd& X,
                               int count);

int span_rank(const Eigen::MatrixXd& basis, double tol = 1e-9);

// max over column pairs of |omega(v_a, v_b)| / (1 + max |summand|).
double lagrangian_residual(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& basis);

// Agreement between the two iterated bases under the bundle projection
// (rho: forget p0) and under the section pairing (the p0 component must be
// -X(H)).  Both are relative residuals.
struct RelatednessResult {
    double rho = 0.0;
    double h = 0.0;
};

RelatednessResult relatedness_residuals(const TensorEval& ev, const Jet2& H,
                                        const Eigen::VectorXd& p);

}  // namespace hjsep
