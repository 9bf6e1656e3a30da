#pragma once

// Configuration space and bundle points, plus the candidate (1,1) tensor.
//
// Index conventions used throughout the library:
//   base E:        coordinates (t, q^1..q^n), slot 0 is t
//   dual bundle:   (t, q^1..q^n, p_1..p_n), dimension 2n+1,
//                  basis order (d/dt, d/dq^i, d/dp_i)
//   cotangent:     (t, q^1..q^n, p_0, p_1..p_n), dimension 2n+2,
//                  basis order (d/dt, d/dq^i, d/dp_0, d/dp_i)
//
// The candidate tensor is R = R^i_j d/dq^i (x) dq^j + R^i_0 d/dq^i (x) dt;
// it annihilates dt by construction (the t-row of its matrix is zero).

#include <hjsep/expr.hpp>

#include <Eigen/Core>

#include <complex>
#include <limits>
#include <memory>
#include <vector>

namespace hjsep {

struct PointE {
    double t = 0.0;
    Eigen::VectorXd q;
};

struct PointDual {
    double t = 0.0;
    Eigen::VectorXd q, p;
    int n() const { return static_cast<int>(q.size()); }
};

struct PointCotangent {
    double t = 0.0;
    Eigen::VectorXd q;
    double p0 = 0.0;
    Eigen::VectorXd p;
    int n() const { return static_cast<int>(q.size()); }
};

enum class Bundle { Dual, Cotangent };

inline int phase_dim(Bundle b, int n) { return b == Bundle::Dual ? 2 * n + 1 : 2 * n + 2; }

// slot of p_i (1-based i) in the chosen bundle's coordinate order
inline int momentum_slot(Bundle b, int n, int i) {
    return b == Bundle::Dual ? n + i : n + 1 + i;
}

// The tensor with expression entries over symbols (t, q1..qn).
class BaseTensor {
public:
    BaseTensor() = default;
    BaseTensor(int n, std::vector<Expr> qq_rowmajor, std::vector<Expr> q0);

    // Parses entry sources; qq[i][j] is R^{i+1}_{j+1}, q0[i] is R^{i+1}_0.
    static BaseTensor parse(const std::vector<std::vector<std::string>>& qq,
                            const std::vector<std::string>& q0,
                            const std::map<std::string, double>& parameters = {});

    int dim() const { return n_; }
    const Expr& qq(int i, int j) const { return qq_[i * n_ + j]; }  // 0-based
    const Expr& q0(int i) const { return q0_[i]; }

private:
    int n_ = 0;
    std::vector<Expr> qq_, q0_;
};

// Pointwise evaluation of a tensor field: every component of the full
// (n+1) x (n+1) matrix carried as a second-order jet over (t, q^1..q^n).
struct TensorEval {
    int n = 0;
    std::vector<Jet2> comp;  // row-major (n+1)^2; top row is the zero jet

    const Jet2& jet(int a, int b) const { return comp[a * (n + 1) + b]; }
    double value(int a, int b) const { return jet(a, b).value(); }
    double d1(int a, int b, int c) const { return jet(a, b).grad(c); }
    double d2(int a, int b, int c, int d) const { return jet(a, b).hess(c, d); }

    Eigen::MatrixXd value_matrix() const;
    Eigen::MatrixXd block_qq() const;  // the n x n block R^i_j
    Eigen::VectorXd column_q0() const; // R^i_0
};

class TensorField {
public:
    virtual ~TensorField() = default;
    virtual int dim() const = 0;
    virtual TensorEval eval(double t, const Eigen::VectorXd& q) const = 0;
};

class ExprTensorField final : public TensorField {
public:
    ExprTensorField(BaseTensor tensor, std::vector<double> params)
        : tensor_(std::move(tensor)), params_(std::move(params)) {}
    int dim() const override { return tensor_.dim(); }
    TensorEval eval(double t, const Eigen::VectorXd& q) const override;

private:
    BaseTensor tensor_;
    std::vector<double> params_;
};

TensorEval eval_tensor(const BaseTensor& R, std::span<const double> params, double t,
                       const Eigen::VectorXd& q);

// Eigenstructure of the n x n block, via Durand-Kerner iteration on the
// characteristic polynomial.  `distinct` additionally requires all
// eigenvalues real: complex pairs fail the verdict for this pipeline even
// though the raw values are reported.
struct SpectralVerdict {
    std::vector<std::complex<double>> eigenvalues;  // sorted by (re, im)
    bool has_complex_pair = false;
    bool distinct = false;
    bool all_nonzero = false;
    bool diagonalizable = false;
    double min_gap = std::numeric_limits<double>::infinity();
};

SpectralVerdict eigen_structure(const Eigen::MatrixXd& block, double tol = 1e-7);

// Fibre map over the identity on E: (t, q, p0, p) -> (t, q, R^i_0 p_i, R^i_j p_i).
PointCotangent tau_R(const TensorEval& R, const PointCotangent& x);

}  // namespace hjsep
