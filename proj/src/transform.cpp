#include <hjsep/transform.hpp>

#include <hjsep/lifts.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace hjsep {

namespace {

std::vector<std::string> coord_symbols(const char* stem, int n) {
    std::vector<std::string> s{"t"};
    for (int i = 1; i <= n; ++i) s.push_back(stem + std::to_string(i));
    return s;
}

// Gaussian elimination in the Jet2 ring with pivoting on jet values
std::vector<Jet2> solve_jets(std::vector<Jet2> M, std::vector<Jet2> b, int n) {
    double big = 0.0;
    for (const auto& e : M) big = std::max(big, std::abs(e.value()));
    const double floor = 1e-12 * (1.0 + big);
    auto at = [&](int r, int c) -> Jet2& { return M[static_cast<size_t>(r) * n + c]; };
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
            if (std::abs(at(r, k).value()) > std::abs(at(piv, k).value())) piv = r;
        if (std::abs(at(piv, k).value()) <= floor)
            throw TransformError("coordinate change is singular at the sample point");
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(at(k, c), at(piv, c));
            std::swap(b[k], b[piv]);
        }
        for (int r = k + 1; r < n; ++r) {
            const Jet2 f = at(r, k) / at(k, k);
            for (int c = k; c < n; ++c) at(r, c) = at(r, c) - f * at(k, c);
            b[r] = b[r] - f * b[k];
        }
    }
    std::vector<Jet2> x(n);
    for (int k = n - 1; k >= 0; --k) {
        Jet2 acc = b[k];
        for (int c = k + 1; c < n; ++c) acc = acc - at(k, c) * x[c];
        x[k] = acc / at(k, k);
    }
    return x;
}

Eigen::VectorXd eval_all(const std::vector<Expr>& exprs, std::span<const double> params,
                         double t, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(exprs.size());
    std::vector<double> vars(n + 1);
    vars[0] = t;
    for (int i = 0; i < n; ++i) vars[i + 1] = x[i];
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = exprs[i].eval(vars, params);
    return out;
}

Eigen::MatrixXd jacobian_all(const std::vector<Expr>& exprs,
                             std::span<const double> params, double t,
                             const Eigen::VectorXd& x) {
    const int n = static_cast<int>(exprs.size());
    std::vector<double> vars(n + 1);
    vars[0] = t;
    for (int i = 0; i < n; ++i) vars[i + 1] = x[i];
    std::vector<int> active(n + 1);
    for (int c = 0; c <= n; ++c) active[c] = c;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
    J(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        const Jet2 jet = exprs[i - 1].eval_jet2(vars, active, params);
        for (int c = 0; c <= n; ++c) J(i, c) = jet.grad(c);
    }
    return J;
}

}  // namespace

PointTransform::PointTransform(std::vector<Expr> forward, std::vector<Expr> inverse,
                               std::vector<double> params)
    : forward_(std::move(forward)), inverse_(std::move(inverse)),
      params_(std::move(params)) {
    if (forward_.empty() || forward_.size() != inverse_.size())
        throw std::invalid_argument("transform: forward/inverse length mismatch");
}

PointTransform PointTransform::parse(const std::vector<std::string>& forward,
                                     const std::vector<std::string>& inverse,
                                     const std::map<std::string, double>& parameters) {
    const int n = static_cast<int>(forward.size());
    if (static_cast<int>(inverse.size()) != n)
        throw std::invalid_argument("transform: forward/inverse length mismatch");
    const std::vector<std::string> old_syms = coord_symbols("q", n);
    const std::vector<std::string> new_syms = coord_symbols("Q", n);
    std::vector<Expr> fwd, inv;
    fwd.reserve(n);
    inv.reserve(n);
    for (const auto& src : forward) fwd.push_back(Expr::parse(src, old_syms, parameters));
    for (const auto& src : inverse) inv.push_back(Expr::parse(src, new_syms, parameters));
    std::vector<double> params = fwd.front().parameter_defaults();
    return PointTransform(std::move(fwd), std::move(inv), std::move(params));
}

Eigen::VectorXd PointTransform::forward_base(double t, const Eigen::VectorXd& q) const {
    return eval_all(forward_, params_, t, q);
}

Eigen::VectorXd PointTransform::inverse_base(double t, const Eigen::VectorXd& Q) const {
    return eval_all(inverse_, params_, t, Q);
}

Eigen::MatrixXd PointTransform::forward_jacobian(double t, const Eigen::VectorXd& q) const {
    return jacobian_all(forward_, params_, t, q);
}

Eigen::MatrixXd PointTransform::inverse_jacobian(double t, const Eigen::VectorXd& Q) const {
    return jacobian_all(inverse_, params_, t, Q);
}

PointDual PointTransform::forward_phase(const PointDual& x) const {
    const int n = dim();
    PointDual out;
    out.t = x.t;
    out.q = forward_base(x.t, x.q);
    const Eigen::MatrixXd J =
        inverse_jacobian(x.t, out.q).block(1, 1, n, n);  // dq^l/dQ^i
    out.p = J.transpose() * x.p;
    return out;
}

PointDual PointTransform::inverse_phase(const PointDual& X) const {
    const int n = dim();
    PointDual out;
    out.t = X.t;
    out.q = inverse_base(X.t, X.q);
    const Eigen::MatrixXd J = inverse_jacobian(X.t, X.q).block(1, 1, n, n);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(J.transpose());
    if (!lu.isInvertible())
        throw TransformError("coordinate change is singular at the sample point");
    out.p = lu.solve(X.p);
    return out;
}

double PointTransform::roundtrip_residual(double t, const Eigen::VectorXd& q) const {
    const Eigen::VectorXd Q = forward_base(t, q);
    const Eigen::VectorXd back = inverse_base(t, Q);
    const Eigen::VectorXd again = forward_base(t, back);
    const double r1 = (back - q).cwiseAbs().maxCoeff() / (1.0 + q.cwiseAbs().maxCoeff());
    const double r2 = (again - Q).cwiseAbs().maxCoeff() / (1.0 + Q.cwiseAbs().maxCoeff());
    return std::max(r1, r2);
}

double PointTransform::jacobian_consistency(double t, const Eigen::VectorXd& q) const {
    const Eigen::MatrixXd A = forward_jacobian(t, q);
    const Eigen::MatrixXd B = inverse_jacobian(t, forward_base(t, q));
    const Eigen::MatrixXd P = A * B;
    const int m = dim() + 1;
    const double mag = std::max(A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff());
    return (P - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() / (1.0 + mag);
}

double PointTransform::canonicity_residual(const PointDual& x, double p0) const {
    const int n = dim();
    const int m = 2 * n + 2;  // cotangent slots (t, q, p0, p)
    using DD = D1<D1d>;

    const D1d t_in = D1d::variable(m, 0, x.t);
    std::vector<D1d> q_in(n), p_in(n);
    for (int l = 0; l < n; ++l) {
        q_in[l] = D1d::variable(m, 1 + l, x.q[l]);
        p_in[l] = D1d::variable(m, n + 2 + l, x.p[l]);
    }
    const D1d p0_in = D1d::variable(m, n + 1, p0);

    std::vector<D1d> fargs(n + 1);
    fargs[0] = t_in;
    for (int l = 0; l < n; ++l) fargs[l + 1] = q_in[l];
    std::vector<D1d> Qout(n);
    for (int i = 0; i < n; ++i)
        Qout[i] = forward_[i].eval_scalar<D1d>(fargs, params_);

    // inverse map with one more derivative order, directions (T, Q)
    std::vector<DD> iargs(n + 1);
    iargs[0] = DD::variable(n + 1, 0, t_in);
    for (int i = 0; i < n; ++i) iargs[i + 1] = DD::variable(n + 1, i + 1, Qout[i]);
    std::vector<DD> W(n);
    for (int l = 0; l < n; ++l) W[l] = inverse_[l].eval_scalar<DD>(iargs, params_);

    std::vector<D1d> outs(m);
    outs[0] = t_in;
    D1d P0 = p0_in;
    for (int l = 0; l < n; ++l) P0 = P0 + p_in[l] * W[l].deriv(0);
    outs[n + 1] = P0;
    for (int i = 0; i < n; ++i) {
        outs[1 + i] = Qout[i];
        D1d Pi{};
        for (int l = 0; l < n; ++l) Pi = Pi + p_in[l] * W[l].deriv(i + 1);
        outs[n + 2 + i] = Pi;
    }

    Eigen::MatrixXd DL(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) DL(a, b) = outs[a].deriv(b);
    const Eigen::MatrixXd Om = omega_E(n);
    const Eigen::MatrixXd pulled = DL.transpose() * Om * DL;
    return (pulled - Om).cwiseAbs().maxCoeff() / (1.0 + pulled.cwiseAbs().maxCoeff());
}

double PointTransform::inverse_block_determinant(double t, const Eigen::VectorXd& Q) const {
    const int n = dim();
    return inverse_jacobian(t, Q).block(1, 1, n, n).determinant();
}

Jet2 CompositeHamiltonian::eval(const PointDual& X) const {
    const int n = map_.dim();
    const int m = 2 * n + 1;
    using DJ = D1<Jet2>;

    const Jet2 Tj = Jet2::variable(m, 0, X.t);
    std::vector<DJ> iargs(n + 1);
    iargs[0] = DJ::variable(n + 1, 0, Tj);
    for (int i = 0; i < n; ++i)
        iargs[i + 1] = DJ::variable(n + 1, i + 1, Jet2::variable(m, 1 + i, X.q[i]));

    std::vector<DJ> G(n);
    for (int l = 0; l < n; ++l)
        G[l] = map_.inverse_exprs()[l].eval_scalar<DJ>(iargs, map_.params());

    // momenta from the lifted relation: (dq/dQ)^T p = P, solved as jets
    std::vector<Jet2> A(static_cast<size_t>(n) * n), rhs(n);
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < n; ++l) A[static_cast<size_t>(i) * n + l] = G[l].deriv(i + 1);
        rhs[i] = Jet2::variable(m, n + 1 + i, X.p[i]);
    }
    const std::vector<Jet2> p = solve_jets(std::move(A), std::move(rhs), n);

    std::vector<Jet2> hargs(2 * n + 1);
    hargs[0] = Tj;
    for (int l = 0; l < n; ++l) {
        hargs[1 + l] = G[l].v;
        hargs[1 + n + l] = p[l];
    }
    Jet2 K = base_.expr().eval_scalar<Jet2>(hargs, base_.params());
    for (int l = 0; l < n; ++l) K = K - p[l] * G[l].deriv(0);
    return K;
}

TensorEval PushforwardTensorField::eval(double t, const Eigen::VectorXd& q) const {
    const int n = map_.dim();
    const int m = n + 1;
    using DJ = D1<Jet2>;

    const Jet2 Tj = Jet2::variable(m, 0, t);
    std::vector<DJ> iargs(n + 1);
    iargs[0] = DJ::variable(n + 1, 0, Tj);
    for (int i = 0; i < n; ++i)
        iargs[i + 1] = DJ::variable(n + 1, i + 1, Jet2::variable(m, 1 + i, q[i]));
    std::vector<DJ> G(n);
    for (int l = 0; l < n; ++l)
        G[l] = map_.inverse_exprs()[l].eval_scalar<DJ>(iargs, map_.params());

    // forward partial derivatives at the pulled-back point: seed the old
    // coordinates as independent directions so the d-slots stay partial
    std::vector<DJ> fargs(n + 1);
    {
        std::vector<Jet2> seed(n + 1, Jet2(0.0));
        seed[0] = Jet2(1.0);
        fargs[0] = DJ(Tj, seed);
    }
    for (int l = 0; l < n; ++l) {
        std::vector<Jet2> seed(n + 1, Jet2(0.0));
        seed[l + 1] = Jet2(1.0);
        fargs[l + 1] = DJ(G[l].v, seed);
    }
    std::vector<DJ> F(n);
    for (int i = 0; i < n; ++i)
        F[i] = map_.forward_exprs()[i].eval_scalar<DJ>(fargs, map_.params());

    // tensor components composed with the inverse map
    std::vector<Jet2> rargs(n + 1);
    rargs[0] = Tj;
    for (int l = 0; l < n; ++l) rargs[l + 1] = G[l].v;
    auto Rc = [&](int a, int b) -> Jet2 {
        if (a == 0) return Jet2(0.0);
        if (b == 0) return tensor_.q0(a - 1).eval_scalar<Jet2>(rargs, tparams_);
        return tensor_.qq(a - 1, b - 1).eval_scalar<Jet2>(rargs, tparams_);
    };
    auto Ac = [&](int a, int c) -> Jet2 {
        if (a == 0) return Jet2(c == 0 ? 1.0 : 0.0);
        return F[a - 1].deriv(c);
    };
    auto Bc = [&](int c, int b) -> Jet2 {
        if (c == 0) return Jet2(b == 0 ? 1.0 : 0.0);
        return G[c - 1].deriv(b);
    };

    TensorEval out;
    out.n = n;
    out.comp.assign(static_cast<size_t>(m) * m, Jet2::zero(m));
    for (int a = 1; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            Jet2 acc = Jet2::zero(m);
            for (int c = 1; c <= n; ++c) {
                Jet2 inner = Jet2::zero(m);
                for (int d = 0; d <= n; ++d) inner = inner + Rc(c, d) * Bc(d, b);
                acc = acc + Ac(a, c) * inner;
            }
            out.comp[static_cast<size_t>(a) * m + b] = acc;
        }
    return out;
}

double hamiltonian_difference(const HamiltonianField& a, const HamiltonianField& b,
                              const PointDual& x) {
    const int m = 2 * x.n() + 1;
    const Jet2 ja = a.eval(x), jb = b.eval(x);
    double diff = std::abs(ja.value() - jb.value());
    double mag = std::max(std::abs(ja.value()), std::abs(jb.value()));
    for (int i = 0; i < m; ++i) {
        diff = std::max(diff, std::abs(ja.grad(i) - jb.grad(i)));
        mag = std::max(mag, std::max(std::abs(ja.grad(i)), std::abs(jb.grad(i))));
        for (int j = i; j < m; ++j) {
            diff = std::max(diff, std::abs(ja.hess(i, j) - jb.hess(i, j)));
            mag = std::max(mag,
                           std::max(std::abs(ja.hess(i, j)), std::abs(jb.hess(i, j))));
        }
    }
    return diff / (1.0 + mag);
}

}  // namespace hjsep
