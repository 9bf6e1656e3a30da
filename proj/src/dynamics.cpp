#include <hjsep/dynamics.hpp>

#include <Eigen/SVD>

namespace hjsep {

ExprHamiltonian ExprHamiltonian::parse(const std::string& source, int n,
                                       const std::map<std::string, double>& parameters) {
    std::vector<std::string> symbols = {"t"};
    for (int i = 1; i <= n; ++i) symbols.push_back("q" + std::to_string(i));
    for (int i = 1; i <= n; ++i) symbols.push_back("p" + std::to_string(i));
    Expr h = Expr::parse(source, symbols, parameters);
    std::vector<double> params = h.parameter_defaults();
    return ExprHamiltonian(std::move(h), n, std::move(params));
}

Jet2 ExprHamiltonian::eval(const PointDual& x) const {
    const int dim = 2 * n_ + 1;
    std::vector<double> vars(dim);
    vars[0] = x.t;
    for (int i = 0; i < n_; ++i) {
        vars[1 + i] = x.q[i];
        vars[1 + n_ + i] = x.p[i];
    }
    std::vector<int> active(dim);
    for (int a = 0; a < dim; ++a) active[a] = a;
    return h_.eval_jet2(vars, active, params_);
}

Eigen::VectorXd xh_dual(const Jet2& H, int n) {
    Eigen::VectorXd X(2 * n + 1);
    X[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        X[i] = H.grad(n + i);
        X[n + i] = -H.grad(i);
    }
    return X;
}

Eigen::VectorXd xh_cotangent(const Jet2& H, int n) {
    Eigen::VectorXd X(2 * n + 2);
    X[0] = 1.0;
    X[n + 1] = -H.grad(0);
    for (int i = 1; i <= n; ++i) {
        X[i] = H.grad(n + i);
        X[n + 1 + i] = -H.grad(i);
    }
    return X;
}

std::vector<D1d> xh_dual_d1(const Jet2& H, int n) {
    const int dim = 2 * n + 1;
    std::vector<D1d> X(dim);
    X[0] = D1d::constant(1.0);
    auto row = [&](int slot, double sign) {
        D1d r(sign * H.grad(slot));
        r.d.resize(dim);
        for (int a = 0; a < dim; ++a) r.d[a] = sign * H.hess(slot, a);
        return r;
    };
    for (int i = 1; i <= n; ++i) {
        X[i] = row(n + i, 1.0);
        X[n + i] = row(i, -1.0);
    }
    return X;
}

Eigen::VectorXd dH_cotangent(const Jet2& H, int n) {
    Eigen::VectorXd a(2 * n + 2);
    a[0] = H.grad(0);
    a[n + 1] = 1.0;
    for (int i = 1; i <= n; ++i) {
        a[i] = H.grad(i);
        a[n + 1 + i] = H.grad(n + i);
    }
    return a;
}

std::vector<D1d> dH_cotangent_d1(const Jet2& H, int n) {
    const int dim = 2 * n + 2;
    // dual slot -> cotangent slot
    auto cot = [n](int a) { return a <= n ? a : a + 1; };
    std::vector<D1d> alpha(dim);
    auto row = [&](int slot) {
        D1d r(H.grad(slot));
        r.d.assign(dim, 0.0);
        for (int a = 0; a < 2 * n + 1; ++a) r.d[cot(a)] = H.hess(slot, a);
        return r;
    };
    alpha[0] = row(0);
    alpha[n + 1] = D1d::constant(1.0);
    for (int i = 1; i <= n; ++i) {
        alpha[i] = row(i);
        alpha[n + 1 + i] = row(n + i);
    }
    return alpha;
}

Eigen::MatrixXd iterated_basis(const Eigen::MatrixXd& M, const Eigen::VectorXd& X,
                               int count) {
    Eigen::MatrixXd B(X.size(), count);
    Eigen::VectorXd v = X;
    for (int k = 0; k < count; ++k) {
        B.col(k) = v;
        if (k + 1 < count) v = M * v;
    }
    return B;
}

int span_rank(const Eigen::MatrixXd& basis, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * sv[0]) ++rank;
    return rank;
}

double lagrangian_residual(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& basis) {
    const int dim = static_cast<int>(omega.rows());
    const int count = static_cast<int>(basis.cols());
    double worst = 0.0;
    for (int a = 0; a < count; ++a)
        for (int b = a + 1; b < count; ++b) {
            double acc = 0.0, mx = 0.0;
            for (int c = 0; c < dim; ++c)
                for (int d = 0; d < dim; ++d) {
                    const double term = basis(c, a) * omega(c, d) * basis(d, b);
                    acc += term;
                    mx = std::max(mx, std::abs(term));
                }
            worst = std::max(worst, std::abs(acc) / (1.0 + mx));
        }
    return worst;
}

RelatednessResult relatedness_residuals(const TensorEval& ev, const Jet2& H,
                                        const Eigen::VectorXd& p) {
    const int n = ev.n;
    const Eigen::MatrixXd Md = lift_dual(ev, p);
    const Eigen::MatrixXd Mc = lift_cotangent(ev, p);
    const Eigen::MatrixXd Bd = iterated_basis(Md, xh_dual(H, n), n + 1);
    const Eigen::MatrixXd Bc = iterated_basis(Mc, xh_cotangent(H, n), n + 1);

    auto cot = [n](int a) { return a <= n ? a : a + 1; };
    RelatednessResult out;
    for (int k = 0; k <= n; ++k) {
        double col_max = 0.0;
        for (int a = 0; a < 2 * n + 1; ++a)
            col_max = std::max(col_max, std::abs(Bd(a, k)));
        for (int a = 0; a < 2 * n + 1; ++a) {
            const double diff = std::abs(Bc(cot(a), k) - Bd(a, k));
            out.rho = std::max(out.rho, diff / (1.0 + col_max));
        }
        // section pairing: p0 component must equal -X(H)
        double XH = 0.0, mx = 0.0;
        for (int a = 0; a < 2 * n + 1; ++a) {
            const double term = Bd(a, k) * H.grad(a);
            XH += term;
            mx = std::max(mx, std::abs(term));
        }
        out.h = std::max(out.h, std::abs(Bc(n + 1, k) + XH) / (1.0 + mx));
    }
    return out;
}

}  // namespace hjsep
