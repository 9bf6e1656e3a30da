#include <hjsep/separability.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace hjsep {

namespace {

double abs_max3(double a, double b, double c) {
    return std::max(std::abs(a), std::max(std::abs(b), std::abs(c)));
}

}  // namespace

double ForbatResult::max_rel() const {
    double worst = 0.0;
    for (int i = 0; i < eq1.rows(); ++i)
        for (int j = i + 1; j < eq1.cols(); ++j)
            worst = std::max(worst, std::abs(eq1(i, j)) / scale1(i, j));
    for (int i = 0; i < eq2.size(); ++i)
        worst = std::max(worst, std::abs(eq2(i)) / scale2(i));
    return worst;
}

ForbatResult forbat_residuals(const Jet2& H, int n) {
    ForbatResult r;
    r.eq1 = Eigen::MatrixXd::Zero(n, n);
    r.scale1 = Eigen::MatrixXd::Ones(n, n);
    r.eq2 = Eigen::VectorXd::Zero(n);
    r.scale2 = Eigen::VectorXd::Ones(n);
    for (int i = 1; i <= n; ++i) {
        const double hp_i = H.grad(n + i), hq_i = H.grad(i);
        for (int j = i + 1; j <= n; ++j) {
            const double hp_j = H.grad(n + j), hq_j = H.grad(j);
            const double t1 = hp_i * H.hess(i, j) * hp_j;
            const double t2 = hp_i * H.hess(i, n + j) * hq_j;
            const double t3 = hq_i * H.hess(n + i, j) * hp_j;
            const double t4 = hq_i * H.hess(n + i, n + j) * hq_j;
            r.eq1(i - 1, j - 1) = t1 - t2 - t3 + t4;
            r.scale1(i - 1, j - 1) =
                1.0 + std::max(abs_max3(t1, t2, t3), std::abs(t4));
        }
        const double u1 = hp_i * H.hess(i, 0);
        const double u2 = hq_i * H.hess(n + i, 0);
        r.eq2(i - 1) = u1 - u2;
        r.scale2(i - 1) = 1.0 + std::max(std::abs(u1), std::abs(u2));
    }
    return r;
}

Grid<double> lie_derivative_direct(const Grid<D1d>& W, const std::vector<D1d>& X) {
    const int m = W.rows;
    Grid<double> L(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            double acc = 0.0;
            for (int c = 0; c < m; ++c)
                acc += X[c].v * W(a, b).deriv(c) + W(c, b).v * X[c].deriv(a) +
                       W(a, c).v * X[c].deriv(b);
            L(a, b) = acc;
        }
    return L;
}

Grid<double> lie_derivative_cartan(const Grid<D1d>& W, const std::vector<D1d>& X) {
    const int m = W.rows;
    std::vector<D1d> beta(m);
    for (int b = 0; b < m; ++b) {
        D1d acc{};
        for (int a = 0; a < m; ++a) acc = acc + X[a] * W(a, b);
        beta[b] = acc;
    }
    Grid<double> L(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) L(a, b) = beta[b].deriv(a) - beta[a].deriv(b);
    return L;
}

double grid_difference_rel(const Grid<double>& A, const Grid<double>& B) {
    double diff = 0.0, mag = 0.0;
    for (size_t k = 0; k < A.a.size(); ++k) {
        diff = std::max(diff, std::abs(A.a[k] - B.a[k]));
        mag = std::max(mag, std::max(std::abs(A.a[k]), std::abs(B.a[k])));
    }
    return diff / (1.0 + mag);
}

PairResidual pair_residual(const Eigen::MatrixXd& form, const Eigen::MatrixXd& basis) {
    PairResidual out;
    const int m = static_cast<int>(form.rows());
    for (int a = 0; a < basis.cols(); ++a)
        for (int b = a + 1; b < basis.cols(); ++b) {
            double acc = 0.0, big = 0.0;
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    const double term = basis(c, a) * form(c, d) * basis(d, b);
                    acc += term;
                    big = std::max(big, std::abs(term));
                }
            const double rel = std::abs(acc) / (1.0 + big);
            if (rel > out.residual) {
                out.residual = rel;
                out.worst_a = a;
                out.worst_b = b;
            }
        }
    return out;
}

PairResidual pair_residual(const Grid<double>& form, const Eigen::MatrixXd& basis) {
    return pair_residual(grid_to_matrix(form), basis);
}

IntegrabilityResult integrability_dual(const TensorEval& ev, const Jet2& H,
                                       const Eigen::VectorXd& p, double rank_tol) {
    const int n = ev.n;
    IntegrabilityResult out;

    const Grid<D1d> W1 = omega_R_d1(ev, p);
    const std::vector<D1d> X1 = xh_dual_d1(H, n);
    const Grid<double> Ld = lie_derivative_direct(W1, X1);
    out.route_difference = grid_difference_rel(Ld, lie_derivative_cartan(W1, X1));

    const Eigen::MatrixXd basis = iterated_basis(lift_dual(ev, p), xh_dual(H, n), n + 1);
    out.rank = span_rank(basis, rank_tol);
    out.rank_ok = (out.rank == n + 1);

    const PairResidual pr = pair_residual(Ld, basis);
    out.residual = pr.residual;
    out.worst_a = pr.worst_a;
    out.worst_b = pr.worst_b;
    return out;
}

IntegrabilityResult integrability_cotangent(const TensorEval& ev, const Jet2& H,
                                            const Eigen::VectorXd& p, double rank_tol) {
    const int n = ev.n;
    const int m = 2 * n + 2;
    IntegrabilityResult out;

    // alpha1 = lifted tensor applied to dHtilde, with phase gradients; its
    // exterior differential restricted to the iterated span must vanish.
    const std::vector<D1d> alpha = dH_cotangent_d1(H, n);
    const Grid<D1d> Rc = lift_cotangent_d1(ev, p);
    std::vector<D1d> alpha1(m);
    for (int b = 0; b < m; ++b) {
        D1d acc{};
        for (int a = 0; a < m; ++a) acc = acc + alpha[a] * Rc(a, b);
        alpha1[b] = acc;
    }
    Eigen::MatrixXd dalpha1(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            dalpha1(a, b) = alpha1[b].deriv(a) - alpha1[a].deriv(b);

    const Eigen::MatrixXd basis =
        iterated_basis(lift_cotangent(ev, p), xh_cotangent(H, n), n + 1);
    out.rank = span_rank(basis, rank_tol);
    out.rank_ok = (out.rank == n + 1);

    const PairResidual pr = pair_residual(dalpha1, basis);
    out.residual = pr.residual;
    out.worst_a = pr.worst_a;
    out.worst_b = pr.worst_b;
    return out;
}

double aux_identity_residual(const TensorEval& ev, const Jet2& H,
                             const Eigen::VectorXd& p) {
    const int n = ev.n;
    const Eigen::MatrixXd W = omega_R(ev, p);
    const Eigen::MatrixXd Md = lift_dual(ev, p);
    const Eigen::MatrixXd McT = lift_cotangent(ev, p).transpose();

    Eigen::VectorXd V = xh_dual(H, n);
    Eigen::VectorXd y = dH_cotangent(H, n);
    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
        y = McT * y;  // now (lift^k applied to dHtilde) as a covector

        // pull the cotangent covector back along the section p_0 = -H
        Eigen::VectorXd pulled(2 * n + 1);
        double mag = std::abs(y(n + 1));
        pulled(0) = y(0) - y(n + 1) * H.grad(0);
        for (int i = 1; i <= n; ++i) {
            pulled(i) = y(i) - y(n + 1) * H.grad(i);
            pulled(n + i) = y(n + 1 + i) - y(n + 1) * H.grad(n + i);
        }
        const Eigen::VectorXd c1 = W.transpose() * V;
        mag = std::max(mag, std::max(c1.cwiseAbs().maxCoeff(), pulled.cwiseAbs().maxCoeff()));
        worst = std::max(worst, (c1 + pulled).cwiseAbs().maxCoeff() / (1.0 + mag));

        V = Md * V;
    }
    return worst;
}

TransversalityResult transversality(const TensorEval& ev, const Jet2& H) {
    const int n = ev.n;
    TransversalityResult out;
    const Eigen::MatrixXd block = ev.block_qq();
    const SpectralVerdict sv = eigen_structure(block);
    if (!sv.distinct || sv.has_complex_pair) return out;

    Eigen::VectorXd v = ev.column_q0();
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) v(i - 1) += ev.value(i, j) * H.grad(n + j);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(block);
    if (solver.info() != Eigen::Success) return out;
    const Eigen::MatrixXd basis = solver.eigenvectors().real();
    const Eigen::VectorXd coeff = basis.partialPivLu().solve(v);
    out.defined = true;
    out.min_coeff = coeff.cwiseAbs().minCoeff() / (1.0 + coeff.cwiseAbs().maxCoeff());
    return out;
}

Eigen::MatrixXd eigenbasis_dual(const Jet2& K, int n) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n + 1, n + 1);
    B(0, 0) = 1.0;
    for (int i = 1; i <= n; ++i) {
        B(i, i) = K.grad(n + i);
        B(n + i, i) = -K.grad(i);
    }
    return B;
}

double DnPairings::max_diff_rel() const {
    double worst = 0.0;
    for (int a = 0; a < numeric.rows(); ++a)
        for (int b = 0; b < numeric.cols(); ++b)
            worst = std::max(worst, std::abs(numeric(a, b) - closed_form(a, b)) / scale(a, b));
    return worst;
}

DnPairings dn_pairings(const TensorEval& ev, const Jet2& K, const Eigen::VectorXd& p) {
    const int n = ev.n;
    DnPairings out;
    out.numeric = Eigen::MatrixXd::Zero(n + 1, n + 1);
    out.closed_form = Eigen::MatrixXd::Zero(n + 1, n + 1);
    out.scale = Eigen::MatrixXd::Ones(n + 1, n + 1);

    const Grid<double> L = lie_derivative_direct(omega_R_d1(ev, p), xh_dual_d1(K, n));
    const Eigen::MatrixXd Lm = grid_to_matrix(L);
    const Eigen::MatrixXd B = eigenbasis_dual(K, n);
    out.numeric = B.transpose() * Lm * B;

    for (int i = 1; i <= n; ++i) {
        const double li = ev.value(i, i);
        const double a1 = li * K.hess(i, 0) * K.grad(n + i);
        const double a2 = li * K.hess(n + i, 0) * K.grad(i);
        out.closed_form(i, 0) = a1 - a2;
        out.closed_form(0, i) = a2 - a1;
        const double s0 = 1.0 + abs_max3(a1, a2, out.numeric(i, 0));
        out.scale(i, 0) = out.scale(0, i) = s0;
        for (int j = i + 1; j <= n; ++j) {
            const double gap = ev.value(j, j) - li;
            const double b1 = gap * K.hess(n + i, j) * K.grad(i) * K.grad(n + j);
            const double b2 = gap * K.hess(n + j, i) * K.grad(j) * K.grad(n + i);
            const double b3 = gap * K.hess(i, j) * K.grad(n + i) * K.grad(n + j);
            const double b4 = gap * K.hess(n + i, n + j) * K.grad(i) * K.grad(j);
            out.closed_form(i, j) = b1 + b2 - b3 - b4;
            out.closed_form(j, i) = -out.closed_form(i, j);
            const double s = 1.0 + std::max(std::max(abs_max3(b1, b2, b3), std::abs(b4)),
                                            std::abs(out.numeric(i, j)));
            out.scale(i, j) = out.scale(j, i) = s;
        }
    }
    return out;
}

}  // namespace hjsep
