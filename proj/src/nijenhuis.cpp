#include <hjsep/nijenhuis.hpp>

#include <algorithm>
#include <cmath>

namespace hjsep {

double Torsion::max_abs() const {
    double m = 0.0;
    for (double x : comp) m = std::max(m, std::abs(x));
    return m;
}

double Torsion::max_rel() const {
    double m = 0.0;
    for (size_t i = 0; i < comp.size(); ++i) m = std::max(m, std::abs(comp[i]) / scale[i]);
    return m;
}

namespace {

// N^a_{bc} = L^d_b d_d L^a_c - L^d_c d_d L^a_b + L^a_d d_c L^d_b - L^a_d d_b L^d_c
template <typename Val, typename Der>
Torsion torsion_impl(int dim, Val&& L, Der&& dL) {
    Torsion N;
    N.dim = dim;
    N.comp.assign(static_cast<size_t>(dim) * dim * dim, 0.0);
    N.scale.assign(static_cast<size_t>(dim) * dim * dim, 1.0);
    auto idx = [dim](int a, int b, int c) {
        return (static_cast<size_t>(a) * dim + b) * dim + c;
    };
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = b + 1; c < dim; ++c) {
                double acc = 0.0, mx = 0.0;
                for (int d = 0; d < dim; ++d) {
                    const double t1 = L(d, b) * dL(a, c, d);
                    const double t2 = -L(d, c) * dL(a, b, d);
                    const double t3 = L(a, d) * dL(d, b, c);
                    const double t4 = -L(a, d) * dL(d, c, b);
                    acc += t1 + t2 + t3 + t4;
                    mx = std::max({mx, std::abs(t1), std::abs(t2), std::abs(t3),
                                   std::abs(t4)});
                }
                N.comp[idx(a, b, c)] = acc;
                N.comp[idx(a, c, b)] = -acc;
                N.scale[idx(a, b, c)] = 1.0 + mx;
                N.scale[idx(a, c, b)] = 1.0 + mx;
            }
    return N;
}

}  // namespace

Torsion torsion_base(const TensorEval& ev) {
    return torsion_impl(
        ev.n + 1, [&](int a, int b) { return ev.value(a, b); },
        [&](int a, int b, int c) { return ev.d1(a, b, c); });
}

Torsion torsion_from_d1(const Grid<D1d>& L) {
    return torsion_impl(
        L.rows, [&](int a, int b) { return value_of(L(a, b)); },
        [&](int a, int b, int c) { return L(a, b).deriv(c); });
}

double derivation_identity_residual(const Grid<D1d>& L, const std::vector<D1d>& alpha,
                       const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    const int dim = L.rows;

    std::vector<D1d> beta1(dim), beta2(dim);
    for (int b = 0; b < dim; ++b) {
        D1d acc{};
        for (int a = 0; a < dim; ++a) acc = acc + alpha[a] * L(a, b);
        beta1[b] = acc;
    }
    for (int b = 0; b < dim; ++b) {
        D1d acc{};
        for (int a = 0; a < dim; ++a) acc = acc + beta1[a] * L(a, b);
        beta2[b] = acc;
    }

    auto dform = [dim](const std::vector<D1d>& beta, const Eigen::VectorXd& U,
                       const Eigen::VectorXd& V) {
        double acc = 0.0;
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                acc += (beta[b].deriv(a) - beta[a].deriv(b)) * U[a] * V[b];
        return acc;
    };

    Eigen::VectorXd LX = Eigen::VectorXd::Zero(dim), LY = Eigen::VectorXd::Zero(dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            LX[a] += value_of(L(a, b)) * X[b];
            LY[a] += value_of(L(a, b)) * Y[b];
        }

    const Torsion N = torsion_from_d1(L);
    double alpha_N = 0.0;
    for (int a = 0; a < dim; ++a) {
        double na = 0.0;
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c) na += N.at(a, b, c) * X[b] * Y[c];
        alpha_N += value_of(alpha[a]) * na;
    }

    const double l1 = dform(beta1, LX, Y);
    const double l2 = dform(beta1, X, LY);
    const double l3 = dform(beta2, X, Y);
    const double r1 = dform(alpha, LX, LY);

    const double lhs = l1 + l2 - l3;
    const double rhs = r1 + alpha_N;
    const double scale = 1.0 + std::max({std::abs(l1), std::abs(l2), std::abs(l3),
                                         std::abs(r1), std::abs(alpha_N)});
    return std::abs(lhs - rhs) / scale;
}

}  // namespace hjsep
