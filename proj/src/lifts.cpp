#include <hjsep/lifts.hpp>

namespace hjsep {

Eigen::MatrixXd grid_to_matrix(const Grid<double>& g) {
    Eigen::MatrixXd M(g.rows, g.cols);
    for (int r = 0; r < g.rows; ++r)
        for (int c = 0; c < g.cols; ++c) M(r, c) = g(r, c);
    return M;
}

TensorAt<double> tensor_at_values(const TensorEval& ev) {
    const int n = ev.n;
    TensorAt<double> at;
    at.n = n;
    at.comp.assign(static_cast<size_t>(n + 1) * (n + 1), 0.0);
    at.dcomp.assign(static_cast<size_t>(n + 1) * (n + 1) * (n + 1), 0.0);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            at.comp[static_cast<size_t>(a) * (n + 1) + b] = ev.value(a, b);
            for (int c = 0; c <= n; ++c)
                at.dcomp[(static_cast<size_t>(a) * (n + 1) + b) * (n + 1) + c] =
                    ev.d1(a, b, c);
        }
    return at;
}

TensorAt<D1d> tensor_at_d1(const TensorEval& ev, Bundle bundle) {
    const int n = ev.n;
    const int dim = phase_dim(bundle, n);
    TensorAt<D1d> at;
    at.n = n;
    at.comp.assign(static_cast<size_t>(n + 1) * (n + 1), D1d{});
    at.dcomp.assign(static_cast<size_t>(n + 1) * (n + 1) * (n + 1), D1d{});
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            D1d val(ev.value(a, b));
            val.d.assign(dim, 0.0);
            for (int c = 0; c <= n; ++c) val.d[c] = ev.d1(a, b, c);
            at.comp[static_cast<size_t>(a) * (n + 1) + b] = std::move(val);
            for (int c = 0; c <= n; ++c) {
                D1d der(ev.d1(a, b, c));
                der.d.assign(dim, 0.0);
                for (int e = 0; e <= n; ++e) der.d[e] = ev.d2(a, b, c, e);
                at.dcomp[(static_cast<size_t>(a) * (n + 1) + b) * (n + 1) + c] =
                    std::move(der);
            }
        }
    return at;
}

std::vector<D1d> momenta_d1(Bundle bundle, const Eigen::VectorXd& p) {
    const int n = static_cast<int>(p.size());
    const int dim = phase_dim(bundle, n);
    std::vector<D1d> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i)
        out.push_back(D1d::variable(dim, momentum_slot(bundle, n, i), p[i - 1]));
    return out;
}

Grid<double> omega_E_form(int n) {
    Grid<double> W(2 * n + 2, 2 * n + 2);
    W(n + 1, 0) = 1.0;
    W(0, n + 1) = -1.0;
    for (int i = 1; i <= n; ++i) {
        W(n + 1 + i, i) = 1.0;
        W(i, n + 1 + i) = -1.0;
    }
    return W;
}

Eigen::MatrixXd lift_dual(const TensorEval& ev, const Eigen::VectorXd& p) {
    const TensorAt<double> at = tensor_at_values(ev);
    const std::vector<double> pv(p.data(), p.data() + p.size());
    return grid_to_matrix(lift_dual_matrix<double>(at, pv));
}

Eigen::MatrixXd lift_cotangent(const TensorEval& ev, const Eigen::VectorXd& p) {
    const TensorAt<double> at = tensor_at_values(ev);
    const std::vector<double> pv(p.data(), p.data() + p.size());
    return grid_to_matrix(lift_cotangent_matrix<double>(at, pv));
}

Eigen::VectorXd horizontal_lift(const TensorEval& ev, const Eigen::VectorXd& p) {
    const TensorAt<double> at = tensor_at_values(ev);
    const std::vector<double> pv(p.data(), p.data() + p.size());
    const std::vector<double> beta = horizontal_lift_covector<double>(at, pv);
    return Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size());
}

Eigen::MatrixXd omega_R(const TensorEval& ev, const Eigen::VectorXd& p) {
    const TensorAt<double> at = tensor_at_values(ev);
    const std::vector<double> pv(p.data(), p.data() + p.size());
    return grid_to_matrix(omega_R_matrix<double>(at, pv));
}

Eigen::MatrixXd omega_E(int n) { return grid_to_matrix(omega_E_form(n)); }

Grid<D1d> lift_dual_d1(const TensorEval& ev, const Eigen::VectorXd& p) {
    const TensorAt<D1d> at = tensor_at_d1(ev, Bundle::Dual);
    return lift_dual_matrix<D1d>(at, momenta_d1(Bundle::Dual, p));
}

Grid<D1d> lift_cotangent_d1(const TensorEval& ev, const Eigen::VectorXd& p) {
    const TensorAt<D1d> at = tensor_at_d1(ev, Bundle::Cotangent);
    return lift_cotangent_matrix<D1d>(at, momenta_d1(Bundle::Cotangent, p));
}

Grid<D1d> omega_R_d1(const TensorEval& ev, const Eigen::VectorXd& p) {
    const TensorAt<D1d> at = tensor_at_d1(ev, Bundle::Dual);
    return omega_R_matrix<D1d>(at, momenta_d1(Bundle::Dual, p));
}

}  // namespace hjsep
