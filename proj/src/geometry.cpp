#include <hjsep/geometry.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <stdexcept>

namespace hjsep {

BaseTensor::BaseTensor(int n, std::vector<Expr> qq_rowmajor, std::vector<Expr> q0)
    : n_(n), qq_(std::move(qq_rowmajor)), q0_(std::move(q0)) {
    if (static_cast<int>(qq_.size()) != n * n || static_cast<int>(q0_.size()) != n)
        throw std::invalid_argument("tensor: entry count does not match dimension");
}

BaseTensor BaseTensor::parse(const std::vector<std::vector<std::string>>& qq,
                             const std::vector<std::string>& q0,
                             const std::map<std::string, double>& parameters) {
    const int n = static_cast<int>(qq.size());
    if (static_cast<int>(q0.size()) != n)
        throw std::invalid_argument("tensor: q0 length does not match the block size");
    std::vector<std::string> symbols = {"t"};
    for (int i = 1; i <= n; ++i) symbols.push_back("q" + std::to_string(i));
    std::vector<Expr> qqe, q0e;
    qqe.reserve(n * n);
    for (const auto& row : qq) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("tensor: ragged block");
        for (const auto& src : row) qqe.push_back(Expr::parse(src, symbols, parameters));
    }
    q0e.reserve(n);
    for (const auto& src : q0) q0e.push_back(Expr::parse(src, symbols, parameters));
    return BaseTensor(n, std::move(qqe), std::move(q0e));
}

Eigen::MatrixXd TensorEval::value_matrix() const {
    Eigen::MatrixXd M(n + 1, n + 1);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) M(a, b) = value(a, b);
    return M;
}

Eigen::MatrixXd TensorEval::block_qq() const {
    Eigen::MatrixXd M(n, n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) M(i - 1, j - 1) = value(i, j);
    return M;
}

Eigen::VectorXd TensorEval::column_q0() const {
    Eigen::VectorXd v(n);
    for (int i = 1; i <= n; ++i) v[i - 1] = value(i, 0);
    return v;
}

TensorEval eval_tensor(const BaseTensor& R, std::span<const double> params, double t,
                       const Eigen::VectorXd& q) {
    const int n = R.dim();
    std::vector<double> vars(n + 1);
    vars[0] = t;
    for (int i = 0; i < n; ++i) vars[1 + i] = q[i];
    std::vector<int> active(n + 1);
    for (int a = 0; a <= n; ++a) active[a] = a;

    TensorEval out;
    out.n = n;
    out.comp.assign((n + 1) * (n + 1), Jet2::zero(n + 1));
    for (int i = 1; i <= n; ++i) {
        out.comp[i * (n + 1) + 0] = R.q0(i - 1).eval_jet2(vars, active, params);
        for (int j = 1; j <= n; ++j)
            out.comp[i * (n + 1) + j] = R.qq(i - 1, j - 1).eval_jet2(vars, active, params);
    }
    return out;
}

TensorEval ExprTensorField::eval(double t, const Eigen::VectorXd& q) const {
    return eval_tensor(tensor_, params_, t, q);
}

namespace {

// Characteristic polynomial coefficients by the Faddeev-LeVerrier recursion:
// p(x) = x^n + c[0] x^(n-1) + ... + c[n-1].
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<double> c(n);
    Eigen::MatrixXd M = A;
    for (int k = 1; k <= n; ++k) {
        c[k - 1] = -M.trace() / k;
        if (k < n) M = A * (M + c[k - 1] * Eigen::MatrixXd::Identity(n, n));
    }
    return c;
}

std::complex<double> poly_eval(const std::vector<double>& c, std::complex<double> z) {
    std::complex<double> acc(1.0, 0.0);
    for (double ck : c) acc = acc * z + ck;
    return acc;
}

std::vector<std::complex<double>> durand_kerner(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size());
    std::vector<std::complex<double>> z(n);
    const std::complex<double> seed(0.4, 0.9);
    std::complex<double> acc(1.0, 0.0);
    for (int i = 0; i < n; ++i) {
        acc *= seed;
        z[i] = acc;
    }
    const double tol = 1e-12;
    for (int iter = 0; iter < 500; ++iter) {
        double max_step = 0.0, max_abs = 0.0;
        for (int i = 0; i < n; ++i) {
            std::complex<double> denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == std::complex<double>(0.0, 0.0)) {
                z[i] += std::complex<double>(1e-8, 1e-8);
                continue;
            }
            const std::complex<double> step = poly_eval(c, z[i]) / denom;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step));
            max_abs = std::max(max_abs, std::abs(z[i]));
        }
        if (max_step <= tol * (1.0 + max_abs)) break;
    }
    return z;
}

}  // namespace

SpectralVerdict eigen_structure(const Eigen::MatrixXd& block, double tol) {
    const int n = static_cast<int>(block.rows());
    SpectralVerdict v;
    if (n == 0) return v;

    v.eigenvalues = durand_kerner(characteristic_polynomial(block));

    double max_abs = 0.0;
    for (const auto& ev : v.eigenvalues) max_abs = std::max(max_abs, std::abs(ev));

    // The input is real, so nonreal roots come in conjugate pairs up to
    // roundoff.  Symmetrise each pair so the two real parts are bitwise
    // equal; otherwise the sort below is unstable against noise.
    const double im_floor = 1e-12 * (1.0 + max_abs);
    const double pair_tol = 1e-6 * (1.0 + max_abs);
    std::vector<bool> paired(n, false);
    for (int i = 0; i < n; ++i) {
        if (paired[i] || std::abs(v.eigenvalues[i].imag()) <= im_floor) continue;
        int best = -1;
        double best_dist = pair_tol;
        for (int j = i + 1; j < n; ++j) {
            if (paired[j] || std::abs(v.eigenvalues[j].imag()) <= im_floor) continue;
            const double d = std::abs(v.eigenvalues[i] - std::conj(v.eigenvalues[j]));
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best < 0) continue;
        const std::complex<double> a =
            0.5 * (v.eigenvalues[i] + std::conj(v.eigenvalues[best]));
        v.eigenvalues[i] = a;
        v.eigenvalues[best] = std::conj(a);
        paired[i] = paired[best] = true;
    }

    std::sort(v.eigenvalues.begin(), v.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });

    for (const auto& ev : v.eigenvalues)
        if (std::abs(ev.imag()) > tol * (1.0 + std::abs(ev)))
            v.has_complex_pair = true;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            v.min_gap = std::min(v.min_gap, std::abs(v.eigenvalues[i] - v.eigenvalues[j]));

    const bool gaps_ok = n < 2 || v.min_gap > tol * (1.0 + max_abs);
    v.distinct = gaps_ok && !v.has_complex_pair;

    v.all_nonzero = true;
    for (const auto& ev : v.eigenvalues)
        if (!(std::abs(ev) > tol)) v.all_nonzero = false;

    if (gaps_ok) {
        v.diagonalizable = true;  // simple spectrum
    } else {
        // Cluster repeated roots and compare geometric with algebraic
        // multiplicity via the rank of (A - mu I) over the complex field.
        std::vector<int> cluster(n, -1);
        int nclusters = 0;
        for (int i = 0; i < n; ++i) {
            if (cluster[i] >= 0) continue;
            cluster[i] = nclusters;
            for (int j = i + 1; j < n; ++j)
                if (cluster[j] < 0 &&
                    std::abs(v.eigenvalues[i] - v.eigenvalues[j]) <= tol * (1.0 + max_abs))
                    cluster[j] = nclusters;
            ++nclusters;
        }
        v.diagonalizable = true;
        for (int cl = 0; cl < nclusters; ++cl) {
            int mult = 0;
            std::complex<double> mu(0.0, 0.0);
            for (int i = 0; i < n; ++i)
                if (cluster[i] == cl) {
                    mu += v.eigenvalues[i];
                    ++mult;
                }
            if (mult < 2) continue;
            mu /= static_cast<double>(mult);
            Eigen::MatrixXcd shifted = block.cast<std::complex<double>>();
            shifted -= mu * Eigen::MatrixXcd::Identity(n, n);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
            const auto& sv = svd.singularValues();
            const double smax = sv.size() ? sv[0] : 0.0;
            // The cluster mean is only accurate to the clustering resolution,
            // so singular values below tol*(1+max_abs) count as zero.
            const double cutoff = std::max(tol * smax, tol * (1.0 + max_abs));
            int rank = 0;
            for (int i = 0; i < sv.size(); ++i)
                if (sv[i] > cutoff) ++rank;
            if (n - rank != mult) v.diagonalizable = false;
        }
    }
    return v;
}

PointCotangent tau_R(const TensorEval& R, const PointCotangent& x) {
    const int n = R.n;
    PointCotangent out;
    out.t = x.t;
    out.q = x.q;
    out.p0 = 0.0;
    out.p = Eigen::VectorXd::Zero(n);
    for (int i = 1; i <= n; ++i) {
        out.p0 += R.value(i, 0) * x.p[i - 1];
        for (int j = 1; j <= n; ++j) out.p[j - 1] += R.value(i, j) * x.p[i - 1];
    }
    return out;
}

}  // namespace hjsep
