#include <doctest.h>

#include <hjsep/lifts.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <random>

using namespace hjsep;

namespace {

BaseTensor fixture_tensor() {
    return BaseTensor::parse({{"t*q1", "q2"}, {"t*q2", "t*q1"}},
                             {"q1^2 + 0.5*q2^2/t", "1.5*q1*q2"});
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

Eigen::VectorXd vec1(double a) {
    Eigen::VectorXd v(1);
    v << a;
    return v;
}

struct SamplePoint {
    double t;
    Eigen::VectorXd q, p;
};

std::vector<SamplePoint> fixture_points(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> qdist(-2.0, 2.0);
    std::vector<SamplePoint> pts;
    for (int i = 0; i < count; ++i) {
        SamplePoint s;
        s.t = tdist(rng);
        s.q = vec2(qdist(rng), qdist(rng));
        s.p = vec2(qdist(rng), qdist(rng));
        pts.push_back(std::move(s));
    }
    return pts;
}

}  // namespace

TEST_SUITE("lifts") {

TEST_CASE("one dimensional example by hand") {
    // R^1_1 = q, R^1_0 = t at (t, q, p) = (2, 3, 5)
    const BaseTensor R = BaseTensor::parse({{"q1"}}, {"t"});
    const TensorEval ev = eval_tensor(R, {}, 2.0, vec1(3.0));
    const Eigen::VectorXd p = vec1(5.0);

    const Eigen::MatrixXd Md = lift_dual(ev, p);
    REQUIRE(Md.rows() == 3);
    CHECK(Md(1, 0) == doctest::Approx(2.0));
    CHECK(Md(1, 1) == doctest::Approx(3.0));
    CHECK(Md(2, 2) == doctest::Approx(3.0));
    CHECK(Md(2, 0) == doctest::Approx(0.0));
    CHECK(Md(2, 1) == doctest::Approx(0.0));
    CHECK(Md.row(0).norm() == 0.0);

    const Eigen::MatrixXd Mc = lift_cotangent(ev, p);
    REQUIRE(Mc.rows() == 4);
    CHECK(Mc(1, 0) == doctest::Approx(2.0));
    CHECK(Mc(1, 1) == doctest::Approx(3.0));
    CHECK(Mc(3, 3) == doctest::Approx(3.0));
    CHECK(Mc(2, 3) == doctest::Approx(2.0));  // d/dp0 (x) dp1 coefficient
    CHECK(Mc(2, 1) == doctest::Approx(0.0));
    CHECK(Mc(3, 0) == doctest::Approx(0.0));

    const Eigen::VectorXd beta = horizontal_lift(ev, p);
    CHECK(beta[0] == doctest::Approx(10.0));
    CHECK(beta[1] == doctest::Approx(15.0));
    CHECK(beta[2] == doctest::Approx(0.0));

    const Eigen::MatrixXd W = omega_R(ev, p);
    CHECK(W(2, 1) == doctest::Approx(3.0));
    CHECK(W(2, 0) == doctest::Approx(2.0));
    CHECK(W(1, 0) == doctest::Approx(0.0));
    CHECK((W + W.transpose()).norm() == 0.0);
}

TEST_CASE("canonical two form pairings") {
    const Eigen::MatrixXd W = omega_E(2);
    REQUIRE(W.rows() == 6);
    CHECK(W(3, 0) == 1.0);
    CHECK(W(0, 3) == -1.0);
    CHECK(W(4, 1) == 1.0);
    CHECK(W(5, 2) == 1.0);
    CHECK((W + W.transpose()).norm() == 0.0);
    CHECK(W.cwiseAbs().sum() == doctest::Approx(6.0));
}

TEST_CASE("deleting the p0 slot relates the two lifts") {
    const BaseTensor R = fixture_tensor();
    for (const auto& s : fixture_points(6, 918273)) {
        const TensorEval ev = eval_tensor(R, {}, s.t, s.q);
        const Eigen::MatrixXd Mc = lift_cotangent(ev, s.p);
        const Eigen::MatrixXd Md = lift_dual(ev, s.p);
        const int n = 2;
        // index map dual -> cotangent: 0 -> 0, i -> i, n+j -> n+1+j
        auto cot = [&](int a) { return a <= n ? a : a + 1; };
        for (int a = 0; a < 2 * n + 1; ++a)
            for (int b = 0; b < 2 * n + 1; ++b)
                CHECK(Md(a, b) == Mc(cot(a), cot(b)));
    }
}

TEST_CASE("cotangent lift is symmetric for the canonical pairing") {
    const BaseTensor R = fixture_tensor();
    const Eigen::MatrixXd WE = omega_E(2);
    for (const auto& s : fixture_points(8, 5551)) {
        const TensorEval ev = eval_tensor(R, {}, s.t, s.q);
        const Eigen::MatrixXd Mc = lift_cotangent(ev, s.p);
        const Eigen::MatrixXd lhs = Mc.transpose() * WE;
        const Eigen::MatrixXd rhs = WE * Mc;
        const double scale = 1.0 + Mc.cwiseAbs().maxCoeff();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("presymplectic form is closed") {
    const BaseTensor R = fixture_tensor();
    for (const auto& s : fixture_points(6, 77441)) {
        const TensorEval ev = eval_tensor(R, {}, s.t, s.q);
        const Grid<D1d> W = omega_R_d1(ev, s.p);
        const int dim = W.rows;
        for (int a = 0; a < dim; ++a)
            for (int b = a + 1; b < dim; ++b)
                for (int c = b + 1; c < dim; ++c) {
                    const double t1 = W(b, c).deriv(a);
                    const double t2 = W(c, a).deriv(b);
                    const double t3 = W(a, b).deriv(c);
                    const double scale =
                        1.0 + std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
                    CHECK(std::abs(t1 + t2 + t3) <= 1e-10 * scale);
                }
    }
}

TEST_CASE("presymplectic form has a one dimensional kernel along the lift") {
    const BaseTensor R = fixture_tensor();
    for (const auto& s : fixture_points(6, 13579)) {
        const TensorEval ev = eval_tensor(R, {}, s.t, s.q);
        if (std::abs(ev.block_qq().determinant()) < 1e-3) continue;
        const Eigen::MatrixXd W = omega_R(ev, s.p);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv[i] > 1e-9 * sv[0]) ++rank;
        CHECK(rank == 4);

        const Eigen::VectorXd kernel = svd.matrixV().col(4);
        const Eigen::VectorXd beta = horizontal_lift(ev, s.p);
        CHECK(std::abs(kernel.dot(beta)) <= 1e-9 * (1.0 + beta.norm()));
    }
}

TEST_CASE("presymplectic form pulls back from the canonical form") {
    const BaseTensor R = fixture_tensor();
    const int n = 2;
    const Eigen::MatrixXd WE = omega_E(n);
    for (const auto& s : fixture_points(6, 24680)) {
        const TensorEval ev = eval_tensor(R, {}, s.t, s.q);

        // phi(t, q, p) = (t, q, R^i_0 p_i, R^i_j p_i): the fibre map composed
        // with any section (it ignores p0).  Jacobian via first derivatives.
        const TensorAt<D1d> at = tensor_at_d1(ev, Bundle::Dual);
        const std::vector<D1d> pd = momenta_d1(Bundle::Dual, s.p);
        const int dim_in = 2 * n + 1, dim_out = 2 * n + 2;
        std::vector<D1d> phi(dim_out);
        phi[0] = D1d::variable(dim_in, 0, s.t);
        for (int i = 1; i <= n; ++i) phi[i] = D1d::variable(dim_in, i, s.q[i - 1]);
        for (int b = 0; b <= n; ++b) {
            D1d acc{};
            for (int i = 1; i <= n; ++i) acc = acc + pd[i - 1] * at.R(i, b);
            phi[b == 0 ? n + 1 : n + 1 + b] = acc;
        }
        Eigen::MatrixXd J(dim_out, dim_in);
        for (int c = 0; c < dim_out; ++c)
            for (int a = 0; a < dim_in; ++a) J(c, a) = phi[c].deriv(a);

        const Eigen::MatrixXd pulled = J.transpose() * WE * J;
        const Eigen::MatrixXd W = omega_R(ev, s.p);
        const double scale = 1.0 + W.cwiseAbs().maxCoeff();
        CHECK((pulled - W).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("lifted matrices satisfy the base minimal polynomial") {
    const BaseTensor R = fixture_tensor();
    const TensorEval ev = eval_tensor(R, {}, 1.0, vec2(2.0, 1.0));
    const Eigen::VectorXd p = vec2(0.7, -1.3);
    // base eigenvalues at this point are 1 and 3
    const Eigen::MatrixXd Md = lift_dual(ev, p);
    const Eigen::MatrixXd I5 = Eigen::MatrixXd::Identity(5, 5);
    const Eigen::MatrixXd md = Md * (Md - I5) * (Md - 3.0 * I5);
    CHECK(md.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + Md.cwiseAbs().maxCoeff()));

    const Eigen::MatrixXd Mc = lift_cotangent(ev, p);
    const Eigen::MatrixXd I6 = Eigen::MatrixXd::Identity(6, 6);
    const Eigen::MatrixXd mc = Mc * (Mc - I6) * (Mc - 3.0 * I6);
    CHECK(mc.cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + Mc.cwiseAbs().maxCoeff()));
}

TEST_CASE("derivative-carrying variants agree with plain values") {
    const BaseTensor R = fixture_tensor();
    const SamplePoint s = fixture_points(1, 424242)[0];
    const TensorEval ev = eval_tensor(R, {}, s.t, s.q);

    const Eigen::MatrixXd Md = lift_dual(ev, s.p);
    const Grid<D1d> Md1 = lift_dual_d1(ev, s.p);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) CHECK(Md(a, b) == value_of(Md1(a, b)));

    const Eigen::MatrixXd Mc = lift_cotangent(ev, s.p);
    const Grid<D1d> Mc1 = lift_cotangent_d1(ev, s.p);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) CHECK(Mc(a, b) == value_of(Mc1(a, b)));

    const Eigen::MatrixXd W = omega_R(ev, s.p);
    const Grid<D1d> W1 = omega_R_d1(ev, s.p);
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) CHECK(W(a, b) == value_of(W1(a, b)));

    // spot-check gradients against central differences over phase space
    auto omega_entry = [&](const Eigen::VectorXd& x, int a, int b) {
        Eigen::VectorXd q(2), pp(2);
        q << x[1], x[2];
        pp << x[3], x[4];
        const TensorEval e2 = eval_tensor(R, {}, x[0], q);
        return omega_R(e2, pp)(a, b);
    };
    Eigen::VectorXd x0(5);
    x0 << s.t, s.q[0], s.q[1], s.p[0], s.p[1];
    const double h = 1e-6;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < a; ++b)
            for (int c = 0; c < 5; ++c) {
                Eigen::VectorXd xp = x0, xm = x0;
                xp[c] += h;
                xm[c] -= h;
                const double fd = (omega_entry(xp, a, b) - omega_entry(xm, a, b)) / (2 * h);
                const double ad = W1(a, b).deriv(c);
                CHECK(std::abs(fd - ad) <= 1e-6 * (1.0 + std::abs(ad)));
            }
}

}
