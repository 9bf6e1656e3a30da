#include <doctest.h>

#include <hjsep/dynamics.hpp>

#include <random>
#include <sstream>

using namespace hjsep;

namespace {

const char* kFixtureH =
    "0.5*p1^2 + 0.5*t*p2^2 + 2*t^3*(t*q1^2 + q2^2) + (c*t^2 - 1/t)*p1*q1"
    " + (c*t^2 - 0.5/t)*p2*q2 + a1*t^5*q1^3 + a2*t^(9/2)*q1^2*q2"
    " + 3*a1*t^4*q1*q2^2 + (1/3)*a2*t^(7/2)*q2^3";

const std::map<std::string, double> kFixtureParams = {{"a1", 1.0}, {"a2", 1.0}, {"c", 1.0}};

BaseTensor fixture_tensor() {
    return BaseTensor::parse({{"t*q1", "q2"}, {"t*q2", "t*q1"}},
                             {"q1^2 + 0.5*q2^2/t", "1.5*q1*q2"});
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

PointDual dual_point(double t, double q1, double q2, double p1, double p2) {
    PointDual x;
    x.t = t;
    x.q = vec2(q1, q2);
    x.p = vec2(p1, p2);
    return x;
}

std::string random_polynomial(std::mt19937& rng) {
    static const char* monomials[] = {"t", "q1", "q2", "t*q1", "q1*q2", "q2^2"};
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::ostringstream out;
    out << coeff(rng);
    for (const char* m : monomials) {
        const int c = coeff(rng);
        if (c == 0) continue;
        out << (c > 0 ? " + " : " - ") << std::abs(c) << "*" << m;
    }
    return out.str();
}

BaseTensor random_tensor(std::mt19937& rng) {
    std::vector<std::vector<std::string>> qq(2);
    std::vector<std::string> q0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) qq[i].push_back(random_polynomial(rng));
    for (int i = 0; i < 2; ++i) q0.push_back(random_polynomial(rng));
    return BaseTensor::parse(qq, q0);
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("one dimensional free particle") {
    const ExprHamiltonian H = ExprHamiltonian::parse("0.5*p1^2", 1);
    PointDual x;
    x.t = 2.0;
    x.q = Eigen::VectorXd::Constant(1, 3.0);
    x.p = Eigen::VectorXd::Constant(1, 5.0);
    const Jet2 jet = H.eval(x);

    const Eigen::VectorXd X = xh_dual(jet, 1);
    CHECK(X[0] == 1.0);
    CHECK(X[1] == doctest::Approx(5.0));
    CHECK(X[2] == doctest::Approx(0.0));

    const BaseTensor R = BaseTensor::parse({{"q1"}}, {"t"});
    const TensorEval ev = eval_tensor(R, {}, x.t, x.q);
    const Eigen::MatrixXd B = iterated_basis(lift_dual(ev, x.p), X, 2);
    CHECK(B(0, 1) == doctest::Approx(0.0));
    CHECK(B(1, 1) == doctest::Approx(17.0));
    CHECK(B(2, 1) == doctest::Approx(0.0));
    CHECK(span_rank(B) == 2);

    CHECK(lagrangian_residual(omega_R(ev, x.p), B) <= 1e-14);

    const RelatednessResult rel = relatedness_residuals(ev, jet, x.p);
    CHECK(rel.rho <= 1e-14);
    CHECK(rel.h <= 1e-14);
}

TEST_CASE("example Hamiltonian vector fields at a frozen point") {
    const ExprHamiltonian H = ExprHamiltonian::parse(kFixtureH, 2, kFixtureParams);
    const PointDual x = dual_point(1.0, 1.0, 1.0, 0.0, 0.0);
    const Jet2 jet = H.eval(x);

    const Eigen::VectorXd Xd = xh_dual(jet, 2);
    REQUIRE(Xd.size() == 5);
    CHECK(Xd[0] == 1.0);
    CHECK(Xd[1] == doctest::Approx(0.0));
    CHECK(Xd[2] == doctest::Approx(0.5));
    CHECK(Xd[3] == doctest::Approx(-12.0));
    CHECK(Xd[4] == doctest::Approx(-12.0));

    const Eigen::VectorXd Xc = xh_cotangent(jet, 2);
    REQUIRE(Xc.size() == 6);
    CHECK(Xc[0] == 1.0);
    CHECK(Xc[1] == doctest::Approx(0.0));
    CHECK(Xc[2] == doctest::Approx(0.5));
    CHECK(Xc[3] == doctest::Approx(-110.0 / 3.0));  // -H_t
    CHECK(Xc[4] == doctest::Approx(-12.0));
    CHECK(Xc[5] == doctest::Approx(-12.0));

    const Eigen::VectorXd a = dH_cotangent(jet, 2);
    CHECK(a[0] == doctest::Approx(110.0 / 3.0));
    CHECK(a[1] == doctest::Approx(12.0));
    CHECK(a[2] == doctest::Approx(12.0));
    CHECK(a[3] == 1.0);
    CHECK(a[4] == doctest::Approx(0.0));
    CHECK(a[5] == doctest::Approx(0.5));
}

TEST_CASE("cotangent field pairs with the canonical form") {
    const ExprHamiltonian H = ExprHamiltonian::parse(kFixtureH, 2, kFixtureParams);
    std::mt19937 rng(90210);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    const Eigen::MatrixXd WE = omega_E(2);
    for (int i = 0; i < 8; ++i) {
        const PointDual x =
            dual_point(tdist(rng), dist(rng), dist(rng), dist(rng), dist(rng));
        const Jet2 jet = H.eval(x);
        const Eigen::VectorXd X = xh_cotangent(jet, 2);
        const Eigen::VectorXd a = dH_cotangent(jet, 2);
        const Eigen::VectorXd lhs = WE.transpose() * X;  // (i_X w)_b = X^a w_ab
        CHECK((lhs + a).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + a.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("derivative-carrying field agrees with the jet") {
    const ExprHamiltonian H = ExprHamiltonian::parse(kFixtureH, 2, kFixtureParams);
    const PointDual x = dual_point(1.3, 0.7, -0.9, 1.1, 0.4);
    const Jet2 jet = H.eval(x);
    const Eigen::VectorXd X = xh_dual(jet, 2);
    const std::vector<D1d> X1 = xh_dual_d1(jet, 2);
    for (int a = 0; a < 5; ++a) CHECK(value_of(X1[a]) == X[a]);
    // gradient rows are Hessian rows of H with the right signs
    for (int i = 1; i <= 2; ++i)
        for (int a = 0; a < 5; ++a) {
            CHECK(X1[i].deriv(a) == jet.hess(2 + i, a));
            CHECK(X1[2 + i].deriv(a) == -jet.hess(i, a));
        }
    const std::vector<D1d> alpha = dH_cotangent_d1(jet, 2);
    const Eigen::VectorXd av = dH_cotangent(jet, 2);
    for (int b = 0; b < 6; ++b) {
        CHECK(value_of(alpha[b]) == av[b]);
        CHECK(alpha[b].deriv(3) == 0.0);  // nothing depends on p0
    }
    CHECK(alpha[0].deriv(0) == jet.hess(0, 0));
    CHECK(alpha[1].deriv(2) == jet.hess(1, 2));
    CHECK(alpha[4].deriv(5) == jet.hess(3, 4));
}

TEST_CASE("distribution spans full rank at generic points") {
    const ExprHamiltonian H = ExprHamiltonian::parse(kFixtureH, 2, kFixtureParams);
    const BaseTensor R = fixture_tensor();
    std::mt19937 rng(1618);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> dist(0.3, 1.8);
    for (int i = 0; i < 8; ++i) {
        const PointDual x =
            dual_point(tdist(rng), dist(rng), dist(rng), dist(rng), dist(rng));
        const TensorEval ev = eval_tensor(R, {}, x.t, x.q);
        const Jet2 jet = H.eval(x);
        const Eigen::MatrixXd Bd = iterated_basis(lift_dual(ev, x.p), xh_dual(jet, 2), 3);
        CHECK(span_rank(Bd) == 3);
        const Eigen::MatrixXd Bc =
            iterated_basis(lift_cotangent(ev, x.p), xh_cotangent(jet, 2), 3);
        CHECK(span_rank(Bc) == 3);
    }
}

TEST_CASE("bases are isotropic and related for arbitrary tensors") {
    const ExprHamiltonian H = ExprHamiltonian::parse(kFixtureH, 2, kFixtureParams);
    std::mt19937 rng(8675309);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (int i = 0; i < 10; ++i) {
        const BaseTensor T = i == 0 ? fixture_tensor() : random_tensor(rng);
        const PointDual x =
            dual_point(tdist(rng), dist(rng), dist(rng), dist(rng), dist(rng));
        const TensorEval ev = eval_tensor(T, {}, x.t, x.q);
        const Jet2 jet = H.eval(x);

        const Eigen::MatrixXd Bd = iterated_basis(lift_dual(ev, x.p), xh_dual(jet, 2), 3);
        CHECK(lagrangian_residual(omega_R(ev, x.p), Bd) <= 1e-12);

        const Eigen::MatrixXd Bc =
            iterated_basis(lift_cotangent(ev, x.p), xh_cotangent(jet, 2), 3);
        CHECK(lagrangian_residual(omega_E(2), Bc) <= 1e-12);

        const RelatednessResult rel = relatedness_residuals(ev, jet, x.p);
        CHECK(rel.rho <= 1e-12);
        CHECK(rel.h <= 1e-12);
    }
}

}
