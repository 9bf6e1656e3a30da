#include <doctest.h>

#include <hjsep/separability.hpp>
#include <hjsep/transform.hpp>

#include <random>
#include <string>
#include <vector>

using namespace hjsep;

namespace {

const char* kFixtureH =
    "0.5*p1^2 + 0.5*t*p2^2 + 2*t^3*(t*q1^2 + q2^2) + (c*t^2 - 1/t)*p1*q1"
    " + (c*t^2 - 0.5/t)*p2*q2 + a1*t^5*q1^3 + a2*t^(9/2)*q1^2*q2"
    " + 3*a1*t^4*q1*q2^2 + (1/3)*a2*t^(7/2)*q2^3";

// the fixture Hamiltonian rewritten in the separating coordinates (the
// symbols stay q/p because every Hamiltonian is parsed over those names)
const char* kSeparableK =
    "t^2*(p1^2 + p2^2 + q1^2 + q2^2 + c*(p1*q1 + p2*q2)"
    " + 0.5*a1*(q1^3 + q2^3) + (1/6)*a2*(q1^3 - q2^3))";

const std::map<std::string, double> kFixtureParams = {{"a1", 1.0}, {"a2", 1.0}, {"c", 1.0}};

BaseTensor fixture_tensor() {
    return BaseTensor::parse({{"t*q1", "q2"}, {"t*q2", "t*q1"}},
                             {"q1^2 + 0.5*q2^2/t", "1.5*q1*q2"});
}

PointTransform fixture_transform() {
    return PointTransform::parse({"t*q1 + sqrt(t)*q2", "t*q1 - sqrt(t)*q2"},
                                 {"0.5*(Q1 + Q2)/t", "0.5*(Q1 - Q2)/sqrt(t)"});
}

PointDual dual_point(double t, double q1, double q2, double p1, double p2) {
    PointDual x;
    x.t = t;
    x.q = Eigen::VectorXd(2);
    x.q << q1, q2;
    x.p = Eigen::VectorXd(2);
    x.p << p1, p2;
    return x;
}

}  // namespace

TEST_SUITE("transform") {

TEST_CASE("lifted momenta at a frozen point") {
    const PointTransform T = fixture_transform();
    const PointDual x = dual_point(1.0, 0.7, 0.3, 3.0, 1.0);
    const PointDual X = T.forward_phase(x);
    CHECK(X.q[0] == doctest::Approx(1.0));   // t*q1 + sqrt(t)*q2
    CHECK(X.q[1] == doctest::Approx(0.4));
    CHECK(X.p[0] == doctest::Approx(2.0));
    CHECK(X.p[1] == doctest::Approx(1.0));

    const PointDual back = T.inverse_phase(X);
    CHECK(back.q.isApprox(x.q, 1e-12));
    CHECK(back.p.isApprox(x.p, 1e-12));
}

TEST_CASE("roundtrip, Jacobian consistency, canonicity") {
    const PointTransform T = fixture_transform();
    std::mt19937 rng(333111);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int i = 0; i < 8; ++i) {
        const PointDual x = dual_point(tdist(rng), dist(rng), dist(rng), dist(rng),
                                       dist(rng));
        CHECK(T.roundtrip_residual(x.t, x.q) <= 1e-12);
        CHECK(T.jacobian_consistency(x.t, x.q) <= 1e-11);
        CHECK(T.canonicity_residual(x, dist(rng)) <= 1e-11);
    }

    // corrupting the inverse breaks the roundtrip and the lifted pairing
    const PointTransform bad =
        PointTransform::parse({"t*q1 + sqrt(t)*q2", "t*q1 - sqrt(t)*q2"},
                              {"0.5*(Q1 + Q2)/t", "0.5*(Q1 - Q2)/t"});
    const PointDual x = dual_point(1.7, 0.9, -0.6, 1.1, 0.8);
    CHECK(bad.roundtrip_residual(x.t, x.q) > 1e-3);
    CHECK(bad.jacobian_consistency(x.t, x.q) > 1e-3);
    CHECK(bad.canonicity_residual(x) > 1e-3);
}

TEST_CASE("induced Hamiltonian matches the separated form") {
    const ExprHamiltonian H = ExprHamiltonian::parse(kFixtureH, 2, kFixtureParams);
    const CompositeHamiltonian K(H, fixture_transform());
    const ExprHamiltonian Kref = ExprHamiltonian::parse(kSeparableK, 2, kFixtureParams);

    // frozen value: at t=1, Q=(1,1), P=(1,1) the separated form sums to 7
    const PointDual X0 = dual_point(1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(K.eval(X0).value() == doctest::Approx(7.0));

    std::mt19937 rng(555222);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (int i = 0; i < 8; ++i) {
        const PointDual X = dual_point(tdist(rng), dist(rng), dist(rng), dist(rng),
                                       dist(rng));
        CHECK(hamiltonian_difference(K, Kref, X) <= 1e-12);
    }
}

TEST_CASE("pushforward tensor is diagonal in the new coordinates") {
    const PushforwardTensorField R(fixture_tensor(), {}, fixture_transform());
    std::mt19937 rng(777333);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    for (int trial = 0; trial < 6; ++trial) {
        const double t = tdist(rng);
        Eigen::VectorXd Q(2);
        Q << dist(rng), dist(rng);
        const TensorEval ev = R.eval(t, Q);

        CHECK(ev.value(1, 1) == doctest::Approx(Q[0]).epsilon(1e-12));
        CHECK(ev.value(2, 2) == doctest::Approx(Q[1]).epsilon(1e-12));
        CHECK(std::abs(ev.value(1, 2)) <= 1e-12 * (1.0 + std::abs(Q[0])));
        CHECK(std::abs(ev.value(2, 1)) <= 1e-12 * (1.0 + std::abs(Q[0])));
        CHECK(std::abs(ev.value(1, 0)) <= 1e-12 * (1.0 + std::abs(Q[0])));
        CHECK(std::abs(ev.value(2, 0)) <= 1e-12 * (1.0 + std::abs(Q[1])));

        // the diagonal entries are the coordinates themselves: unit gradient
        // along the matching slot, vanishing Hessian
        for (int i = 1; i <= 2; ++i)
            for (int c = 0; c <= 2; ++c) {
                CHECK(std::abs(ev.d1(i, i, c) - (c == i ? 1.0 : 0.0)) <= 1e-11);
                for (int d = c; d <= 2; ++d)
                    CHECK(std::abs(ev.d2(i, i, c, d)) <= 1e-10);
            }
    }
}

TEST_CASE("identity and linear transforms") {
    const ExprHamiltonian H = ExprHamiltonian::parse(kFixtureH, 2, kFixtureParams);
    const PointTransform id = PointTransform::parse({"q1", "q2"}, {"Q1", "Q2"});
    const CompositeHamiltonian K(H, id);
    const BaseTensor R = fixture_tensor();
    const PushforwardTensorField Rp(R, {}, id);

    const PointDual x = dual_point(1.4, 0.8, -0.5, 0.9, 1.2);
    CHECK(hamiltonian_difference(K, H, x) <= 1e-13);

    const TensorEval a = eval_tensor(R, {}, x.t, x.q);
    const TensorEval b = Rp.eval(x.t, x.q);
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            CHECK(a.value(i, j) == doctest::Approx(b.value(i, j)).epsilon(1e-13));
            for (int c = 0; c <= 2; ++c) {
                CHECK(a.d1(i, j, c) == doctest::Approx(b.d1(i, j, c)).epsilon(1e-12));
                for (int d = c; d <= 2; ++d)
                    CHECK(a.d2(i, j, c, d) ==
                          doctest::Approx(b.d2(i, j, c, d)).epsilon(1e-11));
            }
        }

    // pure dilation in one dimension: K(t, Q, P) = H(t, Q/2, 2P)
    const ExprHamiltonian free1 = ExprHamiltonian::parse("0.5*p1^2", 1);
    const PointTransform dil = PointTransform::parse({"2*q1"}, {"0.5*Q1"});
    const CompositeHamiltonian Kd(free1, dil);
    PointDual y;
    y.t = 1.0;
    y.q = Eigen::VectorXd::Constant(1, 0.6);
    y.p = Eigen::VectorXd::Constant(1, 0.7);
    const Jet2 jet = Kd.eval(y);
    CHECK(jet.value() == doctest::Approx(2.0 * 0.7 * 0.7));
    CHECK(jet.grad(2) == doctest::Approx(4.0 * 0.7));
    CHECK(jet.hess(2, 2) == doctest::Approx(4.0));
    CHECK(std::abs(jet.grad(1)) <= 1e-14);
}

TEST_CASE("singular coordinate changes are reported") {
    // q = Q^2 degenerates at Q = 0
    const PointTransform T = PointTransform::parse({"sqrt(q1)"}, {"Q1^2"});
    const ExprHamiltonian H = ExprHamiltonian::parse("0.5*p1^2 + q1", 1);
    const CompositeHamiltonian K(H, T);
    PointDual X;
    X.t = 1.0;
    X.q = Eigen::VectorXd::Constant(1, 0.0);
    X.p = Eigen::VectorXd::Constant(1, 1.0);
    CHECK_THROWS_AS((void)K.eval(X), TransformError);
    CHECK_THROWS_AS((void)T.inverse_phase(X), TransformError);

    PointDual ok = X;
    ok.q[0] = 1.5;
    CHECK_NOTHROW((void)K.eval(ok));
}

}  // TEST_SUITE
