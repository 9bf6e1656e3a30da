#include <doctest.h>

#include <hjsep/nijenhuis.hpp>

#include "oracles.hpp"

#include <random>
#include <sstream>

using namespace hjsep;

namespace {

BaseTensor fixture_tensor() {
    return BaseTensor::parse({{"t*q1", "q2"}, {"t*q2", "t*q1"}},
                             {"q1^2 + 0.5*q2^2/t", "1.5*q1*q2"});
}

// same leading block except the lower-left entry loses its factor t, which
// is exactly what the vanishing-torsion condition forces
BaseTensor broken_tensor() {
    return BaseTensor::parse({{"t*q1", "q2"}, {"q2", "t*q1"}},
                             {"q1^2 + 0.5*q2^2/t", "1.5*q1*q2"});
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

std::string random_polynomial(std::mt19937& rng) {
    static const char* monomials[] = {"t", "q1", "q2", "t*q1", "q1*q2", "q2^2", "t^2"};
    std::uniform_int_distribution<int> coeff(-3, 3);
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

TEST_SUITE("nijenhuis") {

TEST_CASE("constant tensors are torsion free") {
    const BaseTensor R = BaseTensor::parse({{"2", "1"}, {"-1", "3"}}, {"1", "4"});
    const TensorEval ev = eval_tensor(R, {}, 0.7, vec2(1.3, -0.4));
    const Torsion N = torsion_base(ev);
    CHECK(N.max_abs() == 0.0);
}

TEST_CASE("single entry tensor has one independent component") {
    // L^1_1 = q2: the only surviving component is N^1_{12} = q2
    const BaseTensor R = BaseTensor::parse({{"q2", "0"}, {"0", "0"}}, {"0", "0"});
    const TensorEval ev = eval_tensor(R, {}, 0.3, vec2(1.7, 2.5));
    const Torsion N = torsion_base(ev);
    CHECK(N.at(1, 1, 2) == doctest::Approx(2.5));
    CHECK(N.at(1, 2, 1) == doctest::Approx(-2.5));
    double rest = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                if (!(a == 1 && b == 1 && c == 2) && !(a == 1 && b == 2 && c == 1))
                    rest = std::max(rest, std::abs(N.at(a, b, c)));
    CHECK(rest == 0.0);
}

TEST_CASE("example tensor is torsion free, its broken variant is not") {
    std::mt19937 rng(112233);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> qdist(-2.0, 2.0);
    const BaseTensor good = fixture_tensor();
    const BaseTensor bad = broken_tensor();
    for (int i = 0; i < 10; ++i) {
        const double t = tdist(rng);
        const Eigen::VectorXd q = vec2(qdist(rng), qdist(rng));
        CHECK(torsion_base(eval_tensor(good, {}, t, q)).max_rel() <= 1e-13);
    }
    // frozen value: N^1_{01} = 3/2 at (t, q1, q2) = (2, 1, 1)
    const Torsion Nbad = torsion_base(eval_tensor(bad, {}, 2.0, vec2(1.0, 1.0)));
    CHECK(Nbad.at(1, 0, 1) == doctest::Approx(1.5));
    CHECK(Nbad.max_rel() > 1e-3);
    // the good tensor's same component vanishes there
    const Torsion Ngood = torsion_base(eval_tensor(good, {}, 2.0, vec2(1.0, 1.0)));
    CHECK(std::abs(Ngood.at(1, 0, 1)) <= 1e-13);
}

TEST_CASE("base torsion matches the bracket definition") {
    std::mt19937 rng(445566);
    std::uniform_real_distribution<double> pdist(0.4, 1.6);
    for (int trial = 0; trial < 10; ++trial) {
        const BaseTensor T = random_tensor(rng);
        Eigen::VectorXd x(3);
        x << pdist(rng), pdist(rng), pdist(rng);
        const TensorEval ev = eval_tensor(T, {}, x[0], x.tail(2));
        const Torsion N = torsion_base(ev);

        auto matrix_at = [&](const Eigen::VectorXd& y) {
            return eval_tensor(T, {}, y[0], y.tail(2)).value_matrix();
        };
        auto column_field = [&](int b) {
            return oracle::FieldFn(
                [&, b](const Eigen::VectorXd& y) { return matrix_at(y).col(b).eval(); });
        };
        auto unit_field = [&](int b) {
            return oracle::FieldFn([b](const Eigen::VectorXd& y) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(y.size());
                e[b] = 1.0;
                return e;
            });
        };

        const Eigen::MatrixXd L0 = matrix_at(x);
        for (int b = 0; b < 3; ++b)
            for (int c = b + 1; c < 3; ++c) {
                // N(e_b, e_c) = [Le_b, Le_c] - L[Le_b, e_c] - L[e_b, Le_c]
                //               + L^2 [e_b, e_c]
                const Eigen::VectorXd br1 =
                    oracle::fd_bracket(column_field(b), column_field(c), x);
                const Eigen::VectorXd br2 =
                    oracle::fd_bracket(column_field(b), unit_field(c), x);
                const Eigen::VectorXd br3 =
                    oracle::fd_bracket(unit_field(b), column_field(c), x);
                const Eigen::VectorXd br4 =
                    oracle::fd_bracket(unit_field(b), unit_field(c), x);
                const Eigen::VectorXd ref = br1 - L0 * br2 - L0 * br3 + L0 * L0 * br4;
                for (int a = 0; a < 3; ++a)
                    CHECK(std::abs(N.at(a, b, c) - ref[a]) <=
                          1e-5 * (1.0 + std::abs(ref[a])));
            }
    }
}

TEST_CASE("vanishing base torsion passes to both lifts") {
    std::mt19937 rng(778899);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);
    std::uniform_real_distribution<double> qdist(-2.0, 2.0);
    const BaseTensor good = fixture_tensor();
    const BaseTensor bad = broken_tensor();
    for (int i = 0; i < 5; ++i) {
        const double t = tdist(rng);
        const Eigen::VectorXd q = vec2(qdist(rng), qdist(rng));
        const Eigen::VectorXd p = vec2(qdist(rng), qdist(rng));
        const TensorEval evg = eval_tensor(good, {}, t, q);
        CHECK(torsion_from_d1(lift_dual_d1(evg, p)).max_rel() <= 1e-12);
        CHECK(torsion_from_d1(lift_cotangent_d1(evg, p)).max_rel() <= 1e-12);

        const TensorEval evb = eval_tensor(bad, {}, t, q);
        CHECK(torsion_base(evb).max_rel() > 1e-6);
        CHECK(torsion_from_d1(lift_dual_d1(evb, p)).max_rel() > 1e-6);
        CHECK(torsion_from_d1(lift_cotangent_d1(evb, p)).max_rel() > 1e-6);
    }
}

TEST_CASE("derivation identity holds for arbitrary data") {
    std::mt19937 rng(314159);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    std::uniform_real_distribution<double> tdist(0.5, 2.0);

    for (int trial = 0; trial < 20; ++trial) {
        const bool lifted = trial % 2 == 0;
        int dim;
        Grid<D1d> L;
        if (lifted) {
            const BaseTensor T = trial % 4 == 0 ? fixture_tensor() : broken_tensor();
            const double t = tdist(rng);
            const Eigen::VectorXd q = vec2(dist(rng), dist(rng));
            const Eigen::VectorXd p = vec2(dist(rng), dist(rng));
            L = lift_dual_d1(eval_tensor(T, {}, t, q), p);
            dim = L.rows;
        } else {
            dim = 3 + trial % 3;
            L = Grid<D1d>(dim, dim);
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) {
                    D1d entry(dist(rng));
                    entry.d.resize(dim);
                    for (int c = 0; c < dim; ++c) entry.d[c] = dist(rng);
                    L(a, b) = std::move(entry);
                }
        }
        std::vector<D1d> alpha(dim);
        for (int a = 0; a < dim; ++a) {
            D1d entry(dist(rng));
            entry.d.resize(dim);
            for (int c = 0; c < dim; ++c) entry.d[c] = dist(rng);
            alpha[a] = std::move(entry);
        }
        Eigen::VectorXd X(dim), Y(dim);
        for (int a = 0; a < dim; ++a) {
            X[a] = dist(rng);
            Y[a] = dist(rng);
        }
        CHECK(derivation_identity_residual(L, alpha, X, Y) <= 1e-10);
    }
}

}
