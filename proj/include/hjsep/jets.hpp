#pragma once

// Forward-mode automatic differentiation carriers.
//
// Jet2 is a truncated second-order Taylor model over k active variables:
// value, gradient, and symmetric Hessian (stored as the upper triangle).
// Arithmetic propagates the exact second-order chain rule.
//
// D1<S> is a first-order jet whose coefficients live in an arbitrary scalar
// ring S.  With S = double it tracks one extra derivative order through
// assembled formulas (lifted tensors, 2-forms); with S = Jet2 it yields the
// first partials of a composition, each carried as a full second-order jet.
//
// In both types an empty coefficient vector means "constant": constants mix
// freely with seeded values of any dimension.

#include <Eigen/Core>

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

namespace hjsep {

class Jet2 {
public:
    Jet2() = default;
    explicit Jet2(double v) : v_(v) {}

    static Jet2 constant(double v) { return Jet2(v); }

    static Jet2 zero(int k) {
        Jet2 j;
        j.resize(k);
        return j;
    }

    // Seed for active variable `index` among k actives.
    static Jet2 variable(int k, int index, double v) {
        assert(index >= 0 && index < k);
        Jet2 j(v);
        j.resize(k);
        j.g_[index] = 1.0;
        return j;
    }

    int vars() const { return static_cast<int>(g_.size()); }
    double value() const { return v_; }

    double grad(int i) const {
        return g_.size() ? g_[i] : 0.0;
    }

    // Symmetric access; both index orders hit the same stored slot.
    double hess(int i, int j) const {
        if (!h_.size()) return 0.0;
        if (i > j) std::swap(i, j);
        return h_[tri_index(vars(), i, j)];
    }

    Eigen::VectorXd grad_vector() const {
        return g_.size() ? g_ : Eigen::VectorXd();
    }

    Eigen::MatrixXd hess_matrix() const {
        const int k = vars();
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j)
                H(i, j) = H(j, i) = hess(i, j);
        return H;
    }

    Jet2 operator-() const {
        Jet2 r(*this);
        r.v_ = -r.v_;
        r.g_ = -r.g_;
        r.h_ = -r.h_;
        return r;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r = broadcast_pair(a, b);
        r.v_ = a.v_ + b.v_;
        accumulate(r.g_, a.g_, 1.0);
        accumulate(r.g_, b.g_, 1.0);
        accumulate(r.h_, a.h_, 1.0);
        accumulate(r.h_, b.h_, 1.0);
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r = broadcast_pair(a, b);
        r.v_ = a.v_ - b.v_;
        accumulate(r.g_, a.g_, 1.0);
        accumulate(r.g_, b.g_, -1.0);
        accumulate(r.h_, a.h_, 1.0);
        accumulate(r.h_, b.h_, -1.0);
        return r;
    }

    // d2(ab) = a''b + 2a'b' + ab''  (per component pair, symmetrized)
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r = broadcast_pair(a, b);
        r.v_ = a.v_ * b.v_;
        accumulate(r.g_, a.g_, b.v_);
        accumulate(r.g_, b.g_, a.v_);
        accumulate(r.h_, a.h_, b.v_);
        accumulate(r.h_, b.h_, a.v_);
        if (a.g_.size() && b.g_.size()) {
            const int k = static_cast<int>(r.g_.size());
            int idx = 0;
            for (int i = 0; i < k; ++i)
                for (int j = i; j < k; ++j, ++idx)
                    r.h_[idx] += a.g_[i] * b.g_[j] + a.g_[j] * b.g_[i];
        }
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        return a * recip(b);
    }

    friend Jet2 operator+(const Jet2& a, double c) { return a + Jet2(c); }
    friend Jet2 operator+(double c, const Jet2& a) { return Jet2(c) + a; }
    friend Jet2 operator-(const Jet2& a, double c) { return a - Jet2(c); }
    friend Jet2 operator-(double c, const Jet2& a) { return Jet2(c) - a; }
    friend Jet2 operator*(const Jet2& a, double c) { return a * Jet2(c); }
    friend Jet2 operator*(double c, const Jet2& a) { return Jet2(c) * a; }
    friend Jet2 operator/(const Jet2& a, double c) { return a * Jet2(1.0 / c); }
    friend Jet2 operator/(double c, const Jet2& a) { return Jet2(c) * recip(a); }

    // f(x) with f0 = f(v), f1 = f'(v), f2 = f''(v):
    //   grad = f1 x',  hess = f1 x'' + f2 x' x'^T
    friend Jet2 apply_unary(const Jet2& x, double f0, double f1, double f2) {
        Jet2 r(f0);
        const int k = x.vars();
        if (k) {
            r.resize(k);
            r.g_ = f1 * x.g_;
            r.h_ = f1 * x.h_;
            int idx = 0;
            for (int i = 0; i < k; ++i)
                for (int j = i; j < k; ++j, ++idx)
                    r.h_[idx] += f2 * x.g_[i] * x.g_[j];
        }
        return r;
    }

    friend Jet2 recip(const Jet2& x) {
        const double iv = 1.0 / x.v_;
        return apply_unary(x, iv, -iv * iv, 2.0 * iv * iv * iv);
    }

    friend Jet2 sqrt(const Jet2& x) {
        const double s = std::sqrt(x.v_);
        return apply_unary(x, s, 0.5 / s, -0.25 / (s * x.v_));
    }

    friend Jet2 sin(const Jet2& x) {
        const double s = std::sin(x.v_), c = std::cos(x.v_);
        return apply_unary(x, s, c, -s);
    }

    friend Jet2 cos(const Jet2& x) {
        const double s = std::sin(x.v_), c = std::cos(x.v_);
        return apply_unary(x, c, -s, -c);
    }

    friend Jet2 exp(const Jet2& x) {
        const double e = std::exp(x.v_);
        return apply_unary(x, e, e, e);
    }

    friend Jet2 log(const Jet2& x) {
        const double iv = 1.0 / x.v_;
        return apply_unary(x, std::log(x.v_), iv, -iv * iv);
    }

    // Real exponent; requires a positive base (callers check the domain).
    friend Jet2 pow(const Jet2& x, double a) {
        const double f0 = std::pow(x.v_, a);
        const double f1 = a * std::pow(x.v_, a - 1.0);
        const double f2 = a * (a - 1.0) * std::pow(x.v_, a - 2.0);
        return apply_unary(x, f0, f1, f2);
    }

private:
    static int tri_index(int k, int i, int j) {
        // row-major upper triangle: row i starts at i*k - i*(i-1)/2
        return i * k - i * (i - 1) / 2 + (j - i);
    }

    void resize(int k) {
        g_ = Eigen::VectorXd::Zero(k);
        h_ = Eigen::VectorXd::Zero(k * (k + 1) / 2);
    }

    // Result skeleton sized to the wider operand; operands must agree when
    // both are seeded.
    static Jet2 broadcast_pair(const Jet2& a, const Jet2& b) {
        assert(a.g_.size() == 0 || b.g_.size() == 0 || a.g_.size() == b.g_.size());
        Jet2 r;
        const int k = static_cast<int>(std::max(a.g_.size(), b.g_.size()));
        if (k) r.resize(k);
        return r;
    }

    static void accumulate(Eigen::VectorXd& dst, const Eigen::VectorXd& src, double w) {
        if (src.size()) dst += w * src;
    }

    double v_ = 0.0;
    Eigen::VectorXd g_;  // empty = constant
    Eigen::VectorXd h_;  // upper triangle, empty = constant
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& x) { return x.value(); }

inline double recip(double x) { return 1.0 / x; }

// ---------------------------------------------------------------------------

template <class S>
struct D1 {
    S v{};
    std::vector<S> d;  // empty = constant

    D1() = default;
    explicit D1(S value) : v(std::move(value)) {}
    D1(S value, std::vector<S> deriv) : v(std::move(value)), d(std::move(deriv)) {}

    static D1 constant(S value) { return D1(std::move(value)); }

    static D1 variable(int m, int index, S value) {
        D1 r(std::move(value));
        r.d.assign(m, S{});
        r.d[index] = S{} + 1.0;
        return r;
    }

    int dirs() const { return static_cast<int>(d.size()); }

    S deriv(int i) const { return d.size() ? d[i] : S{}; }

    D1 operator-() const {
        D1 r(*this);
        r.v = -r.v;
        for (auto& x : r.d) x = -x;
        return r;
    }
};

namespace detail {

template <class S>
int d1_join(const D1<S>& a, const D1<S>& b) {
    assert(a.d.empty() || b.d.empty() || a.d.size() == b.d.size());
    return static_cast<int>(std::max(a.d.size(), b.d.size()));
}

}  // namespace detail

template <class S>
D1<S> operator+(const D1<S>& a, const D1<S>& b) {
    const int m = detail::d1_join(a, b);
    D1<S> r(a.v + b.v);
    if (m) {
        r.d.reserve(m);
        for (int i = 0; i < m; ++i) r.d.push_back(a.deriv(i) + b.deriv(i));
    }
    return r;
}

template <class S>
D1<S> operator-(const D1<S>& a, const D1<S>& b) {
    const int m = detail::d1_join(a, b);
    D1<S> r(a.v - b.v);
    if (m) {
        r.d.reserve(m);
        for (int i = 0; i < m; ++i) r.d.push_back(a.deriv(i) - b.deriv(i));
    }
    return r;
}

template <class S>
D1<S> operator*(const D1<S>& a, const D1<S>& b) {
    const int m = detail::d1_join(a, b);
    D1<S> r(a.v * b.v);
    if (m) {
        r.d.reserve(m);
        for (int i = 0; i < m; ++i) r.d.push_back(a.deriv(i) * b.v + a.v * b.deriv(i));
    }
    return r;
}

template <class S>
D1<S> recip(const D1<S>& a) {
    S rv = recip(a.v);
    S rv2 = -(rv * rv);
    D1<S> r(std::move(rv));
    r.d.reserve(a.d.size());
    for (const auto& x : a.d) r.d.push_back(rv2 * x);
    return r;
}

template <class S>
D1<S> operator/(const D1<S>& a, const D1<S>& b) {
    return a * recip(b);
}

template <class S>
D1<S> operator*(const D1<S>& a, double c) {
    D1<S> r(a.v * c);
    r.d.reserve(a.d.size());
    for (const auto& x : a.d) r.d.push_back(x * c);
    return r;
}

template <class S>
D1<S> operator*(double c, const D1<S>& a) { return a * c; }

template <class S>
D1<S> operator+(const D1<S>& a, double c) {
    D1<S> r(a);
    r.v = r.v + c;
    return r;
}

template <class S>
double value_of(const D1<S>& x) { return value_of(x.v); }

namespace detail {

// f applied through the first-order layer: {f(v), f'(v) d_i}
template <class S, class F0, class F1>
D1<S> d1_chain(const D1<S>& x, F0&& f0, F1&& f1) {
    D1<S> r(f0(x.v));
    if (!x.d.empty()) {
        S fp = f1(x.v);
        r.d.reserve(x.d.size());
        for (const auto& g : x.d) r.d.push_back(fp * g);
    }
    return r;
}

}  // namespace detail

template <class S>
D1<S> sqrt(const D1<S>& x) {
    using std::sqrt;
    S s = sqrt(x.v);
    return detail::d1_chain(x, [&](const S&) { return s; },
                            [&](const S&) { return recip(s + s); });
}

template <class S>
D1<S> sin(const D1<S>& x) {
    using std::cos;
    using std::sin;
    return detail::d1_chain(x, [](const S& v) { return sin(v); },
                            [](const S& v) { return cos(v); });
}

template <class S>
D1<S> cos(const D1<S>& x) {
    using std::cos;
    using std::sin;
    return detail::d1_chain(x, [](const S& v) { return cos(v); },
                            [](const S& v) { return -sin(v); });
}

template <class S>
D1<S> exp(const D1<S>& x) {
    using std::exp;
    S e = exp(x.v);
    return detail::d1_chain(x, [&](const S&) { return e; },
                            [&](const S&) { return e; });
}

template <class S>
D1<S> log(const D1<S>& x) {
    using std::log;
    return detail::d1_chain(x, [](const S& v) { return log(v); },
                            [](const S& v) { return recip(v); });
}

template <class S>
D1<S> pow(const D1<S>& x, double a) {
    using std::pow;
    return detail::d1_chain(x, [&](const S& v) { return pow(v, a); },
                            [&](const S& v) { return pow(v, a - 1.0) * a; });
}

using D1d = D1<double>;

}  // namespace hjsep
