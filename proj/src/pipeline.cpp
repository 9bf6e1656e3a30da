#include <hjsep/pipeline.hpp>

#include <hjsep/dynamics.hpp>
#include <hjsep/lifts.hpp>
#include <hjsep/nijenhuis.hpp>
#include <hjsep/separability.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hjsep {

namespace {

// Accumulates one check's worst residual and skip statistics.  `worse`
// decides what counts as worse: larger for residuals, smaller for the
// transversality coefficient.
struct Accumulator {
    std::string name;
    bool gating = true;
    double threshold = 0.0;
    bool smaller_is_worse = false;
    std::string note;

    int evaluated = 0;
    int skipped = 0;
    double worst = 0.0;
    int argmax_index = -1;
    std::optional<PointDual> argmax_point;

    void record(int index, const PointDual& x, double value) {
        if (argmax_index < 0 || (smaller_is_worse ? value < worst : value > worst)) {
            worst = value;
            argmax_index = index;
            argmax_point = x;
        }
        ++evaluated;
    }
    void skip() { ++skipped; }

    static Accumulator make(std::string name, double threshold, bool gating = true,
                            bool smaller_is_worse = false, std::string note = {}) {
        Accumulator a;
        a.name = std::move(name);
        a.threshold = threshold;
        a.gating = gating;
        a.smaller_is_worse = smaller_is_worse;
        a.note = std::move(note);
        return a;
    }

    CheckRecord finish(int total) const {
        CheckRecord r;
        r.name = name;
        r.gating = gating;
        r.evaluated = evaluated;
        r.skipped = skipped;
        r.max_residual = evaluated > 0 ? worst : 0.0;
        r.argmax_index = argmax_index;
        r.argmax_point = argmax_point;
        r.threshold = threshold;
        r.note = note;
        const bool skip_ok = skipped <= kMaxSkipFraction * total;
        const bool value_ok =
            evaluated > 0 &&
            (smaller_is_worse ? r.max_residual > threshold : r.max_residual <= threshold);
        r.passed = skip_ok && value_ok;
        return r;
    }
};

bool finite_tensor(const TensorEval& ev) {
    for (const auto& j : ev.comp) {
        if (!std::isfinite(j.value())) return false;
        const int m = static_cast<int>(j.grad_vector().size());
        for (int a = 0; a < m; ++a) {
            if (!std::isfinite(j.grad(a))) return false;
            for (int b = a; b < m; ++b)
                if (!std::isfinite(j.hess(a, b))) return false;
        }
    }
    return true;
}

}  // namespace

std::string problem_digest(const ProblemSpec& spec, const CheckOptions& opts) {
    return fnv1a_hex(spec.to_json().dump() + "|fast=" + (opts.fast ? "1" : "0"));
}

std::string transform_digest(const ProblemSpec& spec, const TransformSpec& ts) {
    return fnv1a_hex(spec.to_json().dump() + "|transform=" + transform_to_json(ts).dump());
}

DiagnosticsReport run_check(const CompiledProblem& prob, const CheckOptions& opts) {
    const int n = prob.n;
    const int total = prob.samples;
    const double pass = prob.tol.pass;

    Accumulator structure = Accumulator::make("tensor_structure", pass);
    Accumulator spectral = Accumulator::make("spectral", 0.5);
    Accumulator torsion = Accumulator::make("torsion", pass);
    Accumulator rank = Accumulator::make("rank", 0.5);
    Accumulator lagrangian = Accumulator::make("lagrangian", pass);
    Accumulator relatedness = Accumulator::make("relatedness", pass);
    Accumulator integ_dual = Accumulator::make("integrability_dual", pass);
    Accumulator integ_cot = Accumulator::make("integrability_cotangent", pass);
    Accumulator forbat =
        Accumulator::make("forbat", pass, false, false,
                          "separation residuals in the given coordinates; informational, "
                          "the verdict is coordinate-free");
    Accumulator transversal =
        Accumulator::make("transversality", prob.tol.rank, false, true,
                          "smallest relative coefficient of the dynamical field over the "
                          "eigenbasis; passes when above threshold");

    int spectral_failures = 0;
    const Eigen::MatrixXd WE = omega_E(n);

    for (int j = 0; j < total; ++j) {
        PointDual x;
        TensorEval ev;
        Jet2 H;
        try {
            x = prob.draw(j);
            ev = prob.tensor->eval(x.t, x.q);
            H = prob.hamiltonian->eval(x);
        } catch (const std::exception&) {
            for (Accumulator* a : {&structure, &spectral, &torsion, &rank, &lagrangian,
                                   &relatedness, &integ_dual, &integ_cot, &forbat, &transversal})
                a->skip();
            continue;
        }

        // structure: the tensor must evaluate finitely and annihilate dt
        double srow = 0.0;
        for (int b = 0; b <= n; ++b) srow = std::max(srow, std::abs(ev.value(0, b)));
        if (!finite_tensor(ev)) srow = std::numeric_limits<double>::infinity();
        structure.record(j, x, srow);

        const SpectralVerdict sv = eigen_structure(ev.block_qq(), prob.tol.distinct);
        const bool spectral_ok = sv.distinct && sv.all_nonzero && sv.diagonalizable;
        spectral.record(j, x, spectral_ok ? 0.0 : 1.0);
        if (!spectral_ok) ++spectral_failures;

        torsion.record(j, x, torsion_base(ev).max_rel());

        const Eigen::MatrixXd Bd = iterated_basis(lift_dual(ev, x.p), xh_dual(H, n), n + 1);
        const Eigen::MatrixXd Bc =
            iterated_basis(lift_cotangent(ev, x.p), xh_cotangent(H, n), n + 1);
        const int rank_d = span_rank(Bd, prob.tol.rank);
        const int rank_c = span_rank(Bc, prob.tol.rank);
        const bool rank_ok = rank_d == n + 1 && rank_c == n + 1;
        rank.record(j, x, static_cast<double>((n + 1 - rank_d) + (n + 1 - rank_c)));

        forbat.record(j, x, forbat_residuals(H, n).max_rel());

        const bool hypotheses_ok = spectral_ok && rank_ok;
        if (!hypotheses_ok) {
            lagrangian.skip();
            relatedness.skip();
            integ_dual.skip();
            integ_cot.skip();
            transversal.skip();
            continue;
        }

        lagrangian.record(j, x,
                          std::max(lagrangian_residual(omega_R(ev, x.p), Bd),
                                   lagrangian_residual(WE, Bc)));

        const RelatednessResult rel = relatedness_residuals(ev, H, x.p);
        relatedness.record(j, x, std::max(rel.rho, rel.h));

        const IntegrabilityResult rd = integrability_dual(ev, H, x.p, prob.tol.rank);
        if (rd.rank_ok)
            integ_dual.record(j, x, rd.residual);
        else
            integ_dual.skip();

        if (!opts.fast) {
            const IntegrabilityResult rc = integrability_cotangent(ev, H, x.p, prob.tol.rank);
            if (rc.rank_ok)
                integ_cot.record(j, x, rc.residual);
            else
                integ_cot.skip();
        }

        const TransversalityResult tv = transversality(ev, H);
        if (tv.defined)
            transversal.record(j, x, tv.min_coeff);
        else
            transversal.skip();
    }

    if (spectral_failures > 0)
        spectral.note = std::to_string(spectral_failures) +
                        " point(s) failed the spectral verdict (needs real, distinct, "
                        "nonzero eigenvalues and a diagonalizable block)";

    DiagnosticsReport rep;
    rep.checks.push_back(structure.finish(total));
    rep.checks.push_back(spectral.finish(total));
    rep.checks.push_back(torsion.finish(total));
    rep.checks.push_back(rank.finish(total));
    rep.checks.push_back(lagrangian.finish(total));
    rep.checks.push_back(relatedness.finish(total));
    rep.checks.push_back(integ_dual.finish(total));
    if (!opts.fast) rep.checks.push_back(integ_cot.finish(total));
    rep.checks.push_back(forbat.finish(total));
    rep.checks.push_back(transversal.finish(total));

    rep.overall_pass = true;
    for (const auto& c : rep.checks)
        if (c.gating && !c.passed) rep.overall_pass = false;
    return rep;
}

namespace {

// Largest relative variation of the pushforward's i-th diagonal entry as a
// coordinate other than Q^i sweeps its observed range.  Coarse by design:
// a handful of anchors, a short sweep per line.
double dependence_residual(const PushforwardTensorField& field, int n,
                           const std::vector<PointDual>& anchors, const Interval& t_range,
                           const std::vector<Interval>& q_ranges) {
    constexpr int kSteps = 4;
    double worst = 0.0;
    for (const auto& anchor : anchors) {
        TensorEval base;
        try {
            base = field.eval(anchor.t, anchor.q);
        } catch (const std::exception&) {
            continue;
        }
        for (int i = 1; i <= n; ++i) {
            const double ref = base.value(i, i);
            // sweep slot 0 (time) and every Q^j with j != i
            for (int c = 0; c <= n; ++c) {
                if (c == i) continue;
                const Interval range = c == 0 ? t_range : q_ranges[c - 1];
                for (int s = 0; s <= kSteps; ++s) {
                    const double v = range.lo + (range.hi - range.lo) * s / kSteps;
                    double t = anchor.t;
                    Eigen::VectorXd Q = anchor.q;
                    if (c == 0)
                        t = v;
                    else
                        Q[c - 1] = v;
                    try {
                        const TensorEval moved = field.eval(t, Q);
                        worst = std::max(worst,
                                         std::abs(moved.value(i, i) - ref) / (1.0 + std::abs(ref)));
                    } catch (const std::exception&) {
                    }
                }
            }
        }
    }
    return worst;
}

}  // namespace

TransformRunResult run_transform(const ProblemSpec& base, const TransformSpec& ts) {
    ProblemSpec base_only = base;
    base_only.transform.reset();
    const CompiledProblem prob = compile(base_only);

    PointTransform T = [&] {
        try {
            return PointTransform::parse(ts.forward, ts.inverse, base.parameters);
        } catch (const std::exception& e) {
            throw ProblemError(std::string("transform: ") + e.what());
        }
    }();
    if (T.dim() != base.n)
        throw ProblemError("transform: expected one expression per coordinate");

    const double pass = base.tol.pass;
    Accumulator roundtrip = Accumulator::make("roundtrip", pass);
    Accumulator jacobian = Accumulator::make("jacobian_consistency", pass);
    Accumulator canonicity = Accumulator::make("canonicity", pass);
    Accumulator reference = Accumulator::make("hamiltonian_reference", pass);
    Accumulator diagonality =
        Accumulator::make("diagonality", pass, false, false,
                          "largest off-diagonal or time-column entry of the pushforward "
                          "tensor, relative to its diagonal");
    Accumulator dependence =
        Accumulator::make("eigenvalue_dependence", pass, false, false,
                          "heuristic: variation of each diagonal entry along the other "
                          "coordinates, sampled on short sweeps");

    const ExprHamiltonian baseH =
        ExprHamiltonian::parse(base.hamiltonian, base.n, base.parameters);
    const CompositeHamiltonian K(baseH, T);
    std::optional<ExprHamiltonian> refH;
    if (ts.reference_hamiltonian) {
        try {
            refH = ExprHamiltonian::parse(*ts.reference_hamiltonian, base.n, base.parameters);
        } catch (const std::exception& e) {
            throw ProblemError(std::string("transform.reference_hamiltonian: ") + e.what());
        }
    }

    std::vector<double> tparams;
    for (const auto& [name, value] : base.parameters) {
        (void)name;
        tparams.push_back(value);
    }
    const PushforwardTensorField Rp(
        BaseTensor::parse(base.tensor_qq, base.tensor_q0, base.parameters), tparams, T);

    const int n = base.n;
    std::vector<PointDual> mapped;
    std::vector<Interval> q_ranges(n, Interval{std::numeric_limits<double>::infinity(),
                                               -std::numeric_limits<double>::infinity()});

    auto guarded = [](auto&& fn) {
        try {
            return fn();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    for (int j = 0; j < base.samples; ++j) {
        const PointDual x = sample_point(base.domain, base.seed, j);
        roundtrip.record(j, x, guarded([&] { return T.roundtrip_residual(x.t, x.q); }));
        jacobian.record(j, x, guarded([&] { return T.jacobian_consistency(x.t, x.q); }));
        canonicity.record(j, x, guarded([&] { return T.canonicity_residual(x); }));

        PointDual X;
        try {
            X = T.forward_phase(x);
        } catch (const std::exception&) {
            reference.skip();
            diagonality.skip();
            continue;
        }
        if (refH)
            reference.record(j, X, guarded([&] { return hamiltonian_difference(K, *refH, X); }));

        TensorEval ev;
        try {
            ev = Rp.eval(X.t, X.q);
        } catch (const std::exception&) {
            diagonality.skip();
            continue;
        }
        double offdiag = 0.0, diag = 0.0;
        for (int a = 1; a <= n; ++a) {
            diag = std::max(diag, std::abs(ev.value(a, a)));
            offdiag = std::max(offdiag, std::abs(ev.value(a, 0)));
            for (int b = 1; b <= n; ++b)
                if (a != b) offdiag = std::max(offdiag, std::abs(ev.value(a, b)));
        }
        diagonality.record(j, X, offdiag / (1.0 + diag));

        if (static_cast<int>(mapped.size()) < 5) mapped.push_back(X);
        for (int i = 0; i < n; ++i) {
            q_ranges[i].lo = std::min(q_ranges[i].lo, X.q[i]);
            q_ranges[i].hi = std::max(q_ranges[i].hi, X.q[i]);
        }
    }

    dependence.record(0, mapped.empty() ? PointDual{} : mapped.front(),
                      dependence_residual(Rp, n, mapped, base.domain.t, q_ranges));

    DiagnosticsReport rep;
    rep.checks.push_back(roundtrip.finish(base.samples));
    rep.checks.push_back(jacobian.finish(base.samples));
    rep.checks.push_back(canonicity.finish(base.samples));
    if (refH) rep.checks.push_back(reference.finish(base.samples));
    rep.checks.push_back(diagonality.finish(base.samples));
    rep.checks.push_back(dependence.finish(1));

    rep.overall_pass = true;
    for (const auto& c : rep.checks)
        if (c.gating && !c.passed) rep.overall_pass = false;

    TransformRunResult out;
    out.report = std::move(rep);
    out.transformed = base;
    out.transformed.transform = ts;
    return out;
}

}  // namespace hjsep
