#include <hjsep/problem.hpp>

#include <fstream>
#include <sstream>

namespace hjsep {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ProblemError(where + ": " + what);
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(key, "missing required field");
    return *it;
}

Interval read_interval(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(where, "expected [lo, hi]");
    Interval iv{j[0].get<double>(), j[1].get<double>()};
    if (!(iv.lo <= iv.hi)) fail(where, "interval has lo > hi");
    return iv;
}

std::vector<Interval> read_intervals(const json& j, int n, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        fail(where, "expected " + std::to_string(n) + " intervals");
    std::vector<Interval> out;
    for (int i = 0; i < n; ++i)
        out.push_back(read_interval(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::string> read_strings(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) fail(where, "expected an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

ordered_json domain_intervals(const std::vector<Interval>& ivs) {
    auto arr = ordered_json::array();
    for (const auto& iv : ivs) arr.push_back({iv.lo, iv.hi});
    return arr;
}

TransformSpec read_transform(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    TransformSpec ts;
    ts.forward = read_strings(require(j, "forward"), where + ".forward");
    ts.inverse = read_strings(require(j, "inverse"), where + ".inverse");
    if (ts.forward.empty() || ts.forward.size() != ts.inverse.size())
        fail(where, "forward and inverse must list one expression per coordinate");
    if (auto it = j.find("reference_hamiltonian"); it != j.end()) {
        if (!it->is_string()) fail(where + ".reference_hamiltonian", "expected a string");
        ts.reference_hamiltonian = it->get<std::string>();
    }
    return ts;
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ProblemError(path + ": " + e.what());
    }
    return j;
}

}  // namespace

ProblemSpec ProblemSpec::from_json(const json& j) {
    if (!j.is_object()) throw ProblemError("problem: expected a JSON object");
    ProblemSpec s;

    const json& jn = require(j, "n");
    if (!jn.is_number_integer() || jn.get<int>() < 1) fail("n", "must be an integer >= 1");
    s.n = jn.get<int>();

    if (auto it = j.find("parameters"); it != j.end()) {
        if (!it->is_object()) fail("parameters", "expected an object of name -> number");
        for (auto& [k, v] : it->items()) {
            if (!v.is_number()) fail("parameters." + k, "expected a number");
            s.parameters[k] = v.get<double>();
        }
    }

    const json& jh = require(j, "hamiltonian");
    if (!jh.is_string()) fail("hamiltonian", "expected a string");
    s.hamiltonian = jh.get<std::string>();

    const json& jt = require(j, "tensor");
    if (!jt.is_object()) fail("tensor", "expected an object with qq and q0");
    const json& jqq = require(jt, "qq");
    if (!jqq.is_array() || static_cast<int>(jqq.size()) != s.n)
        fail("tensor.qq", "expected " + std::to_string(s.n) + " rows");
    for (int i = 0; i < s.n; ++i) {
        auto row = read_strings(jqq[i], "tensor.qq[" + std::to_string(i) + "]");
        if (static_cast<int>(row.size()) != s.n)
            fail("tensor.qq[" + std::to_string(i) + "]",
                 "expected " + std::to_string(s.n) + " entries");
        s.tensor_qq.push_back(std::move(row));
    }
    s.tensor_q0 = read_strings(require(jt, "q0"), "tensor.q0");
    if (static_cast<int>(s.tensor_q0.size()) != s.n)
        fail("tensor.q0", "expected " + std::to_string(s.n) + " entries");

    const json& jd = require(j, "domain");
    if (!jd.is_object()) fail("domain", "expected an object with t, q, p");
    s.domain.t = read_interval(require(jd, "t"), "domain.t");
    s.domain.q = read_intervals(require(jd, "q"), s.n, "domain.q");
    s.domain.p = read_intervals(require(jd, "p"), s.n, "domain.p");

    if (auto it = j.find("samples"); it != j.end()) {
        if (!it->is_number_integer()) fail("samples", "expected an integer");
        s.samples = it->get<int>();
    }
    if (s.samples < 1) fail("samples", "must be >= 1");

    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned() && !it->is_number_integer())
            fail("seed", "expected a non-negative integer");
        s.seed = it->get<uint64_t>();
    }

    if (auto it = j.find("tolerances"); it != j.end()) {
        if (!it->is_object()) fail("tolerances", "expected an object");
        auto read_tol = [&](const char* key, double& slot) {
            if (auto t = it->find(key); t != it->end()) {
                if (!t->is_number() || t->get<double>() <= 0.0)
                    fail(std::string("tolerances.") + key, "expected a positive number");
                slot = t->get<double>();
            }
        };
        read_tol("pass", s.tol.pass);
        read_tol("rank", s.tol.rank);
        read_tol("distinct", s.tol.distinct);
    }

    if (auto it = j.find("frame"); it != j.end()) {
        if (!it->is_string() ||
            (it->get<std::string>() != "original" && it->get<std::string>() != "transformed"))
            fail("frame", "expected \"original\" or \"transformed\"");
        if (it->get<std::string>() == "transformed" && !j.contains("transform"))
            fail("frame", "\"transformed\" requires a transform block");
    }
    if (auto it = j.find("transform"); it != j.end())
        s.transform = read_transform(*it, "transform");

    return s;
}

ProblemSpec ProblemSpec::load(const std::string& path) { return from_json(parse_file(path)); }

ordered_json ProblemSpec::to_json() const {
    ordered_json j;
    j["n"] = n;
    if (!parameters.empty()) j["parameters"] = parameters;
    j["hamiltonian"] = hamiltonian;
    j["tensor"]["qq"] = tensor_qq;
    j["tensor"]["q0"] = tensor_q0;
    j["domain"]["t"] = {domain.t.lo, domain.t.hi};
    j["domain"]["q"] = domain_intervals(domain.q);
    j["domain"]["p"] = domain_intervals(domain.p);
    j["samples"] = samples;
    j["seed"] = seed;
    j["tolerances"]["pass"] = tol.pass;
    j["tolerances"]["rank"] = tol.rank;
    j["tolerances"]["distinct"] = tol.distinct;
    if (transform) {
        j["frame"] = "transformed";
        j["transform"] = transform_to_json(*transform);
    }
    return j;
}

void ProblemSpec::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ProblemError("cannot write " + path);
    out << to_json().dump(2) << "\n";
}

TransformSpec transform_from_json(const json& j) { return read_transform(j, "transform"); }

TransformSpec load_transform(const std::string& path) {
    return transform_from_json(parse_file(path));
}

ordered_json transform_to_json(const TransformSpec& ts) {
    ordered_json j;
    j["forward"] = ts.forward;
    j["inverse"] = ts.inverse;
    if (ts.reference_hamiltonian) j["reference_hamiltonian"] = *ts.reference_hamiltonian;
    return j;
}

PointDual CompiledProblem::draw(int index) const {
    PointDual x = sample_point(domain, seed, index);
    if (transform) return transform->forward_phase(x);
    return x;
}

CompiledProblem compile(const ProblemSpec& spec) {
    CompiledProblem out;
    out.n = spec.n;
    out.domain = spec.domain;
    out.samples = spec.samples;
    out.seed = spec.seed;
    out.tol = spec.tol;

    if (spec.samples < 1) throw ProblemError("samples: must be >= 1");
    if (spec.n < 1) throw ProblemError("n: must be >= 1");
    if (static_cast<int>(spec.domain.q.size()) != spec.n ||
        static_cast<int>(spec.domain.p.size()) != spec.n)
        throw ProblemError("domain: expected one q and one p interval per coordinate");
    for (const auto& iv : spec.domain.q)
        if (!(iv.lo <= iv.hi)) throw ProblemError("domain.q: interval has lo > hi");
    for (const auto& iv : spec.domain.p)
        if (!(iv.lo <= iv.hi)) throw ProblemError("domain.p: interval has lo > hi");
    if (!(spec.domain.t.lo <= spec.domain.t.hi))
        throw ProblemError("domain.t: interval has lo > hi");

    ExprHamiltonian H = [&] {
        try {
            return ExprHamiltonian::parse(spec.hamiltonian, spec.n, spec.parameters);
        } catch (const std::exception& e) {
            throw ProblemError(std::string("hamiltonian: ") + e.what());
        }
    }();

    BaseTensor R = [&] {
        try {
            return BaseTensor::parse(spec.tensor_qq, spec.tensor_q0, spec.parameters);
        } catch (const std::exception& e) {
            throw ProblemError(std::string("tensor: ") + e.what());
        }
    }();
    const std::vector<double> tensor_params = [&] {
        std::vector<double> v;
        for (const auto& [name, value] : spec.parameters) {
            (void)name;
            v.push_back(value);
        }
        return v;
    }();

    if (spec.transform) {
        PointTransform T = [&] {
            try {
                return PointTransform::parse(spec.transform->forward, spec.transform->inverse,
                                             spec.parameters);
            } catch (const std::exception& e) {
                throw ProblemError(std::string("transform: ") + e.what());
            }
        }();
        if (T.dim() != spec.n)
            throw ProblemError("transform: expected one expression per coordinate");
        out.hamiltonian = std::make_unique<CompositeHamiltonian>(H, T);
        out.tensor = std::make_unique<PushforwardTensorField>(R, tensor_params, T);
        if (spec.transform->reference_hamiltonian) {
            try {
                out.reference = ExprHamiltonian::parse(*spec.transform->reference_hamiltonian,
                                                       spec.n, spec.parameters);
            } catch (const std::exception& e) {
                throw ProblemError(std::string("transform.reference_hamiltonian: ") + e.what());
            }
        }
        out.transform = std::move(T);
    } else {
        out.hamiltonian = std::make_unique<ExprHamiltonian>(std::move(H));
        out.tensor = std::make_unique<ExprTensorField>(std::move(R), tensor_params);
    }
    return out;
}

}  // namespace hjsep
