#include <hjsep/fixtures.hpp>

#include <hjsep/problem.hpp>

#include <filesystem>
#include <fstream>

namespace hjsep {

namespace {

const char* kHamiltonian =
    "0.5*p1^2 + 0.5*t*p2^2 + 2*t^3*(t*q1^2 + q2^2) + (c*t^2 - 1/t)*p1*q1"
    " + (c*t^2 - 0.5/t)*p2*q2 + a1*t^5*q1^3 + a2*t^(9/2)*q1^2*q2"
    " + 3*a1*t^4*q1*q2^2 + (1/3)*a2*t^(7/2)*q2^3";

// same Hamiltonian with the q1*q2^2 coefficient knocked off its certified
// value (3*a1 -> 2*a1): integrability must flag it
const char* kPerturbedHamiltonian =
    "0.5*p1^2 + 0.5*t*p2^2 + 2*t^3*(t*q1^2 + q2^2) + (c*t^2 - 1/t)*p1*q1"
    " + (c*t^2 - 0.5/t)*p2*q2 + a1*t^5*q1^3 + a2*t^(9/2)*q1^2*q2"
    " + 2*a1*t^4*q1*q2^2 + (1/3)*a2*t^(7/2)*q2^3";

// K after the coordinate change, in the new variables (written q, p here)
const char* kReferenceK =
    "t^2*(p1^2 + p2^2 + q1^2 + q2^2 + c*(p1*q1 + p2*q2)"
    " + 0.5*a1*(q1^3 + q2^3) + (1/6)*a2*(q1^3 - q2^3))";

ProblemSpec base_problem() {
    ProblemSpec s;
    s.n = 2;
    s.parameters = {{"a1", 1.0}, {"a2", 1.0}, {"c", 1.0}};
    s.hamiltonian = kHamiltonian;
    s.tensor_qq = {{"t*q1", "q2"}, {"t*q2", "t*q1"}};
    s.tensor_q0 = {"q1^2 + 0.5*q2^2/t", "1.5*q1*q2"};
    s.domain.t = {0.5, 2.0};
    s.domain.q = {{0.1, 1.0}, {0.1, 1.0}};
    s.domain.p = {{0.1, 1.0}, {0.1, 1.0}};
    s.samples = 100;
    s.seed = 42;
    return s;
}

TransformSpec diagonalizing_transform() {
    TransformSpec ts;
    ts.forward = {"t*q1 + sqrt(t)*q2", "t*q1 - sqrt(t)*q2"};
    ts.inverse = {"0.5*(Q1 + Q2)/t", "0.5*(Q1 - Q2)/sqrt(t)"};
    ts.reference_hamiltonian = kReferenceK;
    return ts;
}

std::vector<std::string> emit_section6(const std::string& directory) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + directory);

    std::vector<std::string> written;
    auto save = [&](const std::string& name, const ProblemSpec& spec) {
        const std::string path = (dir / name).string();
        spec.save(path);
        written.push_back(path);
    };

    save("section6.json", base_problem());

    // negative control: one off-diagonal tensor entry loses its t factor,
    // which breaks the torsion-free property
    ProblemSpec bad = base_problem();
    bad.tensor_qq[1][0] = "q2";
    save("section6_badsigma2.json", bad);

    // negative control: certified potential coefficient perturbed
    ProblemSpec perturbed = base_problem();
    perturbed.hamiltonian = kPerturbedHamiltonian;
    save("section6_perturbed.json", perturbed);

    {
        const std::string path = (dir / "section6_transform.json").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << transform_to_json(diagonalizing_transform()).dump(2) << "\n";
        written.push_back(path);
    }
    {
        const std::string path = (dir / "section6_reference_K.txt").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << kReferenceK << "\n";
        written.push_back(path);
    }
    return written;
}

}  // namespace

std::vector<std::string> emit_fixture(const std::string& name, const std::string& directory) {
    if (name == "section6") return emit_section6(directory);
    throw std::runtime_error("unknown fixture \"" + name + "\" (available: section6)");
}

std::vector<std::string> fixture_names() { return {"section6"}; }

}  // namespace hjsep
