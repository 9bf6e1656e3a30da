// Command-line front end: load problem files, run the check pipeline over
// seeded samples, verify coordinate changes, emit the bundled example.
//
// Exit codes: 0 all gating checks passed, 1 a check failed, 2 input or
// validation error.

#include <hjsep/fixtures.hpp>
#include <hjsep/pipeline.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace hjsep;

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

void print_human(const DiagnosticsReport& rep) {
    for (const auto& c : rep.checks) {
        const char* status = c.passed ? "PASS" : (c.gating ? "FAIL" : "warn");
        const bool floor = c.name == "transversality";
        std::printf("[%s] %-24s worst %-12.6g %s %-10.3g (%d pts, %d skipped)\n", status,
                    c.name.c_str(), c.max_residual, floor ? "> " : "<=", c.threshold,
                    c.evaluated, c.skipped);
    }
    std::printf("overall: %s\n", rep.overall_pass ? "PASS" : "FAIL");
}

void emit_report(const DiagnosticsReport& rep, const std::string& report_path, bool as_json) {
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw ProblemError("cannot write " + report_path);
        out << rep.to_string();
    }
    if (as_json)
        std::cout << rep.to_string();
    else
        print_human(rep);
}

std::string default_out_path(const std::string& problem_path) {
    const auto dot = problem_path.rfind(".json");
    const std::string stem =
        dot == std::string::npos ? problem_path : problem_path.substr(0, dot);
    return stem + "_transformed.json";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pointwise separability checks for time-dependent Hamiltonians"};
    app.require_subcommand(1);

    std::string problem_path, transform_path, report_path, out_path, fixture_name;
    std::string fixture_dir = ".";
    int samples = 0;
    uint64_t seed = 0;
    double tol = 0.0, rank_tol = 0.0;
    bool fast = false, as_json = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--samples", samples, "override the sample count");
        cmd->add_option("--seed", seed, "override the sampling seed");
        cmd->add_option("--tol", tol, "override the pass threshold");
        cmd->add_option("--report", report_path, "write the JSON report to this path");
        cmd->add_flag("--json", as_json, "print the JSON report to stdout");
    };

    CLI::App* check = app.add_subcommand("check", "run the check pipeline on a problem file");
    check->add_option("problem", problem_path, "problem JSON file")->required();
    add_common(check);
    check->add_option("--rank-tol", rank_tol, "override the rank threshold");
    check->add_flag("--fast", fast, "skip the cotangent-bundle integrability test");

    CLI::App* transform =
        app.add_subcommand("transform", "verify a coordinate change and emit the "
                                        "problem respecified in the new coordinates");
    transform->add_option("problem", problem_path, "problem JSON file")->required();
    transform->add_option("transform", transform_path, "transform JSON file")->required();
    transform->add_option("--out", out_path, "path for the emitted problem file");
    add_common(transform);

    CLI::App* example = app.add_subcommand("example", "write a bundled example problem");
    example->add_option("name", fixture_name, "example name (section6)")->required();
    example->add_option("--dir", fixture_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (example->parsed()) {
            for (const auto& path : emit_fixture(fixture_name, fixture_dir))
                std::printf("wrote %s\n", path.c_str());
            return 0;
        }

        ProblemSpec spec = ProblemSpec::load(problem_path);
        if (check->count("--samples") || transform->count("--samples")) {
            if (samples < 1) throw ProblemError("samples: must be >= 1");
            spec.samples = samples;
        }
        if (check->count("--seed") || transform->count("--seed")) spec.seed = seed;
        if (check->count("--tol") || transform->count("--tol")) {
            if (tol <= 0.0) throw ProblemError("tol: must be positive");
            spec.tol.pass = tol;
        }
        if (check->count("--rank-tol")) {
            if (rank_tol <= 0.0) throw ProblemError("rank-tol: must be positive");
            spec.tol.rank = rank_tol;
        }

        if (check->parsed()) {
            const CheckOptions opts{.fast = fast};
            DiagnosticsReport rep = run_check(compile(spec), opts);
            rep.input_digest = problem_digest(spec, opts);
            rep.command = join_args(argc, argv);
            emit_report(rep, report_path, as_json);
            return rep.overall_pass ? 0 : 1;
        }

        const TransformSpec ts = load_transform(transform_path);
        TransformRunResult res = run_transform(spec, ts);
        res.report.input_digest = transform_digest(spec, ts);
        res.report.command = join_args(argc, argv);
        emit_report(res.report, report_path, as_json);
        if (res.report.overall_pass) {
            const std::string emitted =
                out_path.empty() ? default_out_path(problem_path) : out_path;
            res.transformed.save(emitted);
            if (!as_json) std::printf("wrote %s\n", emitted.c_str());
            return 0;
        }
        if (!as_json) std::printf("transform verification failed; no problem file written\n");
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
