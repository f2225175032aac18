// Command-line front end: reads a JSON job description, dispatches to the
// library, writes the result artifact (JSON or CSV).
//
//   myers --job job.json [--out result.json] [--format json|csv]
//         [--tol 1e-10] [--quiet]
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "myers/errors.hpp"
#include "myers/jobs.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Bonnet-Myers compactness and diameter criteria toolkit"};
    std::string job_path;
    std::string out_path;
    std::string format;
    double tol = -1.0;
    bool quiet = false;
    app.add_option("--job", job_path, "JSON job description")->required();
    app.add_option("--out", out_path, "output path (default: stdout)");
    app.add_option("--format", format, "output format: json|csv (overrides the job file)");
    app.add_option("--tol", tol, "quadrature tolerance override");
    app.add_flag("--quiet", quiet, "suppress the stdout summary");
    CLI11_PARSE(app, argc, argv);

    nlohmann::ordered_json job_json;
    {
        std::ifstream in(job_path);
        if (!in) {
            std::cerr << "error: cannot open job file " << job_path << "\n";
            return 2;
        }
        try {
            in >> job_json;
        } catch (const std::exception& e) {
            std::cerr << "error: job file is not valid JSON: " << e.what() << "\n";
            return 2;
        }
    }

    myers::JobSpec spec;
    try {
        spec = myers::parse_job(job_json);
    } catch (const myers::Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return 2;
    }
    if (!out_path.empty()) spec.out_path = out_path;
    if (!format.empty()) {
        if (format != "json" && format != "csv") {
            std::cerr << "error: --format must be json or csv\n";
            return 2;
        }
        spec.format = format;
    }
    if (tol > 0.0) spec.tol = tol;

    const auto result = myers::run_job(spec);

    if (spec.out_path) {
        std::ofstream out(*spec.out_path);
        if (!out) {
            std::cerr << "error: cannot write " << *spec.out_path << "\n";
            return 2;
        }
        out << result.artifact;
        if (!quiet) std::cout << result.summary_json;
    } else {
        std::cout << result.artifact;
    }
    return result.exit_code;
}
