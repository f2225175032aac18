#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "myers/profiles.hpp"

namespace myers {

struct SweepSpec {
    std::string parameter;  // e.g. "profile.c", "psi.x", "l", "interval.b"
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    std::string scale = "linear";  // "linear" | "log"

    bool operator==(const SweepSpec&) const = default;
};

/// A parsed job description. `profile` / `psi` stay in their JSON form so
/// sweeps can rewrite one parameter and rebuild; they are validated by
/// construction when the job runs.
struct JobSpec {
    std::string command;  // eval-f | check-compact | diameter | thresholds |
                          // simulate | verify | sweep
    nlohmann::ordered_json profile;
    std::optional<nlohmann::ordered_json> psi;
    std::optional<std::string> search;  // check-compact: "constant" | "sqrt_profile"
    std::optional<double> interval_a;
    std::optional<double> interval_b;  // nullopt inside an interval = "inf"
    bool has_interval = false;
    double tol = 1e-10;
    std::optional<double> r_max;
    std::optional<double> l;
    std::optional<std::string> target;  // sweep: the command run per row
    std::optional<SweepSpec> sweep;
    std::optional<std::string> out_path;
    std::string format = "json";

    bool operator==(const JobSpec&) const = default;
};

JobSpec parse_job(const nlohmann::ordered_json& j);
nlohmann::ordered_json job_to_json(const JobSpec& spec);

RadialProfile profile_from_json(const nlohmann::ordered_json& j);
TestFunction psi_from_json(const nlohmann::ordered_json& j);

/// Deterministic JSON text: 17 significant digits for every finite number,
/// "inf"/"-inf"/"nan" strings for non-finite values, keys in insertion
/// order, 2-space indentation.
std::string dump_json(const nlohmann::ordered_json& j);

/// Deterministic CSV cell for a double (17 significant digits, "." decimal
/// point).
std::string csv_number(double v);

struct JobResult {
    int exit_code = 0;         // 0 ok, 2 validation error, 3 numerical failure
    std::string artifact;      // the primary output (JSON or CSV text)
    std::string summary_json;  // one-line JSON summary for stdout
};

/// Run a parsed job. Errors are reported in-band: the artifact becomes a
/// JSON error object and the exit code is set accordingly.
JobResult run_job(const JobSpec& spec);

}  // namespace myers
