#include "myers/jobs.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "myers/criteria.hpp"
#include "myers/errors.hpp"
#include "myers/functional.hpp"
#include "myers/model_sim.hpp"

namespace myers {

using nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_number(const ordered_json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ValidationError("missing numeric field \"" + key + "\"");
    }
    return j[key].get<double>();
}

double number_or(const ordered_json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ValidationError("field \"" + key + "\" must be a number");
    return j[key].get<double>();
}

std::vector<double> require_array(const ordered_json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw ValidationError("missing array field \"" + key + "\"");
    }
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ValidationError("array \"" + key + "\" must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// JSON value for a double; non-finite values become strings since JSON has
// no literal for them.
ordered_json num_or_tag(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

void dump_value(const ordered_json& j, std::string& out, int indent) {
    const std::string pad(indent, ' ');
    const std::string pad2(indent + 2, ' ');
    switch (j.type()) {
        case nlohmann::detail::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad2 + ordered_json(it.key()).dump() + ": ";
                dump_value(it.value(), out, indent + 2);
            }
            out += "\n" + pad + "}";
            return;
        }
        case nlohmann::detail::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad2;
                dump_value(v, out, indent + 2);
            }
            out += "\n" + pad + "]";
            return;
        }
        case nlohmann::detail::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += ordered_json(std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")).dump();
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Profile / test function descriptions

RadialProfile profile_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ValidationError("profile must be an object");
    if (!j.contains("family") || !j["family"].is_string()) {
        throw ValidationError("profile needs a \"family\" string");
    }
    const std::string family = j["family"].get<std::string>();
    if (family == "constant") {
        return RadialProfile::constant(require_number(j, "c"));
    }
    if (family == "poly_decay") {
        return RadialProfile::poly_decay(number_or(j, "c", 1.0), require_number(j, "p"),
                                         number_or(j, "cutoff", 1.0));
    }
    if (family == "exp_decay") {
        return RadialProfile::exp_decay(number_or(j, "c", 1.0), require_number(j, "p"));
    }
    if (family == "piecewise") {
        if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty()) {
            throw ValidationError("piecewise profile needs a non-empty \"pieces\" array");
        }
        std::vector<std::pair<double, RadialProfile>> pieces;
        for (const auto& piece : j["pieces"]) {
            if (!piece.is_object() || !piece.contains("profile")) {
                throw ValidationError("each piece needs \"start\" and \"profile\"");
            }
            pieces.emplace_back(require_number(piece, "start"),
                                profile_from_json(piece["profile"]));
        }
        double end = RadialProfile::infinite_radius();
        if (j.contains("end") && j["end"].is_number()) end = j["end"].get<double>();
        return RadialProfile::piecewise(std::move(pieces), end);
    }
    if (family == "sampled") {
        return RadialProfile::sampled(require_array(j, "r"), require_array(j, "q"),
                                      require_number(j, "horizon"));
    }
    throw ValidationError("unknown profile family \"" + family + "\"");
}

TestFunction psi_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ValidationError("psi must be an object");
    if (!j.contains("family") || !j["family"].is_string()) {
        throw ValidationError("psi needs a \"family\" string");
    }
    const std::string family = j["family"].get<std::string>();
    if (family == "constant") {
        return TestFunction::constant(require_number(j, "x"));
    }
    if (family == "power") {
        return TestFunction::power(require_number(j, "k"), require_number(j, "alpha"),
                                   number_or(j, "domain_start", 1.0));
    }
    if (family == "sqrt_profile") {
        if (!j.contains("profile")) throw ValidationError("sqrt_profile psi needs a \"profile\"");
        return TestFunction::sqrt_of_profile(profile_from_json(j["profile"]));
    }
    if (family == "sampled") {
        Monotonicity mono = Monotonicity::non_increasing;
        if (j.contains("monotonicity")) {
            const std::string m = j["monotonicity"].get<std::string>();
            if (m == "non_decreasing") {
                mono = Monotonicity::non_decreasing;
            } else if (m == "non_increasing") {
                mono = Monotonicity::non_increasing;
            } else {
                throw ValidationError("monotonicity must be non_decreasing or non_increasing");
            }
        }
        return TestFunction::sampled(require_array(j, "r"), require_array(j, "psi"),
                                     require_array(j, "dpsi"), require_number(j, "horizon"),
                                     mono);
    }
    throw ValidationError("unknown psi family \"" + family + "\"");
}

// ---------------------------------------------------------------------------
// JobSpec <-> JSON

JobSpec parse_job(const ordered_json& j) {
    if (!j.is_object()) throw ValidationError("job must be a JSON object");
    JobSpec spec;
    if (!j.contains("command") || !j["command"].is_string()) {
        throw ValidationError("job needs a \"command\" string");
    }
    spec.command = j["command"].get<std::string>();
    static const char* kCommands[] = {"eval-f",     "check-compact", "diameter", "thresholds",
                                      "simulate",   "verify",        "sweep"};
    bool known = false;
    for (const char* c : kCommands) known = known || spec.command == c;
    if (!known) throw ValidationError("unknown command \"" + spec.command + "\"");

    if (!j.contains("profile")) throw ValidationError("job needs a \"profile\"");
    spec.profile = j["profile"];
    profile_from_json(spec.profile);  // validate eagerly

    if (j.contains("psi")) {
        spec.psi = j["psi"];
        psi_from_json(*spec.psi);
    }
    if (j.contains("search")) {
        const std::string s = j["search"].get<std::string>();
        if (s != "constant" && s != "sqrt_profile") {
            throw ValidationError("search must be \"constant\" or \"sqrt_profile\"");
        }
        spec.search = s;
    }
    if (j.contains("interval")) {
        const auto& iv = j["interval"];
        if (!iv.is_array() || iv.size() != 2) {
            throw ValidationError("interval must be [a, b] with b a number or \"inf\"");
        }
        spec.has_interval = true;
        if (!iv[0].is_number()) throw ValidationError("interval start must be a number");
        spec.interval_a = iv[0].get<double>();
        if (iv[1].is_number()) {
            spec.interval_b = iv[1].get<double>();
        } else if (iv[1].is_string() && iv[1].get<std::string>() == "inf") {
            spec.interval_b = std::nullopt;
        } else {
            throw ValidationError("interval end must be a number or \"inf\"");
        }
    }
    spec.tol = number_or(j, "tol", 1e-10);
    if (!(spec.tol > 0.0)) throw ValidationError("tol must be positive");
    if (j.contains("r_max")) spec.r_max = require_number(j, "r_max");
    if (j.contains("l")) spec.l = require_number(j, "l");
    if (j.contains("target")) spec.target = j["target"].get<std::string>();

    if (j.contains("sweep")) {
        const auto& sw = j["sweep"];
        SweepSpec s;
        if (!sw.is_object() || !sw.contains("parameter")) {
            throw ValidationError("sweep needs a \"parameter\"");
        }
        s.parameter = sw["parameter"].get<std::string>();
        s.from = require_number(sw, "from");
        s.to = require_number(sw, "to");
        s.steps = static_cast<int>(require_number(sw, "steps"));
        if (s.steps < 2) throw ValidationError("sweep needs steps >= 2");
        s.scale = sw.contains("scale") ? sw["scale"].get<std::string>() : "linear";
        if (s.scale != "linear" && s.scale != "log") {
            throw ValidationError("sweep scale must be \"linear\" or \"log\"");
        }
        if (s.scale == "log" && !(s.from > 0.0 && s.to > 0.0)) {
            throw ValidationError("log sweep needs positive endpoints");
        }
        spec.sweep = s;
    }
    if (spec.sweep.has_value() != (spec.command == "sweep")) {
        throw ValidationError("a sweep block is required iff command == \"sweep\"");
    }
    if (spec.command == "sweep" && !spec.target) {
        throw ValidationError("sweep needs a \"target\" command");
    }

    if (j.contains("output")) {
        const auto& out = j["output"];
        if (out.contains("path")) spec.out_path = out["path"].get<std::string>();
        if (out.contains("format")) spec.format = out["format"].get<std::string>();
    }
    if (spec.format != "json" && spec.format != "csv") {
        throw ValidationError("format must be \"json\" or \"csv\"");
    }
    return spec;
}

ordered_json job_to_json(const JobSpec& spec) {
    ordered_json j;
    j["command"] = spec.command;
    j["profile"] = spec.profile;
    if (spec.psi) j["psi"] = *spec.psi;
    if (spec.search) j["search"] = *spec.search;
    if (spec.has_interval) {
        ordered_json iv = ordered_json::array();
        iv.push_back(spec.interval_a.value_or(0.0));
        if (spec.interval_b) {
            iv.push_back(*spec.interval_b);
        } else {
            iv.push_back("inf");
        }
        j["interval"] = iv;
    }
    j["tol"] = spec.tol;
    if (spec.r_max) j["r_max"] = *spec.r_max;
    if (spec.l) j["l"] = *spec.l;
    if (spec.target) j["target"] = *spec.target;
    if (spec.sweep) {
        ordered_json sw;
        sw["parameter"] = spec.sweep->parameter;
        sw["from"] = spec.sweep->from;
        sw["to"] = spec.sweep->to;
        sw["steps"] = spec.sweep->steps;
        sw["scale"] = spec.sweep->scale;
        j["sweep"] = sw;
    }
    if (spec.out_path || spec.format != "json") {
        ordered_json out;
        if (spec.out_path) out["path"] = *spec.out_path;
        out["format"] = spec.format;
        j["output"] = out;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Command execution

namespace {

std::pair<double, double> job_interval(const JobSpec& spec, const RadialProfile& q) {
    double a = spec.interval_a.value_or(q.domain_start());
    double b = kInf;
    if (spec.has_interval && spec.interval_b) b = *spec.interval_b;
    if (!spec.has_interval) b = kInf;
    return {a, b};
}

ordered_json run_eval_f(const JobSpec& spec) {
    if (!spec.psi) throw ValidationError("eval-f needs a \"psi\"");
    const auto q = profile_from_json(spec.profile);
    const auto psi = psi_from_json(*spec.psi);
    const auto [a, b] = job_interval(spec, q);
    const auto F = eval_F(q, psi, a, b, spec.tol);
    ordered_json out;
    out["command"] = "eval-f";
    out["profile"] = spec.profile;
    out["psi"] = *spec.psi;
    out["a"] = a;
    out["b"] = num_or_tag(b);
    out["integral"] = F.integral;
    out["correction"] = F.correction;
    out["value"] = F.value;
    out["abs_error_estimate"] = F.abs_error_estimate;
    if (F.truncated_at) out["truncated_at"] = *F.truncated_at;
    return out;
}

ordered_json verdict_json(const Verdict& v) {
    ordered_json out;
    out["verdict"] = v.kind == Verdict::Kind::compact ? "compact" : "inconclusive";
    out["criterion_value"] = v.criterion_value;
    out["margin"] = v.margin;
    out["witness"] = v.witness;
    out["assumptions"] = v.assumptions;
    return out;
}

Verdict run_verdict(const JobSpec& spec) {
    const auto q = profile_from_json(spec.profile);
    const double a = spec.interval_a.value_or(q.domain_start());
    PsiSearch search = PsiSearch::constants();
    if (spec.psi) {
        search = PsiSearch::fixed(psi_from_json(*spec.psi));
    } else if (spec.search && *spec.search == "sqrt_profile") {
        search = PsiSearch::sqrt_profile();
    }
    return compactness_verdict(q, a, search, spec.tol);
}

ordered_json run_check_compact(const JobSpec& spec) {
    ordered_json out;
    out["command"] = "check-compact";
    out["profile"] = spec.profile;
    auto v = verdict_json(run_verdict(spec));
    out.update(v);
    return out;
}

DiameterBound run_diameter_bound(const JobSpec& spec) {
    if (!spec.psi) throw ValidationError("diameter needs a \"psi\"");
    const auto q = profile_from_json(spec.profile);
    const auto psi = psi_from_json(*spec.psi);
    return diameter_bound(q, psi, spec.tol);
}

ordered_json run_diameter(const JobSpec& spec) {
    const auto d = run_diameter_bound(spec);
    ordered_json out;
    out["command"] = "diameter";
    out["profile"] = spec.profile;
    out["psi"] = *spec.psi;
    out["l"] = num_or_tag(d.l);
    out["psi_used"] = d.psi_used;
    out["lhs_at_l"] = d.lhs_at_l;
    out["rhs_at_l"] = d.rhs_at_l;
    return out;
}

ordered_json run_thresholds(const JobSpec& spec) {
    const auto q = profile_from_json(spec.profile);
    ordered_json out;
    out["command"] = "thresholds";
    out["profile"] = spec.profile;
    if (q.family() == RadialProfile::Family::poly_decay) {
        const double p = q.param_p();
        const double a = q.param_cutoff();
        out["p"] = p;
        out["a"] = a;
        if (p > 2.0) {
            out["c_paper"] = poly_threshold(p, a);
            out["c_wan"] = wan_threshold(p, a);
        } else if (p == 2.0) {
            // q = c/r^2: compact when c > 1/4; CGT diameter for the excess.
            out["c_compact_above"] = 0.25;
            const double c = q.param_c();
            if (c > 0.25) out["cgt_diameter"] = cgt_diameter(c - 0.25, a);
        } else {
            out["note"] = "p < 2: compact for every c > 0";
        }
        return out;
    }
    if (q.family() == RadialProfile::Family::exp_decay) {
        const auto [threshold, diameter] = exp_thresholds(q.param_c(), q.param_p());
        out["c"] = q.param_c();
        out["p"] = q.param_p();
        out["c_compact_threshold"] = threshold;
        out["diameter"] = num_or_tag(diameter);
        return out;
    }
    throw ValidationError("thresholds applies to poly_decay or exp_decay profiles");
}

ordered_json simulate_summary(const ModelTrajectory& traj) {
    ordered_json out;
    out["zeta"] = traj.zeta() ? ordered_json(*traj.zeta()) : ordered_json(nullptr);
    out["rho"] = traj.rho() ? ordered_json(*traj.rho()) : ordered_json(nullptr);
    return out;
}

ordered_json run_simulate_json(const JobSpec& spec, std::string* csv) {
    const auto q = profile_from_json(spec.profile);
    if (!spec.r_max) throw ValidationError("simulate needs \"r_max\"");
    const auto traj = simulate_model(q, *spec.r_max, std::min(spec.tol, 1e-10));
    if (csv) {
        std::ostringstream os;
        traj.write_csv(os);
        *csv = os.str();
    }
    ordered_json out;
    out["command"] = "simulate";
    out["profile"] = spec.profile;
    out["r_max"] = *spec.r_max;
    out.update(simulate_summary(traj));
    out["grid_points"] = traj.grid().size();
    return out;
}

ordered_json run_verify(const JobSpec& spec) {
    const auto q = profile_from_json(spec.profile);
    const double r_max = spec.r_max.value_or(10.0);
    const auto psi = spec.psi ? psi_from_json(*spec.psi) : TestFunction::constant(1.0);
    const auto traj = simulate_model(q, r_max, std::min(spec.tol, 1e-10));

    ordered_json out;
    out["command"] = "verify";
    out["profile"] = spec.profile;
    out["psi"] = spec.psi ? *spec.psi : ordered_json({{"family", "constant"}, {"x", 1.0}});
    out["r_max"] = r_max;
    out.update(simulate_summary(traj));
    out["riccati_residual"] = traj.max_riccati_residual();

    if (traj.rho()) {
        const auto seg = verify_segment_theorem(traj, psi, spec.tol);
        out["segment"] = {{"lhs", seg.lhs}, {"rhs", seg.rhs}, {"holds", seg.holds}};
    }
    if (traj.zeta() && *traj.zeta() > 1e-3) {
        const double b = 0.999 * *traj.zeta();
        const double a = 0.1 * *traj.zeta();
        const auto sol = solve_squeeze(q, psi, a, b);
        const auto [lower, upper] = verify_sandwich(sol, traj);
        out["squeeze"] = {{"a", a},
                          {"b", b},
                          {"residual", sol.max_residual()},
                          {"sandwich_lower_violation", lower},
                          {"sandwich_upper_violation", upper}};
    }
    if (!traj.rho()) {
        const double a = std::max(q.domain_start(), 0.1);
        const auto F = eval_F(q, psi, a, r_max, spec.tol);
        out["ray"] = {{"F", F.value}, {"bound", 1.0}, {"holds", F.value <= 1.0 + 10.0 * spec.tol}};
    }
    return out;
}

// One sweep row, rendered per target command.
void sweep_row(const JobSpec& base, const std::string& target, double value,
               std::vector<std::string>& cols, std::string& row) {
    JobSpec spec = base;
    spec.command = target;
    spec.sweep.reset();
    spec.target.reset();

    const auto& param = base.sweep->parameter;
    if (param.rfind("profile.", 0) == 0) {
        spec.profile[param.substr(8)] = value;
    } else if (param.rfind("psi.", 0) == 0) {
        if (!spec.psi) throw ValidationError("sweep over psi parameter without a psi");
        (*spec.psi)[param.substr(4)] = value;
    } else if (param == "l") {
        spec.l = value;
    } else if (param == "interval.a") {
        spec.has_interval = true;
        spec.interval_a = value;
    } else if (param == "interval.b") {
        spec.has_interval = true;
        spec.interval_b = value;
    } else if (param == "tol") {
        spec.tol = value;
    } else if (param == "r_max") {
        spec.r_max = value;
    } else {
        throw ValidationError("unknown sweep parameter \"" + param + "\"");
    }

    if (target == "check-compact") {
        cols = {"param", "criterion_value", "verdict", "margin"};
        const auto v = run_verdict(spec);
        row = csv_number(value) + "," + csv_number(v.criterion_value) + "," +
              (v.kind == Verdict::Kind::compact ? "compact" : "inconclusive") + "," +
              csv_number(v.margin);
    } else if (target == "diameter") {
        cols = {"param", "l"};
        const auto d = run_diameter_bound(spec);
        row = csv_number(value) + "," + csv_number(d.l);
    } else if (target == "eval-f") {
        if (!spec.psi) throw ValidationError("eval-f sweep needs a \"psi\"");
        cols = {"param", "value", "abs_error_estimate"};
        const auto q = profile_from_json(spec.profile);
        const auto psi = psi_from_json(*spec.psi);
        const auto [a, b] = job_interval(spec, q);
        const auto F = eval_F(q, psi, a, b, spec.tol);
        row = csv_number(value) + "," + csv_number(F.value) + "," +
              csv_number(F.abs_error_estimate);
    } else if (target == "segment") {
        if (!spec.psi) throw ValidationError("segment sweep needs a \"psi\"");
        if (!spec.l) throw ValidationError("segment sweep needs \"l\"");
        cols = {"param", "lhs", "rhs", "margin"};
        const auto q = profile_from_json(spec.profile);
        const auto psi = psi_from_json(*spec.psi);
        const auto [lhs, rhs] = eval_segment_criterion(q, psi, *spec.l, spec.tol);
        row = csv_number(value) + "," + csv_number(lhs) + "," + csv_number(rhs) + "," +
              csv_number(lhs - rhs);
    } else {
        throw ValidationError("unsupported sweep target \"" + target + "\"");
    }
}

std::string run_sweep_csv(const JobSpec& spec) {
    const auto& sw = *spec.sweep;
    std::vector<std::string> cols;
    std::vector<std::string> rows;
    for (int i = 0; i < sw.steps; ++i) {
        const double t = sw.steps == 1 ? 0.0 : static_cast<double>(i) / (sw.steps - 1);
        const double value = sw.scale == "log" ? sw.from * std::pow(sw.to / sw.from, t)
                                               : sw.from + (sw.to - sw.from) * t;
        std::string row;
        sweep_row(spec, *spec.target, value, cols, row);
        rows.push_back(std::move(row));
    }
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += (i ? "," : "") + cols[i];
    }
    out += "\n";
    for (const auto& r : rows) out += r + "\n";
    return out;
}

}  // namespace

JobResult run_job(const JobSpec& spec) {
    JobResult result;
    try {
        if (spec.command == "sweep") {
            result.artifact = run_sweep_csv(spec);
            ordered_json summary;
            summary["command"] = "sweep";
            summary["target"] = *spec.target;
            summary["rows"] = spec.sweep->steps;
            result.summary_json = dump_json(summary);
            return result;
        }
        if (spec.command == "simulate") {
            std::string csv;
            const auto j = run_simulate_json(spec, spec.format == "csv" ? &csv : nullptr);
            result.artifact = spec.format == "csv" ? csv : dump_json(j);
            ordered_json summary;
            summary["zeta"] = j["zeta"];
            summary["rho"] = j["rho"];
            result.summary_json = dump_json(summary);
            return result;
        }

        ordered_json out;
        if (spec.command == "eval-f") {
            out = run_eval_f(spec);
        } else if (spec.command == "check-compact") {
            out = run_check_compact(spec);
        } else if (spec.command == "diameter") {
            out = run_diameter(spec);
        } else if (spec.command == "thresholds") {
            out = run_thresholds(spec);
        } else if (spec.command == "verify") {
            out = run_verify(spec);
        } else {
            throw ValidationError("unknown command \"" + spec.command + "\"");
        }
        result.artifact = dump_json(out);
        result.summary_json = result.artifact;
        return result;
    } catch (const ValidationError& e) {
        ordered_json err;
        err["status"] = "error";
        err["code"] = e.code();
        err["message"] = e.what();
        result.exit_code = 2;
        result.artifact = dump_json(err);
        result.summary_json = result.artifact;
        return result;
    } catch (const Error& e) {
        ordered_json err;
        err["status"] = "error";
        err["code"] = e.code();
        err["message"] = e.what();
        result.exit_code = 3;
        result.artifact = dump_json(err);
        result.summary_json = result.artifact;
        return result;
    } catch (const std::exception& e) {
        ordered_json err;
        err["status"] = "error";
        err["code"] = "internal_error";
        err["message"] = e.what();
        result.exit_code = 3;
        result.artifact = dump_json(err);
        result.summary_json = result.artifact;
        return result;
    }
}

}  // namespace myers
