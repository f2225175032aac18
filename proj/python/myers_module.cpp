// Python bindings for the core operations: profiles, the functional,
// criteria, the scalar comparison model, and the job runner.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "myers/criteria.hpp"
#include "myers/functional.hpp"
#include "myers/jobs.hpp"
#include "myers/model_sim.hpp"
#include "myers/profiles.hpp"
#include "myers/quadrature.hpp"

namespace py = pybind11;
using namespace myers;

namespace {

void register_errors(py::module_& m) {
    static py::exception<Error> base(m, "MyersError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            base(e.what());
        }
    });
}

}  // namespace

PYBIND11_MODULE(pymyers, m) {
    m.doc() = "Bonnet-Myers compactness and diameter criteria toolkit";
    register_errors(m);

    py::enum_<Monotonicity>(m, "Monotonicity")
        .value("non_decreasing", Monotonicity::non_decreasing)
        .value("non_increasing", Monotonicity::non_increasing);

    py::class_<RadialProfile>(m, "RadialProfile")
        .def_static("constant", &RadialProfile::constant, py::arg("c"))
        .def_static("poly_decay", &RadialProfile::poly_decay, py::arg("c"), py::arg("p"),
                    py::arg("cutoff"))
        .def_static("exp_decay", &RadialProfile::exp_decay, py::arg("c"), py::arg("p"))
        .def_static("sampled", &RadialProfile::sampled, py::arg("radii"), py::arg("values"),
                    py::arg("horizon"))
        .def("value", &RadialProfile::value)
        .def("__call__", &RadialProfile::value)
        .def("derivative", &RadialProfile::derivative)
        .def("tail_bound", &RadialProfile::tail_bound)
        .def("integral_on", &RadialProfile::integral_on)
        .def("domain_start", &RadialProfile::domain_start)
        .def("horizon", &RadialProfile::horizon)
        .def("description", &RadialProfile::description)
        .def("__repr__", [](const RadialProfile& q) { return q.description(); });

    py::class_<TestFunction>(m, "TestFunction")
        .def_static("constant", &TestFunction::constant, py::arg("x"))
        .def_static("power", &TestFunction::power, py::arg("k"), py::arg("alpha"),
                    py::arg("domain_start") = 1.0)
        .def_static("sqrt_of_profile", &TestFunction::sqrt_of_profile, py::arg("q"))
        .def_static("sampled", &TestFunction::sampled, py::arg("radii"), py::arg("values"),
                    py::arg("derivatives"), py::arg("horizon"), py::arg("declared"))
        .def("value", &TestFunction::value)
        .def("__call__", &TestFunction::value)
        .def("derivative", &TestFunction::derivative)
        .def("monotonicity", &TestFunction::monotonicity)
        .def("domain_start", &TestFunction::domain_start)
        .def("tail_infimum", &TestFunction::tail_infimum)
        .def("description", &TestFunction::description)
        .def("__repr__", [](const TestFunction& f) { return f.description(); });

    py::class_<FunctionalValue>(m, "FunctionalValue")
        .def_readonly("integral", &FunctionalValue::integral)
        .def_readonly("correction", &FunctionalValue::correction)
        .def_readonly("value", &FunctionalValue::value)
        .def_readonly("abs_error_estimate", &FunctionalValue::abs_error_estimate)
        .def_readonly("truncated_at", &FunctionalValue::truncated_at)
        .def("__repr__", [](const FunctionalValue& f) {
            return "FunctionalValue(value=" + std::to_string(f.value) + ")";
        });

    m.def("eval_F", &eval_F, py::arg("q"), py::arg("psi"), py::arg("a"), py::arg("b"),
          py::arg("tol") = kDefaultTol);
    m.def("eval_segment_criterion", &eval_segment_criterion, py::arg("q"), py::arg("psi"),
          py::arg("l"), py::arg("tol") = kDefaultTol);
    m.def("mean_curvature_lower_bound", &mean_curvature_lower_bound, py::arg("F"), py::arg("psi"),
          py::arg("a"));
    m.def("calabi_bound", &calabi_bound, py::arg("q"), py::arg("a"), py::arg("b"),
          py::arg("tol") = kDefaultTol);
    m.def("ray_tail_check", &ray_tail_check, py::arg("q"), py::arg("a"),
          py::arg("tol") = kDefaultTol);
    m.def(
        "integrate_adaptive",
        [](const std::function<double(double)>& f, double a, double b, double tol,
           const std::vector<double>& breakpoints) {
            const auto r = integrate_adaptive(f, a, b, tol, breakpoints);
            return std::make_pair(r.value, r.error);
        },
        py::arg("f"), py::arg("a"), py::arg("b"), py::arg("tol") = kDefaultTol,
        py::arg("breakpoints") = std::vector<double>{});

    py::class_<Verdict> verdict(m, "Verdict");
    py::enum_<Verdict::Kind>(verdict, "Kind")
        .value("compact", Verdict::Kind::compact)
        .value("inconclusive", Verdict::Kind::inconclusive);
    verdict.def_readonly("kind", &Verdict::kind)
        .def_readonly("criterion_value", &Verdict::criterion_value)
        .def_readonly("margin", &Verdict::margin)
        .def_readonly("witness", &Verdict::witness)
        .def_readonly("assumptions", &Verdict::assumptions)
        .def("__repr__", [](const Verdict& v) {
            return std::string("Verdict(") +
                   (v.kind == Verdict::Kind::compact ? "compact" : "inconclusive") +
                   ", value=" + std::to_string(v.criterion_value) + ")";
        });

    py::class_<PsiSearch>(m, "PsiSearch")
        .def_static("constants", &PsiSearch::constants)
        .def_static("fixed", &PsiSearch::fixed, py::arg("psi"))
        .def_static("sqrt_profile", &PsiSearch::sqrt_profile);

    m.def("compactness_verdict", &compactness_verdict, py::arg("q"), py::arg("a"),
          py::arg("search"), py::arg("tol") = kDefaultTol);
    m.def("optimize_constant_psi", &optimize_constant_psi, py::arg("q"), py::arg("a"),
          py::arg("tol") = kDefaultTol);

    py::class_<DiameterBound>(m, "DiameterBound")
        .def_readonly("l", &DiameterBound::l)
        .def_readonly("psi_used", &DiameterBound::psi_used)
        .def_readonly("lhs_at_l", &DiameterBound::lhs_at_l)
        .def_readonly("rhs_at_l", &DiameterBound::rhs_at_l);

    m.def("diameter_bound", &diameter_bound, py::arg("q"), py::arg("psi"),
          py::arg("tol") = kDefaultTol, py::arg("l_max") = 1e6);
    m.def("poly_threshold", &poly_threshold, py::arg("p"), py::arg("a"));
    m.def("wan_threshold", &wan_threshold, py::arg("p"), py::arg("r0"));
    m.def("cgt_diameter", &cgt_diameter, py::arg("mu"), py::arg("r0"));
    m.def("exp_thresholds", &exp_thresholds, py::arg("c"), py::arg("p"));
    m.def("closed_form_p2", &closed_form_p2, py::arg("c"), py::arg("a"), py::arg("b"));
    m.def("closed_form_p_lt2", &closed_form_p_lt2, py::arg("c"), py::arg("p"), py::arg("a"),
          py::arg("b"));
    m.def("closed_form_exp_tail", &closed_form_exp_tail, py::arg("x"), py::arg("c"), py::arg("p"),
          py::arg("t"));
    m.def("closed_form_exp_interval", &closed_form_exp_interval, py::arg("x"), py::arg("c"),
          py::arg("p"), py::arg("rho"));
    m.def("poly_bound_optimal_x", &poly_bound_optimal_x, py::arg("c"), py::arg("p"), py::arg("a"));
    m.def("poly_bound_value", &poly_bound_value, py::arg("c"), py::arg("p"), py::arg("a"));

    py::class_<ModelTrajectory>(m, "ModelTrajectory")
        .def_property_readonly("grid", &ModelTrajectory::grid)
        .def_property_readonly("v", &ModelTrajectory::v)
        .def_property_readonly("v_prime", &ModelTrajectory::v_prime)
        .def_property_readonly("m", &ModelTrajectory::m)
        .def_property_readonly("zeta", &ModelTrajectory::zeta)
        .def_property_readonly("rho", &ModelTrajectory::rho)
        .def("v_at", &ModelTrajectory::v_at)
        .def("v_prime_at", &ModelTrajectory::v_prime_at)
        .def("m_at", &ModelTrajectory::m_at)
        .def("max_riccati_residual", &ModelTrajectory::max_riccati_residual,
             py::arg("m_cap") = 5.0);

    m.def("simulate_model", &simulate_model, py::arg("q"), py::arg("r_max"),
          py::arg("tol") = 1e-12);

    py::class_<SegmentCheck>(m, "SegmentCheck")
        .def_readonly("lhs", &SegmentCheck::lhs)
        .def_readonly("rhs", &SegmentCheck::rhs)
        .def_readonly("holds", &SegmentCheck::holds);
    m.def("verify_segment_theorem", &verify_segment_theorem, py::arg("traj"), py::arg("psi"),
          py::arg("tol") = 1e-10);

    py::class_<SqueezeSolution>(m, "SqueezeSolution")
        .def_property_readonly("grid", &SqueezeSolution::grid)
        .def_property_readonly("phi", &SqueezeSolution::phi)
        .def("phi_at", &SqueezeSolution::phi_at)
        .def("max_residual", &SqueezeSolution::max_residual, py::arg("h") = 3e-4)
        .def_property_readonly("boundary", &SqueezeSolution::boundary);
    m.def("solve_squeeze", &solve_squeeze, py::arg("q"), py::arg("psi"), py::arg("a"),
          py::arg("b"), py::arg("tol") = 1e-12);
    m.def("verify_sandwich", &verify_sandwich, py::arg("sol"), py::arg("traj"));

    py::enum_<BumpKind>(m, "BumpKind")
        .value("sine", BumpKind::sine)
        .value("poly", BumpKind::poly)
        .value("constant", BumpKind::constant);
    py::class_<SecondVariationCheck>(m, "SecondVariationCheck")
        .def_readonly("lhs", &SecondVariationCheck::lhs)
        .def_readonly("rhs", &SecondVariationCheck::rhs);
    m.def("second_variation_check", &second_variation_check, py::arg("traj"), py::arg("kind"),
          py::arg("a"), py::arg("b"), py::arg("tol") = 1e-10);

    py::class_<RayCriterionCheck>(m, "RayCriterionCheck")
        .def_readonly("F", &RayCriterionCheck::F)
        .def_readonly("bound", &RayCriterionCheck::bound)
        .def_readonly("holds", &RayCriterionCheck::holds);
    m.def("verify_ray_criterion_on_model", &verify_ray_criterion_on_model, py::arg("q"),
          py::arg("psi"), py::arg("a"), py::arg("b"), py::arg("tol") = 1e-10,
          py::arg("horizon") = 1e4);

    m.def(
        "run_job",
        [](const std::string& job_json) {
            const auto spec = parse_job(nlohmann::ordered_json::parse(job_json));
            const auto result = run_job(spec);
            py::dict out;
            out["exit_code"] = result.exit_code;
            out["artifact"] = result.artifact;
            out["summary"] = result.summary_json;
            return out;
        },
        py::arg("job_json"), "Run a JSON job description; returns exit_code/artifact/summary.");
}
