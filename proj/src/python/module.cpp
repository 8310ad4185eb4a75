#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "powerlaw/bounds.hpp"
#include "powerlaw/errors.hpp"
#include "powerlaw/estimators.hpp"
#include "powerlaw/sufficiency.hpp"

namespace py = pybind11;
using namespace powerlaw;

namespace {

LikelihoodKind kind_from(const std::string& name, double alpha) {
    if (name == "log") return LikelihoodKind::log();
    if (name == "jones") return LikelihoodKind::jones(alpha);
    if (name == "basu") return LikelihoodKind::basu(alpha);
    if (name == "cs") return LikelihoodKind::cauchy_schwarz();
    throw Error("unknown likelihood: " + name);
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Sufficient: return "Sufficient";
        case Verdict::NotSufficient: return "NotSufficient";
        case Verdict::Minimal: return "Minimal";
        case Verdict::NotMinimal: return "NotMinimal";
        default: return "Inconclusive";
    }
}

// Family handles keep the (spec, theta) pair from the JSON loader together.
struct Family {
    FamilySpec spec;
    Theta theta;
};

}  // namespace

PYBIND11_MODULE(_powerlaw, m) {
    m.doc() = "power-law family sufficiency, conditioning, and bound checks";

    py::register_exception<Error>(m, "PowerlawError");

    py::class_<Family>(m, "Family")
        .def(py::init([](const std::string& json_text) {
                 auto [spec, theta] = family_from_json(json_text);
                 return Family{std::move(spec), std::move(theta)};
             }),
             py::arg("json_text"))
        .def_property_readonly("name",
                               [](const Family& f) { return f.spec.name; })
        .def_property_readonly("alpha",
                               [](const Family& f) { return f.spec.alpha; })
        .def_property_readonly("theta",
                               [](const Family& f) { return f.theta; })
        .def("density",
             [](const Family& f, double x, std::optional<Theta> theta) {
                 return density(f.spec, theta ? *theta : f.theta, x);
             },
             py::arg("x"), py::arg("theta") = std::nullopt)
        .def("normalizer",
             [](const Family& f, std::optional<Theta> theta) {
                 return normalizer(f.spec, theta ? *theta : f.theta);
             },
             py::arg("theta") = std::nullopt)
        .def("sample",
             [](const Family& f, int n, std::uint64_t seed,
                std::optional<Theta> theta) {
                 return sample_family(f.spec, theta ? *theta : f.theta, n,
                                      seed);
             },
             py::arg("n"), py::arg("seed") = 1,
             py::arg("theta") = std::nullopt)
        .def("log_likelihood",
             [](const Family& f, const Sample& xs, std::optional<Theta> t) {
                 return log_likelihood(f.spec, t ? *t : f.theta, xs);
             },
             py::arg("sample"), py::arg("theta") = std::nullopt)
        .def("generalized_likelihood",
             [](const Family& f, const std::string& kind, const Sample& xs,
                double alpha, std::optional<Theta> t) {
                 return generalized_likelihood(kind_from(kind, alpha), f.spec,
                                               t ? *t : f.theta, xs);
             },
             py::arg("kind"), py::arg("sample"), py::arg("alpha") = 2.0,
             py::arg("theta") = std::nullopt);

    m.def(
        "sufficiency_verdict",
        [](const Family& f, const std::string& kind, double alpha, int n,
           const std::vector<Theta>& grid, int pair_budget,
           std::uint64_t seed) {
            std::vector<Theta> g = grid;
            if (g.empty()) g = make_theta_grid(f.spec.box, 50);
            StatisticFn T = canonical_sufficient_statistic(f.spec);
            auto v = koopman_probe(kind_from(kind, alpha), f.spec, T, n,
                                   pair_budget, g, 1e-8, seed);
            py::dict d;
            d["verdict"] = verdict_name(v.verdict);
            d["max_spread"] = v.max_spread;
            d["pairs_tested"] = v.pairs_tested;
            if (v.witness_pair) {
                d["witness"] = py::make_tuple(v.witness_pair->first,
                                              v.witness_pair->second);
            }
            return d;
        },
        py::arg("family"), py::arg("kind"), py::arg("alpha"), py::arg("n"),
        py::arg("theta_grid") = std::vector<Theta>{},
        py::arg("pair_budget") = 200, py::arg("seed") = 1,
        "Koopman-style probe: spread of likelihood differences over matched "
        "statistic buckets.");

    m.def(
        "rao_blackwell",
        [](const Family& f, const std::string& kind, double alpha, int n,
           const std::function<double(const Sample&)>& estimator) {
            DeformedJoint dj(f.spec, kind_from(kind, alpha), n);
            StatisticFn T = canonical_sufficient_statistic(f.spec);
            EstimatorFn est{"py_estimator", estimator};
            auto [phi, rep] = rao_blackwellize(dj, T, f.theta, est);
            py::dict d;
            d["tau_star"] = rep.tau_star;
            d["var_original"] = rep.var_original;
            d["var_conditioned"] = rep.var_rb;
            d["improvement"] = rep.improvement;
            d["already_measurable"] = rep.equality_flag;
            // expose the conditioned estimator as a plain callable
            auto eval = phi.eval;
            d["estimator"] = py::cpp_function(
                [eval](const Sample& s) { return eval(s); });
            return d;
        },
        py::arg("family"), py::arg("kind"), py::arg("alpha"), py::arg("n"),
        py::arg("estimator"),
        "Condition an estimator on the canonical statistic under the "
        "deformed n-sample law.");

    m.def(
        "bound_report",
        [](const Family& f, const std::string& kind, double alpha, int n) {
            DeformedJoint dj(f.spec, kind_from(kind, alpha), n);
            StatisticFn fb = stat_mean_f(f.spec);
            EstimatorFn fbar{
                "mean_f", [fb](const Sample& s) { return fb.eval(s)[0]; }};
            BoundReport rep = m_alpha_crlb_check(dj, f.theta, {fbar});
            py::dict d;
            d["tau_star_prime"] = rep.tau_star_prime;
            d["gen_fisher"] = rep.gen_fisher;
            d["classical_fisher"] = rep.classical_fisher;
            d["gen_crlb"] = rep.gen_crlb;
            d["classical_crlb"] = rep.classical_crlb;
            d["var_mean_f"] = rep.var_of_fbar;
            return d;
        },
        py::arg("family"), py::arg("kind"), py::arg("alpha"), py::arg("n"),
        "Weighted and classical information bounds for the statistic mean.");

    m.def(
        "student_closed_forms",
        [](double nu, int n, bool require_all_valid) {
            StudentClosedForms cf =
                student_closed_forms(nu, n, require_all_valid);
            py::dict d;
            d["alpha"] = cf.alpha;
            d["A_n"] = cf.A_n;
            d["B_n"] = cf.B_n;
            d["C_n"] = cf.C_n;
            d["H_n"] = cf.H_n;
            d["E_star_mean_x2_coeff"] = cf.E_star_xbar2_coeff;
            d["gen_crlb_sigma4_coeff"] = cf.gen_crlb_sigma4_coeff;
            d["H_n_printed"] = cf.H_n_printed;
            d["E_star_mean_x2_coeff_printed"] = cf.E_star_xbar2_coeff_printed;
            d["gen_crlb_sigma4_coeff_printed"] =
                cf.gen_crlb_sigma4_coeff_printed;
            d["H_n_discrepancy"] = cf.H_n_discrepancy;
            d["moment_discrepancy"] = cf.moment_discrepancy;
            d["crlb_discrepancy"] = cf.crlb_discrepancy;
            return d;
        },
        py::arg("nu"), py::arg("n"), py::arg("require_all_valid") = true,
        "Scale-family closed forms with printed-variant discrepancy flags.");

    m.def(
        "basu_location_bound",
        [](double nu) {
            BasuLocationBound b = basu_student_location_bound(nu);
            py::dict d;
            d["alpha"] = b.alpha;
            d["var_xbar_coeff"] = b.var_xbar_coeff;
            d["quadrature_check"] = b.quadrature_check;
            d["affine_log_residual"] = b.affine_log_residual;
            return d;
        },
        py::arg("nu"));

    m.def(
        "binomial_cs_roots",
        [](const std::vector<double>& masses) {
            EmpiricalPMF pn{{0.0, 1.0, 2.0}, masses};
            return real_roots_in_domain(binomial_cs_polynomial(pn));
        },
        py::arg("masses"),
        "Stationary points of the ratio objective for two-trial counts.");

    m.def("jones_estimate_from_suffstats", &jones_estimate_from_suffstats,
          py::arg("sum_x"), py::arg("sum_x2"), py::arg("n"), py::arg("nu"));

    m.def(
        "robust_demo",
        [](double clean_frac, double outlier, int n, double alpha, int reps,
           std::uint64_t seed) {
            RobustDemo d =
                robust_contamination_demo(clean_frac, outlier, n, alpha, reps,
                                          seed);
            return d.jones_win_rate;
        },
        py::arg("clean_frac") = 0.9, py::arg("outlier") = 50.0,
        py::arg("n") = 40, py::arg("alpha") = 1.5,
        py::arg("replications") = 100, py::arg("seed") = 1);
}
