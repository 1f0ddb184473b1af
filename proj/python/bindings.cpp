#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magchain/continuum.hpp"
#include "magchain/discrete.hpp"
#include "magchain/errors.hpp"
#include "magchain/geometry.hpp"
#include "magchain/harness.hpp"
#include "magchain/ring.hpp"

namespace py = pybind11;
using namespace magchain;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::tuple to_tuple(const Vec3& v) { return py::make_tuple(v.x, v.y, v.z); }

Vec3 to_vec3(const py::sequence& s) {
    if (py::len(s) != 3) throw InvalidParameter("expected a sequence of three numbers");
    return {s[0].cast<double>(), s[1].cast<double>(), s[2].cast<double>()};
}

Array to_array(const std::vector<Vec3>& v) {
    Array out({static_cast<py::ssize_t>(v.size()), py::ssize_t{3}});
    auto r = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto k = static_cast<py::ssize_t>(i);
        r(k, 0) = v[i].x;
        r(k, 1) = v[i].y;
        r(k, 2) = v[i].z;
    }
    return out;
}

std::vector<Vec3> from_array(const Array& a) {
    if (a.ndim() != 2 || a.shape(1) != 3) throw InvalidParameter("expected an array of shape (N, 3)");
    auto r = a.unchecked<2>();
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(a.shape(0)));
    for (py::ssize_t i = 0; i < a.shape(0); ++i) out.push_back({r(i, 0), r(i, 1), r(i, 2)});
    return out;
}

}  // namespace

PYBIND11_MODULE(_magchain, m) {
    m.doc() = "Magnetic dipole chains and rings: discrete energies, continuum limits and ring mechanics";

    auto base = py::register_exception<Error>(m, "MagchainError", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", base);
    py::register_exception<SingularEvaluation>(m, "SingularEvaluation", base);
    py::register_exception<ConstraintFailure>(m, "ConstraintFailure", base);
    py::register_exception<NonConvergence>(m, "NonConvergence", base);
    py::register_exception<BoundaryLayerDomain>(m, "BoundaryLayerDomain", base);
    py::register_exception<DivergentFunctional>(m, "DivergentFunctional", base);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", base);
    py::register_exception<IoError>(m, "IoError", base);

    m.attr("ZETA3") = kZeta3;
    m.attr("EULER_GAMMA") = kEulerGamma;

    py::class_<MagnetSpec>(m, "MagnetSpec")
        .def(py::init([](double a, double B, double rho, double mu0) {
                 MagnetSpec s{a, B, rho, mu0};
                 s.validate();
                 return s;
             }),
             py::arg("a") = 1.0e-3, py::arg("B") = 1.0, py::arg("rho") = 7500.0, py::arg("mu0") = kMu0)
        .def_readwrite("a", &MagnetSpec::a)
        .def_readwrite("B", &MagnetSpec::B)
        .def_readwrite("rho", &MagnetSpec::rho)
        .def_readwrite("mu0", &MagnetSpec::mu0);

    py::enum_<Topology>(m, "Topology").value("OPEN", Topology::Open).value("RING", Topology::Ring);

    py::class_<ChainConfig>(m, "ChainConfig")
        .def(py::init([](int n, Topology topology, const Array& positions, const Array& moments) {
                 ChainConfig c;
                 c.n = n;
                 c.topology = topology;
                 c.positions = from_array(positions);
                 c.moments = from_array(moments);
                 c.check_well_formed();
                 return c;
             }),
             py::arg("n"), py::arg("topology"), py::arg("positions"), py::arg("moments"))
        .def_readonly("n", &ChainConfig::n)
        .def_readonly("topology", &ChainConfig::topology)
        .def_property_readonly("positions", [](const ChainConfig& c) { return to_array(c.positions); })
        .def_property_readonly("moments", [](const ChainConfig& c) { return to_array(c.moments); })
        .def("__len__", &ChainConfig::count)
        .def("to_csv", &chain_to_csv);

    py::class_<RingPerturbation>(m, "RingPerturbation")
        .def(py::init([](double epsilon, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
                 RingPerturbation p{epsilon, std::move(cos_coeffs), std::move(sin_coeffs)};
                 p.validate();
                 return p;
             }),
             py::arg("epsilon"), py::arg("cos_coeffs") = std::vector<double>{},
             py::arg("sin_coeffs") = std::vector<double>{})
        .def_static("mode", &RingPerturbation::mode, py::arg("k"), py::arg("epsilon"), py::arg("amplitude") = 1.0,
                    py::arg("phase") = 0.0)
        .def_readonly("epsilon", &RingPerturbation::epsilon)
        .def_readonly("cos_coeffs", &RingPerturbation::cos_coeffs)
        .def_readonly("sin_coeffs", &RingPerturbation::sin_coeffs)
        .def("w", &RingPerturbation::w, py::arg("theta"), py::arg("d") = 0)
        .def("u", &RingPerturbation::u, py::arg("theta"))
        .def("bending_integral", &RingPerturbation::bending_integral)
        .def("shifted", &RingPerturbation::shifted, py::arg("c"));

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("max_gap_deviation", &ValidationReport::max_gap_deviation)
        .def_readonly("min_pair_distance", &ValidationReport::min_pair_distance)
        .def_readonly("min_nonneighbour_distance", &ValidationReport::min_nonneighbour_distance)
        .def_readonly("max_moment_norm_deviation", &ValidationReport::max_moment_norm_deviation)
        .def_readonly("global_radius", &ValidationReport::global_radius)
        .def_readonly("overlap", &ValidationReport::overlap)
        .def_readonly("curvature_flag", &ValidationReport::curvature_flag)
        .def_readonly("gaps_ok", &ValidationReport::gaps_ok)
        .def_readonly("moments_ok", &ValidationReport::moments_ok);

    m.def("build_straight_chain", &build_straight_chain, py::arg("n"));
    m.def("build_circular_ring", &build_circular_ring, py::arg("n"));
    m.def("build_perturbed_ring", [](int n, const RingPerturbation& p) { return build_perturbed_ring(n, p); },
          py::arg("n"), py::arg("perturbation"));
    m.def("chord_radius", &chord_radius, py::arg("n"));
    m.def("validate_chain", &validate_chain, py::arg("config"));

    // Discrete model.
    m.def("total_energy", &total_energy, py::arg("config"));
    m.def("per_magnet_energy", &per_magnet_energy, py::arg("config"), py::arg("i"));
    m.def("regularized_field_at", [](const ChainConfig& c, std::size_t i) { return to_tuple(regularized_field_at(c, i)); },
          py::arg("config"), py::arg("i"));
    m.def("total_field_at", [](const ChainConfig& c, const py::sequence& p) { return to_tuple(total_field_at(c, to_vec3(p))); },
          py::arg("config"), py::arg("point"));
    m.def("orientation_gradient", [](const ChainConfig& c) { return to_array(orientation_gradient(c)); },
          py::arg("config"));
    m.def("tilt_moments", &tilt_moments, py::arg("config"), py::arg("angle"), py::arg("seed"));
    m.def(
        "optimize_orientations",
        [](const ChainConfig& c, double tol, int max_iterations) {
            OptimizeOptions opt;
            opt.tol = tol;
            opt.max_iterations = max_iterations;
            const OptimizeResult r = optimize_orientations(c, opt);
            py::dict d;
            d["config"] = r.config;
            d["energy"] = r.energy;
            d["gradient_norm"] = r.gradient_norm;
            d["iterations"] = r.iterations;
            return d;
        },
        py::arg("config"), py::arg("tol") = 1e-8, py::arg("max_iterations") = 100000);
    m.def("max_line_angle",
          [](const Array& a, const Array& b) { return max_line_angle(from_array(a), from_array(b)); },
          py::arg("moments"), py::arg("reference"));
    m.def("energy_scale", &energy_scale, py::arg("spec"));
    m.def("field_scale", &field_scale, py::arg("spec"));

    // Continuum model.
    m.def("lattice_sum", &lattice_sum, py::arg("k"), py::arg("X"), py::arg("K") = 10000);
    m.def("regularized_limit", &regularized_limit, py::arg("k"));
    m.def("ring_energy_closed_form", &ring_energy_closed_form, py::arg("n"));

    py::enum_<CurveFamily>(m, "CurveFamily")
        .value("STRAIGHT", CurveFamily::Straight)
        .value("CIRCLE", CurveFamily::Circle)
        .value("PERTURBED_CIRCLE", CurveFamily::PerturbedCircle);
    py::enum_<CircleRadius>(m, "CircleRadius").value("CHORD", CircleRadius::Chord).value("ARCLENGTH", CircleRadius::Arclength);
    py::enum_<FieldMode>(m, "FieldMode").value("FULL", FieldMode::Full).value("REGULARIZED", FieldMode::Regularized);

    py::class_<ContinuumCurve>(m, "ContinuumCurve")
        .def_property_readonly("closed", &ContinuumCurve::closed)
        .def_property_readonly("base_radius", &ContinuumCurve::base_radius)
        .def("position", [](const ContinuumCurve& c, double s) { return to_tuple(c.position(s)); }, py::arg("s"))
        .def("derivative", [](const ContinuumCurve& c, double s, int k) { return to_tuple(c.derivative(s, k)); },
             py::arg("s"), py::arg("k"))
        .def("moment", [](const ContinuumCurve& c, double s) { return to_tuple(c.moment(s)); }, py::arg("s"));

    m.def(
        "make_curve",
        [](CurveFamily family, int n, CircleRadius radius, const RingPerturbation* perturbation) {
            CurveParams p;
            p.n = n;
            p.radius = radius;
            if (perturbation) p.perturbation = *perturbation;
            return make_curve(family, p);
        },
        py::arg("family"), py::arg("n") = 0, py::arg("radius") = CircleRadius::Chord,
        py::arg("perturbation") = nullptr);
    m.def(
        "sampled_curve",
        [](const Array& samples) {
            CurveParams p;
            p.samples = from_array(samples);
            return make_curve(CurveFamily::Sampled, p);
        },
        py::arg("samples"));
    m.def(
        "phi_amplitudes",
        [](const ContinuumCurve& c, double s, int n) {
            const PhiAmplitudes a = phi_amplitudes(c, s, n);
            return py::make_tuple(to_tuple(a.phi1), to_tuple(a.phi2), to_tuple(a.phi3));
        },
        py::arg("curve"), py::arg("s"), py::arg("n"));
    m.def("continuum_field",
          [](const ContinuumCurve& c, double s, int n, FieldMode mode) { return to_tuple(continuum_field(c, s, n, mode)); },
          py::arg("curve"), py::arg("s"), py::arg("n"), py::arg("mode") = FieldMode::Regularized);
    m.def("energy_density", [](const ContinuumCurve& c, double s, int n) { return energy_density(c, s, n); },
          py::arg("curve"), py::arg("s"), py::arg("n"));
    m.def(
        "continuum_total_energy",
        [](const ContinuumCurve& c, int n) {
            const EnergyBreakdown e = continuum_total_energy(c, n);
            py::dict d;
            d["ground"] = e.ground;
            d["local"] = e.local;
            d["nonlocal"] = e.nonlocal;
            d["total"] = e.total;
            return d;
        },
        py::arg("curve"), py::arg("n"));

    // Ring mechanics.
    py::enum_<NonlocalMethod>(m, "NonlocalMethod")
        .value("DIRECT", NonlocalMethod::Direct)
        .value("SIMPLIFIED", NonlocalMethod::Simplified);
    m.def("kernel_identity_residual", &kernel_identity_residual, py::arg("t"));
    m.def("e_loc", &e_loc, py::arg("perturbation"));
    m.def("e_nonloc", [](const RingPerturbation& p, NonlocalMethod method) { return e_nonloc(p, method); },
          py::arg("perturbation"), py::arg("method") = NonlocalMethod::Simplified);
    m.def("e_tot_functional", [](const RingPerturbation& p, NonlocalMethod method) { return e_tot_functional(p, method); },
          py::arg("perturbation"), py::arg("method") = NonlocalMethod::Simplified);
    m.def("e_tot_reduced", &e_tot_reduced, py::arg("perturbation"));
    m.def("mode_frequencies", [](const MagnetSpec& s, int n, int k_max) { return mode_frequencies(s, n, k_max).omega; },
          py::arg("spec"), py::arg("n"), py::arg("k_max"));
    m.def(
        "discrete_mode_frequency",
        [](int n, int k, const MagnetSpec& s, double epsilon) {
            ModeFitOptions opt;
            opt.epsilon = epsilon;
            return discrete_mode_frequency(n, k, s, opt);
        },
        py::arg("n"), py::arg("k"), py::arg("spec"), py::arg("epsilon") = 1e-3);

    // Experiment harness: configs are JSON strings in the same schema as the CLI config file.
    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::string& format) {
            const ExperimentConfig cfg = config_from_json(config_json);
            cfg.validate();
            const std::vector<ResultRecord> records = run_experiment(cfg);
            return py::make_tuple(all_pass(records), format_records(records, parse_output_format(format)));
        },
        py::arg("config_json"), py::arg("format") = "csv",
        "Runs an experiment from a JSON config and returns (all_pass, formatted records).");
}
