#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "livsic/charfn.hpp"
#include "livsic/errors.hpp"
#include "livsic/homogeneous.hpp"
#include "livsic/io.hpp"
#include "livsic/oracle.hpp"
#include "livsic/transform.hpp"

namespace py = pybind11;
using Complex = std::complex<double>;

namespace {

livsic::RealMeasure measure_from_json(const std::string& text) {
    return livsic::io::parse_measure(livsic::io::Json::parse(text));
}

livsic::ModelTriple triple_from_json(const std::string& text) {
    return livsic::io::parse_triple(livsic::io::Json::parse(text));
}

py::dict report_to_dict(const livsic::InvarianceReport& rep) {
    py::dict d;
    d["branch"] = rep.branch;
    d["omega"] = rep.omega ? py::object(py::float_(*rep.omega)) : py::object(py::none());
    d["residual"] = rep.residual;
    py::list rows;
    for (const auto& r : rep.rows) {
        py::dict row;
        row["z"] = r.z;
        row["fz"] = r.fz;
        row["lhs"] = r.lhs;
        row["rhs"] = r.rhs;
        rows.append(row);
    }
    d["grid"] = rows;
    return d;
}

}  // namespace

PYBIND11_MODULE(_livsic, m) {
    m.doc() = "Dissipative-triple toolkit: Weyl/characteristic functions, half-plane "
              "automorphism transforms and their invariance checks.";

    py::register_exception<livsic::Error>(m, "LivsicError");

    py::enum_<livsic::Side>(m, "Side")
        .value("Left", livsic::Side::Left)
        .value("Right", livsic::Side::Right);

    py::class_<livsic::RealMeasure>(m, "Measure")
        .def_static("from_json", &measure_from_json, py::arg("text"))
        .def_property_readonly("scale", &livsic::RealMeasure::scale)
        .def_property_readonly("infinite_mass", &livsic::RealMeasure::infinite_mass)
        .def("to_json",
             [](const livsic::RealMeasure& m) { return livsic::io::measure_to_json(m).dump(); })
        .def("__repr__", [](const livsic::RealMeasure& m) {
            return "<Measure atoms=" + std::to_string(m.atoms().size()) +
                   " pieces=" + std::to_string(m.pieces().size()) + ">";
        });

    m.def("normalize", [](const livsic::RealMeasure& m) { return livsic::normalize(m); });
    m.def("weighted_total",
          [](const livsic::RealMeasure& m) { return livsic::weighted_total(m).value.real(); });
    m.def(
        "cauchy_integral",
        [](const livsic::RealMeasure& m, Complex z) {
            const livsic::Integral r = livsic::cauchy_integral(m, z);
            return py::make_tuple(r.value, r.abs_error);
        },
        py::arg("measure"), py::arg("z"));
    m.def("second_moment_at",
          [](const livsic::RealMeasure& m, double s) { return livsic::second_moment_at(m, s); });
    m.def("classify_point", [](const livsic::RealMeasure& m, double s) {
        const livsic::PointClass pc = livsic::classify_point(m, s);
        py::dict d;
        d["core"] = pc.core;
        d["has_atom"] = pc.has_atom;
        return d;
    });

    py::class_<livsic::MobiusMap>(m, "MobiusMap")
        .def(py::init<double, double, double, double>(), py::arg("a"), py::arg("b"),
             py::arg("c"), py::arg("d"))
        .def_static("identity", &livsic::MobiusMap::identity)
        .def_static("inversion", &livsic::MobiusMap::inversion)
        .def_static("affine", &livsic::MobiusMap::affine, py::arg("slope"), py::arg("offset"))
        .def_property_readonly("a", &livsic::MobiusMap::a)
        .def_property_readonly("b", &livsic::MobiusMap::b)
        .def_property_readonly("c", &livsic::MobiusMap::c)
        .def_property_readonly("d", &livsic::MobiusMap::d)
        .def("__call__", [](const livsic::MobiusMap& f, Complex z) { return f(z); })
        .def("inverse", &livsic::MobiusMap::inverse)
        .def("is_affine", [](const livsic::MobiusMap& f) { return f.is_affine(); })
        .def("preimage_infinity", [](const livsic::MobiusMap& f) -> py::object {
            const auto w = f.preimage_infinity();
            return w ? py::object(py::float_(*w)) : py::object(py::none());
        });
    m.def("compose", &livsic::compose, py::arg("f"), py::arg("g"),
          "matrix product; (compose(f,g))(z) = f(g(z))");
    m.def("decompose", [](const livsic::MobiusMap& f) {
        const livsic::Decomposition d = livsic::decompose(f);
        py::dict out;
        out["g"] = d.g;
        out["uses_inversion"] = d.uses_inversion;
        out["h"] = d.h;
        return out;
    });
    m.def("pushforward", &livsic::pushforward, py::arg("measure"), py::arg("map"));

    py::class_<livsic::WeylEvaluator>(m, "WeylEvaluator")
        .def_static(
            "from_measure",
            [](const livsic::RealMeasure& m) { return livsic::WeylEvaluator::from_measure(m); },
            py::arg("normalized_measure"))
        .def_static("homogeneous",
                    [](double nu, bool positive) {
                        return livsic::homogeneous_evaluator(
                            {nu, positive ? livsic::SupportSide::Positive
                                          : livsic::SupportSide::Negative});
                    },
                    py::arg("nu"), py::arg("positive_side") = true)
        .def("__call__", [](const livsic::WeylEvaluator& e, Complex z) { return e.at(z); })
        .def("boundary", [](const livsic::WeylEvaluator& e, double omega) {
            const livsic::BoundaryValue b = e.boundary(omega);
            py::dict d;
            d["value"] = b.value;
            d["error_estimate"] = b.error_estimate;
            d["method"] = b.method == livsic::BoundaryValue::Method::DirectQuadrature
                              ? "direct"
                              : "epsilon-extrapolation";
            d["levels"] = b.levels;
            return d;
        });

    m.def("livsic_s", &livsic::livsic_s, py::arg("evaluator"), py::arg("z"));
    m.def("weyl_from_s", &livsic::weyl_from_s, py::arg("s"));
    m.def("disc_shift", &livsic::disc_shift, py::arg("x"), py::arg("kappa"));
    m.def("char_s",
          [](const livsic::WeylEvaluator& e, Complex kappa, Complex z) {
              return livsic::char_s({e, kappa}, z);
          },
          py::arg("evaluator"), py::arg("kappa"), py::arg("z"));
    m.def("normalized_char",
          [](const livsic::WeylEvaluator& e, Complex kappa, Complex z) {
              return livsic::normalized_char({e, kappa}, z);
          },
          py::arg("evaluator"), py::arg("kappa"), py::arg("z"));
    m.def("threshold_classify", [](const livsic::WeylEvaluator& e, double bottom) {
        const livsic::ThresholdSignature s = livsic::threshold_classify(e, bottom);
        py::dict d;
        d["friedrichs"] = s.friedrichs;
        d["krein"] = s.krein;
        return d;
    });
    m.def(
        "livsic_criterion_probe",
        [](const livsic::WeylEvaluator& e, double sector_eps) {
            const livsic::LivsicProbe p = livsic::livsic_criterion_probe(e, sector_eps);
            py::dict d;
            d["s_at_i_zero"] = p.s_at_i_zero;
            d["s_at_i_abs"] = p.s_at_i_abs;
            d["all_growth"] = p.all_growth();
            py::list rows;
            for (const auto& r : p.rows) {
                py::dict row;
                row["arg"] = r.arg;
                row["alpha"] = r.alpha;
                row["magnitudes"] = r.magnitudes;
                row["monotone_growth"] = r.monotone_growth;
                rows.append(row);
            }
            d["rows"] = rows;
            return d;
        },
        py::arg("evaluator"), py::arg("sector_eps") = 0.2);

    py::class_<livsic::ModelTriple>(m, "Triple")
        .def(py::init([](const livsic::RealMeasure& m, Complex kappa) {
                 return livsic::ModelTriple(m, livsic::VonNeumannParameter(kappa));
             }),
             py::arg("normalized_measure"), py::arg("kappa"))
        .def_static("from_json", &triple_from_json, py::arg("text"))
        .def_property_readonly("kappa", &livsic::ModelTriple::kappa)
        .def_property_readonly("measure", &livsic::ModelTriple::measure)
        .def("evaluator", &livsic::ModelTriple::evaluator);

    m.def("kappa_affine", &livsic::kappa_affine, py::arg("triple"), py::arg("affine_map"));
    m.def("transform_triple", [](const livsic::ModelTriple& t, const livsic::MobiusMap& f) {
        const livsic::TransformOutcome out = livsic::transform_triple(t, f);
        py::dict d;
        if (const auto* tt = std::get_if<livsic::TransformedTriple>(&out)) {
            d["branch"] = 1;
            d["kappa"] = tt->kappa;
        } else {
            const auto& bc = std::get<livsic::BoundedCase>(out);
            d["branch"] = 2;
            d["omega"] = bc.omega;
            d["boundary_phase"] = bc.boundary_phase;
        }
        return d;
    });
    m.def(
        "verify_invariance",
        [](const livsic::ModelTriple& t, const livsic::MobiusMap& f,
           const std::vector<Complex>& grid, int oracle_n, double quantile_cut) {
            livsic::VerifyOptions opt;
            opt.oracle_n = oracle_n;
            opt.quantile_cut = quantile_cut;
            return report_to_dict(livsic::verify_invariance(t, f, grid, opt));
        },
        py::arg("triple"), py::arg("map"), py::arg("grid"), py::arg("oracle_n") = 4000,
        py::arg("quantile_cut") = 1e-7);
    m.def("resolvent_p", &livsic::resolvent_p, py::arg("triple"), py::arg("z"));
    m.def("inverse_rank_one", [](const livsic::ModelTriple& t) {
        const livsic::RankOneInverse r = livsic::inverse_rank_one(t);
        py::dict d;
        d["p"] = r.p;
        d["m_at_zero"] = r.m_at_zero.value;
        return d;
    });

    m.def("closed_form_M",
          [](double nu, bool positive, Complex z) {
              return livsic::closed_form_M({nu, positive ? livsic::SupportSide::Positive
                                                         : livsic::SupportSide::Negative},
                                           z);
          },
          py::arg("nu"), py::arg("positive_side"), py::arg("z"));
    m.def("cayley_relation_check", [](double nu, const std::vector<Complex>& grid) {
        return livsic::cayley_relation_check(nu, grid);
    });
    m.def("inversion_relation_check", [](double nu, const std::vector<Complex>& grid) {
        return livsic::inversion_relation_check(nu, grid);
    });
    m.def("extension_type", [](double nu) {
        const livsic::ExtensionType et = livsic::extension_type({nu, livsic::SupportSide::Positive});
        py::dict d;
        d["friedrichs"] = et.friedrichs;
        d["krein"] = et.krein;
        return d;
    });
    m.def("inverse_duality_report", [](double nu, const std::vector<Complex>& grid) {
        const livsic::InverseDualityReport r = livsic::inverse_duality_report(nu, grid);
        py::dict d;
        d["inversion_residual"] = r.inversion_residual;
        d["types_match"] = r.types_match;
        d["inverse_matches_krein"] = r.inverse_matches_krein;
        d["pass"] = r.pass;
        return d;
    });

    py::class_<livsic::DiscreteModel>(m, "DiscreteModel")
        .def_readonly("nodes", &livsic::DiscreteModel::nodes)
        .def_readonly("weights", &livsic::DiscreteModel::weights)
        .def_readonly("kappa", &livsic::DiscreteModel::kappa)
        .def("weyl", &livsic::DiscreteModel::weyl)
        .def("weighted_sum", &livsic::DiscreteModel::weighted_sum);
    m.def("discretize", &livsic::discretize, py::arg("triple"), py::arg("n"),
          py::arg("quantile_cut") = 1e-4);
    m.def("random_discrete_model", &livsic::random_discrete_model, py::arg("n"), py::arg("seed"));
    m.def("check_resolvent_identity", &livsic::check_resolvent_identity, py::arg("model"),
          py::arg("z1"), py::arg("z2"));
    m.def("check_rank_one_inverse", &livsic::check_rank_one_inverse, py::arg("model"));
    m.def(
        "char_bounded_inverse",
        [](const livsic::DiscreteModel& d, Complex z) {
            const livsic::DissipativeMatrix T = livsic::build_dissipative(d);
            return livsic::char_bounded_trace(livsic::mobius_of(T, livsic::MobiusMap::inversion()),
                                              z);
        },
        py::arg("model"), py::arg("z"),
        "characteristic function of -T^{-1} for the model's dissipative matrix");

    m.def("standard_grid", &livsic::io::standard_grid);
}
