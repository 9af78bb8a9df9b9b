// Command-line surface for the library: measure/triple ingestion, grid
// evaluation of the Herglotz and characteristic functions, invariance
// verification, extension typing and the dense-oracle checks.

#include <CLI11.hpp>

#include <chrono>
#include <complex>
#include <cstdio>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "livsic/charfn.hpp"
#include "livsic/errors.hpp"
#include "livsic/homogeneous.hpp"
#include "livsic/io.hpp"
#include "livsic/oracle.hpp"
#include "livsic/transform.hpp"

namespace {

using Complex = std::complex<double>;
using Json = livsic::io::Json;

struct OutputOptions {
    std::string format = "json";
    std::string output;
    bool no_timestamp = false;
};

void add_output_flags(CLI::App* cmd, OutputOptions* out) {
    cmd->add_option("--format", out->format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", out->output, "write the report to this path (atomic)");
    cmd->add_flag("--no-timestamp", out->no_timestamp, "omit the timestamp field");
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

void emit(const OutputOptions& opt, const std::string& text) {
    if (opt.output.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
    } else {
        livsic::io::write_atomic(opt.output, text);
    }
}

Json base_report(const std::string& command, const OutputOptions& opt) {
    Json rep;
    rep["command"] = command;
    if (!opt.no_timestamp) rep["timestamp"] = timestamp();
    return rep;
}

// Evaluates fn over the grid concurrently; results come back in grid order.
template <typename Fn>
std::vector<std::pair<Complex, std::optional<Complex>>> map_grid(
    const std::vector<Complex>& grid, Fn&& fn, std::vector<std::string>* failures) {
    std::vector<std::future<std::optional<Complex>>> futs;
    futs.reserve(grid.size());
    for (Complex z : grid) {
        futs.push_back(std::async(std::launch::async, [&fn, z]() -> std::optional<Complex> {
            return fn(z);
        }));
    }
    std::vector<std::pair<Complex, std::optional<Complex>>> rows;
    rows.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        try {
            rows.emplace_back(grid[j], futs[j].get());
        } catch (const std::exception& e) {
            rows.emplace_back(grid[j], std::nullopt);
            if (failures) {
                std::ostringstream msg;
                msg << "z=(" << grid[j].real() << "," << grid[j].imag() << "): " << e.what();
                failures->push_back(msg.str());
            }
        }
    }
    return rows;
}

std::string grid_csv(const std::vector<std::pair<Complex, std::optional<Complex>>>& rows) {
    std::ostringstream out;
    out.precision(15);
    out << "re_z,im_z,re_val,im_val,abs_val\n";
    for (const auto& [z, v] : rows) {
        out << z.real() << ',' << z.imag() << ',';
        if (v) {
            out << v->real() << ',' << v->imag() << ',' << std::abs(*v) << '\n';
        } else {
            out << "nan,nan,nan\n";
        }
    }
    return out.str();
}

Json grid_json(const std::vector<std::pair<Complex, std::optional<Complex>>>& rows) {
    Json arr = Json::array();
    for (const auto& [z, v] : rows) {
        Json row;
        row["z"] = livsic::io::complex_to_json(z);
        row["value"] = v ? livsic::io::complex_to_json(*v) : Json(nullptr);
        arr.push_back(std::move(row));
    }
    return arr;
}

void report_failures(const std::vector<std::string>& failures) {
    for (const std::string& f : failures) {
        std::cerr << "evaluation failed: " << f << "\n";
    }
}

int run_weyl(const std::string& measure_path, const std::string& z_text,
             const std::string& grid_text, double tol, const OutputOptions& opt) {
    livsic::RealMeasure m = livsic::normalize(livsic::io::load_measure(measure_path));
    livsic::QuadOptions qopt;
    qopt.abs_tol = tol;
    livsic::WeylEvaluator eval = livsic::WeylEvaluator::from_measure(m, qopt);

    const std::vector<Complex> grid = z_text.empty()
                                          ? livsic::io::parse_grid(grid_text)
                                          : std::vector<Complex>{livsic::io::parse_complex(z_text)};
    std::vector<std::string> failures;
    auto rows = map_grid(grid, [&](Complex z) { return eval.at(z); }, &failures);
    report_failures(failures);

    if (opt.format == "csv") {
        emit(opt, grid_csv(rows));
    } else {
        Json rep = base_report("weyl", opt);
        rep["config_echo"] = {{"measure", measure_path}, {"tol", tol}};
        rep["results"] = grid_json(rows);
        rep["pass"] = failures.empty();
        emit(opt, rep.dump(2));
    }
    return failures.empty() ? 0 : 2;
}

livsic::ModelTriple load_triple_checked(const std::string& path) {
    livsic::ModelTriple t = livsic::io::load_triple(path);
    if (!t.measure().infinite_mass()) {
        std::cerr << "warning: measure has finite total mass; the model role expects "
                     "an infinite measure\n";
    }
    return t;
}

int run_charfn(const std::string& triple_path, const std::string& z_text,
               const std::string& grid_text, const OutputOptions& opt) {
    livsic::ModelTriple t = load_triple_checked(triple_path);
    const livsic::CharEvaluator ce = t.char_evaluator();
    const std::vector<Complex> grid = z_text.empty()
                                          ? livsic::io::parse_grid(grid_text)
                                          : std::vector<Complex>{livsic::io::parse_complex(z_text)};
    std::vector<std::string> failures;
    Json rows = Json::array();
    for (Complex z : grid) {
        Json row;
        row["z"] = livsic::io::complex_to_json(z);
        try {
            const Complex s = livsic::livsic_s(ce.weyl, z);
            const Complex S = livsic::disc_shift(s, ce.kappa);
            row["s"] = livsic::io::complex_to_json(s);
            row["S"] = livsic::io::complex_to_json(S);
            row["S_hat"] = livsic::io::complex_to_json(livsic::normalizing_factor(ce.kappa) * S);
        } catch (const std::exception& e) {
            row["error"] = e.what();
            failures.push_back(e.what());
        }
        rows.push_back(std::move(row));
    }
    report_failures(failures);
    Json rep = base_report("charfn", opt);
    rep["config_echo"] = {{"triple", triple_path},
                          {"kappa", livsic::io::complex_to_json(t.kappa())}};
    rep["results"] = std::move(rows);
    rep["pass"] = failures.empty();
    emit(opt, rep.dump(2));
    return failures.empty() ? 0 : 2;
}

int run_classify(const std::string& measure_path, const std::string& points_text,
                 const OutputOptions& opt) {
    livsic::RealMeasure m = livsic::normalize(livsic::io::load_measure(measure_path));
    std::vector<double> points;
    std::stringstream ss(points_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) points.push_back(std::stod(tok));
    }
    if (points.empty()) throw livsic::Error("--points needs a comma-separated list");

    Json rows = Json::array();
    for (double s : points) {
        Json row;
        row["point"] = s;
        try {
            const livsic::PointClass pc = livsic::classify_point(m, s);
            row["class"] = pc.core ? "core-spectrum" : "quasi-regular";
            row["has_atom"] = pc.has_atom;
        } catch (const livsic::Indeterminate& e) {
            row["class"] = "indeterminate";
            row["detail"] = e.what();
        }
        rows.push_back(std::move(row));
    }
    Json rep = base_report("classify", opt);
    rep["config_echo"] = {{"measure", measure_path}};
    rep["results"] = std::move(rows);
    rep["pass"] = true;
    emit(opt, rep.dump(2));
    return 0;
}

int run_transform(const std::string& triple_path, const std::string& map_text,
                  const OutputOptions& opt) {
    livsic::ModelTriple t = load_triple_checked(triple_path);
    const livsic::MobiusMap f = livsic::io::parse_mobius(map_text);
    const livsic::TransformOutcome outcome = livsic::transform_triple(t, f);

    Json rep = base_report("transform", opt);
    rep["config_echo"] = {{"triple", triple_path}, {"map", map_text}};
    Json res;
    if (const auto* tt = std::get_if<livsic::TransformedTriple>(&outcome)) {
        res["branch"] = 1;
        res["kappa"] = livsic::io::complex_to_json(tt->kappa);
        Json prov = Json::array();
        for (const livsic::MobiusMap& g : tt->provenance) {
            prov.push_back({g.a(), g.b(), g.c(), g.d()});
        }
        res["provenance"] = std::move(prov);
    } else {
        const auto& bc = std::get<livsic::BoundedCase>(outcome);
        res["branch"] = 2;
        res["omega"] = bc.omega;
        res["boundary_phase"] = livsic::io::complex_to_json(bc.boundary_phase);
        res["atom_at_omega"] = bc.atom_at_omega;
    }
    rep["results"] = std::move(res);
    rep["pass"] = true;
    emit(opt, rep.dump(2));
    return 0;
}

int run_verify(const std::string& triple_path, const std::string& map_text,
               const std::string& grid_text, double tol, int oracle_n, double qcut,
               const OutputOptions& opt) {
    livsic::ModelTriple t = load_triple_checked(triple_path);
    const livsic::MobiusMap f = livsic::io::parse_mobius(map_text);
    const std::vector<Complex> grid = livsic::io::parse_grid(grid_text);
    livsic::VerifyOptions vopt;
    vopt.oracle_n = oracle_n;
    vopt.quantile_cut = qcut;
    const livsic::InvarianceReport rep = livsic::verify_invariance(t, f, grid, vopt);

    Json out = base_report("verify-invariance", opt);
    out["config_echo"] = {{"triple", triple_path}, {"map", map_text},
                          {"tol", tol},           {"oracle_n", oracle_n},
                          {"quantile_cut", qcut}};
    out["results"] = livsic::io::invariance_report_to_json(rep);
    out["residuals"] = {rep.residual};
    const bool pass = rep.residual < tol;
    out["pass"] = pass;
    emit(opt, out.dump(2));
    return pass ? 0 : 2;
}

int run_homogeneous(double nu, const std::string& side_text, const std::string& kappa_text,
                    const std::string& grid_text, bool checks, double tol,
                    const OutputOptions& opt) {
    const livsic::SupportSide side =
        side_text == "negative" ? livsic::SupportSide::Negative : livsic::SupportSide::Positive;
    const livsic::HomogeneousModel model{nu, side};
    const Complex kappa = livsic::io::parse_complex(kappa_text);
    const livsic::VonNeumannParameter check_kappa(kappa);  // validates |kappa|<1
    const std::vector<Complex> grid = livsic::io::parse_grid(grid_text);

    if (opt.format == "csv") {
        std::ostringstream csv;
        csv.precision(15);
        csv << "re_z,im_z,re_m,im_m,re_s,im_s,re_S,im_S\n";
        for (Complex z : grid) {
            const Complex m = livsic::closed_form_M(model, z);
            const Complex s = (m - Complex{0, 1}) / (m + Complex{0, 1});
            const Complex S = livsic::disc_shift(s, check_kappa.kappa);
            csv << z.real() << ',' << z.imag() << ',' << m.real() << ',' << m.imag() << ','
                << s.real() << ',' << s.imag() << ',' << S.real() << ',' << S.imag() << '\n';
        }
        emit(opt, csv.str());
        return 0;
    }

    Json rep = base_report("homogeneous", opt);
    rep["config_echo"] = {{"nu", nu},
                          {"side", side == livsic::SupportSide::Positive ? "positive" : "negative"},
                          {"kappa", livsic::io::complex_to_json(kappa)}};
    Json rows = Json::array();
    for (Complex z : grid) {
        const Complex m = livsic::closed_form_M(model, z);
        const Complex s = (m - Complex{0, 1}) / (m + Complex{0, 1});
        const Complex S = livsic::disc_shift(s, kappa);
        rows.push_back({{"z", livsic::io::complex_to_json(z)},
                        {"M", livsic::io::complex_to_json(m)},
                        {"s", livsic::io::complex_to_json(s)},
                        {"S", livsic::io::complex_to_json(S)}});
    }
    rep["results"] = std::move(rows);

    bool pass = true;
    if (checks) {
        Json ch;
        if (nu > 0.0) {
            const double cay = livsic::cayley_relation_check(nu, grid);
            ch["cayley_residual"] = cay;
            pass = pass && cay < tol;
        }
        const double invres = livsic::inversion_relation_check(nu, grid);
        ch["inversion_residual"] = invres;
        pass = pass && invres < tol;
        if (side == livsic::SupportSide::Positive) {
            const livsic::ExtensionType et = livsic::extension_type(model);
            ch["extension_type"] = {{"friedrichs", et.friedrichs}, {"krein", et.krein}};
            if (nu >= 0.0) {
                const livsic::InverseDualityReport rep2 =
                    livsic::inverse_duality_report(nu, grid);
                ch["inverse_duality"] = {{"inversion_residual", rep2.inversion_residual},
                                         {"types_match", rep2.types_match},
                                         {"inverse_matches_krein", rep2.inverse_matches_krein},
                                         {"pass", rep2.pass}};
                pass = pass && rep2.pass;
            }
        }
        rep["residuals"] = std::move(ch);
    }
    rep["pass"] = pass;
    emit(opt, rep.dump(2));
    return pass ? 0 : 2;
}

int run_oracle(const std::string& triple_path, int n, int seeds, unsigned seed0,
               double qcut, const OutputOptions& opt) {
    Json rep = base_report("oracle", opt);
    rep["config_echo"] = {{"n", n}, {"seeds", seeds}, {"seed0", seed0}};
    Json results = Json::array();
    bool pass = true;

    auto run_checks = [&](const livsic::DiscreteModel& d, const Json& tag) {
        Json row;
        row["model"] = tag;
        row["size"] = d.size();
        const double rid = livsic::check_resolvent_identity(d, {0.0, 1.0}, {0.0, 2.0});
        const double rank1 = livsic::check_rank_one_inverse(d);
        const auto t1 = livsic::build_dissipative(d, {0.0, 1.0});
        const auto t2 = livsic::build_dissipative(d, {0.0, 2.0});
        const double anchor = (t1.dense() - t2.dense()).cwiseAbs().maxCoeff();
        row["resolvent_identity"] = rid;
        row["rank_one_inverse"] = rank1;
        row["anchor_independence"] = anchor;
        const bool ok = rid < 1e-8 && rank1 < 1e-10 && anchor < 1e-8;
        row["pass"] = ok;
        pass = pass && ok;
        results.push_back(std::move(row));
    };

    for (int j = 0; j < seeds; ++j) {
        run_checks(livsic::random_discrete_model(n, seed0 + j), Json{{"seed", seed0 + j}});
    }
    if (!triple_path.empty()) {
        const livsic::ModelTriple t = load_triple_checked(triple_path);
        run_checks(livsic::discretize(t, n, qcut), Json{{"triple", triple_path}});
    }
    rep["results"] = std::move(results);
    rep["pass"] = pass;
    emit(opt, rep.dump(2));
    return pass ? 0 : 2;
}

int run_extension_type(const std::string& nu_list, const OutputOptions& opt) {
    Json rep = base_report("extension-type", opt);
    Json rows = Json::array();
    std::stringstream ss(nu_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        const double nu = std::stod(tok);
        const livsic::ExtensionType et = livsic::extension_type({nu, livsic::SupportSide::Positive});
        rows.push_back({{"nu", nu}, {"friedrichs", et.friedrichs}, {"krein", et.krein}});
    }
    rep["results"] = std::move(rows);
    rep["pass"] = true;
    emit(opt, rep.dump(2));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dissipative-triple toolkit"};
    app.require_subcommand(1);

    OutputOptions out;

    std::string measure_path, triple_path, map_text, z_text, points_text;
    std::string grid_text = "default";
    std::string side_text = "positive", kappa_text = "0,0", nu_list;
    double tol = 1e-6, quad_tol = 1e-10, nu = 0.5, qcut = 1e-7;
    int oracle_n = 4000, dense_n = 50, oracle_seeds = 10;
    unsigned seed0 = 1;
    bool checks = false;

    CLI::App* weyl = app.add_subcommand("weyl", "evaluate the Weyl function of a measure");
    weyl->add_option("--measure", measure_path, "measure spec file")->required();
    weyl->add_option("--z", z_text, "single evaluation point");
    weyl->add_option("--grid", grid_text, "grid spec");
    weyl->add_option("--tol", quad_tol, "quadrature tolerance");
    add_output_flags(weyl, &out);

    CLI::App* charfn = app.add_subcommand("charfn", "characteristic function of a triple");
    charfn->add_option("--triple", triple_path, "triple spec file")->required();
    charfn->add_option("--z", z_text, "single evaluation point");
    charfn->add_option("--grid", grid_text, "grid spec");
    add_output_flags(charfn, &out);

    CLI::App* classify = app.add_subcommand("classify", "classify real points");
    classify->add_option("--measure", measure_path, "measure spec file")->required();
    classify->add_option("--points", points_text, "comma-separated real points")->required();
    add_output_flags(classify, &out);

    CLI::App* transform = app.add_subcommand("transform", "apply an automorphism to a triple");
    transform->add_option("--triple", triple_path, "triple spec file")->required();
    transform->add_option("--map", map_text, "a,b,c,d with ad-bc>0")->required();
    add_output_flags(transform, &out);

    CLI::App* verify = app.add_subcommand("verify-invariance", "check the invariance identity");
    verify->add_option("--triple", triple_path, "triple spec file")->required();
    verify->add_option("--map", map_text, "a,b,c,d with ad-bc>0")->required();
    verify->add_option("--grid", grid_text, "grid spec");
    verify->add_option("--tol", tol, "residual tolerance");
    verify->add_option("--oracle-n", oracle_n, "discretization size for the bounded branch");
    verify->add_option("--quantile-cut", qcut, "tail cut for the discretization");
    add_output_flags(verify, &out);

    CLI::App* homog = app.add_subcommand("homogeneous", "closed-form family evaluation");
    homog->add_option("--nu", nu, "exponent in (-1,1)")->required();
    homog->add_option("--side", side_text, "positive or negative")
        ->check(CLI::IsMember({"positive", "negative"}));
    homog->add_option("--kappa", kappa_text, "von Neumann parameter");
    homog->add_option("--grid", grid_text, "grid spec");
    homog->add_flag("--checks", checks, "run the identity checks");
    homog->add_option("--tol", tol, "residual tolerance for the checks");
    add_output_flags(homog, &out);

    CLI::App* oracle = app.add_subcommand("oracle", "dense linear-algebra checks");
    oracle->add_option("--triple", triple_path, "optional triple to discretize");
    oracle->add_option("--n", dense_n, "model size")->capture_default_str();
    oracle->add_option("--seeds", oracle_seeds, "number of random models");
    oracle->add_option("--seed", seed0, "first seed");
    oracle->add_option("--quantile-cut", qcut, "tail cut when discretizing a triple");
    add_output_flags(oracle, &out);

    CLI::App* ext = app.add_subcommand("extension-type", "Friedrichs/Krein table");
    ext->add_option("--nu", nu_list, "comma-separated exponents")->required();
    add_output_flags(ext, &out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (weyl->parsed()) return run_weyl(measure_path, z_text, grid_text, quad_tol, out);
        if (charfn->parsed()) return run_charfn(triple_path, z_text, grid_text, out);
        if (classify->parsed()) return run_classify(measure_path, points_text, out);
        if (transform->parsed()) return run_transform(triple_path, map_text, out);
        if (verify->parsed()) {
            return run_verify(triple_path, map_text, grid_text, tol, oracle_n, qcut, out);
        }
        if (homog->parsed()) {
            return run_homogeneous(nu, side_text, kappa_text, grid_text, checks, tol, out);
        }
        if (oracle->parsed()) {
            return run_oracle(triple_path, dense_n, oracle_seeds, seed0, qcut, out);
        }
        if (ext->parsed()) return run_extension_type(nu_list, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
