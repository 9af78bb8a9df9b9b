#include "livsic/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "livsic/errors.hpp"

namespace livsic::io {

namespace {

double number_or_inf(const Json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw Error(std::string("expected a number or \"inf\"/\"-inf\" for ") + what);
}

Json inf_aware(double v) {
    if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
    return Json(v);
}

}  // namespace

RealMeasure parse_measure(const Json& spec) {
    if (!spec.is_object()) throw Error("measure spec must be a JSON object");
    std::vector<Atom> atoms;
    if (spec.contains("atoms")) {
        for (const Json& a : spec.at("atoms")) {
            atoms.push_back({a.at("pos").get<double>(), a.at("mass").get<double>()});
        }
    }
    std::vector<DensityPiece> pieces;
    if (spec.contains("pieces")) {
        for (const Json& p : spec.at("pieces")) {
            DensityPiece piece;
            const Json& sup = p.at("support");
            piece.lo = number_or_inf(sup.at(0), "support lower end");
            piece.hi = number_or_inf(sup.at(1), "support upper end");
            if (p.contains("power")) {
                const Json& pw = p.at("power");
                const double anchor = pw.at("anchor").get<double>();
                const Side side = anchor >= piece.hi ? Side::Left : Side::Right;
                piece.form = PowerLaw{pw.at("c").get<double>(), pw.at("nu").get<double>(),
                                      anchor, side};
            } else if (p.contains("tabulated")) {
                const Json& tb = p.at("tabulated");
                piece.form = Tabulated{tb.at("grid").get<std::vector<double>>(),
                                       tb.at("values").get<std::vector<double>>()};
            } else {
                throw Error("piece needs either \"power\" or \"tabulated\"");
            }
            pieces.push_back(std::move(piece));
        }
    }
    const double scale = spec.value("scale", 1.0);
    RealMeasure m(std::move(atoms), std::move(pieces), scale);
    if (spec.value("normalize", false)) return normalize(m);
    return m;
}

RealMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open measure file: " + path);
    Json spec;
    try {
        in >> spec;
    } catch (const std::exception& e) {
        throw Error("malformed JSON in " + path + ": " + e.what());
    }
    return parse_measure(spec);
}

ModelTriple parse_triple(const Json& spec) {
    std::complex<double> kappa{0.0, 0.0};
    if (spec.contains("kappa")) {
        kappa = {spec.at("kappa").value("re", 0.0), spec.at("kappa").value("im", 0.0)};
    }
    Json mspec = spec;
    mspec["normalize"] = true;
    return ModelTriple(parse_measure(mspec), VonNeumannParameter(kappa));
}

ModelTriple load_triple(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open triple file: " + path);
    Json spec;
    try {
        in >> spec;
    } catch (const std::exception& e) {
        throw Error("malformed JSON in " + path + ": " + e.what());
    }
    return parse_triple(spec);
}

Json measure_to_json(const RealMeasure& m) {
    Json out;
    out["atoms"] = Json::array();
    for (const Atom& a : m.atoms()) {
        out["atoms"].push_back({{"pos", a.pos}, {"mass", a.mass}});
    }
    out["pieces"] = Json::array();
    for (const DensityPiece& p : m.pieces()) {
        Json jp;
        jp["support"] = Json::array({inf_aware(p.lo), inf_aware(p.hi)});
        if (const PowerLaw* pw = std::get_if<PowerLaw>(&p.form)) {
            jp["power"] = {{"c", pw->coefficient}, {"nu", pw->exponent}, {"anchor", pw->anchor}};
        } else {
            const Tabulated& t = std::get<Tabulated>(p.form);
            jp["tabulated"] = {{"grid", t.grid}, {"values", t.values}};
        }
        out["pieces"].push_back(std::move(jp));
    }
    out["scale"] = m.scale();
    out["infinite_mass"] = m.infinite_mass();
    return out;
}

std::complex<double> parse_complex(const std::string& text) {
    const std::string s = [&] {
        std::string t;
        for (char c : text) {
            if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
        }
        return t;
    }();
    if (s.empty()) throw Error("empty complex literal");

    const auto comma = s.find(',');
    if (comma != std::string::npos) {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    }
    if (s.back() != 'i' && s.back() != 'I') {
        return {std::stod(s), 0.0};
    }
    // forms: "i", "-i", "2i", "a+bi", "a-bi"
    std::string body = s.substr(0, s.size() - 1);
    // split at the last +/- that is not an exponent sign and not leading
    std::size_t split = std::string::npos;
    for (std::size_t j = body.size(); j-- > 1;) {
        if ((body[j] == '+' || body[j] == '-') && body[j - 1] != 'e' && body[j - 1] != 'E') {
            split = j;
            break;
        }
    }
    try {
        if (split == std::string::npos) {
            if (body.empty() || body == "+") return {0.0, 1.0};
            if (body == "-") return {0.0, -1.0};
            return {0.0, std::stod(body)};
        }
        const double re = std::stod(body.substr(0, split));
        std::string im = body.substr(split);
        if (im == "+") im = "1";
        if (im == "-") im = "-1";
        return {re, std::stod(im)};
    } catch (const std::exception&) {
        throw Error("cannot parse complex literal: " + text);
    }
}

MobiusMap parse_mobius(const std::string& text) {
    std::stringstream ss(text);
    double v[4];
    char sep;
    for (int j = 0; j < 4; ++j) {
        if (!(ss >> v[j])) throw Error("Mobius map needs four comma-separated entries a,b,c,d");
        if (j < 3 && !(ss >> sep)) throw Error("Mobius map needs four comma-separated entries a,b,c,d");
    }
    return {v[0], v[1], v[2], v[3]};
}

std::vector<std::complex<double>> standard_grid() {
    std::vector<std::complex<double>> grid;
    grid.reserve(20);
    for (int i = 0; i < 5; ++i) {
        const double re = -2.0 + i;
        for (int j = 0; j < 4; ++j) {
            const double im = 0.1 * std::pow(100.0, j / 3.0);
            grid.push_back({re, im});
        }
    }
    return grid;
}

std::vector<std::complex<double>> parse_grid(const std::string& text) {
    if (text.empty() || text == "default") return standard_grid();
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw Error("grid spec is \"default\" or \"re0,re1,nre:im0,im1,nim\"");
    }
    auto parse_axis = [](const std::string& part, double& lo, double& hi, int& n) {
        std::stringstream ss(part);
        char sep;
        if (!(ss >> lo >> sep >> hi >> sep >> n) || n < 1) {
            throw Error("bad grid axis: " + part);
        }
    };
    double re0, re1, im0, im1;
    int nre, nim;
    parse_axis(text.substr(0, colon), re0, re1, nre);
    parse_axis(text.substr(colon + 1), im0, im1, nim);
    if (!(im0 > 0.0) || !(im1 > 0.0)) throw Error("grid imaginary parts must be positive");
    std::vector<std::complex<double>> grid;
    grid.reserve(static_cast<std::size_t>(nre) * nim);
    for (int i = 0; i < nre; ++i) {
        const double re = nre == 1 ? re0 : re0 + (re1 - re0) * i / (nre - 1);
        for (int j = 0; j < nim; ++j) {
            const double im =
                nim == 1 ? im0 : im0 * std::pow(im1 / im0, static_cast<double>(j) / (nim - 1));
            grid.push_back({re, im});
        }
    }
    return grid;
}

Json complex_to_json(std::complex<double> v) {
    return Json{{"re", v.real()}, {"im", v.imag()}};
}

Json invariance_report_to_json(const InvarianceReport& rep) {
    Json out;
    out["branch"] = rep.branch;
    if (rep.omega) {
        out["omega"] = *rep.omega;
    } else {
        out["omega"] = nullptr;
    }
    out["residual"] = rep.residual;
    Json rows = Json::array();
    for (const InvarianceRow& r : rep.rows) {
        rows.push_back({{"z", complex_to_json(r.z)},
                        {"fz", complex_to_json(r.fz)},
                        {"lhs", complex_to_json(r.lhs)},
                        {"rhs", complex_to_json(r.rhs)}});
    }
    out["grid"] = std::move(rows);
    return out;
}

void write_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
    }
    fs::rename(tmp, target);
}

}  // namespace livsic::io
