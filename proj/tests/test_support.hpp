#pragma once

#include <complex>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "livsic/io.hpp"
#include "livsic/measure.hpp"

namespace testsup {

inline std::string data_dir() {
    if (const char* env = std::getenv("LIVSIC_TEST_DATA")) return env;
    return "tests/data";
}

inline std::string data_file(const std::string& name) { return data_dir() + "/" + name; }

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline livsic::RealMeasure lebesgue() {
    return livsic::normalize(livsic::RealMeasure(
        {}, {livsic::DensityPiece{-kInf, kInf, livsic::PowerLaw{1.0, 0.0, 0.0, livsic::Side::Right}}}));
}

inline livsic::RealMeasure power_measure(double nu) {
    return livsic::RealMeasure(
        {}, {livsic::DensityPiece{0.0, kInf, livsic::PowerLaw{1.0, nu, 0.0, livsic::Side::Right}}});
}

inline livsic::RealMeasure halfline() {
    return livsic::normalize(livsic::RealMeasure(
        {}, {livsic::DensityPiece{1.0, kInf, livsic::PowerLaw{1.0, 0.0, 1.0, livsic::Side::Right}}}));
}

inline std::vector<std::complex<double>> grid20() { return livsic::io::standard_grid(); }

}  // namespace testsup
