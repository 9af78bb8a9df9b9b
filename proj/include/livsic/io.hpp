#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "livsic/measure.hpp"
#include "livsic/transform.hpp"

namespace livsic::io {

using Json = nlohmann::ordered_json;

/// Measure spec:
///   {"atoms":[{"pos":x,"mass":m},...],
///    "pieces":[{"support":[a,b],"power":{"c":..,"nu":..,"anchor":..}}
///              | {"support":[a,b],"tabulated":{"grid":[..],"values":[..]}}],
///    "scale": s,              // optional, default 1
///    "normalize": true|false} // optional, default false
/// Infinite endpoints are encoded as the strings "inf" / "-inf".
RealMeasure parse_measure(const Json& spec);
RealMeasure load_measure(const std::string& path);

/// Triple spec: measure fields plus {"kappa": {"re":.., "im":..}}.
/// The measure is normalized on ingestion regardless of the flag, since the
/// model requires it.
ModelTriple parse_triple(const Json& spec);
ModelTriple load_triple(const std::string& path);

Json measure_to_json(const RealMeasure& m);

/// Accepts "re,im", "i", "2i", "1+2i", "1-0.5i", or a bare real.
std::complex<double> parse_complex(const std::string& text);

/// "a,b,c,d" with ad-bc > 0.
MobiusMap parse_mobius(const std::string& text);

/// "default" or "re0,re1,nre:im0,im1,nim" (linear in Re, log-spaced in Im).
std::vector<std::complex<double>> parse_grid(const std::string& text);

/// 5x4 default grid: Re linear on [-2,2], Im log-spaced on [0.1,10].
std::vector<std::complex<double>> standard_grid();

Json complex_to_json(std::complex<double> v);

Json invariance_report_to_json(const InvarianceReport& rep);

/// Writes text via temp file + rename in the target directory.
void write_atomic(const std::string& path, const std::string& text);

}  // namespace livsic::io
