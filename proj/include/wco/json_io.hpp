#pragma once

#include <json.hpp>

#include "wco/blaschke.hpp"
#include "wco/circle_dynamics.hpp"
#include "wco/outer_function.hpp"
#include "wco/spectra.hpp"
#include "wco/spectral_radius.hpp"
#include "wco/weight.hpp"

// JSON forms shared by the CLI and the Python module. Complex numbers are
// [re, im]; angles are "p/q" strings when exact and decimals otherwise;
// non-finite reals are the strings "inf" / "-inf".
namespace wco::json_io {

using nlohmann::json;

json to_json(const BlaschkeProduct& b);
BlaschkeProduct blaschke_from_json(const json& j);

json to_json(const Classification& c);
Classification classification_from_json(const json& j);

json to_json(const PeriodicOrbit& o);
PeriodicOrbit orbit_from_json(const json& j, int degree);

json to_json(const SemiconjugacyTable& t);
SemiconjugacyTable semiconjugacy_from_json(const json& j);

/// {"kind": "constant"|"polynomial"|"factored"|"sampled", ...}. A bare
/// {"coeffs": [...], "grid_M": M} is read as a polynomial; adding "zeros"
/// and "outer_coeffs" makes it factored. Boundary-only weights are written
/// as 4096 samples.
json to_json(const Weight& w);
Weight weight_from_json(const json& j);

json to_json(const AnalyticWeight& a);

json to_json(const SpectralRadiusEstimate& e);

json to_json(const Certificate& c);
Certificate certificate_from_json(const json& j);

json to_json(const RadiusVerdict& v);
RadiusVerdict verdict_from_json(const json& j);

json to_json(const SpectrumResult& r);
SpectrumResult spectrum_from_json(const json& j);

json to_json(const ScanReport& s);
json to_json(const Example6Report& r);
json to_json(const LayeredSynthesis& l);
json to_json(const BuiltWeight& b);
json to_json(const Theorem11Report& r);
json to_json(const AnnulusReport& r);

}  // namespace wco::json_io
