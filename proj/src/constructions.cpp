#include <algorithm>
#include <cmath>

#include "wco/errors.hpp"
#include "wco/spectra.hpp"

namespace wco {

namespace {

void add_zero(std::vector<CircleZero>& zeros, const Rational& r) {
  for (const auto& z : zeros)
    if (z.angle == Angle(r)) return;
  zeros.push_back(CircleZero{Angle(r), 1});
}

/// Preimages of the orbit that are not on it.
void add_side_preimages(std::vector<CircleZero>& zeros, const PeriodicOrbit& orbit) {
  for (const auto& p : orbit.points)
    for (const auto& e : preimages(Angle(p), orbit.degree))
      if (!orbit.contains(e.exact())) add_zero(zeros, e.exact());
}

}  // namespace

BuiltWeight theorem6_build_weight(int d, const std::vector<cplx>& lambdas, int max_period,
                                  const BuildOptions& opts) {
  if (lambdas.empty()) fail(ErrorCode::InvalidArgument, "need at least one lambda");
  for (std::size_t j = 1; j < lambdas.size(); ++j)
    if (!(std::abs(lambdas[j]) > std::abs(lambdas[j - 1]))) {
      fail(ErrorCode::InvalidArgument, "lambda moduli must be strictly increasing");
    }
  if (!(std::abs(lambdas.back()) > 0.0)) fail(ErrorCode::InvalidArgument, "largest lambda must be nonzero");
  const auto all = periodic_orbits(d, max_period);
  if (all.size() < lambdas.size()) {
    fail(ErrorCode::OrbitShortage, "only " + std::to_string(all.size()) +
                                       " periodic orbits with period <= " +
                                       std::to_string(max_period));
  }

  BuiltWeight out;
  out.orbits.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(lambdas.size()));
  std::vector<PointTarget> targets;
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    const double m = std::abs(lambdas[j]);
    for (const auto& p : out.orbits[j].points) {
      if (m > 0) targets.push_back({Angle(p), m});
      else add_zero(out.zeros, p);
    }
    add_side_preimages(out.zeros, out.orbits[j]);
  }
  const int grid_m = opts.grid_m > 0 ? opts.grid_m : 12;
  out.synthesis = outer_from_modulus(peaked_profile(grid_m, targets, out.zeros, opts.profile));
  out.weight = out.synthesis.weight();
  out.spectrum = assemble_spectrum(WcoSpec::model(d, out.weight), opts.spectrum);
  return out;
}

Theorem11Report theorem11_build_weight(int d, const std::vector<double>& lambdas, int n_trunc,
                                       int n_layers, int max_period, const BuildOptions& opts) {
  if (n_trunc < 0) fail(ErrorCode::InvalidArgument, "N_trunc must be >= 0");
  if (lambdas.size() < static_cast<std::size_t>(n_trunc) + 1) {
    fail(ErrorCode::InvalidArgument, "need N_trunc + 1 lambdas");
  }
  for (int i = 0; i <= n_trunc; ++i) {
    if (!(lambdas[static_cast<std::size_t>(i)] > 0.0)) fail(ErrorCode::InvalidArgument, "lambdas must be positive");
    if (i > 0 && !(lambdas[static_cast<std::size_t>(i)] < lambdas[static_cast<std::size_t>(i) - 1])) {
      fail(ErrorCode::InvalidArgument, "lambdas must be strictly decreasing");
    }
  }
  OrderPreservingSelection sel;
  try {
    sel = find_order_preserving_orbits(d, n_trunc + 1, max_period);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotFound) fail(ErrorCode::OrbitShortage, e.what());
    throw;
  }

  Theorem11Report rep;
  rep.n_layers = n_layers;
  auto& built = rep.built;
  built.orbits = sel.preserving;
  LayerTargets lt;
  lt.lambda0 = lambdas[0];
  lt.grid_m = opts.grid_m > 0 ? opts.grid_m : 14;
  for (int i = 0; i <= n_trunc; ++i) {
    const auto& orbit = built.orbits[static_cast<std::size_t>(i)];
    for (const auto& p : orbit.points) lt.points.push_back({Angle(p), lambdas[static_cast<std::size_t>(i)]});
    // the top orbit keeps nonvanishing preimages
    if (i > 0) add_side_preimages(built.zeros, orbit);
  }
  lt.zeros = built.zeros;
  rep.layers = layered_sum_synthesis(lt, n_layers, opts.profile);
  built.synthesis = rep.layers.weight;
  built.weight = built.synthesis.weight();
  const WcoSpec spec = WcoSpec::model(d, built.weight);
  built.spectrum = assemble_spectrum(spec, opts.spectrum);

  const OrbitCertOptions c1{opts.spectrum.zero_tol, opts.spectrum.lambda_rel_tol};
  for (int i = 0; i <= n_trunc; ++i) {
    const auto& orbit = built.orbits[static_cast<std::size_t>(i)];
    const double target = lambdas[static_cast<std::size_t>(i)];
    std::optional<double> got;
    if (i > 0) {
      if (auto c = corollary1_certificate(spec, target, orbit, c1)) got = c->radius;
    } else {
      const double g = orbit_geometric_mean(built.weight, orbit);
      if (std::abs(g - target) <= c1.lambda_rel_tol * target) {
        for (const auto& p : orbit.points) {
          const auto c = lemma1_criterion(spec, g, Angle(p), opts.spectrum.depth);
          if (c.accepts()) {
            got = g;
            break;
          }
        }
      }
    }
    rep.certified.push_back(got);
  }
  rep.positive_off_f = rep.layers.min_modulus_off_f > 0.0;
  return rep;
}

}  // namespace wco
