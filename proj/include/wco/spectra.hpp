#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wco/angle.hpp"
#include "wco/blaschke.hpp"
#include "wco/circle_dynamics.hpp"
#include "wco/outer_function.hpp"
#include "wco/spectral_radius.hpp"
#include "wco/weight.hpp"

namespace wco {

/// Boundary dynamics as seen by the tree search: forward step, full fiber,
/// and |w|.
struct CircleSystem {
  int degree = 2;
  std::function<Angle(const Angle&)> forward;
  std::function<std::vector<Angle>(const Angle&)> preimages;
  std::function<double(const Angle&)> modulus;

  /// t -> d t with exact rational arithmetic.
  static CircleSystem model(const WcoSpec& spec);
  /// The circle map of B itself; preimages are found numerically.
  static CircleSystem blaschke(const BlaschkeProduct& b, const Weight& w);
};

enum class CertificateKind { Lemma1Point, Corollary1Orbit, Lemma3Fiber, RejectionTree };
const char* to_string(CertificateKind k);

/// (e, m, n) with phi^m(e) = phi^n(k) and |w_m(e)|/lambda^m > |w_n(k)|/lambda^n.
struct ViolationTriple {
  Angle e;
  int m = 0;
  int n = 0;
  double lhs_log = 0.0;  // log |w_m(e)| - m log lambda
  double rhs_log = 0.0;  // log |w_n(k)| - n log lambda
  friend bool operator==(const ViolationTriple&, const ViolationTriple&) = default;
};

struct Certificate {
  CertificateKind kind = CertificateKind::RejectionTree;
  /// |lambda| the certificate speaks about.
  double radius = 0.0;
  std::optional<Angle> anchor;
  std::optional<PeriodicOrbit> orbit;
  int depth = 0;
  /// Smallest log-space slack among the verified inequalities (accepts);
  /// infinite when every branch vanishes.
  double margin = 0.0;
  std::optional<ViolationTriple> violation;
  /// Free-form note for rejections that need no tree (radius above the estimate).
  std::string note;

  bool accepts() const { return kind != CertificateKind::RejectionTree; }
  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct TreeSearchOptions {
  double zero_tol = 1e-10;
  /// Log-space slack tolerated as rounding.
  double log_tol = 1e-12;
  /// DepthExceeded past d^depth * depth nodes above this.
  double node_cap = 5e7;
};

/// Finite-depth check of |w_m(e)|/lambda^m <= |w_n(k)|/lambda^n over the
/// preimage trees of the forward orbit of k. Returns a
/// Lemma1Point certificate when no violation exists up to `depth`, otherwise
/// a RejectionTree certificate carrying the violating triple.
Certificate lemma1_criterion(const CircleSystem& sys, double lambda_abs, const Angle& k, int depth,
                             const TreeSearchOptions& opts = {});
Certificate lemma1_criterion(const WcoSpec& spec, double lambda_abs, const Angle& k, int depth,
                             const TreeSearchOptions& opts = {});

/// Recomputes a violation from scratch; true when it is genuine.
bool violation_holds(const CircleSystem& sys, double lambda_abs, const Angle& k,
                     const ViolationTriple& v, double log_tol = 1e-12);

struct OrbitCertOptions {
  double zero_tol = 1e-10;
  /// Allowed relative gap between lambda and the orbit geometric mean.
  double lambda_rel_tol = 2e-3;
};

/// Accepts when every non-periodic preimage of the orbit is a zero of w and
/// lambda equals the orbit geometric mean (within tolerance). The certified
/// radius is the mean itself; the anchor is the orbit point from which all
/// partial sums of log|w| - log(mean) are nonnegative.
std::optional<Certificate> corollary1_certificate(const WcoSpec& spec, double lambda_abs,
                                                  const PeriodicOrbit& orbit,
                                                  const OrbitCertOptions& opts = {});

/// Looks for k whose whole fiber consists of zeros of w (then 0 is an
/// approximate eigenvalue).
std::optional<Certificate> lemma3_zero_check(const WcoSpec& spec, int scan_grid = 1 << 14,
                                             double zero_tol = 1e-10);

/// Every t0 reaches, through a zero-free backward chain, a point whose whole
/// backward tree avoids the zeros.
struct ReachabilityReport {
  bool holds = true;
  /// Exact when all zeros are rational (their forward orbits close up).
  bool exact = true;
  int depth = 0;
  std::vector<Angle> blocked;
};
ReachabilityReport backward_reachability(int d, const std::vector<Angle>& zeros, int depth);

struct SpectrumOptions {
  int max_period = 0;  // 0: default for the degree
  int depth = 10;
  double zero_tol = 1e-10;
  int upper_grid = 1 << 16;
  /// Rejection anchors: reduced fractions with denominator up to this.
  int anchor_max_den = 63;
  double lambda_rel_tol = 2e-3;
  /// Extra radii to classify beyond the automatic midpoints.
  std::vector<double> extra_radii;
};

enum class Verdict { Accept, Reject, Undecided };
const char* to_string(Verdict v);

struct RadiusVerdict {
  double radius = 0.0;
  Verdict verdict = Verdict::Undecided;
  std::optional<Certificate> certificate;
  int depth = 0;
  friend bool operator==(const RadiusVerdict&, const RadiusVerdict&) = default;
};

struct SpectrumResult {
  double rho = 0.0;
  double rho_upper_est = 0.0;
  std::vector<double> usf_radii;
  bool includes_zero = false;
  /// Closed disc of this radius.
  double full_spectrum_radius = 0.0;
  bool lsf_equals_spectrum = false;
  /// "no-circle-zeros", "reachability" or "scan".
  std::string path;
  std::vector<Certificate> certificates;
  /// Rejected and undecided probe radii (scan path).
  std::vector<RadiusVerdict> probes;
  friend bool operator==(const SpectrumResult&, const SpectrumResult&) = default;
};

SpectrumResult assemble_spectrum(const WcoSpec& spec, const SpectrumOptions& opts = {});

/// Rejection anchors: reduced p/q with q <= max_den, plus the given extras.
std::vector<Angle> rejection_anchors(int max_den, const std::vector<Angle>& extra);

/// REJECT when a violation is found at every anchor (or the radius exceeds
/// `upper`), UNDECIDED otherwise.
RadiusVerdict probe_radius(const CircleSystem& sys, double radius, const std::vector<Angle>& anchors,
                           int depth, double upper, const TreeSearchOptions& opts = {});

struct ScanReport {
  std::vector<RadiusVerdict> rows;
  std::vector<double> accepted;
  std::string csv() const;
};

/// Classifies each radius: ACCEPT when it matches a certified circle,
/// otherwise REJECT/UNDECIDED from the tree search.
ScanReport conjecture1_scan(const WcoSpec& spec, const std::vector<double>& radii, int depth,
                            const SpectrumOptions& opts = {});

struct SineProductRow {
  int n = 0;
  std::size_t grid_points = 0;
  double brute_max = 0.0;
  double bound = 0.0;
  bool ok = false;
};
struct SineProductStepB {
  int n = 0;
  double brute_max = 0.0;
  double at_star = 0.0;
  double expected = 0.0;
  bool ok = false;
};
struct Example6Report {
  int k = 1;
  double tol = 1e-9;
  std::vector<SineProductRow> products;
  double step_a_max = 0.0;
  double step_a_expected = 0.0;
  bool step_a_ok = false;
  std::vector<SineProductStepB> step_b;
  bool all_ok() const;
};
/// Brute force of max |sin t sin(2k t) ... sin((2k)^n t)| against
/// sin^n(pi k/(2k+1)), together with the two intermediate maximizations.
Example6Report verify_example6(int k, int n_max, std::size_t grid, double tol = 1e-9);

struct BuiltWeight {
  Weight weight;
  AnalyticWeight synthesis;
  std::vector<PeriodicOrbit> orbits;
  std::vector<CircleZero> zeros;
  SpectrumResult spectrum;
};

struct BuildOptions {
  /// 0: 2^12 grid for single-layer builds, 2^14 for layered builds.
  int grid_m = 0;
  PeakedProfileOptions profile;
  SpectrumOptions spectrum;
};

/// |w| = |lambda_j| on the j-th orbit (first orbits in enumeration order),
/// zero on their other preimages, below max |lambda| elsewhere. Only the
/// moduli are matched. Throws OrbitShortage when too few orbits exist.
BuiltWeight theorem6_build_weight(int d, const std::vector<cplx>& lambdas, int max_period,
                                  const BuildOptions& opts = {});

struct Theorem11Report {
  BuiltWeight built;
  LayeredSynthesis layers;
  int n_layers = 0;
  /// Certified radii, one per orbit, in orbit order.
  std::vector<std::optional<double>> certified;
  bool positive_off_f = false;
};

/// Finite truncation: top orbit carries lambda_0 with nonvanishing
/// preimages; orbits 1..N_trunc carry lambda_i with zeros on their other
/// preimages; synthesized as a layered sum.
Theorem11Report theorem11_build_weight(int d, const std::vector<double>& lambdas_decreasing,
                                       int n_trunc, int n_layers = 4, int max_period = 8,
                                       const BuildOptions& opts = {});

struct AnnulusReport {
  double r_inner = 0.0;
  Angle attractor;
  std::array<double, 2> basin_endpoints{};
  /// |F(e) - e| or |F(F(e)) - e| mod 1, whichever is smaller, per endpoint.
  std::array<double, 2> endpoint_residuals{};
  std::array<int, 2> endpoint_periods{};
  double basin_length = 0.0;
  /// Tree-search outcomes at sampled radii in the annulus (evidence only).
  std::vector<RadiusVerdict> spot_checks;
};

/// Annulus of unstable spectrum for boundary-attracting B (containment only).
AnnulusReport proposition1_annulus(const BlaschkeProduct& b, const Weight& w, int grid = 4096,
                                   int spot_depth = 8);

}  // namespace wco
