#include "wco/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "wco/errors.hpp"

namespace wco {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_point(const Angle& a, const Angle& b) {
  if (a.is_exact() && b.is_exact()) return a == b;
  return circle_distance(a.to_double(), b.to_double()) <= 1e-9;
}

bool contains_point(const std::vector<Angle>& set, const Angle& a) {
  return std::any_of(set.begin(), set.end(), [&](const Angle& s) { return same_point(s, a); });
}

/// Unwrapped lift of the circle map of B, tabulated for preimage searches.
class LiftTable {
 public:
  explicit LiftTable(const BlaschkeProduct& b) : b_(b) {
    double slope = 0.0;
    for (const auto& a : b.zeros()) slope += (1 + std::abs(a)) / (1 - std::abs(a));
    n_ = std::max<std::size_t>(1024, static_cast<std::size_t>(8 * slope));
    values_.resize(n_ + 1);
    values_[0] = b.circle_map(0.0);
    for (std::size_t i = 1; i <= n_; ++i) values_[i] = continue_from(values_[i - 1], s(i));
    const double total = values_[n_] - values_[0];
    if (std::abs(total - b.degree()) > 1e-6) {
      fail(ErrorCode::LiftDiscontinuity, "circle map lift does not wind d times");
    }
    values_[n_] = values_[0] + b.degree();
  }

  std::vector<Angle> preimages(double t) const {
    std::vector<Angle> out;
    const double base = values_[0];
    double tau = base + wrap_unit(t - base);
    for (int j = 0; j < b_.degree(); ++j, tau += 1.0) {
      const auto it = std::upper_bound(values_.begin(), values_.end(), tau);
      std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - values_.begin() - 1, 0));
      i = std::min(i, n_ - 1);
      double lo = s(i), hi = s(i + 1);
      const double anchor = values_[i];
      for (int it2 = 0; it2 < 80 && hi - lo > 1e-17; ++it2) {
        const double mid = 0.5 * (lo + hi);
        if (continue_from(anchor, mid) < tau) lo = mid;
        else hi = mid;
      }
      out.push_back(Angle::from_double(wrap_unit(0.5 * (lo + hi))));
    }
    return out;
  }

 private:
  double s(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(n_); }
  double continue_from(double prev, double x) const {
    const double raw = b_.circle_map(x);
    return prev + (raw - prev - std::round(raw - prev));
  }
  BlaschkeProduct b_;
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Orbit index from which all partial sums of log|w| - log(mean) are >= 0.
std::size_t cyclic_start(const std::vector<double>& logs) {
  const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
  double run = 0.0, lowest = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (run < lowest) {
      lowest = run;
      start = i;
    }
    run += logs[i] - mean;
  }
  return start;
}

std::vector<double> orbit_logs(const Weight& w, const PeriodicOrbit& orbit) {
  std::vector<double> logs;
  for (const auto& p : orbit.points) logs.push_back(std::log(w.modulus(Angle(p))));
  return logs;
}

Angle top_anchor(const WcoSpec& spec, const PeriodicOrbit& orbit) {
  return Angle(orbit.points[cyclic_start(orbit_logs(spec.weight, orbit))]);
}

}  // namespace

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Lemma1Point: return "Lemma1Point";
    case CertificateKind::Corollary1Orbit: return "Corollary1Orbit";
    case CertificateKind::Lemma3Fiber: return "Lemma3Fiber";
    case CertificateKind::RejectionTree: return "RejectionTree";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept: return "ACCEPT";
    case Verdict::Reject: return "REJECT";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "?";
}

CircleSystem CircleSystem::model(const WcoSpec& spec) {
  CircleSystem s;
  s.degree = spec.degree;
  const int d = spec.degree;
  s.forward = [d](const Angle& t) { return t.times(d); };
  s.preimages = [d](const Angle& t) { return wco::preimages(t, d); };
  s.modulus = [w = spec.weight](const Angle& t) { return w.modulus(t); };
  return s;
}

CircleSystem CircleSystem::blaschke(const BlaschkeProduct& b, const Weight& w) {
  CircleSystem s;
  s.degree = b.degree();
  s.forward = [b](const Angle& t) { return Angle::from_double(b.circle_map(t.to_double())); };
  auto table = std::make_shared<LiftTable>(b);
  s.preimages = [table](const Angle& t) { return table->preimages(t.to_double()); };
  s.modulus = [w](const Angle& t) { return w.modulus(t.to_double()); };
  return s;
}

Certificate lemma1_criterion(const CircleSystem& sys, double lambda_abs, const Angle& k, int depth,
                             const TreeSearchOptions& opts) {
  if (!(lambda_abs > 0.0)) fail(ErrorCode::InvalidArgument, "lambda must be positive");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  if (std::pow(static_cast<double>(sys.degree), depth) * depth > opts.node_cap) {
    fail(ErrorCode::DepthExceeded, "preimage tree exceeds the node cap at depth " +
                                       std::to_string(depth));
  }
  const double log_lambda = std::log(lambda_abs);
  auto log_w = [&](const Angle& a) {
    const double m = sys.modulus(a);
    return m <= opts.zero_tol ? -kInf : std::log(m);
  };
  auto violates = [&](double lhs, double rhs) {
    if (lhs == -kInf) return false;
    if (rhs == -kInf) return true;
    return lhs - rhs > opts.log_tol * (1.0 + std::abs(lhs) + std::abs(rhs));
  };

  Certificate cert;
  cert.radius = lambda_abs;
  cert.anchor = k;
  cert.depth = depth;
  auto reject = [&](const Angle& e, int m, int n, double lhs, double rhs) {
    cert.kind = CertificateKind::RejectionTree;
    cert.violation = ViolationTriple{e, m, n, lhs, rhs};
    cert.margin = rhs - lhs;
    return cert;
  };

  std::vector<Angle> xs{k};
  std::vector<double> rhs{0.0};
  for (int n = 1; n <= depth; ++n) {
    const double lw = log_w(xs.back());
    rhs.push_back(rhs.back() == -kInf || lw == -kInf ? -kInf : rhs.back() + lw - log_lambda);
    xs.push_back(sys.forward(xs.back()));
  }
  double margin = kInf;
  // m = 0: e is phi^n(k) itself
  for (int n = 0; n <= depth; ++n) {
    if (violates(0.0, rhs[n])) return reject(xs[n], 0, n, 0.0, rhs[n]);
    margin = std::min(margin, rhs[n]);
  }
  // level maxima of the preimage tree, shared between equal targets
  struct LevelMax {
    double value;
    Angle arg;
  };
  std::vector<std::pair<Angle, std::vector<LevelMax>>> cache;
  for (int n = 0; n <= depth; ++n) {
    const std::vector<LevelMax>* levels = nullptr;
    for (const auto& [x, lv] : cache)
      if (x.is_exact() && x == xs[n]) levels = &lv;
    std::vector<LevelMax> fresh;
    if (levels == nullptr) {
      std::vector<std::pair<Angle, double>> current{{xs[n], 0.0}};
      for (int m = 1; m <= depth && !current.empty(); ++m) {
        std::vector<std::pair<Angle, double>> next;
        LevelMax best{-kInf, xs[n]};
        for (const auto& [p, v] : current)
          for (const auto& e : sys.preimages(p)) {
            const double lw = log_w(e);
            if (lw == -kInf) continue;  // a vanishing branch stays zero
            const double val = v + lw - log_lambda;
            next.emplace_back(e, val);
            if (val > best.value) best = {val, e};
          }
        fresh.push_back(best);
        current = std::move(next);
      }
      cache.emplace_back(xs[n], fresh);
      levels = &cache.back().second;
    }
    for (std::size_t i = 0; i < levels->size(); ++i) {
      const auto& lm = (*levels)[i];
      const int m = static_cast<int>(i) + 1;
      if (violates(lm.value, rhs[n])) return reject(lm.arg, m, n, lm.value, rhs[n]);
      if (lm.value != -kInf && rhs[n] != -kInf) margin = std::min(margin, rhs[n] - lm.value);
    }
  }
  cert.kind = CertificateKind::Lemma1Point;
  // slack inside log_tol is rounding, reported as equality
  cert.margin = std::max(margin, 0.0);
  return cert;
}

Certificate lemma1_criterion(const WcoSpec& spec, double lambda_abs, const Angle& k, int depth,
                             const TreeSearchOptions& opts) {
  return lemma1_criterion(CircleSystem::model(spec), lambda_abs, k, depth, opts);
}

bool violation_holds(const CircleSystem& sys, double lambda_abs, const Angle& k,
                     const ViolationTriple& v, double log_tol) {
  Angle a = v.e, b = k;
  double lhs = 0.0, rhs = 0.0;
  const double ll = std::log(lambda_abs);
  for (int i = 0; i < v.m; ++i) {
    lhs += std::log(sys.modulus(a)) - ll;
    a = sys.forward(a);
  }
  for (int i = 0; i < v.n; ++i) {
    rhs += std::log(sys.modulus(b)) - ll;
    b = sys.forward(b);
  }
  if (!same_point(a, b)) return false;
  if (std::isinf(rhs) && rhs < 0) return !(std::isinf(lhs) && lhs < 0);
  return lhs - rhs > log_tol * (1.0 + std::abs(lhs) + std::abs(rhs));
}

std::optional<Certificate> corollary1_certificate(const WcoSpec& spec, double lambda_abs,
                                                  const PeriodicOrbit& orbit,
                                                  const OrbitCertOptions& opts) {
  if (orbit.degree != spec.degree || orbit.points.empty()) {
    fail(ErrorCode::InvalidArgument, "orbit does not belong to the model degree");
  }
  const auto logs = orbit_logs(spec.weight, orbit);
  for (double l : logs)
    if (!std::isfinite(l)) return std::nullopt;
  const double mean_log = std::accumulate(logs.begin(), logs.end(), 0.0) / logs.size();
  const double mean = std::exp(mean_log);
  if (std::abs(mean - lambda_abs) > opts.lambda_rel_tol * lambda_abs) return std::nullopt;
  for (const auto& p : orbit.points)
    for (const auto& e : preimages(Angle(p), spec.degree)) {
      if (orbit.contains(e.exact())) continue;
      if (spec.weight.modulus(e) > opts.zero_tol) return std::nullopt;
    }
  const std::size_t start = cyclic_start(logs);
  double run = 0.0, margin = kInf;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    run += logs[(start + i) % logs.size()] - mean_log;
    margin = std::min(margin, run);
  }
  Certificate c;
  c.kind = CertificateKind::Corollary1Orbit;
  c.radius = mean;
  c.anchor = Angle(orbit.points[start]);
  c.orbit = orbit;
  c.depth = orbit.period;
  c.margin = std::max(margin, 0.0);
  return c;
}

std::optional<Certificate> lemma3_zero_check(const WcoSpec& spec, int scan_grid, double zero_tol) {
  const int d = spec.degree;
  for (const auto& z : spec.weight.circle_zeros(zero_tol, scan_grid)) {
    const Angle k = z.times(d);
    double worst = 0.0;
    for (const auto& e : preimages(k, d)) worst = std::max(worst, spec.weight.modulus(e));
    if (worst <= zero_tol) {
      Certificate c;
      c.kind = CertificateKind::Lemma3Fiber;
      c.radius = 0.0;
      c.anchor = k;
      c.depth = 1;
      c.margin = zero_tol - worst;
      return c;
    }
  }
  return std::nullopt;
}

ReachabilityReport backward_reachability(int d, const std::vector<Angle>& zeros, int depth) {
  ReachabilityReport rep;
  rep.depth = depth;
  // forward orbits of the zeros: any point whose backward tree meets a zero
  std::vector<Angle> bad;
  for (const auto& z : zeros) {
    Angle x = z;
    bool closed = false;
    for (int step = 0; step <= depth; ++step) {
      if (contains_point(bad, x)) {
        closed = true;
        break;
      }
      bad.push_back(x);
      x = x.times(d);
    }
    if (!closed && !contains_point(bad, x)) rep.exact = false;
    if (!z.is_exact()) rep.exact = false;
  }
  // points outside the set reach a clean point in one step, so only bad
  // points need a search
  for (const auto& t0 : bad) {
    std::vector<Angle> frontier{t0}, seen{t0};
    bool found = false;
    for (int level = 0; level < depth && !found && !frontier.empty(); ++level) {
      std::vector<Angle> next;
      for (const auto& t : frontier) {
        for (const auto& e : preimages(t, d)) {
          if (contains_point(zeros, e)) continue;
          if (!contains_point(bad, e)) {
            found = true;
            break;
          }
          if (!contains_point(seen, e)) {
            seen.push_back(e);
            next.push_back(e);
          }
        }
        if (found) break;
      }
      frontier = std::move(next);
    }
    if (!found) rep.blocked.push_back(t0);
  }
  rep.holds = rep.blocked.empty();
  return rep;
}

std::vector<Angle> rejection_anchors(int max_den, const std::vector<Angle>& extra) {
  std::vector<Angle> out;
  for (int q = 1; q <= max_den; ++q)
    for (int p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) out.emplace_back(Rational(p, q));
  for (const auto& a : extra)
    if (!contains_point(out, a)) out.push_back(a);
  return out;
}

RadiusVerdict probe_radius(const CircleSystem& sys, double radius, const std::vector<Angle>& anchors,
                           int depth, double upper, const TreeSearchOptions& opts) {
  RadiusVerdict rv;
  rv.radius = radius;
  rv.depth = depth;
  if (radius > upper * (1.0 + 1e-9)) {
    Certificate c;
    c.kind = CertificateKind::RejectionTree;
    c.radius = radius;
    c.note = "above the spectral radius estimate";
    rv.verdict = Verdict::Reject;
    rv.certificate = c;
    rv.depth = 0;
    return rv;
  }
  std::optional<Certificate> first;
  for (const auto& a : anchors) {
    auto c = lemma1_criterion(sys, radius, a, depth, opts);
    if (c.accepts()) {
      rv.verdict = Verdict::Undecided;
      return rv;
    }
    if (!first) first = c;
  }
  rv.verdict = anchors.empty() ? Verdict::Undecided : Verdict::Reject;
  rv.certificate = first;
  return rv;
}

namespace {

SpectrumResult assemble_impl(const WcoSpec& spec, const SpectrumOptions& opts, bool probe) {
  spec.validate();
  if (spec.original_blaschke) {
    const auto kind = classify(*spec.original_blaschke).kind;
    if (kind == DynamicsKind::Hyperbolic || kind == DynamicsKind::SingleParabolic) {
      fail(ErrorCode::Unsupported, "use the annulus routine for boundary-attracting products");
    }
  }
  const int d = spec.degree;
  const int max_period = opts.max_period > 0 ? opts.max_period : default_max_period(d);
  const auto est = spectral_radius(spec, max_period, opts.upper_grid);
  const CircleSystem sys = CircleSystem::model(spec);
  const TreeSearchOptions l1{opts.zero_tol};

  SpectrumResult res;
  res.rho = est.rho_lower;
  res.rho_upper_est = est.rho_grid_upper;
  res.full_spectrum_radius = est.rho_lower;
  res.lsf_equals_spectrum = true;

  auto try_top = [&]() -> std::optional<Certificate> {
    if (!(est.rho_lower > 0.0)) return std::nullopt;
    try {
      auto c = lemma1_criterion(sys, est.rho_lower, top_anchor(spec, est.argmax_orbit), opts.depth, l1);
      if (c.accepts()) return c;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DepthExceeded) throw;
    }
    return std::nullopt;
  };

  const auto zeros = spec.weight.circle_zeros(opts.zero_tol);
  if (zeros.empty()) res.path = "no-circle-zeros";
  else if (backward_reachability(d, zeros, opts.depth).holds) res.path = "reachability";
  if (!res.path.empty()) {
    res.usf_radii = {est.rho_lower};
    if (auto c = try_top()) res.certificates.push_back(*c);
    return res;
  }

  res.path = "scan";
  const OrbitCertOptions c1{opts.zero_tol, opts.lambda_rel_tol};
  auto known = [&](double r) {
    return std::any_of(res.certificates.begin(), res.certificates.end(), [&](const Certificate& c) {
      return std::abs(c.radius - r) <= 1e-12 * std::max(1.0, r);
    });
  };
  for (const auto& orbit : periodic_orbits(d, max_period)) {
    const double g = orbit_geometric_mean(spec.weight, orbit);
    if (g == 0.0 || known(g)) continue;
    if (auto c = corollary1_certificate(spec, g, orbit, c1)) res.certificates.push_back(*c);
  }
  // the top circle also gets a point certificate at the maximizing orbit
  if (auto c = try_top()) res.certificates.push_back(*c);
  std::stable_sort(res.certificates.begin(), res.certificates.end(),
                   [](const Certificate& a, const Certificate& b) { return a.radius < b.radius; });
  for (const auto& c : res.certificates)
    if (res.usf_radii.empty() || std::abs(res.usf_radii.back() - c.radius) > 1e-12 * std::max(1.0, c.radius))
      res.usf_radii.push_back(c.radius);
  if (auto c = lemma3_zero_check(spec, 1 << 14, opts.zero_tol)) {
    res.includes_zero = true;
    res.certificates.insert(res.certificates.begin(), *c);
  }

  if (probe) {
    std::vector<double> radii = opts.extra_radii;
    if (!res.usf_radii.empty()) {
      radii.push_back(res.usf_radii.front() / 2);
      for (std::size_t i = 0; i + 1 < res.usf_radii.size(); ++i)
        radii.push_back(0.5 * (res.usf_radii[i] + res.usf_radii[i + 1]));
    }
    std::sort(radii.begin(), radii.end());
    const auto anchors = rejection_anchors(opts.anchor_max_den, zeros);
    for (double r : radii) {
      if (!(r > 0.0)) continue;
      res.probes.push_back(probe_radius(sys, r, anchors, opts.depth, est.rho_grid_upper, l1));
    }
  }
  return res;
}

}  // namespace

SpectrumResult assemble_spectrum(const WcoSpec& spec, const SpectrumOptions& opts) {
  return assemble_impl(spec, opts, true);
}

ScanReport conjecture1_scan(const WcoSpec& spec, const std::vector<double>& radii, int depth,
                            const SpectrumOptions& opts) {
  SpectrumOptions o = opts;
  o.depth = depth;
  const auto res = assemble_impl(spec, o, false);
  ScanReport rep;
  rep.accepted = res.usf_radii;
  const auto zeros = spec.weight.circle_zeros(o.zero_tol);
  const auto anchors = rejection_anchors(o.anchor_max_den, zeros);
  const CircleSystem sys = CircleSystem::model(spec);
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  for (double r : sorted) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "scan radii must be positive");
    const auto hit = std::find_if(res.usf_radii.begin(), res.usf_radii.end(), [&](double a) {
      return std::abs(a - r) <= o.lambda_rel_tol * a;
    });
    if (hit != res.usf_radii.end()) {
      RadiusVerdict rv;
      rv.radius = r;
      rv.verdict = Verdict::Accept;
      rv.depth = depth;
      for (const auto& c : res.certificates)
        if (c.accepts() && c.radius == *hit) rv.certificate = c;
      rep.rows.push_back(rv);
      continue;
    }
    rep.rows.push_back(probe_radius(sys, r, anchors, depth, res.rho_upper_est, {o.zero_tol}));
  }
  return rep;
}

std::string ScanReport::csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "radius,verdict,certificate_kind,depth,margin\n";
  for (const auto& r : rows) {
    os << r.radius << ',' << to_string(r.verdict) << ',';
    if (r.certificate) os << to_string(r.certificate->kind);
    os << ',' << r.depth << ',';
    if (r.certificate && std::isfinite(r.certificate->margin)) os << r.certificate->margin;
    os << '\n';
  }
  return os.str();
}

}  // namespace wco
