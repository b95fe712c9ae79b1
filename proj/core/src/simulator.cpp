#include "pxlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pxlab/error.hpp"
#include "pxlab/function_spaces.hpp"
#include "pxlab/linear_solver.hpp"

namespace pxlab {
namespace {

constexpr double kRateDelta = 1e-12;
constexpr double kFlush = 1e-14;
constexpr double kDtFloor = 1e-15;

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l2_sq(const ScalarField& u) {
  double s = 0.0;
  for (double v : u.values) s += v * v;
  return s * u.grid.cell_volume();
}

bool all_finite(const ScalarField& u) {
  return std::all_of(u.values.begin(), u.values.end(), [](double v) { return std::isfinite(v); });
}

void flush(ScalarField& u) {
  for (double& v : u.values)
    if (std::abs(v) < kFlush) v = 0.0;
}

Scheme resolve(Scheme s, const ExponentSamples& p) {
  if (s != Scheme::automatic) return s;
  return p.p_minus < 2.0 ? Scheme::semi_implicit : Scheme::explicit_euler;
}

// Largest |r - 1| |u|^(r-2) over cells whose magnitude is at least `floor`.
double rate_bound(const ScalarField& u, double r, double floor) {
  double m = 0.0;
  for (double v : u.values) {
    const double a = std::abs(v);
    if (r < 2.0 && (a == 0.0 || a < floor)) continue;
    m = std::max(m, std::abs(r - 1.0) * std::pow(a, r - 2.0));
  }
  return m;
}

}  // namespace

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::blow_up: return "blow_up";
    case EventKind::extinction: return "extinction";
    default: return "none";
  }
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::explicit_euler: return "explicit";
    case Scheme::semi_implicit: return "semi_implicit";
    default: return "auto";
  }
}

ScalarField make_initial(const Grid& grid, const InitialSpec& spec) {
  if (!std::isfinite(spec.amplitude)) throw InvalidArgument("initial amplitude must be finite");
  const double a = spec.amplitude;
  const int n = grid.dim;
  const auto& L = grid.extent;
  if (spec.profile == "zero") return ScalarField(grid);
  if (spec.profile == "constant") return ScalarField(grid, std::vector<double>(grid.size(), a));
  if (spec.profile == "sine") {
    return ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
      double v = a;
      for (int d = 0; d < n; ++d) v *= std::sin(std::numbers::pi * x[d] / L[d]);
      return v;
    });
  }
  if (spec.profile == "parabola") {
    return ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
      double v = a;
      for (int d = 0; d < n; ++d) v *= 4.0 * x[d] * (L[d] - x[d]) / (L[d] * L[d]);
      return v;
    });
  }
  if (spec.profile == "sextic") {
    // Flat to fifth order at the crest, so div(|grad u|^(p-2) grad u) stays bounded for p > 1.2.
    return ScalarField::from_function(grid, [&](const std::array<double, 3>& x) {
      double v = a;
      for (int d = 0; d < n; ++d) v *= 1.0 - std::pow(2.0 * x[d] / L[d] - 1.0, 6);
      return v;
    });
  }
  throw InvalidArgument("unknown initial profile '" + spec.profile + "'");
}

void SimConfig::validate() const {
  if (!(r > 1.0) || !std::isfinite(r)) throw InvalidArgument("r must be a finite number > 1");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be positive");
  if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw InvalidArgument("dt_safety must lie in (0, 1]");
  if (dt_max < 0.0) throw InvalidArgument("dt_max must be non-negative");
  if (!(eps_reg >= 0.0)) throw InvalidArgument("eps_reg must be non-negative");
  if (!(blow_up_threshold > 0.0) || !(extinction_threshold > 0.0))
    throw InvalidArgument("thresholds must be positive");
  if (stride < 1) throw InvalidArgument("stride must be >= 1");
  if (output_interval < 0.0) throw InvalidArgument("output_interval must be non-negative");
  if (!(change_limit > 0.0)) throw InvalidArgument("change_limit must be positive");
  if (!std::isfinite(initial.amplitude)) throw InvalidArgument("initial amplitude must be finite");
  if (initial_field && !(initial_field->grid == grid))
    throw InvalidArgument("initial field lives on a different grid");
  if (source.kind == SourceKind::barrier_auxiliary) {
    if (!(source.epsilon > 0.0) || !(source.lambda1 > 0.0))
      throw InvalidArgument("barrier source needs epsilon > 0 and lambda1 > 0");
    if (source.phi.size() != grid.size()) throw InvalidArgument("barrier source Phi has the wrong size");
  }
}

EnergyRecord diagnostics(const ScalarField& u, const ExponentSamples& p, double r, double E1,
                         bool with_source) {
  const auto g = gradient_faces(u);
  EnergyRecord rec;
  rec.grad_modular = gradient_modular(g, p);
  double ur = 0.0;
  for (double v : u.values) ur += std::pow(std::abs(v), r);
  ur *= u.grid.cell_volume();
  rec.E = gradient_energy(g, p) - (with_source ? ur / r : 0.0);
  rec.G_half = 0.5 * l2_sq(u);
  rec.G_sq = 2.0 * rec.G_half;
  rec.H = E1 - rec.E;
  rec.lr = std::pow(ur, 1.0 / r);
  rec.linf = sup_abs(u.values);
  return rec;
}

Model::Model(const SimConfig& config)
    : config_(config), p_(sample(config.exponent, config.grid)), scheme_(resolve(config.scheme, p_)) {
  config_.validate();
}

ScalarField Model::source(const ScalarField& u) const {
  const double r = config_.r;
  const auto& s = config_.source;
  ScalarField out(u.grid);
  switch (s.kind) {
    case SourceKind::none: break;
    case SourceKind::standard: out = source_term(u, r); break;
    case SourceKind::barrier_auxiliary:
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = u[i];
        if (v == 0.0) continue;
        const double a = std::abs(v);
        out[i] = s.lambda1 * std::pow(a, r - 1.0) * v / (s.epsilon * s.phi[i] + s.lambda1 * a);
      }
      break;
  }
  return out;
}

ScalarField Model::rate(const ScalarField& u) const {
  ScalarField out = px_laplacian(u, p_, config_.eps_reg);
  if (config_.source.kind != SourceKind::none) {
    const auto f = source(u);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i];
  }
  return out;
}

double Model::source_rate_bound(const ScalarField& u) const {
  if (config_.source.kind == SourceKind::none) return 0.0;
  const double floor = config_.r < 2.0 ? 1e-2 * sup_abs(u.values) : 0.0;
  return rate_bound(u, config_.r, floor);
}

ScalarField Model::explicit_step(const ScalarField& u, double dt) const {
  const auto k = rate(u);
  ScalarField out(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + dt * k[i];
  return out;
}

ScalarField Model::semi_implicit_step(const ScalarField& u, double dt) const {
  const auto g = gradient_faces(u);
  const auto d = face_diffusivity(g, p_, config_.eps_reg);
  for (int a = 0; a < u.grid.dim; ++a)
    for (double v : d[a])
      if (!std::isfinite(v)) throw NumericalError("non-finite diffusivity");
  const LaggedOperator op(u.grid, d);
  ScalarField rhs = u;
  if (config_.source.kind != SourceKind::none) {
    const auto f = source(u);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += dt * f[i];
  }
  return op.solve(1.0, dt, rhs);
}

namespace {

double cfl_dt(const ScalarField& u, const ExponentSamples& p, double rmax, double safety, double eps_reg) {
  if (!(safety > 0.0 && safety <= 1.0)) throw InvalidArgument("safety must lie in (0, 1]");
  const auto d = face_diffusivity(gradient_faces(u), p, eps_reg);
  double dmax = 0.0;
  for (int a = 0; a < u.grid.dim; ++a)
    for (double v : d[a]) dmax = std::max(dmax, v);
  if (!std::isfinite(dmax) || !std::isfinite(rmax)) throw NumericalError("stable_dt: non-finite D_max or R_max");
  const double h = u.grid.min_spacing();
  const double diff = dmax > 0.0 ? h * h / (2.0 * u.grid.dim * dmax) : kInfinity;
  return safety * std::min(diff, 1.0 / (rmax + kRateDelta));
}

}  // namespace

double stable_dt(const ScalarField& u, const ExponentSamples& p, double r, double safety, double eps_reg) {
  return cfl_dt(u, p, rate_bound(u, r, 0.0), safety, eps_reg);
}

ScalarField step(const ScalarField& u, const SimConfig& config, double dt) {
  return Model(config).explicit_step(u, dt);
}

SimResult run(const SimConfig& config) {
  const Model model(config);
  const auto& cfg = model.config();
  const auto& p = model.exponent();
  SimResult res;
  res.scheme = model.scheme();

  ScalarField u = cfg.initial_field ? *cfg.initial_field : make_initial(cfg.grid, cfg.initial);
  flush(u);
  res.initial_field = u;
  const double u0_l2 = std::sqrt(l2_sq(u));
  const double u0_inf = sup_abs(u.values);
  const double dt_cap = cfg.dt_max > 0.0 ? cfg.dt_max : cfg.t_max / 100.0;
  const bool semi = res.scheme == Scheme::semi_implicit;

  auto record = [&](double t, double utsq, double dissipated, double dt) {
    auto rec = diagnostics(u, p, cfg.r, cfg.E1, cfg.source.kind != SourceKind::none);
    rec.t = t;
    rec.ut_l2sq = utsq;
    rec.dissipated = dissipated;
    rec.dt = dt;
    res.records.push_back(rec);
    if (cfg.keep_snapshots) res.snapshots.push_back(u);
  };

  double rate_inf = 0.0;
  double utsq = 0.0;
  try {
    const auto k0 = model.rate(u);
    rate_inf = sup_abs(k0.values);
    utsq = l2_sq(k0);
  } catch (const NumericalError&) {
    rate_inf = kInfinity;
    utsq = kInfinity;
  }
  record(0.0, utsq, 0.0, 0.0);

  double t = 0.0;
  double dissipated = 0.0;
  long landing = 0;
  const double interval = cfg.output_interval;
  while (t < cfg.t_max) {
    if (res.steps >= cfg.max_steps) throw NumericalError("run exceeded max_steps");
    double dt;
    if (semi) {
      /// A sublinear explicit source cannot destabilize the lagged step; the change limit governs.
      const double rmax = cfg.r < 2.0 ? 0.0 : model.source_rate_bound(u);
      const double scale = std::max(sup_abs(u.values), 1e-3 * u0_inf);
      const double change = rate_inf > 0.0 ? cfg.change_limit * scale / rate_inf : kInfinity;
      dt = cfg.dt_safety * std::min({1.0 / (rmax + kRateDelta), dt_cap, change});
    } else {
      const double rmax = cfg.source.kind == SourceKind::none ? 0.0 : rate_bound(u, cfg.r, 0.0);
      const double sdt = cfl_dt(u, p, rmax, cfg.dt_safety, cfg.eps_reg);
      dt = std::min(sdt, cfg.dt_safety * dt_cap);
    }
    bool landed = false;
    double t_next = t + dt;
    if (interval > 0.0) {
      const double mark = (landing + 1) * interval;
      if (t_next >= mark - 1e-12 * interval) {
        t_next = mark;
        landed = true;
      }
    }
    if (t_next >= cfg.t_max * (1.0 - 1e-14)) {
      t_next = cfg.t_max;
      landed = interval > 0.0;
    }
    dt = t_next - t;
    if (!(dt >= kDtFloor)) {
      std::ostringstream os;
      os << "time step underflow: dt=" << dt << " at t=" << t << " after " << res.steps
         << " steps, |u|_inf=" << sup_abs(u.values) << ", rate=" << rate_inf;
      throw NumericalError(os.str());
    }

    ScalarField next;
    bool failed = false;
    try {
      next = semi ? model.semi_implicit_step(u, dt) : model.explicit_step(u, dt);
      failed = !all_finite(next);
    } catch (const NumericalError&) {
      failed = true;
    }
    if (failed) {
      res.event = {EventKind::blow_up, t, dt};
      break;
    }
    flush(next);

    double sq = 0.0;
    double inf = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double d = (next[i] - u[i]) / dt;
      sq += d * d;
      inf = std::max(inf, std::abs(d));
    }
    utsq = sq * u.grid.cell_volume();
    rate_inf = inf;
    dissipated += dt * utsq;
    u = std::move(next);
    t = t_next;
    if (landed && interval > 0.0) ++landing;
    ++res.steps;
    res.dt_history.push_back(dt);

    const double linf = sup_abs(u.values);
    if (linf >= cfg.blow_up_threshold) res.event = {EventKind::blow_up, t, dt};
    else if (u0_l2 > 0.0 && std::sqrt(l2_sq(u)) <= cfg.extinction_threshold * u0_l2)
      res.event = {EventKind::extinction, t, dt};

    const bool done = res.event.kind != EventKind::none || t >= cfg.t_max;
    const bool due = interval > 0.0 ? landed : res.steps % static_cast<std::size_t>(cfg.stride) == 0;
    if (due || done) record(t, utsq, dissipated, dt);
    if (done) break;
  }
  res.final_field = u;
  return res;
}

}  // namespace pxlab
