#include "wavelab/analysis.hpp"

#include <cmath>

#include "wavelab/parallel.hpp"

namespace wavelab {

std::string_view to_string(Quantity q) { return q == Quantity::energy ? "energy" : "l2"; }

Quantity quantity_from_string(std::string_view name) {
  if (name == "energy") return Quantity::energy;
  if (name == "l2") return Quantity::l2;
  throw InvalidArgument("unknown quantity '" + std::string(name) + "' (expected energy or l2)");
}

// ---------------------------------------------------------------------------
// Decay fits

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& value, double t_lo, double t_hi) {
  if (t.size() != value.size()) throw InvalidArgument("fit_decay: t and value lengths differ");
  if (!(t_lo >= 1.0 && t_hi > t_lo)) throw InvalidArgument("fit_decay: window must satisfy t_hi > t_lo >= 1");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(value[i] > 0.0)) throw InvalidArgument("fit_decay: nonpositive sample in the window");
    x.push_back(std::log1p(t[i]));
    y.push_back(std::log(value[i]));
  }
  if (x.size() < 10) throw InvalidArgument("fit_decay: fewer than 10 samples in the window");

  const Eigen::Map<const Eigen::ArrayXd> X(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Eigen::ArrayXd> Y(y.data(), static_cast<Eigen::Index>(y.size()));
  const double xm = X.mean(), ym = Y.mean();
  const double sxx = (X - xm).square().sum();
  const double sxy = ((X - xm) * (Y - ym)).sum();
  const double syy = (Y - ym).square().sum();

  DecayFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.samples = static_cast<long>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  const double sse = (Y - fit.intercept - fit.slope * X).square().sum();
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

DecayFit fit_decay(const RunHistory& h, Quantity quantity, double t_lo, double t_hi) {
  std::vector<double> t, v;
  for (const EnergyRecord& r : h.records) {
    t.push_back(r.t);
    v.push_back(quantity == Quantity::energy ? r.E : r.l2_sq);
  }
  return fit_decay(t, v, t_lo, t_hi);
}

// ---------------------------------------------------------------------------
// Bound certificates

BoundCertificate bound_certificate(const RunHistory& h, Quantity quantity) {
  const double constant = quantity == Quantity::energy ? h.seeds.I2_sq : h.seeds.I3_sq;
  BoundCertificate cert;
  cert.quantity = quantity;
  double T = 0.0;
  for (const EnergyRecord& r : h.records) {
    const double w = 1.0 + r.t;
    const double numerator = quantity == Quantity::energy ? w * w * r.E : w * r.l2_sq;
    if (!(constant > 0.0) && numerator != 0.0)
      throw InvalidArgument("bound_certificate: I-constant is not positive for nonzero data");
    const double ratio = constant > 0.0 ? numerator / constant : 0.0;
    cert.t.push_back(r.t);
    cert.ratio.push_back(ratio);
    T = std::max(T, r.t);
    if (r.t >= 1.0 && ratio > cert.sup_ratio) {
      cert.sup_ratio = ratio;
      cert.t_sup = r.t;
    }
  }
  cert.pass = cert.sup_ratio == 0.0 || cert.t_sup <= 0.5 * T;
  return cert;
}

bool sup_stable(const BoundCertificate& coarse, const BoundCertificate& fine, double tolerance) {
  if (coarse.sup_ratio == 0.0) return fine.sup_ratio == 0.0;
  return std::abs(fine.sup_ratio / coarse.sup_ratio - 1.0) <= tolerance;
}

// ---------------------------------------------------------------------------
// m-convergence

namespace {

class SnapshotObserver : public StepObserver {
 public:
  explicit SnapshotObserver(long every) : every_(every) {}
  void on_step(const StepView& view) override {
    if (view.state.k % every_ == 0 || view.final) {
      snapshots.push_back(view.state.u_curr);
      max_norm = std::max(max_norm, std::sqrt(volume_inner_product(view.state.u_curr, view.state.u_curr)));
    }
  }
  std::vector<ScalarField> snapshots;
  double max_norm = 0.0;

 private:
  long every_;
};

class DistanceObserver : public StepObserver {
 public:
  DistanceObserver(const std::vector<ScalarField>& reference, long every) : reference_(reference), every_(every) {}
  void on_step(const StepView& view) override {
    if (view.state.k % every_ != 0 && !view.final) return;
    if (index_ >= reference_.size()) throw InvalidArgument("m_convergence_study: run lengths differ");
    const ScalarField& ref = reference_[index_++];
    ref.require_same_grid(view.state.u_curr);
    ScalarField diff = view.state.u_curr;
    diff -= ref;
    sup = std::max(sup, std::sqrt(volume_inner_product(diff, diff)));
  }
  double sup = 0.0;

 private:
  const std::vector<ScalarField>& reference_;
  long every_;
  std::size_t index_ = 0;
};

double lemma21_sup(const RunHistory& h) {
  return h.seeds.I0_sq > 0.0 ? lemma21_certificate(h).sup_ratio : 0.0;
}

}  // namespace

MConvergenceStudy m_convergence_study(const Scenario& sc, const std::vector<double>& ms, int workers) {
  if (ms.empty()) throw InvalidArgument("m_convergence_study: empty m list");
  for (std::size_t i = 1; i < ms.size(); ++i)
    if (!(ms[i] > ms[i - 1])) throw InvalidArgument("m_convergence_study: ms must be strictly increasing");
  sc.damping.validate();

  RunOptions opt;
  opt.T = sc.T;
  opt.record_every = sc.record_every;

  SnapshotObserver reference(sc.record_every);
  MConvergenceStudy study;
  {
    WaveState state = init_state(sc.data, Damping{sc.damping, std::nullopt}, sc.dt);
    RunOptions ref_opt = opt;
    ref_opt.observers = {&reference};
    study.lemma21_sup_reference = lemma21_sup(run_until(state, sc.data, sc.seeds, ref_opt));
  }

  study.rows.resize(ms.size());
  parallel_for(ms.size(), workers, [&](std::size_t i) {
    CutoffDamping{sc.damping, ms[i]}.validate();
    DistanceObserver distance(reference.snapshots, sc.record_every);
    WaveState state = init_state(sc.data, Damping{sc.damping, ms[i]}, sc.dt);
    RunOptions run_opt = opt;
    run_opt.observers = {&distance};
    const RunHistory h = run_until(state, sc.data, sc.seeds, run_opt);
    const double scale = reference.max_norm;
    study.rows[i] = {ms[i], scale > 0.0 ? distance.sup / scale : distance.sup, lemma21_sup(h)};
  });

  study.nonincreasing = true;
  study.strictly_decreasing = true;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    const double prev = study.rows[i - 1].sup_error, cur = study.rows[i].sup_error;
    study.nonincreasing = study.nonincreasing && cur <= prev;
    study.strictly_decreasing = study.strictly_decreasing && cur < prev;
  }
  return study;
}

UniformityReport uniformity_check(const std::vector<double>& sup_ratios) {
  if (sup_ratios.size() < 3) throw InvalidArgument("uniformity_check: needs at least three m-values");
  UniformityReport rep;
  rep.max = *std::max_element(sup_ratios.begin(), sup_ratios.end());
  rep.min = *std::min_element(sup_ratios.begin(), sup_ratios.end());
  rep.pass = rep.max <= 1.25 * rep.min;
  return rep;
}

}  // namespace wavelab
