// SPDX-License-Identifier: Apache-2.0
//
// risalign - measurement-only phase alignment for RIS energy harvesting
// Copyright (C) 2026 risalign contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risalign/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "risalign/errors.hpp"
#include "risalign/estimation.hpp"

namespace risalign {
namespace {

// Noiseless power of a configuration that changes a few elements at a time.
class PowerTracker {
 public:
  explicit PowerTracker(const ChannelRealization& channel)
      : gains_(channel.gains().begin(), channel.gains().end()),
        phases_(gains_.size(), 0.0),
        terms_(gains_) {
    resum();
  }

  double operator()(const PhaseVector& p) {
    for (std::size_t n = 0; n < gains_.size(); ++n) {
      if (p[n] == phases_[n]) continue;
      phases_[n] = p[n];
      const Complex t = gains_[n] * std::polar(1.0, p[n]);
      sum_ += t - terms_[n];
      terms_[n] = t;
      if (++updates_ >= 4096) resum();
    }
    return std::norm(sum_);
  }

 private:
  void resum() {
    sum_ = {};
    for (const Complex& t : terms_) sum_ += t;
    updates_ = 0;
  }

  std::vector<Complex> gains_;
  std::vector<double> phases_;
  std::vector<Complex> terms_;
  Complex sum_{};
  std::size_t updates_ = 0;
};

double sigma_for_iid(const Snr& snr) { return snr ? noise_sigma_for_unit_gain_snr(db_to_linear(*snr)) : 0.0; }

PhaseVector random_phases(std::size_t n, std::uint64_t seed, std::size_t trial) {
  RandomStream s(seed, trial, StreamTag::initial_phases);
  std::vector<double> v(n);
  for (double& p : v) p = s.uniform_phase();
  return PhaseVector(std::move(v));
}

ChannelRealization iid_channel(std::size_t n, std::uint64_t seed, std::size_t trial, double sigma) {
  RandomStream s(seed, trial, StreamTag::channel);
  return generate_iid_channel(n, sigma, s);
}

TrialRecord run_method_impl(const std::string& method, const ChannelRealization& channel,
                            const AlignmentConfig& config, std::uint64_t seed, std::size_t trial, Snr snr_db,
                            bool with_curve) {
  RandomStream noise(seed, trial, StreamTag::noise);
  ChannelOracle oracle(channel, &noise);
  TrialRecord rec;
  rec.trial_index = trial;
  rec.seed = seed;
  rec.snr_db = snr_db;
  rec.method = method;

  const double denom = channel.max_power();
  if (!(denom > 0.0)) throw DomainError("NAP is undefined for an all-zero channel");
  Scorer scorer;
  PowerTracker tracker(channel);
  if (with_curve) {
    rec.curve.push_back({0, tracker(config.starting_phases()) / denom});
    scorer = [&tracker](const PhaseVector& p) { return tracker(p); };
  }

  AlignmentResult res;
  if (method == "random") {
    RandomStream proposals(seed, trial, StreamTag::proposals);
    res = random_benchmark(oracle, config, proposals, scorer);
  } else if (method == "proposed") {
    res = align(oracle, config, scorer);
  } else {
    throw ConfigurationError("unknown method '" + method + "'");
  }
  if (with_curve)
    for (const UpdateRecord& r : res.trace) rec.curve.push_back({r.measurement_count, *r.post_update_power / denom});
  rec.final_nap = nap(channel, res.phases);
  return rec;
}

std::vector<double> default_theta_grid() {
  std::vector<double> t(24);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = kTwoPi * static_cast<double>(i) / 24.0;
  return t;
}

std::string stat(const std::string& name) { return "stat=" + name; }

}  // namespace

double nap(const ChannelRealization& channel, const PhaseVector& phases) {
  if (phases.size() != channel.size())
    throw DimensionError("phase vector has " + std::to_string(phases.size()) + " entries for " +
                         std::to_string(channel.size()) + " elements");
  const double denom = channel.max_power();
  if (!(denom > 0.0)) throw DomainError("NAP is undefined for an all-zero channel");
  return received_power_noiseless(channel, phases).value / denom;
}

SampleStats summarize(std::span<const double> values) {
  SampleStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

const AggregatePoint& AggregateResult::at(std::uint64_t measurements) const {
  if (points.empty()) throw std::out_of_range("empty aggregate");
  auto it = std::upper_bound(points.begin(), points.end(), measurements,
                             [](std::uint64_t m, const AggregatePoint& p) { return m < p.measurements; });
  if (it == points.begin()) return points.front();
  return *std::prev(it);
}

std::vector<std::uint64_t> measurement_grid(std::uint64_t last, std::uint64_t step) {
  if (step == 0) throw std::invalid_argument("grid step must be positive");
  std::vector<std::uint64_t> g;
  for (std::uint64_t m = 0; m <= last; m += step) g.push_back(m);
  if (g.back() != last) g.push_back(last);
  return g;
}

std::vector<double> resample_locf(const std::vector<CurvePoint>& curve, const std::vector<std::uint64_t>& grid) {
  if (curve.empty()) throw std::invalid_argument("empty curve");
  std::vector<double> out(grid.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    while (k + 1 < curve.size() && curve[k + 1].measurements <= grid[i]) ++k;
    out[i] = curve[k].nap;
  }
  return out;
}

AggregateResult aggregate_curves(const std::vector<std::vector<double>>& per_trial,
                                 const std::vector<std::uint64_t>& grid) {
  AggregateResult agg;
  agg.trials = per_trial.size();
  std::vector<double> column(per_trial.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t t = 0; t < per_trial.size(); ++t) column[t] = per_trial[t].at(i);
    const SampleStats s = summarize(column);
    agg.points.push_back({grid[i], s.mean, s.ci95});
  }
  return agg;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("RISALIGN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

AlignmentConfig proposed_config(std::size_t n, std::size_t sweeps, std::size_t l,
                                const std::optional<std::vector<double>>& phi) {
  if (phi) return AlignmentConfig::linear(n, sweeps, MeasurementPhaseSet(*phi));
  return AlignmentConfig::dft(n, sweeps, l);
}

TrialRecord run_method(const std::string& method, const ChannelRealization& channel,
                       const AlignmentConfig& config, std::uint64_t seed, std::size_t trial, Snr snr_db) {
  return run_method_impl(method, channel, config, seed, trial, snr_db, true);
}

// ---- convergence ----

std::vector<MethodCurves> convergence_experiment(const ConvergenceSpec& spec) {
  const std::size_t n = spec.n_elements;
  const std::size_t l = spec.phi ? spec.phi->size() : spec.l;
  const std::uint64_t proposed_budget = n * l * spec.sweeps;
  const std::uint64_t random_budget = n * spec.random_sweeps + 1;
  const auto grid = measurement_grid(std::max(proposed_budget, random_budget), spec.grid_step);

  std::vector<MethodCurves> out;
  for (const Snr& snr : spec.snr_db) {
    const double sigma = sigma_for_iid(snr);
    struct Pair {
      std::vector<double> proposed, random;
    };
    auto rows = run_trials<Pair>(spec.trials, [&](std::size_t t) {
      const ChannelRealization ch = iid_channel(n, spec.seed, t, sigma);
      AlignmentConfig prop = proposed_config(n, spec.sweeps, spec.l, spec.phi);
      AlignmentConfig rnd = AlignmentConfig::closed_form(n, spec.random_sweeps);
      if (spec.random_initial_phases) {
        prop.initial_phases = rnd.initial_phases = random_phases(n, spec.seed, t);
      }
      return Pair{resample_locf(run_method_impl("proposed", ch, prop, spec.seed, t, snr, true).curve, grid),
                  resample_locf(run_method_impl("random", ch, rnd, spec.seed, t, snr, true).curve, grid)};
    });
    std::vector<std::vector<double>> p, r;
    for (auto& row : rows) {
      p.push_back(std::move(row.proposed));
      r.push_back(std::move(row.random));
    }
    out.push_back({snr, aggregate_curves(p, grid), aggregate_curves(r, grid)});
  }
  return out;
}

Table convergence_table(const ConvergenceSpec& spec, const std::vector<MethodCurves>& curves) {
  Table t;
  for (const MethodCurves& c : curves) {
    for (const auto& [name, agg, l] :
         {std::tuple{std::string("proposed"), &c.proposed,
                     std::optional<std::size_t>(spec.phi ? spec.phi->size() : spec.l)},
          std::tuple{std::string("random"), &c.random, std::optional<std::size_t>()}}) {
      for (const AggregatePoint& p : agg->points)
        t.push_back({"convergence", name, spec.n_elements, l, c.snr_db, p.measurements, p.mnap, p.ci95, stat("mnap")});
    }
  }
  return t;
}

// ---- SNR sweep ----

std::vector<SnrSweepPoint> snr_sweep(const SnrSweepSpec& spec) {
  const std::size_t n = spec.n_elements;
  std::vector<SnrSweepPoint> out;
  for (const Snr& snr : spec.snr_db) {
    const double sigma = sigma_for_iid(snr);
    // column 0 is the random benchmark, column 1 + i is l_values[i]
    auto rows = run_trials<std::vector<double>>(spec.trials, [&](std::size_t t) {
      const ChannelRealization ch = iid_channel(n, spec.seed, t, sigma);
      std::optional<PhaseVector> init;
      if (spec.random_initial_phases) init = random_phases(n, spec.seed, t);
      std::vector<double> v;
      AlignmentConfig rnd = AlignmentConfig::closed_form(n, spec.random_sweeps);
      rnd.initial_phases = init;
      v.push_back(run_method_impl("random", ch, rnd, spec.seed, t, snr, false).final_nap);
      for (std::size_t l : spec.l_values) {
        AlignmentConfig prop = AlignmentConfig::dft(n, spec.sweeps, l);
        prop.initial_phases = init;
        v.push_back(run_method_impl("proposed", ch, prop, spec.seed, t, snr, false).final_nap);
      }
      return v;
    });
    std::vector<double> column(rows.size());
    for (std::size_t k = 0; k <= spec.l_values.size(); ++k) {
      for (std::size_t t = 0; t < rows.size(); ++t) column[t] = rows[t][k];
      SnrSweepPoint p;
      p.snr_db = snr;
      p.nap = summarize(column);
      if (k == 0) {
        p.method = "random";
        p.measurements = n * spec.random_sweeps + 1;
      } else {
        p.method = "proposed";
        p.l = spec.l_values[k - 1];
        p.measurements = n * *p.l * spec.sweeps;
      }
      out.push_back(p);
    }
  }
  return out;
}

Table snr_sweep_table(const SnrSweepSpec& spec, const std::vector<SnrSweepPoint>& points) {
  Table t;
  for (const SnrSweepPoint& p : points)
    t.push_back({"snr_sweep", p.method, spec.n_elements, p.l, p.snr_db, p.measurements, p.nap.mean, p.nap.ci95,
                 stat("mnap")});
  return t;
}

// ---- discrete ----

DiscreteResult discrete_experiment(const DiscreteSpec& spec) {
  const std::size_t n = spec.n_elements;
  const DiscretePhaseSet omega(spec.omega);
  const double sigma = sigma_for_iid(spec.snr_db);
  AlignmentConfig prop = AlignmentConfig::discrete(n, spec.sweeps, omega);
  if (spec.probes) prop.mode = DiscreteMode(omega, *spec.probes);
  prop.validate();
  AlignmentConfig rnd = AlignmentConfig::closed_form(n, spec.random_sweeps);
  rnd.mode = prop.mode;
  const auto grid = measurement_grid(std::max<std::uint64_t>(3 * n * spec.sweeps, n * spec.random_sweeps + 1),
                                     spec.grid_step);

  struct Row {
    std::vector<double> proposed_curve, random_curve;
    double proposed_final, random_final, oracle_nap, excess;
  };
  auto rows = run_trials<Row>(spec.trials, [&](std::size_t t) {
    const ChannelRealization ch = iid_channel(n, spec.seed, t, sigma);
    const TrialRecord a = run_method_impl("proposed", ch, prop, spec.seed, t, spec.snr_db, true);
    const TrialRecord r = run_method_impl("random", ch, rnd, spec.seed, t, spec.snr_db, true);
    const ExhaustiveResult best = exhaustive_discrete_oracle(ch, omega);
    const double denom = ch.max_power();
    return Row{resample_locf(a.curve, grid), resample_locf(r.curve, grid), a.final_nap, r.final_nap,
               best.power.value / denom, (a.final_nap * denom - best.power.value) / best.power.value};
  });

  DiscreteResult out;
  std::vector<std::vector<double>> pc, rc;
  std::vector<double> pf, rf, of;
  for (Row& row : rows) {
    pc.push_back(std::move(row.proposed_curve));
    rc.push_back(std::move(row.random_curve));
    pf.push_back(row.proposed_final);
    rf.push_back(row.random_final);
    of.push_back(row.oracle_nap);
    if (row.excess > 1e-12) ++out.oracle_violations;
    out.largest_oracle_excess = std::max(out.largest_oracle_excess, row.excess);
  }
  if (rows.empty()) out.largest_oracle_excess = 0.0;
  out.proposed = aggregate_curves(pc, grid);
  out.random = aggregate_curves(rc, grid);
  out.proposed_final = summarize(pf);
  out.random_final = summarize(rf);
  out.oracle = summarize(of);
  return out;
}

Table discrete_table(const DiscreteSpec& spec, const DiscreteResult& r) {
  Table t;
  const std::size_t n = spec.n_elements;
  for (const AggregatePoint& p : r.proposed.points)
    t.push_back({"discrete", "proposed", n, 3, spec.snr_db, p.measurements, p.mnap, p.ci95, stat("mnap")});
  for (const AggregatePoint& p : r.random.points)
    t.push_back({"discrete", "random", n, std::nullopt, spec.snr_db, p.measurements, p.mnap, p.ci95, stat("mnap")});
  t.push_back({"discrete", "proposed", n, 3, spec.snr_db, std::nullopt, r.proposed_final.mean, r.proposed_final.ci95,
               stat("final_mnap")});
  t.push_back({"discrete", "random", n, std::nullopt, spec.snr_db, std::nullopt, r.random_final.mean,
               r.random_final.ci95, stat("final_mnap")});
  t.push_back({"discrete", "oracle", n, std::nullopt, spec.snr_db, std::nullopt, r.oracle.mean, r.oracle.ci95,
               stat("mean_max_nap")});
  t.push_back({"discrete", "proposed", n, 3, spec.snr_db, std::nullopt, static_cast<double>(r.oracle_violations),
               std::nullopt, stat("oracle_violations")});
  return t;
}

// ---- RMSE ----

std::vector<double> RmseSpec::theta_grid() const { return theta.empty() ? default_theta_grid() : theta; }

std::vector<RmsePoint> rmse_study(const RmseSpec& spec) {
  const MeasurementPhaseSet phi(spec.phi);
  const DesignMatrix a = build_design_matrix(phi);
  const LeftInverse pinv = pseudoinverse(a);
  const std::vector<double> thetas = spec.theta_grid();

  struct Job {
    double magnitude, snr_db, theta;
    std::size_t stream;
  };
  std::vector<Job> jobs;
  for (std::size_t mi = 0; mi < spec.magnitudes.size(); ++mi)
    for (double s : spec.snr_db)
      for (std::size_t ti = 0; ti < thetas.size(); ++ti)
        jobs.push_back({spec.magnitudes[mi], s, thetas[ti], mi * thetas.size() + ti});

  struct Sums {
    double linear = 0.0, ml = 0.0;
    std::size_t ambiguous = 0;
  };
  auto sums = run_trials<Sums>(jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const Complex z0{1.0, 0.0};
    const Complex z = std::polar(job.magnitude, -job.theta);
    const double sigma = std::sqrt((std::norm(z0) + std::norm(z)) / (2.0 * db_to_linear(job.snr_db)));
    Sums s;
    std::vector<double> y(phi.size());
    auto error = [&](auto&& estimate) {
      try {
        return principal_phase(estimate() - job.theta);
      } catch (const AmbiguousPhaseError&) {
        ++s.ambiguous;
        return principal_phase(-job.theta);
      }
    };
    for (std::size_t t = 0; t < spec.trials; ++t) {
      RandomStream noise(spec.seed, job.stream * spec.trials + t, StreamTag::noise);
      for (std::size_t l = 0; l < phi.size(); ++l)
        y[l] = std::norm(z0 + z * std::polar(1.0, phi[l]) + noise.complex_normal(sigma * sigma));
      const double el = error([&] { return phase_from_x(linear_estimate(y, pinv)).theta; });
      s.linear += el * el;
      if (spec.include_ml) {
        const double em = error([&] {
          XEstimate x;
          try {
            x = ml_solve(y, a, sigma).x;
          } catch (const SolverFailure& f) {
            x = f.best().x;
          }
          return phase_from_x(x).theta;
        });
        s.ml += em * em;
      }
    }
    return s;
  });

  std::vector<RmsePoint> out;
  const double trials = static_cast<double>(spec.trials);
  std::size_t j = 0;
  for (double m : spec.magnitudes) {
    for (double snr : spec.snr_db) {
      RmsePoint pooled{m, snr, std::nullopt, 0.0, std::nullopt, 0};
      double pooled_ml = 0.0;
      for (double th : thetas) {
        const Sums& s = sums[j++];
        RmsePoint p{m, snr, th, std::sqrt(s.linear / trials), std::nullopt, s.ambiguous};
        if (spec.include_ml) p.ml = std::sqrt(s.ml / trials);
        out.push_back(p);
        pooled.linear += s.linear;
        pooled_ml += s.ml;
        pooled.ambiguous += s.ambiguous;
      }
      const double total = trials * static_cast<double>(thetas.size());
      pooled.linear = std::sqrt(pooled.linear / total);
      if (spec.include_ml) pooled.ml = std::sqrt(pooled_ml / total);
      out.push_back(pooled);
    }
  }
  return out;
}

Table rmse_table(const RmseSpec& spec, const std::vector<RmsePoint>& points) {
  Table t;
  const std::size_t l = spec.phi.size();
  char buf[128];
  for (const RmsePoint& p : points) {
    std::string where = "abs_z=";
    std::snprintf(buf, sizeof buf, "%.17g", p.magnitude);
    where += buf;
    if (p.theta) {
      std::snprintf(buf, sizeof buf, "%.17g", *p.theta);
      where += std::string(";theta=") + buf;
    } else {
      where += ";theta=pooled";
    }
    where += ";ambiguous=" + std::to_string(p.ambiguous);
    t.push_back({"rmse", "linear", 1, l, p.snr_db, spec.trials, p.linear, std::nullopt,
                 stat("rmse_rad") + ";" + where});
    if (p.ml)
      t.push_back({"rmse", "ml", 1, l, p.snr_db, spec.trials, *p.ml, std::nullopt, stat("rmse_rad") + ";" + where});
  }
  return t;
}

// ---- harvest ----

std::vector<HarvestPoint> harvest_experiment(const HarvestSpec& spec) {
  std::vector<HarvestPoint> out;
  for (std::size_t side : spec.grid_sides) {
    GeometryScenario g = spec.geometry;
    g.rows = g.cols = side;
    const ChannelRealization base = geometry_channel(g);
    const std::size_t n = base.size();

    PhaseVector genie(n);
    for (std::size_t k = 0; k < n; ++k) genie.set(k, -std::arg(base.gains()[k]));
    const double genie_power = received_power_noiseless(base, genie).value;

    for (const Snr& snr : spec.snr_db) {
      const double sigma = snr ? noise_sigma_for_snr(base.gains(), db_to_linear(*snr)) : 0.0;
      const ChannelRealization ch = base.with_noise_sigma(sigma);
      struct Row {
        double p_power, p_nap, r_power, r_nap;
      };
      auto rows = run_trials<Row>(spec.trials, [&](std::size_t t) {
        AlignmentConfig prop = proposed_config(n, spec.sweeps, spec.l, spec.phi);
        AlignmentConfig rnd = AlignmentConfig::closed_form(n, spec.random_sweeps);
        if (spec.random_initial_phases) prop.initial_phases = rnd.initial_phases = random_phases(n, spec.seed, t);
        const TrialRecord a = run_method_impl("proposed", ch, prop, spec.seed, t, snr, false);
        const TrialRecord r = run_method_impl("random", ch, rnd, spec.seed, t, snr, false);
        const double denom = ch.max_power();
        return Row{harvested_power(a.final_nap * denom, spec.harvester), a.final_nap,
                   harvested_power(r.final_nap * denom, spec.harvester), r.final_nap};
      });
      std::vector<double> pp, pn, rp, rn;
      for (const Row& r : rows) {
        pp.push_back(r.p_power);
        pn.push_back(r.p_nap);
        rp.push_back(r.r_power);
        rn.push_back(r.r_nap);
      }
      out.push_back({"genie", n, snr, SampleStats{harvested_power(genie_power, spec.harvester), 0.0, 1},
                     SampleStats{genie_power / base.max_power(), 0.0, 1}});
      out.push_back({"proposed", n, snr, summarize(pp), summarize(pn)});
      out.push_back({"random", n, snr, summarize(rp), summarize(rn)});
    }
  }
  return out;
}

Table harvest_table(const HarvestSpec& spec, const std::vector<HarvestPoint>& points) {
  Table t;
  for (const HarvestPoint& p : points) {
    std::optional<std::size_t> l;
    std::optional<std::uint64_t> m;
    if (p.method == "proposed") {
      l = spec.phi ? spec.phi->size() : spec.l;
      m = p.n_elements * *l * spec.sweeps;
    } else if (p.method == "random") {
      m = p.n_elements * spec.random_sweeps + 1;
    }
    t.push_back({"harvest", p.method, p.n_elements, l, p.snr_db, m, p.nap.mean, p.nap.ci95, stat("mnap")});
    t.push_back({"harvest", p.method, p.n_elements, l, p.snr_db, m, p.harvested_watts.mean, p.harvested_watts.ci95,
                 stat("harvested_w")});
  }
  return t;
}

}  // namespace risalign
