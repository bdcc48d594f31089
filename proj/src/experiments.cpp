#include "hisched/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hisched/rng.hpp"
#include "hisched/scenario_io.hpp"

namespace hisched {

const std::string_view kThreeUeJson = R"({
  "variant": "latency_weighted",
  "ue": [
    {"id": 1, "class": "aoi", "q": 0.9, "p": 0.7, "rho": 1.0},
    {"id": 2, "class": "latency", "q": 0.2, "p": 0.8, "rho": 1.0, "beta": 2.0},
    {"id": 3, "class": "throughput", "p": 0.9, "alpha": 0.2}
  ]
}
)";

Scenario three_ue_scenario() { return parse_scenario_text(kThreeUeJson, "three_ue"); }

// ---------------------------------------------------------------- run CSV

namespace {

const std::vector<std::string> kRunColumns = {
    "run_id", "policy", "seed", "horizon", "ue_id", "class", "avg_aoi", "avg_latency",
    "throughput", "t_bar", "delta_sq", "attempts_share", "cost_objective", "f1", "f2", "lb"};

void append_run_rows(Table& table, const std::vector<std::string>& prefix, const std::string& run_id,
                     const RunReport& r) {
  const std::string seed = std::to_string(r.seed);
  const std::string horizon = std::to_string(r.horizon);
  for (const auto& u : r.per_ue) {
    std::vector<std::string> row = prefix;
    const std::vector<std::string> rest = {run_id,
                                           r.policy,
                                           seed,
                                           horizon,
                                           std::to_string(u.id),
                                           std::string(to_string(u.ue_class)),
                                           fmt(u.avg_aoi),
                                           fmt(u.avg_latency),
                                           fmt(u.throughput),
                                           fmt(u.t_bar),
                                           fmt(u.delta_sq),
                                           fmt(u.attempts_share),
                                           "",
                                           "",
                                           "",
                                           ""};
    row.insert(row.end(), rest.begin(), rest.end());
    table.add_row(std::move(row));
  }
  std::vector<std::string> row = prefix;
  const std::vector<std::string> rest = {run_id,
                                         r.policy,
                                         seed,
                                         horizon,
                                         "",
                                         "summary",
                                         "",
                                         "",
                                         "",
                                         "",
                                         "",
                                         "",
                                         fmt(r.cost.cost_objective),
                                         fmt(r.cost.f1),
                                         fmt(r.cost.f2),
                                         r.lb ? fmt(r.lb->lb) : ""};
  row.insert(row.end(), rest.begin(), rest.end());
  table.add_row(std::move(row));
}

}  // namespace

Table run_table(const std::vector<std::pair<std::string, RunReport>>& runs) {
  Table t;
  t.header = kRunColumns;
  for (const auto& [id, r] : runs) append_run_rows(t, {}, id, r);
  return t;
}

Table sweep_table(const std::vector<SweepRow>& rows, SweepParam param) {
  Table t;
  t.header = {"param", "value", "replicate", "feasible", "note"};
  t.header.insert(t.header.end(), kRunColumns.begin(), kRunColumns.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::vector<std::string> prefix = {std::string(to_string(param)), fmt(row.value),
                                             std::to_string(row.replicate), row.feasible ? "1" : "0",
                                             row.note};
    const std::string run_id = std::to_string(i);
    if (row.report) {
      append_run_rows(t, prefix, run_id, *row.report);
    } else {
      std::vector<std::string> r = prefix;
      r.push_back(run_id);
      r.resize(t.header.size());
      r[t.col("seed")] = std::to_string(row.seed);
      r[t.col("class")] = "summary";
      t.add_row(std::move(r));
    }
  }
  return t;
}

// ---------------------------------------------------------------- presets

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::Fig4: return "fig4";
    case Preset::Fig5Cost: return "fig5_cost";
    case Preset::Fig5Weights: return "fig5_weights";
    case Preset::Fig6: return "fig6";
    case Preset::Fig8: return "fig8";
  }
  return "?";
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = {Preset::Fig4, Preset::Fig5Cost, Preset::Fig5Weights,
                                              Preset::Fig6, Preset::Fig8};
  return presets;
}

Preset parse_preset(std::string_view s) {
  for (Preset p : all_presets()) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown preset '" + std::string(s) +
                    "' (expected fig4, fig5_cost, fig5_weights, fig6 or fig8)");
}

Slot default_horizon(Preset p) { return p == Preset::Fig5Weights ? 2'000'000 : 1'000'000; }

namespace {

const std::vector<double> kAlphaGrid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
const std::vector<double> kBetaGrid = {1.0, 1.2, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
const std::vector<double> kWeightBetas = {1.0, 2.0, 5.0};
constexpr double kGeoGeoFloor = 4.0 / 3.0;  // (1 - 0.8) / (0.8 - 0.2) + 1

const std::map<Preset, std::vector<std::string>> kPresetColumns = {
    {Preset::Fig4,
     {"alpha", "ue_id", "throughput", "avg_aoi", "avg_latency", "t_star", "lb", "threshold", "t_bar",
      "delta_sq", "attempts_share", "audit_rel", "feasible"}},
    {Preset::Fig5Cost, {"alpha", "cost_objective", "f1", "f2", "lb_f1", "lb_f2", "lb", "gap", "feasible"}},
    {Preset::Fig5Weights, {"beta", "iteration", "slot", "rho", "avg_latency"}},
    {Preset::Fig6, {"policy", "beta", "ue_id", "avg_aoi", "avg_latency", "throughput", "feasible"}},
    {Preset::Fig8, {"policy", "beta", "ue_id", "throughput", "attempts_share", "feasible"}},
};

class Mean {
 public:
  void add(const std::optional<double>& v) {
    if (!v) return;
    sum_ += *v;
    ++n_;
  }
  std::optional<double> get() const {
    if (n_ == 0) return std::nullopt;
    return sum_ / static_cast<double>(n_);
  }

 private:
  double sum_ = 0.0;
  int n_ = 0;
};

struct PointRuns {
  double value = 0.0;
  bool feasible = true;
  std::vector<const RunReport*> reports;
};

std::vector<PointRuns> group_points(const std::vector<SweepRow>& rows) {
  std::vector<PointRuns> points;
  for (const auto& row : rows) {
    if (row.point >= points.size()) points.resize(row.point + 1);
    auto& p = points[row.point];
    p.value = row.value;
    p.feasible = p.feasible && row.feasible;
    if (row.report) p.reports.push_back(&*row.report);
  }
  return points;
}

SweepSpec base_spec(const PresetOptions& o, Preset p, PolicySpec policy, SweepParam param,
                    std::vector<double> grid, ProblemVariant variant) {
  SweepSpec spec{RunConfig{three_ue_scenario().with_variant(variant), policy,
                           o.horizon.value_or(default_horizon(p)), o.seed, 0}};
  spec.param = param;
  spec.grid = std::move(grid);
  spec.seeds = o.seeds;
  spec.threads = o.threads;
  return spec;
}

Table fig4_or_cost(Preset p, const PresetOptions& o) {
  auto spec = base_spec(o, p, PolicySpec{PolicyKind::Hierarchical}, SweepParam::Alpha, kAlphaGrid,
                        ProblemVariant::LatencyWeighted);
  spec.with_lb = true;
  const auto rows = sweep(spec);
  const auto points = group_points(rows);
  Table t;
  t.header = kPresetColumns.at(p);
  const Scenario base = three_ue_scenario();

  for (const auto& pt : points) {
    const std::string alpha = fmt(pt.value);
    const std::string feasible = pt.feasible ? "1" : "0";
    Mean lb, lb_f1, lb_f2, cost, f1, f2;
    for (const auto* r : pt.reports) {
      cost.add(r->cost.cost_objective);
      f1.add(r->cost.f1);
      f2.add(r->cost.f2);
      if (r->lb) {
        lb.add(r->lb->lb);
        lb_f1.add(r->lb->lb_f1);
        lb_f2.add(r->lb->lb_f2);
      }
    }
    if (p == Preset::Fig5Cost) {
      std::optional<double> gap;
      if (cost.get() && lb.get() && *lb.get() > 0.0) gap = (*cost.get() - *lb.get()) / *lb.get();
      t.add_row({alpha, fmt(cost.get()), fmt(f1.get()), fmt(f2.get()), fmt(lb_f1.get()), fmt(lb_f2.get()),
                 fmt(lb.get()), fmt(gap), feasible});
      continue;
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
      const int id = base.ues()[i].id;
      Mean thr, aoi, lat, tbar, dsq, share, audit;
      std::optional<double> t_star;
      std::optional<double> threshold;
      for (const auto* r : pt.reports) {
        const auto& u = r->per_ue[i];
        thr.add(u.throughput);
        aoi.add(u.avg_aoi);
        lat.add(u.avg_latency);
        tbar.add(u.t_bar);
        dsq.add(u.delta_sq);
        share.add(u.attempts_share);
        for (const auto& a : r->audit) {
          if (a.ue_id == id && a.avg_aoi > 0.0) audit.add(a.residual / a.avg_aoi);
        }
        for (std::size_t k = 0; k < r->t_star.size(); ++k) {
          if (r->t_star[k].id == id) {
            t_star = r->t_star[k].t_star;
            threshold = static_cast<double>(r->thresholds[k]);
          }
        }
      }
      t.add_row({alpha, std::to_string(id), fmt(thr.get()), fmt(aoi.get()), fmt(lat.get()), fmt(t_star),
                 fmt(lb.get()), fmt(threshold), fmt(tbar.get()), fmt(dsq.get()), fmt(share.get()),
                 fmt(audit.get()), feasible});
    }
  }
  return t;
}

Table fig5_weights(const PresetOptions& o) {
  Table t;
  t.header = kPresetColumns.at(Preset::Fig5Weights);
  const Scenario base = three_ue_scenario().with_variant(ProblemVariant::LatencyConstrained);
  const int latency_id = default_sweep_ue(base, SweepParam::Beta);
  for (std::size_t point = 0; point < kWeightBetas.size(); ++point) {
    const double beta = kWeightBetas[point];
    RunConfig cfg{base.with_beta(latency_id, beta), PolicySpec{PolicyKind::VirtualWeights},
                  o.horizon.value_or(default_horizon(Preset::Fig5Weights)), derive_seed(o.seed, point, 0), 0};
    const auto report = run(cfg);
    for (const auto& w : report.weights) {
      if (w.ue_id != latency_id) continue;
      t.add_row({fmt(beta), std::to_string(w.iteration), std::to_string(w.slot), fmt(w.rho),
                 fmt(w.avg_latency)});
    }
  }
  return t;
}

Table fig6_or_8(Preset p, const PresetOptions& o) {
  std::vector<PolicySpec> policies;
  if (p == Preset::Fig8) policies.push_back(PolicySpec{PolicyKind::Hierarchical});
  policies.push_back(PolicySpec{PolicyKind::VirtualWeights});
  PolicySpec rd{PolicyKind::Randomized};
  rd.rd_saturate = true;
  policies.push_back(rd);

  Table t;
  t.header = kPresetColumns.at(p);
  const Scenario base = three_ue_scenario();
  for (const auto& policy : policies) {
    auto spec = base_spec(o, p, policy, SweepParam::Beta, kBetaGrid, ProblemVariant::LatencyConstrained);
    const auto rows = sweep(spec);
    const auto points = group_points(rows);
    const std::string name(to_string(policy.kind));
    for (const auto& pt : points) {
      for (std::size_t i = 0; i < base.size(); ++i) {
        Mean aoi, lat, thr, share;
        for (const auto* r : pt.reports) {
          const auto& u = r->per_ue[i];
          aoi.add(u.avg_aoi);
          lat.add(u.avg_latency);
          thr.add(u.throughput);
          share.add(u.attempts_share);
        }
        const std::string id = std::to_string(base.ues()[i].id);
        const std::string feasible = pt.feasible ? "1" : "0";
        if (p == Preset::Fig6) {
          t.add_row({name, fmt(pt.value), id, fmt(aoi.get()), fmt(lat.get()), fmt(thr.get()), feasible});
        } else {
          t.add_row({name, fmt(pt.value), id, fmt(thr.get()), fmt(share.get()), feasible});
        }
      }
    }
  }
  return t;
}

}  // namespace

Table run_preset(Preset p, const PresetOptions& options) {
  switch (p) {
    case Preset::Fig4:
    case Preset::Fig5Cost: return fig4_or_cost(p, options);
    case Preset::Fig5Weights: return fig5_weights(options);
    case Preset::Fig6:
    case Preset::Fig8: return fig6_or_8(p, options);
  }
  throw ConfigError("unknown preset");
}

std::optional<Preset> detect_preset(const Table& table) {
  for (const auto& [p, cols] : kPresetColumns) {
    if (table.header == cols) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- verdicts

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-9; }

class Check {
 public:
  explicit Check(std::string criterion) : v_{std::move(criterion), true, ""} {}
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (v_.pass) v_.detail = what;
    v_.pass = false;
  }
  Verdict done(std::string summary) {
    if (v_.pass) v_.detail = std::move(summary);
    return v_;
  }

 private:
  Verdict v_;
};

double need(const Table& t, std::size_t row, std::string_view col) {
  const auto v = t.number(row, col);
  if (!v) throw CsvError("row " + std::to_string(row + 1) + ": empty '" + std::string(col) + "'");
  return *v;
}

std::vector<Verdict> fig4_verdicts(const Table& t) {
  const Scenario sv = three_ue_scenario();
  const double q1 = *sv.ue(1).q;
  const double p3 = sv.ue(3).p;

  std::map<double, std::map<int, std::size_t>> by_alpha;  // alpha -> ue -> row
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    by_alpha[need(t, r, "alpha")][static_cast<int>(need(t, r, "ue_id"))] = r;
  }

  Check c2("criterion 2: throughput structure under hier");
  std::optional<double> prev_r1;
  std::map<double, std::vector<double>> plateaus;  // threshold -> R1 values
  for (const auto& [alpha, ues] : by_alpha) {
    const double r1 = need(t, ues.at(1), "throughput");
    const double r2 = need(t, ues.at(2), "throughput");
    const double r3 = need(t, ues.at(3), "throughput");
    c2.require(std::abs(r2 - 0.2) <= 0.01, "R2 = " + fmt(r2) + " at alpha " + fmt(alpha));
    c2.require(r3 >= alpha - 0.01, "R3 = " + fmt(r3) + " below alpha " + fmt(alpha));
    if (prev_r1) c2.require(r1 <= *prev_r1 + 0.005, "R1 rises at alpha " + fmt(alpha));
    prev_r1 = r1;
    plateaus[need(t, ues.at(1), "threshold")].push_back(r1);
  }
  for (const auto& [th, values] : plateaus) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    c2.require(*hi - *lo < 0.01, "R1 spread " + fmt(*hi - *lo) + " on threshold " + fmt(th));
  }

  Check c3("criterion 3: spacing laws for UE 1 at alpha 0.2");
  bool found = false;
  std::string c3_summary;
  for (const auto& [alpha, ues] : by_alpha) {
    if (!near(alpha, 0.2)) continue;
    found = true;
    const std::size_t r = ues.at(1);
    const double t_star = need(t, r, "t_star");
    const double mean_pred = need(t, r, "threshold") + 1.0 / q1;
    const double var_pred = (1.0 - q1) / (q1 * q1);
    const double tbar = need(t, r, "t_bar");
    const double dsq = need(t, r, "delta_sq");
    c3.require(tbar >= t_star && tbar < t_star + 1.0, "t_bar " + fmt(tbar) + " outside [T*, T*+1)");
    c3.require(std::abs(tbar - mean_pred) <= 0.02 * mean_pred,
               "t_bar " + fmt(tbar) + " vs predicted " + fmt(mean_pred));
    c3.require(std::abs(dsq - var_pred) <= 0.10 * var_pred,
               "delta_sq " + fmt(dsq) + " vs predicted " + fmt(var_pred));
    c3_summary = "t_bar " + fmt(tbar) + ", delta_sq " + fmt(dsq);
  }
  c3.require(found, "no alpha 0.2 row");

  Check c4("criterion 4: t_bar matches 1/throughput");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto tbar = t.number(r, "t_bar");
    const auto thr = t.number(r, "throughput");
    if (!tbar || !thr || *thr <= 0.0) continue;
    const double rel = std::abs(*tbar - 1.0 / *thr) / *tbar;
    c4.require(rel < 0.01, "relative gap " + fmt(rel) + " on row " + std::to_string(r + 1));
  }

  Check c5("criterion 5: AoI decomposition audit for UE 1");
  Check c10("criterion 10: attempt share of UE 3");
  for (const auto& [alpha, ues] : by_alpha) {
    const double audit = need(t, ues.at(1), "audit_rel");
    c5.require(audit < 0.01, "relative residual " + fmt(audit) + " at alpha " + fmt(alpha));
    const double share = need(t, ues.at(3), "attempts_share");
    c10.require(share >= alpha / p3 - 0.01, "share " + fmt(share) + " at alpha " + fmt(alpha));
  }
  return {c2.done("all alpha points"), c3.done(c3_summary), c4.done("all rows"), c5.done("all alpha points"),
          c10.done("all alpha points")};
}

std::vector<Verdict> fig5_cost_verdicts(const Table& t) {
  Check c6("criterion 6: cost dominates the lower bound");
  std::optional<double> gap_low, gap_high;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double alpha = need(t, r, "alpha");
    const double cost = need(t, r, "cost_objective");
    const double lb = need(t, r, "lb");
    c6.require(cost >= lb, "cost " + fmt(cost) + " < lb " + fmt(lb) + " at alpha " + fmt(alpha));
    if (near(alpha, 0.1)) gap_low = need(t, r, "gap");
    if (near(alpha, 0.6)) gap_high = need(t, r, "gap");
  }
  c6.require(gap_low && gap_high, "grid lacks alpha 0.1 or 0.6");
  if (gap_low && gap_high) {
    c6.require(*gap_high < *gap_low, "gap at 0.6 (" + fmt(*gap_high) + ") not below gap at 0.1 (" +
                                         fmt(*gap_low) + ")");
  }
  return {c6.done(gap_low && gap_high ? "gap " + fmt(*gap_low) + " -> " + fmt(*gap_high) : "")};
}

std::vector<Verdict> fig5_weights_verdicts(const Table& t) {
  std::map<double, std::vector<std::pair<double, double>>> traj;  // beta -> (rho, latency)
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    traj[need(t, r, "beta")].push_back({need(t, r, "rho"), t.number(r, "avg_latency").value_or(0.0)});
  }
  Check c8("criterion 8: virtual weight dynamics");
  bool saw_one = false, saw_five = false;
  for (const auto& [beta, points] : traj) {
    if (near(beta, 1.0)) {
      saw_one = true;
      double best = 0.0;
      for (std::size_t i = 0; i < points.size() && i < 200; ++i) best = std::max(best, points[i].first);
      c8.require(best > 50.0, "beta 1: rho reaches only " + fmt(best) + " within 200 updates");
      for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i - 1].second > beta) {
          c8.require(points[i].first >= points[i - 1].first,
                     "beta 1: rho decreases at update " + std::to_string(i + 1));
        }
      }
    }
    if (near(beta, 5.0)) {
      saw_five = true;
      auto first_zero = std::find_if(points.begin(), points.end(), [](const auto& p) { return p.first == 0.0; });
      c8.require(first_zero != points.end(), "beta 5: rho never reaches 0");
      c8.require(std::all_of(first_zero, points.end(), [](const auto& p) { return p.first == 0.0; }),
                 "beta 5: rho leaves 0");
    }
  }
  c8.require(saw_one && saw_five, "trajectory lacks beta 1 or beta 5");
  return {c8.done("beta 1 grows past 50; beta 5 pinned at 0")};
}

std::vector<Verdict> fig6_verdicts(const Table& t) {
  Check c7("criterion 7: randomized policy latency for UE 2");
  int checked = 0;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.text(r, "policy") != "rd" || need(t, r, "ue_id") != 2.0) continue;
    const double beta = need(t, r, "beta");
    const double lat = need(t, r, "avg_latency");
    if (beta < kGeoGeoFloor) {
      c7.require(std::abs(lat - kGeoGeoFloor) <= 0.03 * kGeoGeoFloor,
                 "L2 " + fmt(lat) + " at beta " + fmt(beta) + " off the 1.333 floor");
      ++checked;
    } else if (beta >= 1.5 - 1e-9 && beta <= 3.0 + 1e-9) {
      c7.require(std::abs(lat - beta) <= 0.05 * beta, "L2 " + fmt(lat) + " at beta " + fmt(beta));
      ++checked;
    }
  }
  c7.require(checked > 0, "no randomized rows for UE 2");
  return {c7.done(std::to_string(checked) + " beta points")};
}

std::vector<Verdict> fig8_verdicts(const Table& t) {
  Check c9("criterion 9: throughputs independent of beta");
  std::map<std::pair<std::string, int>, std::vector<double>> series;
  std::map<std::pair<double, int>, std::map<std::string, double>> by_point;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const std::string policy = t.text(r, "policy");
    const int id = static_cast<int>(need(t, r, "ue_id"));
    const double beta = need(t, r, "beta");
    const double thr = need(t, r, "throughput");
    if (id == 3) c9.require(thr >= 0.19, policy + ": R3 " + fmt(thr) + " at beta " + fmt(beta));
    series[{policy, id}].push_back(thr);
    by_point[{beta, id}][policy] = thr;
  }
  for (const auto& [key, values] : series) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    c9.require(*hi - *lo < 0.01, key.first + ": UE " + std::to_string(key.second) + " spread " + fmt(*hi - *lo));
  }
  for (const auto& [key, policies] : by_point) {
    if (!policies.count("vw") || !policies.count("rd")) continue;
    const double d = std::abs(policies.at("vw") - policies.at("rd"));
    c9.require(d < 0.01, "vw and rd differ by " + fmt(d) + " for UE " + std::to_string(key.second) +
                             " at beta " + fmt(key.first));
  }
  return {c9.done("all policies, all beta")};
}

}  // namespace

std::vector<Verdict> preset_verdicts(Preset p, const Table& table) {
  if (table.rows.empty()) return {};
  switch (p) {
    case Preset::Fig4: return fig4_verdicts(table);
    case Preset::Fig5Cost: return fig5_cost_verdicts(table);
    case Preset::Fig5Weights: return fig5_weights_verdicts(table);
    case Preset::Fig6: return fig6_verdicts(table);
    case Preset::Fig8: return fig8_verdicts(table);
  }
  return {};
}

std::string render_report(const Table& table) {
  std::ostringstream out;
  if (table.rows.empty()) {
    out << "# Report\n\nNo rows.\n";
    return out.str();
  }
  const auto preset = detect_preset(table);
  out << "# Report" << (preset ? " (" + std::string(to_string(*preset)) + ")" : std::string()) << "\n\n";
  out << table.rows.size() << " rows.\n\n" << markdown_table(table);
  if (preset) {
    const auto verdicts = preset_verdicts(*preset, table);
    if (!verdicts.empty()) {
      out << "\n## Verdicts\n\n| criterion | result | detail |\n| --- | --- | --- |\n";
      for (const auto& v : verdicts) {
        out << "| " << v.criterion << " | " << (v.pass ? "PASS" : "FAIL") << " | " << v.detail << " |\n";
      }
    }
  }
  return out.str();
}

}  // namespace hisched
