#include <heatlink/rtn/model.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace heatlink::rtn {

using solver::kInf;
using solver::LinearProgram;
using solver::MixedIntegerProgram;
using solver::Relation;

std::string sector_name(int sector) { return sector == 0 ? "domestic" : "commercial"; }

std::size_t RtnInstance::cell_index(const std::string& id) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].id == id) return i;
  throw RtnModelError("unknown cell: " + id);
}

double HydrogenPlan::capacity_gw(const std::string& technology, int period) const {
  double total = 0.0;
  for (const auto& p : production)
    if (p.technology == technology && p.period == period) total += p.capacity_gw;
  return total;
}

namespace {

constexpr int kS = TimeSliceCalendar::kSlices;
constexpr int kPhases = 4;
// seasonal storage phases in chronological order; the peak day sits between
// the end of winter and the shoulder season, so caverns feed it from
// winter-end inventory
constexpr Season kPhaseSeason[kPhases] = {Season::Winter, Season::WinterPeak,
                                          Season::AutumnSpring, Season::Summer};

std::string nm(std::initializer_list<std::string> parts) {
  std::string out;
  bool first = true;
  for (const auto& p : parts) {
    if (first) {
      out = p + "[";
      first = false;
    } else {
      if (out.back() != '[') out += ',';
      out += p;
    }
  }
  return out + "]";
}
std::string ts(int v) { return std::to_string(v); }

}  // namespace

std::vector<HeatMode> heat_modes(const RtnCatalog& cat) {
  std::vector<HeatMode> modes;
  for (std::size_t t = 0; t < cat.heat.size(); ++t) {
    const auto& ht = cat.heat[t];
    if (ht.is_hybrid) {
      modes.push_back({t, ht.name + "_electric", Fuel::Electricity, ht.cop, 0.0, 0.5});
      modes.push_back({t, ht.name + "_h2", Fuel::Hydrogen, 0.0, ht.efficiency, 0.5});
    } else if (ht.cop > 0.0) {
      modes.push_back({t, ht.name, Fuel::Electricity, ht.cop, 0.0, 1.0});
    } else {
      modes.push_back({t, ht.name, ht.uses_gas ? Fuel::Gas : Fuel::Hydrogen, 0.0,
                       ht.efficiency, 1.0});
    }
  }
  return modes;
}

namespace {

void check_instance(const RtnInstance& in) {
  in.calendar.validate();
  if (in.periods < 1) throw RtnModelError("need at least one planning period");
  if (in.cells.empty()) throw RtnModelError("instance has no cells");
  if (static_cast<int>(in.retail_price_per_mwh.size()) != in.periods)
    throw RtnModelError("retail prices missing for some periods");
  for (int p = 0; p < in.periods; ++p)
    if (static_cast<int>(in.retail_price_per_mwh[p].size()) != kS)
      throw RtnModelError("missing retail price slice in period " + ts(p));
  if (in.gas_price_per_mwh.size() != 4)
    throw RtnModelError("gas prices must cover the four seasons");
  for (const auto& c : in.cells) {
    if (static_cast<int>(c.heat_demand_mw.size()) != kSectors)
      throw RtnModelError("cell " + c.id + ": demand must cover both sectors");
    for (const auto& per_period : c.heat_demand_mw) {
      if (static_cast<int>(per_period.size()) != in.periods)
        throw RtnModelError("cell " + c.id + ": demand periods mismatch");
      for (const auto& slices : per_period) {
        if (static_cast<int>(slices.size()) != kS)
          throw RtnModelError("cell " + c.id + ": demand must cover all 16 slices");
        for (double d : slices)
          if (d < 0 || !std::isfinite(d))
            throw RtnModelError("cell " + c.id + ": negative or non-finite demand");
      }
    }
  }
  for (const auto& e : in.edges) {
    in.cell_index(e.a);
    in.cell_index(e.b);
    if (e.km <= 0) throw RtnModelError("edge " + e.a + "-" + e.b + ": distance must be positive");
  }
  for (const auto& j : in.catalog.conversion) {
    if (j.unit_capacity_gw <= 0)
      throw RtnModelError(j.name + ": unit capacity must be positive");
    if (static_cast<int>(j.capex_per_kw.size()) < in.periods)
      throw RtnModelError(j.name + ": capex trajectory shorter than the horizon");
  }
  for (const auto& t : in.catalog.heat) {
    if (t.cop == 0.0 && (t.efficiency <= 0.0 || t.efficiency > 1.0))
      throw RtnModelError(t.name + ": boiler efficiency must lie in (0,1]");
    if (t.cop != 0.0 && t.cop <= 1.0)
      throw RtnModelError(t.name + ": COP must exceed 1");
  }
  if (static_cast<int>(in.emissions.caps_mt.size()) != in.periods)
    throw RtnModelError("emission caps missing for some periods");

  // CO2 capture anywhere needs a pipeline path to an injection site
  bool any_capture = false;
  for (const auto& j : in.catalog.conversion)
    if (j.co2_captured_t_per_mwh > 0) any_capture = true;
  if (any_capture) {
    std::vector<int> reach(in.cells.size(), 0);
    std::queue<std::size_t> q;
    for (std::size_t i = 0; i < in.cells.size(); ++i)
      if (in.cells[i].co2_site) {
        reach[i] = 1;
        q.push(i);
      }
    if (q.empty())
      throw RtnModelError("catalog captures CO2 but no cell offers an injection site");
    while (!q.empty()) {
      std::size_t i = q.front();
      q.pop();
      for (const auto& e : in.edges) {
        std::size_t a = in.cell_index(e.a), b = in.cell_index(e.b);
        std::size_t other = (a == i) ? b : (b == i) ? a : i;
        if (other != i && !reach[other]) {
          reach[other] = 1;
          q.push(other);
        }
      }
    }
    for (std::size_t i = 0; i < in.cells.size(); ++i)
      if (!reach[i])
        throw RtnModelError("cell " + in.cells[i].id +
                            " cannot route captured CO2 to any injection site");
  }
}

double peak_demand(const Cell& c, int sector, int period) {
  double peak = 0.0;
  for (double d : c.heat_demand_mw[sector][period]) peak = std::max(peak, d);
  return peak;
}

}  // namespace

MixedIntegerProgram build_rtn_model(const RtnInstance& in) {
  check_instance(in);

  const int P = in.periods;
  const std::size_t C = in.cells.size();
  const auto& cat = in.catalog;
  const std::size_t J = cat.conversion.size();
  const auto modes = heat_modes(cat);
  const std::size_t M = modes.size();
  const std::size_t T = cat.heat.size();
  const std::size_t E = in.edges.size();

  std::vector<double> hours(kS);
  for (int s = 0; s < kS; ++s) hours[s] = in.calendar.slice_member_hours(s);
  std::vector<double> df(P);
  for (int p = 0; p < P; ++p) df[p] = std::pow(1.0 + in.discount_rate, -10.0 * p);
  const double years_per_period = 10.0;

  MixedIntegerProgram mip;
  LinearProgram& lp = mip.lp;
  auto idx4 = [&](std::size_t a, std::size_t b, std::size_t c2, std::size_t d,
                  std::size_t nb, std::size_t nc, std::size_t nd) {
    return ((a * nb + b) * nc + c2) * nd + d;
  };

  // --- production: integer unit builds and slice dispatch ---
  std::vector<int> vbuild(J * C * P, -1), vprod(J * C * P * kS, -1);
  for (std::size_t j = 0; j < J; ++j) {
    const auto& tech = cat.conversion[j];
    for (std::size_t c = 0; c < C; ++c)
      for (int p = 0; p < P; ++p) {
        int b = lp.add_variable(nm({"build", tech.name, in.cells[c].id, ts(p)}), 0.0, kInf,
                                df[p] * tech.capex_per_kw[p] * tech.unit_capacity_gw * 1e6);
        vbuild[(j * C + c) * P + p] = b;
        mip.integer_variables.push_back(b);
        for (int s = 0; s < kS; ++s)
          vprod[idx4(j, c, p, s, C, P, kS)] = lp.add_variable(
              nm({"prod", tech.name, in.cells[c].id, ts(p), ts(s)}), 0.0, kInf, 0.0);
      }
  }

  // --- end-use heat: continuous capacity, per-mode slice output ---
  std::vector<int> vhk(T * C * kSectors * P, -1), vq(M * C * kSectors * P * kS, -1);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < C; ++c)
      for (int sec = 0; sec < kSectors; ++sec)
        for (int p = 0; p < P; ++p)
          vhk[idx4(t, c, sec, p, C, kSectors, P)] = lp.add_variable(
              nm({"hk", cat.heat[t].name, in.cells[c].id, sector_name(sec), ts(p)}), 0.0,
              kInf, df[p] * cat.heat[t].capex_per_kwth * 1000.0);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t c = 0; c < C; ++c)
      for (int sec = 0; sec < kSectors; ++sec)
        for (int p = 0; p < P; ++p)
          for (int s = 0; s < kS; ++s)
            vq[(idx4(m, c, sec, p, C, kSectors, P)) * kS + s] = lp.add_variable(
                nm({"q", modes[m].name, in.cells[c].id, sector_name(sec), ts(p), ts(s)}),
                0.0, kInf, 0.0);

  // --- hydrogen stores ---
  struct StoreVars {
    std::size_t asset;
    std::size_t cell;
    std::vector<int> build, sin, sout, inv;  // per period (x slices / phases)
  };
  std::vector<StoreVars> stores;
  const StorageAsset* well = nullptr;
  for (std::size_t a = 0; a < cat.storage.size(); ++a) {
    const auto& st = cat.storage[a];
    if (st.kind == StorageAsset::Kind::Co2Well) {
      well = &st;
      continue;
    }
    for (std::size_t c = 0; c < C; ++c) {
      if (st.requires_cavern_site && !in.cells[c].cavern_site) continue;
      StoreVars sv{a, c, {}, {}, {}, {}};
      for (int p = 0; p < P; ++p) {
        int b = lp.add_variable(nm({"sbuild", st.name, in.cells[c].id, ts(p)}), 0.0, kInf,
                                df[p] * st.capex_m_per_unit * 1e6);
        sv.build.push_back(b);
        mip.integer_variables.push_back(b);
        for (int s = 0; s < kS; ++s) {
          sv.sin.push_back(lp.add_variable(
              nm({"sin", st.name, in.cells[c].id, ts(p), ts(s)}), 0.0, kInf, 0.0));
          sv.sout.push_back(lp.add_variable(
              nm({"sout", st.name, in.cells[c].id, ts(p), ts(s)}), 0.0, kInf, 0.0));
        }
        if (st.intra_day_only) {
          for (int season = 0; season < 4; ++season)
            for (int k = 0; k < 4; ++k)
              sv.inv.push_back(lp.add_variable(
                  nm({"vinv", st.name, in.cells[c].id, ts(p), ts(season), ts(k)}), 0.0,
                  kInf, 0.0));
        } else {
          for (int k = 0; k < kPhases; ++k)
            sv.inv.push_back(lp.add_variable(
                nm({"sinv", st.name, in.cells[c].id, ts(p), ts(k)}), 0.0, kInf, 0.0));
        }
      }
      stores.push_back(std::move(sv));
    }
  }

  // --- CO2 injection wells ---
  std::vector<int> vwell(C * P, -1), vinj(C * P * kS, -1);
  if (well) {
    for (std::size_t c = 0; c < C; ++c) {
      if (!in.cells[c].co2_site) continue;
      for (int p = 0; p < P; ++p) {
        int b = lp.add_variable(nm({"wbuild", in.cells[c].id, ts(p)}), 0.0, kInf,
                                df[p] * well->capex_m_per_unit * 1e6);
        vwell[c * P + p] = b;
        mip.integer_variables.push_back(b);
        for (int s = 0; s < kS; ++s)
          vinj[(c * P + p) * kS + s] = lp.add_variable(
              nm({"inj", in.cells[c].id, ts(p), ts(s)}), 0.0, kInf, 0.0);
      }
    }
  }

  // --- pipelines: integer diameter-class builds, per-carrier flows ---
  struct CarrierGroup {
    std::string label;
    std::vector<std::size_t> classes;
    double loss_frac_per_km = 0.0;
  };
  std::vector<CarrierGroup> groups(2);
  groups[0].label = "H2";
  groups[1].label = "CO2";
  for (std::size_t k = 0; k < cat.pipelines.size(); ++k) {
    const auto& pl = cat.pipelines[k];
    int g = pl.carrier == PipelineCarrier::Hydrogen ? 0 : 1;
    groups[g].classes.push_back(k);
    groups[g].loss_frac_per_km = pl.loss_pct_per_km / 100.0;
  }
  std::vector<int> vpb(cat.pipelines.size() * E * P, -1);
  for (std::size_t k = 0; k < cat.pipelines.size(); ++k)
    for (std::size_t e = 0; e < E; ++e)
      for (int p = 0; p < P; ++p) {
        int b = lp.add_variable(
            nm({"pbuild", cat.pipelines[k].name, in.edges[e].a, in.edges[e].b, ts(p)}), 0.0,
            kInf, df[p] * cat.pipelines[k].capex_k_per_km * 1000.0 * in.edges[e].km);
        vpb[(k * E + e) * P + p] = b;
        mip.integer_variables.push_back(b);
      }
  // flow[group][edge][dir][p][s]; dir 0 = a->b, dir 1 = b->a
  std::vector<int> vpf(2 * E * 2 * P * kS, -1);
  for (int g = 0; g < 2; ++g) {
    if (groups[g].classes.empty()) continue;
    for (std::size_t e = 0; e < E; ++e)
      for (int dir = 0; dir < 2; ++dir)
        for (int p = 0; p < P; ++p)
          for (int s = 0; s < kS; ++s) {
            const auto& from = dir == 0 ? in.edges[e].a : in.edges[e].b;
            const auto& to = dir == 0 ? in.edges[e].b : in.edges[e].a;
            vpf[idx4(g * E + e, dir, p, s, 2, P, kS)] = lp.add_variable(
                nm({"flow", groups[g].label, from, to, ts(p), ts(s)}), 0.0, kInf, 0.0);
          }
  }

  // --- imports ---
  std::vector<int> vgas(C * P * kS), velec(C * P * kS), vbio(C * P * kS);
  for (std::size_t c = 0; c < C; ++c)
    for (int p = 0; p < P; ++p)
      for (int s = 0; s < kS; ++s) {
        std::size_t i = (c * P + p) * kS + s;
        int season = s / TimeSliceCalendar::kDayPeriods;
        double op = df[p] * years_per_period * hours[s];
        vgas[i] = lp.add_variable(nm({"imp_gas", in.cells[c].id, ts(p), ts(s)}), 0.0, kInf,
                                  op * in.gas_price_per_mwh[season]);
        velec[i] = lp.add_variable(nm({"imp_elec", in.cells[c].id, ts(p), ts(s)}), 0.0,
                                   kInf, op * in.retail_price_per_mwh[p][s]);
        vbio[i] = lp.add_variable(nm({"imp_bio", in.cells[c].id, ts(p), ts(s)}), 0.0, kInf,
                                  op * in.biomass_price_per_mwh);
      }

  // =====================  rows  =====================
  using Terms = std::vector<std::pair<int, double>>;

  // heat balances and per-mode capacity limits
  for (std::size_t c = 0; c < C; ++c)
    for (int sec = 0; sec < kSectors; ++sec)
      for (int p = 0; p < P; ++p)
        for (int s = 0; s < kS; ++s) {
          Terms bal;
          for (std::size_t m = 0; m < M; ++m) {
            int qv = vq[(idx4(m, c, sec, p, C, kSectors, P)) * kS + s];
            bal.push_back({qv, 1.0});
            lp.add_constraint(
                nm({"qcap", modes[m].name, in.cells[c].id, sector_name(sec), ts(p), ts(s)}),
                {{qv, 1.0},
                 {vhk[idx4(modes[m].tech, c, sec, p, C, kSectors, P)],
                  -modes[m].capacity_factor}},
                Relation::LessEqual, 0.0);
          }
          lp.add_constraint(nm({"heat", in.cells[c].id, sector_name(sec), ts(p), ts(s)}),
                            std::move(bal), Relation::Equal,
                            in.cells[c].heat_demand_mw[sec][p][s]);
        }

  // legacy decommissioning and explicit capacity-share limits
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < C; ++c)
      for (int sec = 0; sec < kSectors; ++sec)
        for (int p = 0; p < P; ++p) {
          double share = kInf;
          if (cat.heat[t].uses_gas && p < static_cast<int>(in.legacy_gas_factor.size()))
            share = std::min(share, in.legacy_gas_factor[p]);
          if (cat.heat[t].max_capacity_share >= 0)
            share = std::min(share, cat.heat[t].max_capacity_share);
          if (share == kInf) continue;
          lp.add_constraint(
              nm({"hklim", cat.heat[t].name, in.cells[c].id, sector_name(sec), ts(p)}),
              {{vhk[idx4(t, c, sec, p, C, kSectors, P)], 1.0}}, Relation::LessEqual,
              share * peak_demand(in.cells[c], sec, p));
        }

  // dispatch limited by cumulative installed units
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t c = 0; c < C; ++c)
      for (int p = 0; p < P; ++p)
        for (int s = 0; s < kS; ++s) {
          Terms t{{vprod[idx4(j, c, p, s, C, P, kS)], 1.0}};
          for (int q2 = 0; q2 <= p; ++q2)
            t.push_back({vbuild[(j * C + c) * P + q2],
                         -cat.conversion[j].unit_capacity_gw * 1000.0});
          lp.add_constraint(
              nm({"pcap", cat.conversion[j].name, in.cells[c].id, ts(p), ts(s)}),
              std::move(t), Relation::LessEqual, 0.0);
        }

  // storage inventory recursion, capacity and rate limits
  for (const auto& sv : stores) {
    const auto& st = cat.storage[sv.asset];
    const std::string& cid = in.cells[sv.cell].id;
    for (int p = 0; p < P; ++p) {
      Terms units;
      for (int q2 = 0; q2 <= p; ++q2) units.push_back({sv.build[q2], 1.0});
      for (int s = 0; s < kS; ++s) {
        Terms tin{{sv.sin[p * kS + s], 1.0}};
        Terms tout{{sv.sout[p * kS + s], 1.0}};
        for (auto [u, w] : units) {
          tin.push_back({u, -st.max_injectivity_mw});
          tout.push_back({u, -st.max_deliverability_mw});
        }
        lp.add_constraint(nm({"sratei", st.name, cid, ts(p), ts(s)}), std::move(tin),
                          Relation::LessEqual, 0.0);
        lp.add_constraint(nm({"srateo", st.name, cid, ts(p), ts(s)}), std::move(tout),
                          Relation::LessEqual, 0.0);
      }
      if (st.intra_day_only) {
        // vessels cycle over each representative day
        for (int season = 0; season < 4; ++season)
          for (int k = 0; k < 4; ++k) {
            int s = TimeSliceCalendar::slice_index(static_cast<Season>(season),
                                                   static_cast<DayPeriod>(k));
            double len = in.calendar.period_length_hours(static_cast<DayPeriod>(k));
            int cur = sv.inv[p * 16 + season * 4 + k];
            int nxt = sv.inv[p * 16 + season * 4 + (k + 1) % 4];
            lp.add_constraint(nm({"vbal", st.name, cid, ts(p), ts(season), ts(k)}),
                              {{nxt, 1.0},
                               {cur, -1.0},
                               {sv.sin[p * kS + s], -len},
                               {sv.sout[p * kS + s], len}},
                              Relation::Equal, 0.0);
          }
        for (int i = 0; i < 16; ++i) {
          Terms t{{sv.inv[p * 16 + i], 1.0}};
          for (auto [u, w] : units) t.push_back({u, -st.capacity_gwh * 1000.0});
          lp.add_constraint(nm({"scap", st.name, cid, ts(p), ts(i)}), std::move(t),
                            Relation::LessEqual, 0.0);
        }
      } else {
        // caverns carry inventory season to season, cyclically
        for (int k = 0; k < kPhases; ++k) {
          Terms t{{sv.inv[p * kPhases + (k + 1) % kPhases], 1.0},
                  {sv.inv[p * kPhases + k], -1.0}};
          for (int tod = 0; tod < TimeSliceCalendar::kDayPeriods; ++tod) {
            int s = TimeSliceCalendar::slice_index(kPhaseSeason[k],
                                                   static_cast<DayPeriod>(tod));
            t.push_back({sv.sin[p * kS + s], -hours[s]});
            t.push_back({sv.sout[p * kS + s], hours[s]});
          }
          lp.add_constraint(nm({"sbal", st.name, cid, ts(p), ts(k)}), std::move(t),
                            Relation::Equal, 0.0);
        }
        for (int k = 0; k < kPhases; ++k) {
          Terms t{{sv.inv[p * kPhases + k], 1.0}};
          for (auto [u, w] : units) t.push_back({u, -st.capacity_gwh * 1000.0});
          lp.add_constraint(nm({"scap", st.name, cid, ts(p), ts(k)}), std::move(t),
                            Relation::LessEqual, 0.0);
        }
      }
    }
  }

  // well throughput: annual injected tonnes within drilled capacity
  if (well)
    for (std::size_t c = 0; c < C; ++c) {
      if (vwell[c * P] < 0) continue;
      for (int p = 0; p < P; ++p) {
        Terms t;
        for (int s = 0; s < kS; ++s)
          t.push_back({vinj[(c * P + p) * kS + s], hours[s] * 1e-6});  // Mt
        for (int q2 = 0; q2 <= p; ++q2)
          t.push_back({vwell[c * P + q2], -well->well_mt_per_year});
        lp.add_constraint(nm({"wlim", in.cells[c].id, ts(p)}), std::move(t),
                          Relation::LessEqual, 0.0);
      }
    }

  // pipeline flows within built diameter-class capacity
  for (int g = 0; g < 2; ++g) {
    if (groups[g].classes.empty()) continue;
    for (std::size_t e = 0; e < E; ++e)
      for (int p = 0; p < P; ++p)
        for (int s = 0; s < kS; ++s) {
          Terms t{{vpf[idx4(g * E + e, 0, p, s, 2, P, kS)], 1.0},
                  {vpf[idx4(g * E + e, 1, p, s, 2, P, kS)], 1.0}};
          for (std::size_t k : groups[g].classes) {
            double cap = g == 0 ? cat.pipelines[k].max_flow_kg_s * kH2MwPerKgPerS
                                : cat.pipelines[k].max_flow_kg_s * 3.6;  // t/h
            for (int q2 = 0; q2 <= p; ++q2)
              t.push_back({vpb[(k * E + e) * P + q2], -cap});
          }
          lp.add_constraint(
              nm({"pflim", groups[g].label, in.edges[e].a, in.edges[e].b, ts(p), ts(s)}),
              std::move(t), Relation::LessEqual, 0.0);
        }
  }

  // resource balances per cell, slice, period
  for (std::size_t c = 0; c < C; ++c)
    for (int p = 0; p < P; ++p)
      for (int s = 0; s < kS; ++s) {
        std::size_t i = (c * P + p) * kS + s;
        Terms h2, elec{{velec[i], 1.0}}, gas{{vgas[i], 1.0}}, bio{{vbio[i], 1.0}},
            co2;
        for (std::size_t j = 0; j < J; ++j) {
          const auto& tech = cat.conversion[j];
          int pv = vprod[idx4(j, c, p, s, C, P, kS)];
          h2.push_back({pv, 1.0});
          if (tech.electricity_per_mwh != 0) elec.push_back({pv, -tech.electricity_per_mwh});
          if (tech.gas_per_mwh != 0) gas.push_back({pv, -tech.gas_per_mwh});
          if (tech.biomass_per_mwh != 0) bio.push_back({pv, -tech.biomass_per_mwh});
          if (tech.co2_captured_t_per_mwh != 0)
            co2.push_back({pv, tech.co2_captured_t_per_mwh});
        }
        for (std::size_t m = 0; m < M; ++m)
          for (int sec = 0; sec < kSectors; ++sec) {
            int qv = vq[(idx4(m, c, sec, p, C, kSectors, P)) * kS + s];
            switch (modes[m].fuel) {
              case Fuel::Electricity:
                elec.push_back({qv, -1.0 / modes[m].cop});
                break;
              case Fuel::Hydrogen:
                h2.push_back({qv, -1.0 / modes[m].efficiency});
                break;
              case Fuel::Gas:
                gas.push_back({qv, -1.0 / modes[m].efficiency});
                break;
            }
          }
        for (const auto& sv : stores) {
          if (sv.cell != c) continue;
          h2.push_back({sv.sout[p * kS + s], 1.0});
          h2.push_back({sv.sin[p * kS + s], -1.0});
        }
        if (vinj[(c * P + p) * kS + s] >= 0)
          co2.push_back({vinj[(c * P + p) * kS + s], -1.0});
        for (int g = 0; g < 2; ++g) {
          if (groups[g].classes.empty()) continue;
          Terms& row = g == 0 ? h2 : co2;
          for (std::size_t e = 0; e < E; ++e) {
            std::size_t a = in.cell_index(in.edges[e].a), b = in.cell_index(in.edges[e].b);
            if (a != c && b != c) continue;
            double delivered = 1.0 - groups[g].loss_frac_per_km * in.edges[e].km;
            if (delivered < 0) delivered = 0;
            int fwd = vpf[idx4(g * E + e, 0, p, s, 2, P, kS)];
            int rev = vpf[idx4(g * E + e, 1, p, s, 2, P, kS)];
            if (a == c) {        // a sends on fwd, receives on rev
              row.push_back({fwd, -1.0});
              row.push_back({rev, delivered});
            } else {
              row.push_back({rev, -1.0});
              row.push_back({fwd, delivered});
            }
          }
        }
        lp.add_constraint(nm({"h2", in.cells[c].id, ts(p), ts(s)}), std::move(h2),
                          Relation::Equal, 0.0);
        lp.add_constraint(nm({"elec", in.cells[c].id, ts(p), ts(s)}), std::move(elec),
                          Relation::Equal, 0.0);
        lp.add_constraint(nm({"gas", in.cells[c].id, ts(p), ts(s)}), std::move(gas),
                          Relation::Equal, 0.0);
        lp.add_constraint(nm({"bio", in.cells[c].id, ts(p), ts(s)}), std::move(bio),
                          Relation::Equal, 0.0);
        if (!co2.empty())
          lp.add_constraint(nm({"co2", in.cells[c].id, ts(p), ts(s)}), std::move(co2),
                            Relation::Equal, 0.0);
      }

  // per-period emission caps: residual process emissions plus on-site gas
  // burn, net of negative-emission production
  for (int p = 0; p < P; ++p) {
    Terms t;
    for (std::size_t j = 0; j < J; ++j) {
      if (cat.conversion[j].co2_residual_t_per_mwh == 0) continue;
      for (std::size_t c = 0; c < C; ++c)
        for (int s = 0; s < kS; ++s)
          t.push_back({vprod[idx4(j, c, p, s, C, P, kS)],
                       cat.conversion[j].co2_residual_t_per_mwh * hours[s] * 1e-6});
    }
    for (std::size_t m = 0; m < M; ++m) {
      if (modes[m].fuel != Fuel::Gas) continue;
      for (std::size_t c = 0; c < C; ++c)
        for (int sec = 0; sec < kSectors; ++sec)
          for (int s = 0; s < kS; ++s)
            t.push_back({vq[(idx4(m, c, sec, p, C, kSectors, P)) * kS + s],
                         in.gas_emission_t_per_mwh / modes[m].efficiency * hours[s] * 1e-6});
    }
    lp.add_constraint(nm({"emission", ts(p)}), std::move(t), Relation::LessEqual,
                      in.emissions.caps_mt[p]);
  }

  // statutory build-rate ceiling on new production capacity
  for (int p = 0; p < P; ++p) {
    Terms t;
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t c = 0; c < C; ++c)
        t.push_back({vbuild[(j * C + c) * P + p], cat.conversion[j].unit_capacity_gw});
    if (!t.empty())
      lp.add_constraint(nm({"build_rate", ts(p)}), std::move(t), Relation::LessEqual,
                        in.build_limit_gw_per_yr * years_per_period);
  }

  lp.sense = solver::Sense::Minimise;
  return mip;
}

HeatSupplyMix extract_heat_mix(const LinearProgram& lp, const solver::MipSolution& sol,
                               const RtnInstance& in) {
  HeatSupplyMix mix;
  const auto modes = heat_modes(in.catalog);
  for (int p = 0; p < in.periods; ++p)
    for (const auto& cell : in.cells)
      for (int sec = 0; sec < kSectors; ++sec)
        for (int s = 0; s < kS; ++s) {
          double demand = cell.heat_demand_mw[sec][p][s];
          std::vector<double> weight(modes.size(), 0.0);
          double total = 0.0;
          for (std::size_t m = 0; m < modes.size(); ++m) {
            if (demand > 1e-9) {
              weight[m] = sol.value(lp, nm({"q", modes[m].name, cell.id, sector_name(sec),
                                            ts(p), ts(s)}));
            } else {
              // zero-demand slice: fall back to the installed capacity mix
              weight[m] =
                  modes[m].capacity_factor *
                  sol.value(lp, nm({"hk", in.catalog.heat[modes[m].tech].name, cell.id,
                                    sector_name(sec), ts(p)}));
            }
            total += weight[m];
          }
          if (total <= 1e-9) continue;
          for (std::size_t m = 0; m < modes.size(); ++m)
            mix.entries.push_back(
                {p, cell.id, sec, s, modes[m].name, weight[m] / total});
        }
  return mix;
}

HydrogenPlan extract_hydrogen_plan(const LinearProgram& lp, const solver::MipSolution& sol,
                                   const RtnInstance& in) {
  HydrogenPlan plan;
  const auto& cat = in.catalog;
  for (const auto& tech : cat.conversion)
    for (const auto& cell : in.cells)
      for (int p = 0; p < in.periods; ++p) {
        double units = 0.0;
        for (int q = 0; q <= p; ++q)
          units += sol.value(lp, nm({"build", tech.name, cell.id, ts(q)}));
        if (units > 0.5)
          plan.production.push_back(
              {tech.name, cell.id, p, std::round(units) * tech.unit_capacity_gw});
        for (int s = 0; s < kS; ++s) {
          double mw = sol.value(lp, nm({"prod", tech.name, cell.id, ts(p), ts(s)}));
          if (mw > 1e-6) plan.dispatch.push_back({tech.name, cell.id, p, s, mw});
        }
      }
  for (const auto& st : cat.storage)
    for (const auto& cell : in.cells)
      for (int p = 0; p < in.periods; ++p) {
        std::string base = st.kind == StorageAsset::Kind::Co2Well
                               ? nm({"wbuild", cell.id, ts(0)})
                               : nm({"sbuild", st.name, cell.id, ts(0)});
        if (!lp.has_variable(base)) continue;
        double units = 0.0;
        for (int q = 0; q <= p; ++q)
          units += sol.value(lp, st.kind == StorageAsset::Kind::Co2Well
                                     ? nm({"wbuild", cell.id, ts(q)})
                                     : nm({"sbuild", st.name, cell.id, ts(q)}));
        if (units > 0.5) plan.storage.push_back({st.name, cell.id, p, std::round(units)});
      }
  for (const auto& pl : cat.pipelines)
    for (const auto& e : in.edges)
      for (int p = 0; p < in.periods; ++p) {
        double units = 0.0;
        for (int q = 0; q <= p; ++q)
          units += sol.value(lp, nm({"pbuild", pl.name, e.a, e.b, ts(q)}));
        if (units > 0.5)
          plan.pipelines.push_back(
              {pl.carrier == PipelineCarrier::Hydrogen ? "H2" : "CO2", pl.name, e.a, e.b, p,
               std::round(units)});
      }
  return plan;
}

std::vector<double> audit_emissions(const LinearProgram& lp, const solver::MipSolution& sol,
                                    const RtnInstance& in) {
  std::vector<double> mt(in.periods, 0.0);
  const auto modes = heat_modes(in.catalog);
  for (int p = 0; p < in.periods; ++p) {
    double tonnes = 0.0;
    for (const auto& tech : in.catalog.conversion)
      for (const auto& cell : in.cells)
        for (int s = 0; s < kS; ++s)
          tonnes += tech.co2_residual_t_per_mwh *
                    sol.value(lp, nm({"prod", tech.name, cell.id, ts(p), ts(s)})) *
                    in.calendar.slice_member_hours(s);
    for (const auto& m : modes) {
      if (m.fuel != Fuel::Gas) continue;
      for (const auto& cell : in.cells)
        for (int sec = 0; sec < kSectors; ++sec)
          for (int s = 0; s < kS; ++s)
            tonnes += in.gas_emission_t_per_mwh / m.efficiency *
                      sol.value(lp, nm({"q", m.name, cell.id, sector_name(sec), ts(p),
                                        ts(s)})) *
                      in.calendar.slice_member_hours(s);
    }
    mt[p] = tonnes * 1e-6;
  }
  return mt;
}

std::vector<double> audit_build_rate(const LinearProgram& lp,
                                     const solver::MipSolution& sol,
                                     const RtnInstance& in) {
  std::vector<double> gw(in.periods, 0.0);
  for (int p = 0; p < in.periods; ++p)
    for (const auto& tech : in.catalog.conversion)
      for (const auto& cell : in.cells)
        gw[p] += tech.unit_capacity_gw *
                 sol.value(lp, nm({"build", tech.name, cell.id, ts(p)}));
  return gw;
}

}  // namespace heatlink::rtn
