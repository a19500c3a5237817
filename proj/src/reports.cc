#include "lgl/reports.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "lgl/game_io.h"

namespace lgl::reports {

using nlohmann::json;

std::string csv_number(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", report_number(x));
  return buf;
}

json validation_json(const ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"code", v.code}, {"location", v.location}, {"message", v.message}});
  }
  return {{"usable", report.usable()}, {"violations", violations}};
}

namespace {

std::string pair_text(const GameInstance& game, TypePair p) {
  return game.characteristics.labels[p.characteristic] + "," + game.beliefs[p.belief].label;
}

json action_labels(const GameInstance& game, const std::vector<int>& actions) {
  json out = json::array();
  for (int a : actions) out.push_back(game.actions.label(a));
  return out;
}

}  // namespace

json behavior_json(const GameInstance& game, const icr::BehaviorMap& behavior) {
  json out = json::array();
  for (size_t i = 0; i < behavior.pairs.size(); ++i) {
    const auto p = behavior.pairs[i];
    out.push_back({{"characteristic", game.characteristics.labels[p.characteristic]},
                   {"belief", game.beliefs[p.belief].label},
                   {"actions", action_labels(game, behavior.sets[i])}});
  }
  return out;
}

json icr_trace_json(const GameInstance& game, const icr::IcrResult& result) {
  json out = json::array();
  for (size_t m = 0; m < result.trace.size(); ++m) {
    out.push_back({{"round", m}, {"behavior", behavior_json(game, result.trace[m])}});
  }
  return out;
}

std::string icr_summary_csv(const GameInstance& game, const icr::IcrResult& result) {
  std::ostringstream os;
  os << "characteristic,belief,surviving,eliminated\n";
  const auto& final_map = result.rationalizable;
  for (size_t i = 0; i < final_map.pairs.size(); ++i) {
    const auto p = final_map.pairs[i];
    std::string surviving, eliminated;
    for (int a : final_map.sets[i]) surviving += (surviving.empty() ? "" : "|") + game.actions.label(a);
    for (size_t m = 1; m < result.trace.size(); ++m) {
      const auto& before = result.trace[m - 1].sets[i];
      const auto& after = result.trace[m].sets[i];
      for (int a : before) {
        if (std::binary_search(after.begin(), after.end(), a)) continue;
        eliminated += (eliminated.empty() ? "" : "|") + game.actions.label(a) + "@" + std::to_string(m);
      }
    }
    os << game.characteristics.labels[p.characteristic] << "," << game.beliefs[p.belief].label << ","
       << surviving << "," << eliminated << "\n";
  }
  return os.str();
}

json profile_json(const GameInstance& game, const equilibrium::StrategyProfile& zeta) {
  json out = json::array();
  for (size_t i = 0; i < zeta.pairs.size(); ++i) {
    const auto p = zeta.pairs[i];
    out.push_back({{"characteristic", game.characteristics.labels[p.characteristic]},
                   {"belief", game.beliefs[p.belief].label},
                   {"action", game.actions.label(zeta.actions[i])}});
  }
  return out;
}

namespace {

json verification_json(const GameInstance& game, const equilibrium::EquilibriumCheck& check) {
  json violations = json::array();
  for (const auto& v : check.violations) {
    violations.push_back({{"pair", pair_text(game, v.pair)},
                          {"played", game.actions.label(v.played)},
                          {"best", action_labels(game, v.best)},
                          {"regret", report_number(v.regret)}});
  }
  return {{"is_bne", check.is_bne},
          {"max_regret", report_number(check.max_regret)},
          {"violations", violations}};
}

}  // namespace

json equilibrium_json(const GameInstance& game, const equilibrium::ExtremalResult& top,
                      const equilibrium::ExtremalResult& bottom) {
  json pairs = json::array();
  for (size_t i = 0; i < top.zeta.pairs.size(); ++i) {
    const auto p = top.zeta.pairs[i];
    pairs.push_back({{"characteristic", game.characteristics.labels[p.characteristic]},
                     {"belief", game.beliefs[p.belief].label},
                     {"top", game.actions.label(top.zeta.actions[i])},
                     {"bottom", game.actions.label(bottom.zeta.action_at(p))}});
  }
  return {{"pairs", pairs},
          {"top", {{"rounds", top.rounds}, {"verification", verification_json(game, top.verification)}}},
          {"bottom",
           {{"rounds", bottom.rounds}, {"verification", verification_json(game, bottom.verification)}}},
          {"unique", top.zeta == bottom.zeta}};
}

json sandwich_json(const GameInstance& game, const equilibrium::SandwichReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"pair", pair_text(game, v.pair)},
                          {"action", game.actions.label(v.action)},
                          {"reason", v.reason}});
  }
  return {{"ok", report.ok}, {"violations", violations}};
}

json supermodularity_json(const GameInstance& game, const equilibrium::SupermodularityReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"characteristic", game.characteristics.labels[v.characteristic]},
                          {"state", game.states.labels[v.state]},
                          {"action", game.actions.label(v.action)},
                          {"other", game.actions.label(v.other)},
                          {"component", v.component},
                          {"slack", report_number(v.slack)}});
  }
  return {{"supermodular_ok", report.supermodular_ok},
          {"sublattice_ok", report.sublattice_ok},
          {"increasing_differences_ok", report.increasing_differences_ok},
          {"sampled", report.sampled},
          {"violations", violations}};
}

namespace {

struct RegionRow {
  std::string label;
  double x = 0.0;
  double rank = 0.0;
  bool urb = false, certain = false, srd = false, nsrd = false;
  bool invest_possible = false, noninvest_possible = false;
  std::string certified;  // "1", "0" or empty
};

std::vector<RegionRow> region_rows(const GameInstance& game,
                                   const global_game::UniquenessCertificate& cert) {
  namespace gg = global_game;
  const auto stats = gg::compute_statistics(game);
  const auto srd = gg::srd_set(stats, 2.0 * cert.eps);
  const auto nsrd = gg::nsrd_set(stats, 2.0 * cert.eps);
  const auto invest = gg::invest_possible(stats);
  const auto noninvest = gg::noninvest_possible(stats);
  auto in = [](const gg::BeliefSet& set, int b) { return std::binary_search(set.begin(), set.end(), b); };
  std::vector<RegionRow> rows;
  for (int b = 0; b < stats.size(); ++b) {
    RegionRow r;
    r.label = game.beliefs[b].label;
    r.x = stats.x[b];
    r.rank = stats.rank[b];
    r.urb = in(cert.urb, b);
    r.certain = in(cert.certain_urb, b);
    r.srd = in(srd, b);
    r.nsrd = in(nsrd, b);
    r.invest_possible = in(invest, b);
    r.noninvest_possible = in(noninvest, b);
    if (in(cert.invest_region, b)) r.certified = "1";
    if (in(cert.noninvest_region, b)) r.certified = "0";
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

json region_json(const GameInstance& game, const global_game::UniquenessCertificate& cert) {
  json beliefs = json::array();
  for (const auto& r : region_rows(game, cert)) {
    beliefs.push_back({{"belief", r.label},
                       {"x", report_number(r.x)},
                       {"rank", report_number(r.rank)},
                       {"urb", r.urb},
                       {"certain_urb", r.certain},
                       {"srd_2eps", r.srd},
                       {"nsrd_2eps", r.nsrd},
                       {"invest_possible", r.invest_possible},
                       {"noninvest_possible", r.noninvest_possible},
                       {"certified_action", r.certified.empty() ? json(nullptr) : json(r.certified)}});
  }
  const auto& a = cert.assumptions;
  auto finite_or_null = [](double x) { return std::isfinite(x) ? json(report_number(x)) : json(nullptr); };
  json assumptions = {{"closedness_vacuous", a.closedness_vacuous},
                      {"fixed_point_ok", a.fixed_point_ok},
                      {"premise_ok", a.premise_ok},
                      {"threshold_chain_ok", a.threshold_chain_ok},
                      {"x_upper_certified", finite_or_null(a.x_upper_certified)},
                      {"x_upper_urb", finite_or_null(a.x_upper_urb)},
                      {"x_lower_certified", finite_or_null(a.x_lower_certified)},
                      {"notes", a.notes}};
  return {{"eps", report_number(cert.eps)},
          {"beliefs", beliefs},
          {"invest_region_size", cert.invest_region.size()},
          {"noninvest_region_size", cert.noninvest_region.size()},
          {"assumptions", assumptions}};
}

std::string region_csv(const GameInstance& game, const global_game::UniquenessCertificate& cert) {
  std::ostringstream os;
  os << "belief,x,rank,urb,certain_urb,srd_2eps,nsrd_2eps,invest_possible,noninvest_possible,"
        "certified_action\n";
  for (const auto& r : region_rows(game, cert)) {
    os << r.label << "," << csv_number(r.x) << "," << csv_number(r.rank) << "," << r.urb << ","
       << r.certain << "," << r.srd << "," << r.nsrd << "," << r.invest_possible << ","
       << r.noninvest_possible << "," << r.certified << "\n";
  }
  return os.str();
}

std::string contagion_csv(const email_game::ContagionResult& result) {
  std::ostringstream os;
  os << "round,eliminated_pairs,front_time,front_position,front_signals\n";
  for (const auto& row : result.front) {
    os << row.round << "," << row.eliminated_pairs << "," << csv_number(row.front_time) << ","
       << row.front_position << "," << row.front_signals << "\n";
  }
  return os.str();
}

json contagion_json(const GameInstance& game, const email_game::EmailGameParams& p,
                    const email_game::ContagionResult& result) {
  json pi_values = json::array();
  for (int k = 0; k < p.n_positions; ++k) {
    pi_values.push_back(report_number(email_game::pi_i(p, static_cast<double>(k) / p.n_positions)));
  }
  json retained = json::array();
  for (const auto& pair : result.retained) retained.push_back(pair_text(game, pair));
  return {{"params",
           {{"M", p.M},
            {"L", p.L},
            {"pi", p.pi},
            {"alpha", p.alpha},
            {"n_positions", p.n_positions},
            {"max_signals", p.max_signals},
            {"buckets_per_unit", p.buckets_per_unit},
            {"interval", p.reading == email_game::IntervalReading::kGeometric ? "geometric" : "literal"}}},
          {"risk_dominance_threshold", report_number(result.threshold)},
          {"contagion_function", report_number(result.contagion_value)},
          {"pi_i", pi_values},
          {"all_zero_unique", result.all_zero_unique},
          {"rounds", result.rounds},
          {"pairs_checked", result.pairs_checked},
          {"retained", retained},
          {"tail_pairs_retaining_one", result.tail_pairs_retaining_one},
          {"worlds", game.num_worlds()},
          {"beliefs", game.num_beliefs()}};
}

}  // namespace lgl::reports
