#ifndef LGL_REPORTS_H_
#define LGL_REPORTS_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "lgl/email_game.h"
#include "lgl/equilibrium.h"
#include "lgl/game.h"
#include "lgl/global_game.h"
#include "lgl/icr.h"

// Machine-readable outputs. Every number passes through report_number so the
// text is identical across runs.
namespace lgl::reports {

nlohmann::json validation_json(const ValidationReport& report);

nlohmann::json behavior_json(const GameInstance& game, const icr::BehaviorMap& behavior);

// [{"round": m, "behavior": ...}, ...] for S_0 .. fixed point.
nlohmann::json icr_trace_json(const GameInstance& game, const icr::IcrResult& result);

// characteristic,belief,surviving,eliminated where eliminated lists
// action@round for every action removed along the trace.
std::string icr_summary_csv(const GameInstance& game, const icr::IcrResult& result);

nlohmann::json profile_json(const GameInstance& game, const equilibrium::StrategyProfile& zeta);

nlohmann::json equilibrium_json(const GameInstance& game, const equilibrium::ExtremalResult& top,
                                const equilibrium::ExtremalResult& bottom);

nlohmann::json sandwich_json(const GameInstance& game, const equilibrium::SandwichReport& report);

nlohmann::json supermodularity_json(const GameInstance& game,
                                    const equilibrium::SupermodularityReport& report);

// Per belief: x, R, memberships and the certified action (if any).
nlohmann::json region_json(const GameInstance& game, const global_game::UniquenessCertificate& cert);
std::string region_csv(const GameInstance& game, const global_game::UniquenessCertificate& cert);

std::string contagion_csv(const email_game::ContagionResult& result);
nlohmann::json contagion_json(const GameInstance& game, const email_game::EmailGameParams& params,
                              const email_game::ContagionResult& result);

// Fixed 12-digit decimal text used in every CSV.
std::string csv_number(double x);

}  // namespace lgl::reports

#endif  // LGL_REPORTS_H_
