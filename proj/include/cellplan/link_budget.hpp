#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cellplan/radio_math.hpp"

namespace cellplan {

enum class ItemKind { TxPower, Gain, Loss, Margin };
enum class ItemSide { Tx, Rx };

ItemKind item_kind_from_string(const std::string& s);
ItemSide item_side_from_string(const std::string& s);
const char* to_string(ItemKind k);
const char* to_string(ItemSide s);

/// One signed line of the budget. Losses and margins are nonnegative dB;
/// the single TxPower item is in dBm.
struct BudgetLineItem {
    std::string name;
    ItemKind kind = ItemKind::Gain;
    ItemSide side = ItemSide::Tx;
    double value_db = 0.0;
};

struct LinkBudget {
    std::vector<BudgetLineItem> items;
    CarrierConfig carrier;
    double target_throughput_mbps = 200.0;
    int layers = 2;
    double efficiency = 0.75;
    double ue_noise_figure_db = 7.0;

    void validate() const;
};

struct BudgetResult {
    double eirp_dbm = 0.0;
    double required_sinr_db = 0.0;
    double receiver_sensitivity_dbm = 0.0; // wideband
    double mapl_db = 0.0;                  // wideband-consistent (see evaluate_budget)
    double required_nrsrp_dbm = 0.0;       // per resource element
};

/// Evaluates the budget:
///   eirp       = tx power + tx gains - tx losses
///   sens       = thermal noise(bandwidth, UE NF) + required SINR   [wideband]
///   nrsrp_req  = sens + margins + rx losses - rx gains - 10*log10(subcarriers)
///   mapl       = eirp - (sens + margins + rx losses - rx gains)    [wideband]
/// MAPL is the wideband form: EIRP against the required wideband receive
/// level; the per-RE conversion applies to NRSRP only.
BudgetResult evaluate_budget(const LinkBudget& budget);

/// evaluate_budget with the throughput target overridden; strictly
/// increasing in throughput.
double required_nrsrp_for_throughput(const LinkBudget& budget, double throughput_mbps);

/// Loads the JSON budget document described in the README.
/// Throws ParseError on malformed JSON or schema violations.
LinkBudget parse_budget_json(std::string_view text);

/// Human-readable aligned table of items and derived results.
std::string budget_table(const LinkBudget& budget, const BudgetResult& result);

/// Machine-readable result document.
std::string budget_result_json(const LinkBudget& budget, const BudgetResult& result);

} // namespace cellplan
