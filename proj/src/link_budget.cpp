#include "cellplan/link_budget.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cellplan/errors.hpp"

namespace cellplan {

namespace {

using nlohmann::json;

std::string fmt(double v, const char* unit) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%10.2f %s", v, unit);
    return buf;
}

struct ItemSums {
    double tx_power = 0.0;
    double tx_gain = 0.0;
    double tx_loss = 0.0;
    double rx_gain = 0.0;
    double rx_loss = 0.0;
    double margin = 0.0;
};

ItemSums sum_items(const LinkBudget& budget) {
    ItemSums s;
    for (const auto& item : budget.items) {
        switch (item.kind) {
            case ItemKind::TxPower: s.tx_power = item.value_db; break;
            case ItemKind::Gain:
                (item.side == ItemSide::Tx ? s.tx_gain : s.rx_gain) += item.value_db;
                break;
            case ItemKind::Loss:
                (item.side == ItemSide::Tx ? s.tx_loss : s.rx_loss) += item.value_db;
                break;
            case ItemKind::Margin: s.margin += item.value_db; break;
        }
    }
    return s;
}

} // namespace

ItemKind item_kind_from_string(const std::string& s) {
    if (s == "tx_power") return ItemKind::TxPower;
    if (s == "gain") return ItemKind::Gain;
    if (s == "loss") return ItemKind::Loss;
    if (s == "margin") return ItemKind::Margin;
    throw std::invalid_argument("unknown budget item kind: " + s);
}

ItemSide item_side_from_string(const std::string& s) {
    if (s == "tx") return ItemSide::Tx;
    if (s == "rx") return ItemSide::Rx;
    throw std::invalid_argument("unknown budget item side: " + s);
}

const char* to_string(ItemKind k) {
    switch (k) {
        case ItemKind::TxPower: return "tx_power";
        case ItemKind::Gain: return "gain";
        case ItemKind::Loss: return "loss";
        case ItemKind::Margin: return "margin";
    }
    return "?";
}

const char* to_string(ItemSide s) { return s == ItemSide::Tx ? "tx" : "rx"; }

void LinkBudget::validate() const {
    carrier.validate();
    if (items.empty()) throw std::invalid_argument("budget: items must be nonempty");
    if (!(target_throughput_mbps > 0.0)) {
        throw std::invalid_argument("budget: target throughput must be positive");
    }
    int tx_power_items = 0;
    for (const auto& item : items) {
        if (item.kind == ItemKind::TxPower) ++tx_power_items;
        if ((item.kind == ItemKind::Loss || item.kind == ItemKind::Margin) && item.value_db < 0.0) {
            throw std::invalid_argument("budget: loss/margin item '" + item.name +
                                        "' must be nonnegative");
        }
    }
    if (tx_power_items != 1) {
        throw std::invalid_argument("budget: exactly one tx_power item required, found " +
                                    std::to_string(tx_power_items));
    }
}

BudgetResult evaluate_budget(const LinkBudget& budget) {
    budget.validate();
    const ItemSums s = sum_items(budget);

    BudgetResult r;
    r.eirp_dbm = s.tx_power + s.tx_gain - s.tx_loss;
    r.required_sinr_db = required_sinr_db_for_throughput(
        budget.target_throughput_mbps, budget.carrier.bandwidth_mhz, budget.layers, budget.efficiency);
    r.receiver_sensitivity_dbm =
        thermal_noise_dbm(budget.carrier.bandwidth_mhz, budget.ue_noise_figure_db) + r.required_sinr_db;

    const double rx_requirement = r.receiver_sensitivity_dbm + s.margin + s.rx_loss - s.rx_gain;
    r.required_nrsrp_dbm = rx_requirement - 10.0 * std::log10(budget.carrier.subcarrier_count);
    r.mapl_db = r.eirp_dbm - rx_requirement;
    return r;
}

double required_nrsrp_for_throughput(const LinkBudget& budget, double throughput_mbps) {
    LinkBudget b = budget;
    b.target_throughput_mbps = throughput_mbps;
    return evaluate_budget(b).required_nrsrp_dbm;
}

LinkBudget parse_budget_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("budget config: " + std::string(e.what()));
    }
    try {
        LinkBudget budget;
        const auto& carrier = doc.at("carrier");
        budget.carrier.center_freq_mhz = carrier.at("center_freq_mhz").get<double>();
        budget.carrier.bandwidth_mhz = carrier.at("bandwidth_mhz").get<double>();
        budget.carrier.subcarrier_count = carrier.at("subcarrier_count").get<int>();
        budget.carrier.duplex = duplex_from_string(carrier.value("duplex", "TDD"));
        budget.target_throughput_mbps = doc.at("target_throughput_mbps").get<double>();
        budget.layers = doc.at("layers").get<int>();
        budget.efficiency = doc.value("efficiency", 0.75);
        budget.ue_noise_figure_db = doc.at("ue_noise_figure_db").get<double>();
        for (const auto& j : doc.at("items")) {
            BudgetLineItem item;
            item.name = j.at("name").get<std::string>();
            item.kind = item_kind_from_string(j.at("kind").get<std::string>());
            item.side = item_side_from_string(j.at("side").get<std::string>());
            item.value_db = j.at("value_db").get<double>();
            budget.items.push_back(std::move(item));
        }
        budget.validate();
        return budget;
    } catch (const json::exception& e) {
        throw ParseError("budget config: " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw ParseError("budget config: " + std::string(e.what()));
    }
}

std::string budget_table(const LinkBudget& budget, const BudgetResult& result) {
    std::ostringstream out;
    char line[128];
    out << "5G NR Link Budget (" << budget.carrier.bandwidth_mhz << " MHz @ "
        << budget.carrier.center_freq_mhz << " MHz, " << budget.target_throughput_mbps << " Mbps, "
        << budget.layers << " layers)\n";
    out << "------------------------------------------------------\n";
    for (const auto& item : budget.items) {
        const char* unit = item.kind == ItemKind::TxPower ? "dBm" : "dB";
        std::snprintf(line, sizeof(line), "  %-2s %-8s %-28s %s\n", to_string(item.side),
                      to_string(item.kind), item.name.c_str(), fmt(item.value_db, unit).c_str());
        out << line;
    }
    out << "------------------------------------------------------\n";
    const auto summary = [&](const std::string& label, double value, const char* unit) {
        std::snprintf(line, sizeof(line), "  %-41s %s\n", label.c_str(), fmt(value, unit).c_str());
        out << line;
    };
    summary("EIRP", result.eirp_dbm, "dBm");
    summary("Required SINR", result.required_sinr_db, "dB");
    summary("Receiver sensitivity (wideband)", result.receiver_sensitivity_dbm, "dBm");
    summary("Per-RE conversion (" + std::to_string(budget.carrier.subcarrier_count) + " subcarriers)",
            -10.0 * std::log10(budget.carrier.subcarrier_count), "dB");
    summary("Required NRSRP (per RE)", result.required_nrsrp_dbm, "dBm");
    summary("MAPL (wideband)", result.mapl_db, "dB");
    return out.str();
}

std::string budget_result_json(const LinkBudget& budget, const BudgetResult& result) {
    json doc;
    doc["carrier"] = {{"center_freq_mhz", budget.carrier.center_freq_mhz},
                      {"bandwidth_mhz", budget.carrier.bandwidth_mhz},
                      {"subcarrier_count", budget.carrier.subcarrier_count},
                      {"duplex", to_string(budget.carrier.duplex)}};
    doc["target_throughput_mbps"] = budget.target_throughput_mbps;
    doc["eirp_dbm"] = result.eirp_dbm;
    doc["required_sinr_db"] = result.required_sinr_db;
    doc["receiver_sensitivity_dbm"] = result.receiver_sensitivity_dbm;
    doc["required_nrsrp_dbm"] = result.required_nrsrp_dbm;
    doc["mapl_db"] = result.mapl_db;
    // MAPL is wideband-consistent: EIRP against the required wideband
    // receive level; the per-RE conversion applies to NRSRP only.
    doc["mapl_convention"] = "wideband";
    return doc.dump(2) + "\n";
}

} // namespace cellplan
