#include "cellplan/radio_math.hpp"

#include <cmath>
#include <stdexcept>

namespace cellplan {

Duplex duplex_from_string(const std::string& s) {
    if (s == "TDD" || s == "tdd") return Duplex::TDD;
    if (s == "FDD" || s == "fdd") return Duplex::FDD;
    throw std::invalid_argument("unknown duplex mode: " + s);
}

const char* to_string(Duplex d) { return d == Duplex::TDD ? "TDD" : "FDD"; }

void CarrierConfig::validate() const {
    if (!(center_freq_mhz > 0.0)) throw std::invalid_argument("carrier: center_freq_mhz must be positive");
    if (!(bandwidth_mhz > 0.0)) throw std::invalid_argument("carrier: bandwidth_mhz must be positive");
    if (subcarrier_count < 1) throw std::invalid_argument("carrier: subcarrier_count must be >= 1");
}

void ActivityFactor::validate() const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("activity factor must be in [0, 1]");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double ratio) {
    if (!(ratio > 0.0)) throw std::invalid_argument("linear_to_db: ratio must be positive");
    return 10.0 * std::log10(ratio);
}

double wavelength_m(double freq_mhz) {
    if (!(freq_mhz > 0.0)) throw std::invalid_argument("wavelength: frequency must be positive");
    return kSpeedOfLight / (freq_mhz * 1.0e6);
}

double thermal_noise_dbm(double bandwidth_mhz, double noise_figure_db) {
    if (!(bandwidth_mhz > 0.0)) throw std::invalid_argument("thermal_noise: bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_mhz * 1.0e6) + noise_figure_db;
}

double sinr_from_nrsrq(double nrsrq_linear, int subcarrier_count, ActivityFactor x) {
    x.validate();
    const double nq = subcarrier_count * nrsrq_linear;
    if (!(nq > 0.0)) throw std::domain_error("sinr_from_nrsrq: n*NRSRQ must be positive");
    if (x.x == 0.0) return nq; // exact degeneracy
    const double denom = 1.0 / nq - x.x;
    if (!(denom > 0.0)) {
        throw std::domain_error("sinr_from_nrsrq: NRSRQ inconsistent with activity factor (denominator <= 0)");
    }
    return 1.0 / denom;
}

double nrsrq_from_sinr(double sinr_linear, int subcarrier_count, ActivityFactor x) {
    x.validate();
    if (!(sinr_linear > 0.0)) throw std::invalid_argument("nrsrq_from_sinr: SINR must be positive");
    return 1.0 / (subcarrier_count * (1.0 / sinr_linear + x.x));
}

double required_sinr_db_for_throughput(double throughput_mbps, double bandwidth_mhz, int layers,
                                       double efficiency) {
    if (!(throughput_mbps > 0.0)) throw std::invalid_argument("required_sinr: throughput must be positive");
    if (!(bandwidth_mhz > 0.0)) throw std::invalid_argument("required_sinr: bandwidth must be positive");
    if (layers < 1) throw std::invalid_argument("required_sinr: layers must be >= 1");
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw std::invalid_argument("required_sinr: efficiency must be in (0, 1]");
    }
    const double spectral = throughput_mbps / (layers * bandwidth_mhz * efficiency);
    return 10.0 * std::log10(std::exp2(spectral) - 1.0);
}

} // namespace cellplan
