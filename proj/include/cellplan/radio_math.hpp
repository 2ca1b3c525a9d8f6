#pragma once

#include <string>

namespace cellplan {

/// Propagation speed used for all wavelength math, m/s. Kept at 3.0e8 so
/// that 3500 MHz yields exactly 8.57 cm (and 40 lambda = 342.86 cm,
/// 0.8 lambda = 6.86 cm) after rounding to centimeters.
inline constexpr double kSpeedOfLight = 3.0e8;

enum class Duplex { TDD, FDD };

Duplex duplex_from_string(const std::string& s);
const char* to_string(Duplex d);

/// NR carrier description.
struct CarrierConfig {
    double center_freq_mhz = 3500.0;
    double bandwidth_mhz = 60.0;
    int subcarrier_count = 1944; // n in the SINR/NRSRQ relationship
    Duplex duplex = Duplex::TDD;

    void validate() const;
};

/// Per-antenna subcarrier activity factor, dimensionless in [0, 1].
struct ActivityFactor {
    double x = 0.0;

    void validate() const;
};

double db_to_linear(double db);

/// Throws std::invalid_argument for nonpositive ratios.
double linear_to_db(double ratio);

/// Wavelength in meters; throws std::invalid_argument for freq <= 0.
double wavelength_m(double freq_mhz);

/// Thermal noise floor: -174 dBm/Hz integrated over the bandwidth, plus
/// the receiver noise figure. Throws for nonpositive bandwidth.
double thermal_noise_dbm(double bandwidth_mhz, double noise_figure_db);

/// SINR = 1 / (1/(n*NRSRQ) - x), all linear ratios. Throws
/// std::domain_error when the denominator is not positive (an NRSRQ
/// inconsistent with the activity factor). x == 0 degenerates exactly to
/// n * nrsrq.
double sinr_from_nrsrq(double nrsrq_linear, int subcarrier_count, ActivityFactor x);

/// Algebraic inverse of sinr_from_nrsrq; requires sinr > 0.
double nrsrq_from_sinr(double sinr_linear, int subcarrier_count, ActivityFactor x);

/// Shannon capacity with an efficiency derating, solved for SINR:
/// 10*log10(2^(throughput / (layers * bandwidth * efficiency)) - 1).
/// Throws std::invalid_argument for nonpositive inputs or efficiency > 1.
double required_sinr_db_for_throughput(double throughput_mbps, double bandwidth_mhz, int layers,
                                       double efficiency);

} // namespace cellplan
