#include "damcr/power.hpp"

#include <algorithm>
#include <stdexcept>

namespace damcr::power {

double laqpc_update(double power_dbm, double measured_snr_db, const PowerCtlParams& params,
                    const PowerBounds& bounds) {
    double next = power_dbm;
    if (measured_snr_db < params.target_snr_db) {
        next += params.step_db;
    } else if (measured_snr_db > params.target_snr_db + params.hysteresis_db) {
        next -= params.step_db;
    }
    return std::clamp(next, bounds.min_dbm, bounds.max_dbm);
}

PowerState::PowerState(double initial_dbm, PowerBounds bounds)
    : power_(initial_dbm), bounds_(bounds) {
    if (bounds.min_dbm > bounds.max_dbm) throw std::invalid_argument("empty power bounds");
    power_ = std::clamp(power_, bounds.min_dbm, bounds.max_dbm);
}

void PowerState::update(double measured_snr_db, const PowerCtlParams& params) {
    power_ = laqpc_update(power_, measured_snr_db, params, bounds_);
}

}  // namespace damcr::power
