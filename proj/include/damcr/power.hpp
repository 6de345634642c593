#pragma once

// Link-adaptive quality power control: step the transmit power toward a
// target SNR with a hysteresis band, inside the radio's power bounds.

#include "damcr/model.hpp"

namespace damcr::power {

struct PowerBounds {
    double min_dbm = 0.0;
    double max_dbm = 0.0;
};

inline PowerBounds bounds_of(const RadioProfile& radio) {
    return {radio.tx_power_min_dbm, radio.tx_power_max_dbm};
}

/// +step below the target, -step above target + hysteresis, unchanged in
/// between; the result is clamped to bounds.
double laqpc_update(double power_dbm, double measured_snr_db, const PowerCtlParams& params,
                    const PowerBounds& bounds);

/// Power state of one radio on one node.
class PowerState {
public:
    PowerState() = default;
    PowerState(double initial_dbm, PowerBounds bounds);

    double tx_power_dbm() const { return power_; }
    const PowerBounds& bounds() const { return bounds_; }

    void update(double measured_snr_db, const PowerCtlParams& params);

private:
    double power_ = 0.0;
    PowerBounds bounds_{};
};

}  // namespace damcr::power
