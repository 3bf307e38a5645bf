#pragma once

#include "xbarsim/common.hpp"

namespace xbarsim {

// Threshold-switching memristor model. The *_n fields are the negative
// polarity set.
struct DeviceParams {
    double v_p = 4.0;
    double v_n = 4.0;
    double a_p = 816000.0;
    double a_n = 816000.0;
    double x_p = 0.9897;
    double x_n = 0.9897;
    double alpha_p = 0.2;
    double alpha_n = 0.2;
    double a1 = 1.6e-4;
    double a2 = 1.6e-4;
    double b = 0.05;
    double x0 = 0.001;
    // Global multiplier on dx/dt, fixed by calibrate_switching().
    double rate_scale = 1.0;

    double g_max() const { return a1 * b; }
    double g_min() const { return g_max() / 1000.0; }
    void validate() const;
    bool operator==(const DeviceParams &) const = default;
};

struct DeviceState {
    double x = 0.001;
    bool operator==(const DeviceState &) const = default;
};

inline DeviceState fresh_device(const DeviceParams &p) { return {p.x0}; }

double device_current(const DeviceParams &p, DeviceState s, double v);

// Linearized conductance a1*b*x, clamped to [g_min, g_max].
double small_signal_conductance(const DeviceParams &p, DeviceState s);
// Inverse of small_signal_conductance on its unclamped range.
double state_for_conductance(const DeviceParams &p, double g);

// Drive term g(V): zero inside [-v_n, v_p].
double drive_rate(const DeviceParams &p, double v);
// Window f(x) for the direction of motion given by the sign of the drive.
double window(const DeviceParams &p, double x, bool increasing);

// Largest explicit-Euler substep used by step_state.
inline constexpr double max_euler_step = 0.05e-9;

// Integrates dx/dt = rate_multiplier * rate_scale * g(V) * f(x) for dt
// seconds. Throws std::invalid_argument when dt <= 0.
DeviceState step_state(const DeviceParams &p, DeviceState s, double v, double dt,
        double rate_multiplier = 1.0);

// Time for a constant drive to move x from `from` across `to`; +inf if the
// drive never gets there.
double switching_time(const DeviceParams &p, double v, double from, double to,
        double time_limit = 1e-6);

// Returns a copy of p with rate_scale set so that a constant `v` moves x from
// x0 to `x_target` in `target_time`.
DeviceParams calibrate_switching(DeviceParams p, double v = 4.25, double target_time = 80e-9,
        double x_target = 0.99);

} // namespace xbarsim
