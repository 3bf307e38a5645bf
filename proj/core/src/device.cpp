#include "xbarsim/device.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xbarsim {

void DeviceParams::validate() const
{
    const bool positive = v_p > 0 && v_n > 0 && a_p > 0 && a_n > 0 && alpha_p > 0
            && alpha_n > 0 && a1 > 0 && a2 > 0 && b > 0 && rate_scale > 0;
    const auto unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!positive || !unit(x0) || !unit(x_p) || !unit(x_n)) {
        throw ConfigError("device parameters must be positive with x0, x_p, x_n in (0, 1)");
    }
}

double device_current(const DeviceParams &p, DeviceState s, double v)
{
    const double a = v >= 0.0 ? p.a1 : p.a2;
    return a * s.x * std::sinh(p.b * v);
}

double small_signal_conductance(const DeviceParams &p, DeviceState s)
{
    return std::clamp(p.a1 * p.b * s.x, p.g_min(), p.g_max());
}

double state_for_conductance(const DeviceParams &p, double g)
{
    return std::clamp(g / (p.a1 * p.b), 0.0, 1.0);
}

double drive_rate(const DeviceParams &p, double v)
{
    if (v > p.v_p) {
        return p.a_p * (std::exp(v) - std::exp(p.v_p));
    }
    if (v < -p.v_n) {
        return -p.a_n * (std::exp(-v) - std::exp(p.v_n));
    }
    return 0.0;
}

double window(const DeviceParams &p, double x, bool increasing)
{
    if (increasing) {
        if (x >= p.x_p) {
            return std::exp(-p.alpha_p * (x - p.x_p)) * ((p.x_p - x) / (1.0 - p.x_p) + 1.0);
        }
        return 1.0;
    }
    if (x <= 1.0 - p.x_n) {
        return std::exp(p.alpha_n * (x + p.x_n - 1.0)) * x / (1.0 - p.x_n);
    }
    return 1.0;
}

DeviceState step_state(const DeviceParams &p, DeviceState s, double v, double dt,
        double rate_multiplier)
{
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_state: dt must be positive");
    }
    const double g = drive_rate(p, v);
    if (g == 0.0) {
        return s;
    }
    const auto n = static_cast<long long>(std::ceil(dt / max_euler_step));
    const double h = dt / static_cast<double>(n);
    const double k = g * p.rate_scale * rate_multiplier;
    double x = s.x;
    for (long long i = 0; i < n; ++i) {
        x = std::clamp(x + h * k * window(p, x, g > 0.0), 0.0, 1.0);
    }
    return {x};
}

double switching_time(const DeviceParams &p, double v, double from, double to, double time_limit)
{
    const bool up = to > from;
    DeviceState s{from};
    double t = 0.0;
    const double h = max_euler_step / 5.0;
    while (t < time_limit) {
        const DeviceState next = step_state(p, s, v, h);
        if (next == s) {
            break;
        }
        if ((up && next.x >= to) || (!up && next.x <= to)) {
            // Linear interpolation inside the last substep.
            return t + h * (to - s.x) / (next.x - s.x);
        }
        s = next;
        t += h;
    }
    return std::numeric_limits<double>::infinity();
}

DeviceParams calibrate_switching(DeviceParams p, double v, double target_time, double x_target)
{
    p.validate();
    p.rate_scale = 1.0;
    const double t1 = switching_time(p, v, p.x0, x_target, 1e3 * target_time);
    if (!std::isfinite(t1)) {
        throw ConfigError("calibration drive does not switch the device");
    }
    // Away from the window the time scales as 1/rate_scale; refine the
    // remaining window effect by bisection on the log scale.
    double lo = t1 / target_time / 4.0, hi = t1 / target_time * 4.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = std::sqrt(lo * hi);
        p.rate_scale = mid;
        const double t = switching_time(p, v, p.x0, x_target, 1e3 * target_time);
        (t > target_time ? lo : hi) = mid;
    }
    p.rate_scale = std::sqrt(lo * hi);
    return p;
}

} // namespace xbarsim
