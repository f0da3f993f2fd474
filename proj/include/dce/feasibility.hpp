#pragma once

#include "dce/constants.hpp"
#include "dce/errors.hpp"

namespace dce {

namespace units {
struct meters_tag {};
struct meters_per_second_tag {};
struct rad_per_second_tag {};
struct newtons_per_m2_tag {};
struct joules_per_m2_tag {};
struct per_second_tag {};
struct dimensionless_tag {};
}  // namespace units

/// A double tagged with its SI unit. Quantities with different tags do not
/// convert into one another; mixing them is a compile error.
template <typename Tag>
class Quantity {
public:
    constexpr explicit Quantity(double v) : value_(v) {}
    constexpr double value() const { return value_; }

private:
    double value_;
};

using Meters = Quantity<units::meters_tag>;
using MetersPerSecond = Quantity<units::meters_per_second_tag>;
using RadPerSecond = Quantity<units::rad_per_second_tag>;
using PressureAmplitude = Quantity<units::newtons_per_m2_tag>;
using Fluence = Quantity<units::joules_per_m2_tag>;
using PerSecond = Quantity<units::per_second_tag>;
using Dimensionless = Quantity<units::dimensionless_tag>;

/// Laser-driven suspended plate: intensity I on a plate of density rho and
/// thickness b closing a cavity of length L at wavelength lambda.
struct MirrorDriveInput {
    double intensity = 0.0;   // W/m^2
    double density = 0.0;     // kg/m^3
    double thickness = 0.0;   // m
    double wavelength = 0.0;  // m
    double length = 0.0;      // m
    double xi = 1.0;          // geometry factor, 1 for parallel plates

    void validate() const;
};

struct RadiationPressureDrive {
    PressureAmplitude force_amplitude;  // oscillating part, 2I/c per area
    Meters displacement;                // Delta L = I / (2 c rho b omega0^2)
    RadPerSecond delta_omega;           // xi (lambda/L) I / (4 pi c^2 rho b)
    Fluence required_fluence;           // I / Delta omega (Delta omega t >= 1)
};

RadiationPressureDrive radiation_pressure_drive(const MirrorDriveInput& in);

/// Piezo-driven surface vibration limits.
struct PiezoInput {
    double sound_speed = 5e3;   // m/s
    double max_strain = 1e-2;   // dimensionless
    double length = 0.0;        // m, cavity length
    double omega_wall = 0.0;    // rad/s, wall drive frequency (= 2 omega0)
    double xi = 1.0;

    void validate() const;
};

struct PiezoLimits {
    MetersPerSecond v_max;     // delta_max * v_s
    RadPerSecond delta_omega;  // xi v_s delta_max / (2 L)
    Dimensionless q_min;       // (L/lambda) 4 pi c / (v_s delta_max)
};

PiezoLimits piezo_limits(const PiezoInput& in);

/// Pumped cavity with an effective boundary velocity ratio beta = v/c.
struct FabryPerotInput {
    double finesse = 0.0;     // dimensionless
    double pump_omega = 0.0;  // rad/s
    double beta = 0.0;        // dimensionless v/c

    void validate() const;
};

struct FabryPerotFlux {
    PerSecond outflow_rate;     // beta^2 F Omega / (3 pi)
    Dimensionless mean_inside;  // 2 (beta F)^2 / (3 pi^2)
};

FabryPerotFlux fabry_perot_flux(const FabryPerotInput& in);

/// Expected photon count after n pulses of a pulsed-mirror run, with the
/// detectability threshold of 100 photons.
struct MirExpectation {
    double photons = 0.0;
    bool detectable = false;
};

MirExpectation mir_expectation(int n_pulses, double nu, double lambda,
                               double g_field = 1.0, double g_walls = 1.0);

}  // namespace dce
