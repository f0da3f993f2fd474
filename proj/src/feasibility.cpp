#include "dce/feasibility.hpp"

#include <cmath>
#include <numbers>

#include "dce/mirror.hpp"

namespace dce {

namespace {
constexpr double kPi = std::numbers::pi;
using constants::c;
}  // namespace

void MirrorDriveInput::validate() const {
    if (!(intensity > 0.0 && density > 0.0 && thickness > 0.0 &&
          wavelength > 0.0 && length > 0.0 && xi > 0.0))
        throw InvalidInput("MirrorDriveInput: all fields must be > 0");
}

RadiationPressureDrive radiation_pressure_drive(const MirrorDriveInput& in) {
    in.validate();
    const double omega0 = 2.0 * kPi * c / in.wavelength;
    const double force = 2.0 * in.intensity / c;
    const double displacement =
        in.intensity / (2.0 * c * in.density * in.thickness * omega0 * omega0);
    const double delta_omega = in.xi * (in.wavelength / in.length) *
                               in.intensity /
                               (4.0 * kPi * c * c * in.density * in.thickness);
    return RadiationPressureDrive{
        PressureAmplitude(force), Meters(displacement),
        RadPerSecond(delta_omega), Fluence(in.intensity / delta_omega)};
}

void PiezoInput::validate() const {
    if (!(sound_speed > 0.0 && max_strain > 0.0 && length > 0.0 &&
          omega_wall > 0.0 && xi > 0.0))
        throw InvalidInput("PiezoInput: all fields must be > 0");
}

PiezoLimits piezo_limits(const PiezoInput& in) {
    in.validate();
    const double v_max = in.max_strain * in.sound_speed;
    const double delta_omega =
        in.xi * in.sound_speed * in.max_strain / (2.0 * in.length);
    const double lambda = 4.0 * kPi * c / in.omega_wall;  // mode at omega_wall/2
    const double q_min =
        (in.length / lambda) * 4.0 * kPi * c / (in.sound_speed * in.max_strain);
    return PiezoLimits{MetersPerSecond(v_max), RadPerSecond(delta_omega),
                       Dimensionless(q_min)};
}

void FabryPerotInput::validate() const {
    if (!(finesse > 0.0 && pump_omega > 0.0))
        throw InvalidInput("FabryPerotInput: finesse and pump_omega must be > 0");
    if (beta < 0.0) throw InvalidInput("FabryPerotInput: beta must be >= 0");
}

FabryPerotFlux fabry_perot_flux(const FabryPerotInput& in) {
    in.validate();
    const double rate =
        in.beta * in.beta * in.finesse * in.pump_omega / (3.0 * kPi);
    const double bf = in.beta * in.finesse;
    const double inside = 2.0 * bf * bf / (3.0 * kPi * kPi);
    return FabryPerotFlux{PerSecond(rate), Dimensionless(inside)};
}

MirExpectation mir_expectation(int n_pulses, double nu, double lambda,
                               double g_field, double g_walls) {
    MirExpectation out;
    if (nu <= lambda) {
        // Non-growing regime: never reaches the detection threshold.
        out.photons = 0.0;
        out.detectable = false;
        return out;
    }
    PulseTrain train;
    train.n_pulses = n_pulses;
    train.g_field = g_field;
    train.g_walls = g_walls;
    out.photons = photon_growth(train, GainLossPair{nu, lambda}).photons;
    out.detectable = out.photons >= 100.0;
    return out;
}

}  // namespace dce
