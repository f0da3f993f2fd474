#include "dce/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "dce/cavity1d.hpp"
#include "dce/constants.hpp"
#include "dce/feasibility.hpp"
#include "dce/mirror.hpp"
#include "dce/oscillator.hpp"
#include "dce/photon_statistics.hpp"
#include "dce/resonance.hpp"

namespace dce::cli {

using nlohmann::json;

std::string format_field(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const ResultTable& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ParseError(path + ": " + msg);
}

const json& require_member(const json& j, const std::string& parent,
                           const char* name) {
    if (!j.is_object()) fail(parent, "expected an object");
    const auto it = j.find(name);
    if (it == j.end()) fail(parent + "." + name, "missing required field");
    return *it;
}

double require_number(const json& j, const std::string& parent,
                      const char* name) {
    const json& v = require_member(j, parent, name);
    if (!v.is_number()) fail(parent + "." + name, "expected a number");
    return v.get<double>();
}

double number_or(const json& j, const std::string& parent, const char* name,
                 double fallback) {
    if (!j.is_object()) fail(parent, "expected an object");
    const auto it = j.find(name);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_number()) fail(parent + "." + name, "expected a number");
    return it->get<double>();
}

long integer_or(const json& j, const std::string& parent, const char* name,
                long fallback) {
    if (!j.is_object()) fail(parent, "expected an object");
    const auto it = j.find(name);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_number_integer()) fail(parent + "." + name, "expected an integer");
    return it->get<long>();
}

std::string string_or(const json& j, const std::string& parent,
                      const char* name, const std::string& fallback) {
    if (!j.is_object()) fail(parent, "expected an object");
    const auto it = j.find(name);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_string()) fail(parent + "." + name, "expected a string");
    return it->get<std::string>();
}

Eigen::ArrayXd array_at(const json& j, const std::string& parent,
                        const char* name) {
    const json& v = require_member(j, parent, name);
    if (!v.is_array() || v.empty())
        fail(parent + "." + name, "expected a non-empty array of numbers");
    Eigen::ArrayXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            fail(parent + "." + name, "expected a non-empty array of numbers");
        out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return out;
}

// {"start": a, "stop": b, "count": n} or {"values": [...]}; validated.
std::vector<double> parse_grid(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected a grid object");
    if (j.contains("values")) {
        const Eigen::ArrayXd v = array_at(j, path, "values");
        return {v.data(), v.data() + v.size()};
    }
    const double start = require_number(j, path, "start");
    const double stop = require_number(j, path, "stop");
    const long count = integer_or(j, path, "count", -1);
    if (count < 1) fail(path + ".count", "grid needs count >= 1");
    if (count > 1 && !(stop > start))
        fail(path + ".stop", "grid needs stop > start when count > 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] =
            count == 1 ? start
                       : start + (stop - start) * static_cast<double>(i) /
                             static_cast<double>(count - 1);
    return out;
}

// Wraps precondition failures from module constructors with a field path.
template <typename F>
auto with_path(const std::string& path, F&& make) -> decltype(make()) {
    try {
        return make();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------- oscillator

struct OscillatorPlan {
    FrequencyProfile profile;
    double t_start, t_end, tol;
    ThermalState thermal;
    bool trajectory_output;
};

FrequencyProfile parse_profile(const json& j, const std::string& path) {
    const std::string type = string_or(j, path, "type", "");
    if (type == "constant")
        return with_path(path, [&] {
            return FrequencyProfile::constant(require_number(j, path, "omega"));
        });
    if (type == "sudden_jump")
        return with_path(path, [&] {
            return FrequencyProfile::sudden_jump(
                require_number(j, path, "omega_i"),
                require_number(j, path, "omega_f"),
                require_number(j, path, "t_jump"));
        });
    if (type == "harmonic")
        return with_path(path, [&] {
            std::optional<double> mod;
            if (j.contains("omega_mod") && !j["omega_mod"].is_null())
                mod = require_number(j, path, "omega_mod");
            return FrequencyProfile::harmonic(require_number(j, path, "omega0"),
                                              require_number(j, path, "kappa"),
                                              mod,
                                              number_or(j, path, "phase", 0.0));
        });
    if (type == "smooth_ramp")
        return with_path(path, [&] {
            return FrequencyProfile::smooth_ramp(
                require_number(j, path, "omega_i"),
                require_number(j, path, "omega_f"),
                require_number(j, path, "t_center"),
                require_number(j, path, "width"));
        });
    if (type == "tabulated")
        return with_path(path, [&] {
            return FrequencyProfile::tabulated(array_at(j, path, "times"),
                                               array_at(j, path, "values"));
        });
    fail(path + ".type",
         "unknown profile type (expected constant, sudden_jump, harmonic, "
         "smooth_ramp or tabulated)");
}

ThermalState parse_thermal(const json& parent_obj, const std::string& parent) {
    if (!parent_obj.contains("thermal") || parent_obj["thermal"].is_null())
        return {};
    const json& j = parent_obj["thermal"];
    const std::string path = parent + ".thermal";
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("g"))
        return with_path(path + ".g", [&] {
            return ThermalState::from_g(require_number(j, path, "g"));
        });
    return with_path(path, [&] {
        return ThermalState::from_temperature(
            require_number(j, path, "temperature"),
            require_number(j, path, "omega_si"));
    });
}

OscillatorPlan parse_oscillator(const json& root, double default_tol) {
    const json& j = require_member(root, "scenario", "oscillator");
    const std::string path = "oscillator";
    OscillatorPlan plan{
        parse_profile(require_member(j, path, "profile"), path + ".profile"),
        number_or(j, path, "t_start", 0.0),
        require_number(j, path, "t_end"),
        number_or(j, path, "tolerance", default_tol),
        parse_thermal(j, path),
        string_or(j, path, "output", "summary") == "trajectory"};
    if (!(plan.t_end > plan.t_start))
        fail(path + ".t_end", "t_end must exceed t_start");
    if (!(plan.tol > 1e-14 && plan.tol < 1e-3))
        fail(path + ".tolerance", "tolerance must lie in (1e-14, 1e-3)");
    const std::string output = string_or(j, path, "output", "summary");
    if (output != "summary" && output != "trajectory")
        fail(path + ".output", "expected summary or trajectory");
    if (!plan.trajectory_output) {
        // The Bogoliubov pair is defined on a stationary tail; reject
        // profiles that still vary there instead of failing mid-run.
        const double omega_f = with_path(
            path + ".profile", [&] { return plan.profile(plan.t_end); });
        const double window = 5.0 * 2.0 * std::numbers::pi / omega_f;
        const double from = std::max(plan.t_start, plan.t_end - window);
        if (!plan.profile.is_stationary_on(from, plan.t_end, 1e-3))
            fail(path + ".profile",
                 "frequency still varies over the extraction window before "
                 "t_end; use output = trajectory or end the profile on a "
                 "constant segment");
    }
    return plan;
}

ResultTable run_oscillator(const OscillatorPlan& plan) {
    ResultTable table;
    const ComplexTrajectory traj =
        integrate_classical(plan.profile, plan.t_start, plan.t_end, plan.tol);
    if (plan.trajectory_output) {
        table.header = {"t",       "eps_re",  "eps_im",
                        "deps_re", "deps_im", "wronskian"};
        for (Eigen::Index k = 0; k < traj.times.size(); ++k) {
            table.rows.push_back({format_field(traj.times[k]),
                                  format_field(traj.epsilon[k].real()),
                                  format_field(traj.epsilon[k].imag()),
                                  format_field(traj.epsilon_dot[k].real()),
                                  format_field(traj.epsilon_dot[k].imag()),
                                  format_field(traj.wronskian(k))});
        }
        return table;
    }
    const double omega_f = plan.profile(plan.t_end);
    const BogoliubovPair pair = extract_bogoliubov(traj, omega_f);
    table.header = {"rho_minus_re", "rho_minus_im", "rho_plus_re",
                    "rho_plus_im",  "R",            "T",
                    "N",            "normalization_defect",
                    "wronskian_drift", "fit_residual"};
    table.rows.push_back({format_field(pair.rho_minus.real()),
                          format_field(pair.rho_minus.imag()),
                          format_field(pair.rho_plus.real()),
                          format_field(pair.rho_plus.imag()),
                          format_field(pair.reflection()),
                          format_field(pair.transmission()),
                          format_field(photon_number(pair, plan.thermal)),
                          format_field(pair.normalization_defect()),
                          format_field(traj.max_wronskian_drift()),
                          format_field(pair.fit_residual)});
    return table;
}

// ----------------------------------------------------------------- resonance

struct ResonancePlan {
    ResonantDriveSpec spec;
    std::vector<double> times;
};

ResonancePlan parse_resonance(const json& root, double) {
    const json& j = require_member(root, "scenario", "resonance");
    const std::string path = "resonance";
    ResonancePlan plan;
    plan.spec.omega0 = require_number(j, path, "omega0");
    plan.spec.kappa = require_number(j, path, "kappa");
    plan.spec.q_factor = number_or(j, path, "Q",
                                   std::numeric_limits<double>::infinity());
    plan.spec.g_thermal = number_or(j, path, "G", 1.0);
    with_path(path, [&] {
        plan.spec.validate();
        return 0;
    });
    plan.times = parse_grid(require_member(j, path, "times"), path + ".times");
    for (double t : plan.times)
        if (t < 0.0) fail(path + ".times", "times must be >= 0");
    return plan;
}

ResultTable run_resonance(const ResonancePlan& plan) {
    ResultTable table;
    table.header = {"t", "N", "regime", "zeta"};
    for (const std::string& w : plan.spec.warnings()) table.warnings.push_back(w);
    const bool lossless = !std::isfinite(plan.spec.q_factor);
    for (double t : plan.times) {
        if (lossless) {
            table.rows.push_back({format_field(t),
                                  format_field(lossless_photon_number(plan.spec, t)),
                                  "lossless", format_field(1.0)});
        } else {
            const GrowthReport rep = dissipative_photon_number(plan.spec, t);
            table.rows.push_back({format_field(t), format_field(rep.photons),
                                  to_string(rep.regime),
                                  format_field(rep.zeta)});
        }
    }
    return table;
}

// ------------------------------------------------------------------ cavity1d

struct CavityPlan {
    CavityGeometry1D geometry;
    double amplitude;
    std::optional<double> omega_drive;
    double t_end, tol;
    int samples;
    bool averaged;
    std::vector<int> modes_in_output;
};

CavityPlan parse_cavity(const json& root, double default_tol) {
    const json& j = require_member(root, "scenario", "cavity1d");
    const std::string path = "cavity1d";
    CavityPlan plan;
    plan.geometry.length = number_or(j, path, "length", std::numbers::pi);
    plan.geometry.wave_speed = number_or(j, path, "wave_speed", 1.0);
    plan.geometry.n_modes =
        static_cast<int>(integer_or(j, path, "n_modes", 16));
    with_path(path, [&] {
        plan.geometry.validate();
        return 0;
    });
    plan.amplitude = require_number(j, path, "amplitude");
    if (j.contains("omega_drive") && !j["omega_drive"].is_null())
        plan.omega_drive = require_number(j, path, "omega_drive");
    with_path(path + ".amplitude", [&] {
        return BoundaryTrajectory::sinusoidal(plan.amplitude, plan.omega_drive);
    });
    plan.t_end = require_number(j, path, "t_end");
    if (!(plan.t_end > 0.0)) fail(path + ".t_end", "t_end must be > 0");
    plan.tol = number_or(j, path, "tolerance", default_tol);
    if (!(plan.tol > 1e-14 && plan.tol < 1e-3))
        fail(path + ".tolerance", "tolerance must lie in (1e-14, 1e-3)");
    plan.samples = static_cast<int>(integer_or(j, path, "samples", 17));
    if (plan.samples < 2) fail(path + ".samples", "need at least 2 samples");
    const std::string method = string_or(j, path, "method", "direct");
    if (method != "direct" && method != "averaged")
        fail(path + ".method", "expected direct or averaged");
    plan.averaged = method == "averaged";
    if (plan.averaged && plan.omega_drive)
        fail(path + ".method",
             "the averaged path models the resonant drive at 2 omega_1 only");
    if (j.contains("modes_in_output") && !j["modes_in_output"].is_null()) {
        const json& m = j["modes_in_output"];
        if (!m.is_array() || m.empty())
            fail(path + ".modes_in_output", "expected a non-empty array");
        for (const auto& v : m) {
            if (!v.is_number_integer())
                fail(path + ".modes_in_output", "expected mode indices");
            const long n = v.get<long>();
            if (n < 1 || n > plan.geometry.n_modes)
                fail(path + ".modes_in_output", "mode index out of range");
            plan.modes_in_output.push_back(static_cast<int>(n));
        }
    } else {
        for (int n = 1; n <= std::min(8, plan.geometry.n_modes); ++n)
            plan.modes_in_output.push_back(n);
    }
    return plan;
}

std::vector<std::string> cavity_header(const CavityPlan& plan) {
    std::vector<std::string> h = {"t", "N_tot", "E", "odd_share"};
    for (int n : plan.modes_in_output) h.push_back("N_" + std::to_string(n));
    return h;
}

ResultTable run_cavity(const CavityPlan& plan) {
    ResultTable table;
    table.header = cavity_header(plan);
    const auto drive =
        BoundaryTrajectory::sinusoidal(plan.amplitude, plan.omega_drive);
    for (const std::string& w : drive.warnings()) table.warnings.push_back(w);

    PhotonRecord rec;
    if (plan.averaged) {
        rec = evolve_modes_averaged(plan.geometry, plan.amplitude / 2.0,
                                    plan.t_end, plan.samples);
    } else {
        const CouplingMatrix coupling =
            plan.geometry.n_modes >= 2 ? coupling_matrix_1d(plan.geometry)
                                       : CouplingMatrix{};
        EvolveOptions opt;
        opt.max_samples = plan.samples;
        rec = evolve_modes(plan.geometry, drive, coupling, plan.t_end, plan.tol,
                           opt);
    }
    if (rec.truncation_flagged)
        table.warnings.push_back(
            "truncation: the highest 10% of modes hold more than 1% of the "
            "photons");
    for (int k = 0; k < rec.n_samples(); ++k) {
        double odd = 0.0, even = 0.0;
        for (int i = 0; i < rec.n_modes(); ++i) {
            if ((i + 1) % 2 == 1)
                odd += rec.mode_numbers(i, k);
            else
                even += rec.mode_numbers(i, k);
        }
        std::vector<std::string> row = {
            format_field(rec.times[k]), format_field(rec.totals[k]),
            format_field(rec.energy[k]),
            format_field(odd + even > 0 ? odd / (odd + even) : 0.0)};
        for (int n : plan.modes_in_output)
            row.push_back(format_field(rec.mode_numbers(n - 1, k)));
        table.rows.push_back(std::move(row));
    }
    return table;
}

// -------------------------------------------------------------------- mirror

struct MirrorPlan {
    MirrorResponse mirror;
    PulseTrain train;
    bool optimal_phase;
    double tol;
};

MirrorPlan parse_mirror(const json& root, double default_tol) {
    const json& j = require_member(root, "scenario", "mirror");
    const std::string path = "mirror";
    MirrorPlan plan;
    plan.mirror.chi_m = require_number(j, path, "chi_m");
    plan.mirror.t_r = require_number(j, path, "T_r");
    plan.mirror.a0 = require_number(j, path, "A0");
    with_path(path, [&] {
        plan.mirror.validate();
        return 0;
    });
    plan.train.omega0 = require_number(j, path, "omega0");
    plan.train.detuning = number_or(j, path, "detuning", 0.0);
    if (j.contains("period") && !j["period"].is_null())
        plan.train.period = require_number(j, path, "period");
    plan.train.n_pulses = static_cast<int>(integer_or(j, path, "pulses", 1));
    plan.train.g_field = number_or(j, path, "G_field", 1.0);
    plan.train.g_walls = number_or(j, path, "G_walls", 1.0);
    with_path(path, [&] {
        plan.train.validate();
        return 0;
    });
    const std::string phase = string_or(j, path, "phase", "literal");
    if (phase != "literal" && phase != "optimal")
        fail(path + ".phase", "expected literal or optimal");
    plan.optimal_phase = phase == "optimal";
    plan.tol = number_or(j, path, "tolerance", default_tol);
    if (!(plan.tol > 1e-14 && plan.tol < 1e-3))
        fail(path + ".tolerance", "tolerance must lie in (1e-14, 1e-3)");
    return plan;
}

ResultTable run_mirror(const MirrorPlan& plan) {
    ResultTable table;
    table.header = {"nu", "lambda", "net", "prefactor", "photons", "regime"};
    if (plan.train.n_pulses < 10)
        table.warnings.push_back(
            "pulse count below 10: the growth formula assumes n >> 1");
    const GainLossPair pair =
        plan.optimal_phase
            ? gain_loss_optimal_phase(plan.mirror, plan.train, plan.tol)
            : gain_loss(plan.mirror, plan.train, plan.tol);
    const MirrorGrowth growth = photon_growth(plan.train, pair);
    table.rows.push_back(
        {format_field(pair.nu), format_field(pair.lambda),
         format_field(pair.net()), format_field(growth.prefactor),
         format_field(growth.photons),
         growth.regime == MirrorRegime::growing ? "growing" : "damped"});
    return table;
}

// --------------------------------------------------------------------- stats

struct StatsPlan {
    double mean;
    std::vector<double> m_values;
    long samples;
    std::uint64_t seed;
};

StatsPlan parse_stats(const json& root, double) {
    const json& j = require_member(root, "scenario", "stats");
    const std::string path = "stats";
    StatsPlan plan;
    plan.mean = require_number(j, path, "mean");
    if (!(plan.mean > 0.0)) fail(path + ".mean", "mean must be > 0");
    plan.samples = integer_or(j, path, "samples", 0);
    if (plan.samples < 0) fail(path + ".samples", "samples must be >= 0");
    if (plan.samples == 0) {
        const json& grid = require_member(j, path, "m");
        const std::string gpath = path + ".m";
        if (grid.contains("values")) {
            const Eigen::ArrayXd v = array_at(grid, gpath, "values");
            plan.m_values.assign(v.data(), v.data() + v.size());
        } else {
            const double start = require_number(grid, gpath, "start");
            const double stop = require_number(grid, gpath, "stop");
            const double step = number_or(grid, gpath, "step", 1.0);
            if (!(step > 0.0)) fail(gpath + ".step", "step must be > 0");
            if (!(stop >= start)) fail(gpath + ".stop", "stop must be >= start");
            for (double m = start; m <= stop + 1e-9; m += step)
                plan.m_values.push_back(m);
        }
        if (plan.m_values.empty()) fail(gpath, "empty m grid");
        for (double m : plan.m_values)
            if (m < 0.0) fail(gpath, "m must be >= 0");
    }
    plan.seed = root.contains("seed") && root["seed"].is_number_unsigned()
                    ? root["seed"].get<std::uint64_t>()
                    : 0;
    return plan;
}

ResultTable run_stats(const StatsPlan& plan) {
    ResultTable table;
    const auto dce_dist = PhotonDistribution::dce(plan.mean);
    const auto thermal_dist = PhotonDistribution::thermal(plan.mean);
    const auto squeezed_dist = PhotonDistribution::squeezed(plan.mean);
    for (const std::string& w : dce_dist.warnings()) table.warnings.push_back(w);

    if (plan.samples == 0) {
        table.header = {"m", "f_dce", "f_thermal", "squeezed_pair"};
        for (double m : plan.m_values) {
            const long mi = static_cast<long>(std::llround(m));
            const long even = mi - (mi % 2);
            table.rows.push_back(
                {format_field(m), format_field(f_dce(plan.mean, m)),
                 format_field(f_thermal(plan.mean, m)),
                 format_field(squeezed_dist.pmf(even) +
                              squeezed_dist.pmf(even + 1))});
        }
        return table;
    }

    table.header = {"distribution", "draws", "empirical_mean", "truncated_mean"};
    const struct {
        const char* name;
        const PhotonDistribution* dist;
    } kinds[] = {{"dce", &dce_dist},
                 {"thermal", &thermal_dist},
                 {"squeezed", &squeezed_dist}};
    int offset = 0;
    for (const auto& k : kinds) {
        auto sampler = k.dist->sampler(plan.seed + offset);
        double acc = 0.0;
        for (long i = 0; i < plan.samples; ++i) acc += sampler();
        table.rows.push_back(
            {k.name, std::to_string(plan.samples),
             format_field(acc / static_cast<double>(plan.samples)),
             format_field(k.dist->truncated_mean())});
        ++offset;
    }
    return table;
}

// ------------------------------------------------------------------ estimate

struct EstimatePlan {
    MirrorDriveInput radiation;
    PiezoInput piezo;
    FabryPerotInput fabry_perot;
    int mir_pulses;
    double mir_nu, mir_lambda, mir_g_field, mir_g_walls;
};

EstimatePlan reference_estimate_plan() {
    EstimatePlan plan;
    plan.radiation = {3e15, 3e3, 1e-6, 1e-6, 1e-6, 1.0};
    plan.piezo = {5e3, 1e-2, 0.5e-6,
                  2.0 * (2.0 * std::numbers::pi * constants::c / 1e-6), 1.0};
    plan.fabry_perot = {1e4, 2.0 * std::numbers::pi * 3e14, 1e-6};
    plan.mir_pulses = 100;
    plan.mir_nu = 0.0771;
    plan.mir_lambda = 0.0312;
    plan.mir_g_field = 1.0;
    plan.mir_g_walls = 1.0;
    return plan;
}

EstimatePlan parse_estimate(const json& root, double) {
    EstimatePlan plan = reference_estimate_plan();
    if (!root.contains("estimate") || root["estimate"].is_null()) {
        return plan;
    }
    const json& j = root["estimate"];
    const std::string path = "estimate";
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("radiation")) {
        const json& r = j["radiation"];
        const std::string p = path + ".radiation";
        plan.radiation.intensity = number_or(r, p, "intensity", plan.radiation.intensity);
        plan.radiation.density = number_or(r, p, "density", plan.radiation.density);
        plan.radiation.thickness = number_or(r, p, "thickness", plan.radiation.thickness);
        plan.radiation.wavelength = number_or(r, p, "wavelength", plan.radiation.wavelength);
        plan.radiation.length = number_or(r, p, "length", plan.radiation.length);
        plan.radiation.xi = number_or(r, p, "xi", plan.radiation.xi);
    }
    if (j.contains("piezo")) {
        const json& r = j["piezo"];
        const std::string p = path + ".piezo";
        plan.piezo.sound_speed = number_or(r, p, "sound_speed", plan.piezo.sound_speed);
        plan.piezo.max_strain = number_or(r, p, "max_strain", plan.piezo.max_strain);
        plan.piezo.length = number_or(r, p, "length", plan.piezo.length);
        plan.piezo.omega_wall = number_or(r, p, "omega_wall", plan.piezo.omega_wall);
        plan.piezo.xi = number_or(r, p, "xi", plan.piezo.xi);
    }
    if (j.contains("fabry_perot")) {
        const json& r = j["fabry_perot"];
        const std::string p = path + ".fabry_perot";
        plan.fabry_perot.finesse = number_or(r, p, "finesse", plan.fabry_perot.finesse);
        plan.fabry_perot.pump_omega = number_or(r, p, "pump_omega", plan.fabry_perot.pump_omega);
        plan.fabry_perot.beta = number_or(r, p, "beta", plan.fabry_perot.beta);
    }
    if (j.contains("mir")) {
        const json& r = j["mir"];
        const std::string p = path + ".mir";
        plan.mir_pulses = static_cast<int>(integer_or(r, p, "pulses", plan.mir_pulses));
        plan.mir_nu = number_or(r, p, "nu", plan.mir_nu);
        plan.mir_lambda = number_or(r, p, "lambda", plan.mir_lambda);
        plan.mir_g_field = number_or(r, p, "G_field", plan.mir_g_field);
        plan.mir_g_walls = number_or(r, p, "G_walls", plan.mir_g_walls);
    }
    with_path(path, [&] {
        plan.radiation.validate();
        plan.piezo.validate();
        plan.fabry_perot.validate();
        return 0;
    });
    if (plan.mir_pulses < 1) fail(path + ".mir.pulses", "pulses must be >= 1");
    return plan;
}

ResultTable run_estimate(const EstimatePlan& plan) {
    ResultTable table;
    table.header = {"rp_force_amplitude", "rp_delta_L",      "rp_delta_omega",
                    "rp_required_fluence", "piezo_v_max",    "piezo_delta_omega",
                    "piezo_q_min",       "fp_rate",          "fp_mean_inside",
                    "mir_photons",       "mir_detectable"};
    const auto rp = radiation_pressure_drive(plan.radiation);
    const auto pz = piezo_limits(plan.piezo);
    const auto fp = fabry_perot_flux(plan.fabry_perot);
    const auto mir = mir_expectation(plan.mir_pulses, plan.mir_nu,
                                     plan.mir_lambda, plan.mir_g_field,
                                     plan.mir_g_walls);
    table.rows.push_back(
        {format_field(rp.force_amplitude.value()),
         format_field(rp.displacement.value()),
         format_field(rp.delta_omega.value()),
         format_field(rp.required_fluence.value()),
         format_field(pz.v_max.value()), format_field(pz.delta_omega.value()),
         format_field(pz.q_min.value()), format_field(fp.outflow_rate.value()),
         format_field(fp.mean_inside.value()), format_field(mir.photons),
         mir.detectable ? "true" : "false"});
    return table;
}

}  // namespace

// ------------------------------------------------------------------ Scenario

struct Scenario::Impl {
    json root;
    double default_tol = 1e-10;
    std::string kind;
    std::uint64_t seed = 0;
};

Scenario::Scenario() : impl_(new Impl) {}
Scenario::Scenario(const Scenario& other) : impl_(new Impl(*other.impl_)) {}
Scenario::Scenario(Scenario&&) noexcept = default;
Scenario& Scenario::operator=(Scenario other) {
    std::swap(impl_, other.impl_);
    return *this;
}
Scenario::~Scenario() = default;

namespace {

void validate_scenario(const json& root, double default_tol) {
    const std::string kind = string_or(root, "scenario", "kind", "");
    if (kind == "oscillator")
        parse_oscillator(root, default_tol);
    else if (kind == "resonance")
        parse_resonance(root, default_tol);
    else if (kind == "cavity1d")
        parse_cavity(root, default_tol);
    else if (kind == "mirror")
        parse_mirror(root, default_tol);
    else if (kind == "stats")
        parse_stats(root, default_tol);
    else if (kind == "estimate")
        parse_estimate(root, default_tol);
    else
        fail("kind",
             "unknown scenario kind (expected oscillator, resonance, cavity1d, "
             "mirror, stats or estimate)");
}

}  // namespace

Scenario Scenario::from_json_text(const std::string& text,
                                  double default_tolerance) {
    Scenario s;
    try {
        s.impl_->root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    s.impl_->default_tol = default_tolerance;
    validate_scenario(s.impl_->root, default_tolerance);
    s.impl_->kind = s.impl_->root["kind"].get<std::string>();
    if (s.impl_->root.contains("seed")) {
        const json& seed = s.impl_->root["seed"];
        if (!seed.is_number_integer() || seed.get<long long>() < 0)
            fail("seed", "expected a non-negative integer");
        s.impl_->seed = seed.get<std::uint64_t>();
    }
    return s;
}

Scenario Scenario::from_file(const std::string& path,
                             double default_tolerance) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str(), default_tolerance);
}

const std::string& Scenario::kind() const { return impl_->kind; }
std::uint64_t Scenario::seed() const { return impl_->seed; }

std::vector<std::string> Scenario::output_header() const {
    const json& root = impl_->root;
    const double tol = impl_->default_tol;
    if (impl_->kind == "oscillator") {
        const auto plan = parse_oscillator(root, tol);
        if (plan.trajectory_output)
            return {"t", "eps_re", "eps_im", "deps_re", "deps_im", "wronskian"};
        return {"rho_minus_re", "rho_minus_im", "rho_plus_re", "rho_plus_im",
                "R", "T", "N", "normalization_defect", "wronskian_drift",
                "fit_residual"};
    }
    if (impl_->kind == "resonance") return {"t", "N", "regime", "zeta"};
    if (impl_->kind == "cavity1d")
        return cavity_header(parse_cavity(root, tol));
    if (impl_->kind == "mirror")
        return {"nu", "lambda", "net", "prefactor", "photons", "regime"};
    if (impl_->kind == "stats") {
        const auto plan = parse_stats(root, tol);
        if (plan.samples == 0) return {"m", "f_dce", "f_thermal", "squeezed_pair"};
        return {"distribution", "draws", "empirical_mean", "truncated_mean"};
    }
    return {"rp_force_amplitude", "rp_delta_L", "rp_delta_omega",
            "rp_required_fluence", "piezo_v_max", "piezo_delta_omega",
            "piezo_q_min", "fp_rate", "fp_mean_inside", "mir_photons",
            "mir_detectable"};
}

ResultTable Scenario::run() const {
    const json& root = impl_->root;
    const double tol = impl_->default_tol;
    if (impl_->kind == "oscillator")
        return run_oscillator(parse_oscillator(root, tol));
    if (impl_->kind == "resonance")
        return run_resonance(parse_resonance(root, tol));
    if (impl_->kind == "cavity1d") return run_cavity(parse_cavity(root, tol));
    if (impl_->kind == "mirror") return run_mirror(parse_mirror(root, tol));
    if (impl_->kind == "stats") return run_stats(parse_stats(root, tol));
    return run_estimate(parse_estimate(root, tol));
}

// --------------------------------------------------------------------- Sweep

struct Sweep::Impl {
    json base;
    double default_tol = 1e-10;
    struct Axis {
        std::string path;  // dotted
        std::vector<json> values;
    };
    std::vector<Axis> axes;
    long max_points = 100000;
};

Sweep::Sweep() : impl_(new Impl) {}
Sweep::Sweep(Sweep&&) noexcept = default;
Sweep::~Sweep() = default;

namespace {

json::json_pointer dotted_to_pointer(const std::string& dotted) {
    std::string p = "/";
    for (char c : dotted) p += c == '.' ? '/' : c;
    return json::json_pointer(p);
}

}  // namespace

Sweep Sweep::from_file(const std::string& path, double default_tolerance) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sweep file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    json root;
    try {
        root = json::parse(buffer.str());
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }

    Sweep sweep;
    sweep.impl_->default_tol = default_tolerance;
    if (!root.contains("base")) fail("base", "missing base scenario");
    sweep.impl_->base = root["base"];
    // The base must be a valid scenario on its own.
    Scenario::from_json_text(sweep.impl_->base.dump(), default_tolerance);

    const json& axes = require_member(root, "sweep", "axes");
    if (!axes.is_array() || axes.empty())
        fail("axes", "expected a non-empty array");
    long total = 1;
    sweep.impl_->max_points = integer_or(root, "sweep", "max_points", 100000);
    if (sweep.impl_->max_points < 1) fail("max_points", "must be >= 1");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string apath = "axes[" + std::to_string(i) + "]";
        const json& axis = axes[i];
        Impl::Axis out;
        out.path = string_or(axis, apath, "path", "");
        if (out.path.empty()) fail(apath + ".path", "missing parameter path");
        const json& values = require_member(axis, apath, "values");
        if (!values.is_array() || values.empty())
            fail(apath + ".values", "grids must be non-empty");
        for (const auto& v : values) out.values.push_back(v);
        // The path must resolve inside the base scenario.
        try {
            (void)sweep.impl_->base.at(dotted_to_pointer(out.path));
        } catch (const json::exception&) {
            fail(apath + ".path",
                 "path '" + out.path + "' not found in the base scenario");
        }
        total *= static_cast<long>(out.values.size());
        if (total > sweep.impl_->max_points)
            fail("axes", "grid exceeds max_points (" +
                             std::to_string(sweep.impl_->max_points) + ")");
        sweep.impl_->axes.push_back(std::move(out));
    }
    return sweep;
}

std::size_t Sweep::total_points() const {
    std::size_t total = 1;
    for (const auto& axis : impl_->axes) total *= axis.values.size();
    return total;
}

ResultTable Sweep::run(int jobs, bool& any_failed) const {
    const std::size_t total = total_points();
    const std::size_t n_axes = impl_->axes.size();

    // Lexicographic order: first axis outermost.
    auto indices_of = [&](std::size_t flat) {
        std::vector<std::size_t> idx(n_axes);
        for (std::size_t a = n_axes; a-- > 0;) {
            idx[a] = flat % impl_->axes[a].values.size();
            flat /= impl_->axes[a].values.size();
        }
        return idx;
    };

    const Scenario base =
        Scenario::from_json_text(impl_->base.dump(), impl_->default_tol);
    const std::vector<std::string> value_header = base.output_header();

    ResultTable table;
    for (const auto& axis : impl_->axes) table.header.push_back(axis.path);
    table.header.push_back("status");
    table.header.insert(table.header.end(), value_header.begin(),
                        value_header.end());

    struct PointResult {
        std::vector<std::string> row;
        std::vector<std::string> warnings;
        bool failed = false;
    };
    std::vector<PointResult> results(total);

    auto run_point = [&](std::size_t flat) {
        const auto idx = indices_of(flat);
        PointResult& out = results[flat];
        json point = impl_->base;
        for (std::size_t a = 0; a < n_axes; ++a)
            point[dotted_to_pointer(impl_->axes[a].path)] =
                impl_->axes[a].values[idx[a]];
        for (std::size_t a = 0; a < n_axes; ++a) {
            const json& v = impl_->axes[a].values[idx[a]];
            out.row.push_back(v.is_number() ? format_field(v.get<double>())
                                            : v.dump());
        }
        try {
            const Scenario s =
                Scenario::from_json_text(point.dump(), impl_->default_tol);
            ResultTable t = s.run();
            if (t.rows.empty()) throw InvalidInput("scenario produced no rows");
            out.row.push_back("ok");
            const auto& last = t.rows.back();
            out.row.insert(out.row.end(), last.begin(), last.end());
            out.warnings = std::move(t.warnings);
        } catch (const Error& e) {
            out.failed = true;
            out.row.push_back(e.code());
            for (std::size_t i = 0; i < value_header.size(); ++i)
                out.row.push_back("nan");
            out.warnings.push_back("point " + std::to_string(flat) +
                                   " failed: " + e.what());
        }
    };

    const int workers = std::clamp(jobs, 1, 256);
    if (workers == 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= total) return;
                    run_point(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    any_failed = false;
    for (std::size_t i = 0; i < total; ++i) {
        any_failed = any_failed || results[i].failed;
        table.rows.push_back(std::move(results[i].row));
        for (auto& w : results[i].warnings)
            table.warnings.push_back(std::move(w));
    }
    return table;
}

bool is_validation_error(const Error& e) {
    const std::string& code = e.code();
    return code == "ParseError" || code == "InvalidInput" ||
           code == "NonPositiveFrequency";
}

}  // namespace dce::cli
