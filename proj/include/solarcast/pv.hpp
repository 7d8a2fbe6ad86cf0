#pragma once

#include <string>
#include <vector>

#include "solarcast/solar_position.hpp"
#include "solarcast/timeseries.hpp"

namespace solarcast::pv {

struct ArrayGeometry {
    double tilt = 0.0;      // degrees from horizontal, [0,90]
    double azimuth = 180.0; // degrees clockwise from north, [0,360)
    double albedo = 0.2;    // default when the weather record has none

    void check() const;
};

struct PoaIrradiance {
    double beam = 0.0;
    double sky_diffuse = 0.0;
    double ground_reflected = 0.0;
    double global = 0.0;
};

struct CellTempParams {
    double u0 = 25.0;  // W/m^2K
    double u1 = 6.84;  // W s/m^3 K
};

// CEC five-parameter single-diode model inputs at reference conditions.
struct ModuleParamsCEC {
    std::string name;
    int n_cells_series = 0;
    double i_l_ref = 0.0;    // A
    double i_o_ref = 0.0;    // A (recovered from Voc consistency when <= 0)
    double r_s = 0.0;        // ohm
    double r_sh_ref = 0.0;   // ohm
    double a_ref = 0.0;      // V, modified ideality factor
    double alpha_sc = 0.0;   // A/degC
    double adjust = 0.0;     // percent
    double stc_rating = 0.0; // W
    double v_oc_ref = 0.0;
    double i_sc_ref = 0.0;
    double v_mp_ref = 0.0;
    double i_mp_ref = 0.0;
    double t_noct = 0.0;     // carried, unused by the Faiman thermal model

    void check() const;
};

// Sandia (SNL) inverter performance model coefficients.
struct InverterParamsSNL {
    std::string name;
    double paco = 0.0;   // W
    double pdco = 0.0;   // W
    double pso = 0.0;    // W
    double pnt = 0.0;    // W, night tare
    double vdco = 0.0;   // V
    double c0 = 0.0;     // 1/W
    double c1 = 0.0;     // 1/V
    double c2 = 0.0;     // 1/V
    double c3 = 0.0;     // 1/V
    double vdcmax = 0.0; // V
    double mppt_low = 0.0;
    double mppt_high = 0.0;

    void check() const;
};

struct MaxPowerPoint {
    double v_mp = 0.0;
    double i_mp = 0.0;
    double p_mp = 0.0;
    double v_oc = 0.0;
    double i_sc = 0.0;
};

// Angle of incidence between the sun and the array normal, degrees.
double angle_of_incidence(const SolarGeometry& geom, const ArrayGeometry& array);

// Hay-Davies sky diffuse on the tilted plane. The anisotropy index is
// dni / extraterrestrial dni; the projection ratio floors cos(zenith) at
// cos(87 deg) to avoid the horizon singularity.
double hay_davies_sky_diffuse(double dhi, double dni, const SolarGeometry& geom,
                              const ArrayGeometry& array);

// Full plane-of-array transposition: beam + Hay-Davies sky diffuse +
// isotropic ground reflection. All components are zero at zenith >= 90.
PoaIrradiance poa_total(double ghi, double dhi, double dni, const SolarGeometry& geom,
                        const ArrayGeometry& array);

// Faiman module temperature: T_m = T_a + G / (u0 + u1 * v_wind).
double faiman_cell_temp(double g_poa, double t_ambient, double wind_speed,
                        const CellTempParams& params);

// Single-diode maximum power point at the given effective irradiance and
// cell temperature, via the CEC parameter translation and a safeguarded
// Newton solve (residual < 1e-10 A) with golden-section MPP search.
MaxPowerPoint single_diode_max_power(const ModuleParamsCEC& params,
                                     double effective_irradiance, double cell_temp);

// Diode-equation current at a module voltage (exposed for residual checks).
double single_diode_current(const ModuleParamsCEC& params, double effective_irradiance,
                            double cell_temp, double voltage);

// Some CEC parameter tables print I_o_ref rounded to zero; recover a positive
// value from the open-circuit condition I(V_oc_ref) = 0 at reference.
double recover_i_o_ref(const ModuleParamsCEC& params);

// Sandia inverter AC power from DC power and DC voltage.
double inverter_ac_power(double p_dc, double v_dc, const InverterParamsSNL& params);

struct PvSystemSpec {
    std::string name;
    Location location;
    ArrayGeometry array;
    CellTempParams cell_temp;
    ModuleParamsCEC module;
    InverterParamsSNL inverter;
    double loss_fraction = 0.0;       // derate applied to G_POA before the diode solve
    int solar_offset_minutes = 0;     // sun position sampled at stamp + offset
    bool albedo_from_records = true;  // use each record's surface albedo

    void check() const;
};

PvSystemSpec load_system_spec(const std::string& path);
void save_system_spec(const PvSystemSpec& spec, const std::string& path);

struct HourlySimulation {
    int64_t epoch_minutes = 0;
    double g_poa = 0.0;
    double cell_temp = 0.0;
    double p_dc = 0.0;
    double p_ac = 0.0;
};

struct DailyEnergy {
    CivilTime date;
    double energy_kwh = 0.0;
};

struct EnergySimulation {
    std::vector<HourlySimulation> hours;
    std::vector<DailyEnergy> days;
};

// Irradiance predictions aligned with weather rows by timestamp.
struct IrradianceSeries {
    std::vector<int64_t> epoch_minutes;
    std::vector<double> ghi;
    std::vector<double> dni;
    std::vector<double> dhi;
};

// Hourly chain: sun position -> POA -> cell temperature -> diode MPP ->
// inverter AC; daily energy sums max(Pac, 0) per calendar day.
EnergySimulation simulate_energy(const IrradianceSeries& predictions,
                                 const TimeSeries& weather, const PvSystemSpec& system);

}  // namespace solarcast::pv
