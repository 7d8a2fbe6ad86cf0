#include "solarcast/pv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "solarcast/common.hpp"

namespace solarcast::pv {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kBoltzmannEvK = 8.617332478e-5;  // eV/K
constexpr double kTRefK = 298.15;
constexpr double kEgRefEv = 1.121;
constexpr double kDEgDt = -0.0002677;  // 1/K, band gap temperature dependence
constexpr double kCos87 = 0.05233595624294383;  // cos(87 deg)

}  // namespace

void ArrayGeometry::check() const {
    if (tilt < 0.0 || tilt > 90.0) throw UsageError("array: tilt outside [0,90]");
    if (azimuth < 0.0 || azimuth >= 360.0) throw UsageError("array: azimuth outside [0,360)");
    if (albedo < 0.0 || albedo > 1.0) throw UsageError("array: albedo outside [0,1]");
}

void ModuleParamsCEC::check() const {
    if (r_s <= 0.0 || r_sh_ref <= 0.0) throw UsageError("module: resistances must be > 0");
    if (a_ref <= 0.0) throw UsageError("module: a_ref must be > 0");
    if (i_l_ref <= 0.0) throw UsageError("module: I_L_ref must be > 0");
    if (i_o_ref <= 0.0) throw UsageError("module: I_o_ref must be > 0");
    if (n_cells_series <= 0) throw UsageError("module: N_s must be > 0");
    const double pmp_nameplate = v_mp_ref * i_mp_ref;
    if (stc_rating > 0.0 && std::abs(pmp_nameplate - stc_rating) > 0.01 * stc_rating) {
        throw UsageError("module '" + name + "': Vmp*Imp differs from the STC rating by >1%");
    }
}

void InverterParamsSNL::check() const {
    if (!(paco < pdco)) throw UsageError("inverter: Paco must be < Pdco");
    if (!(pso > 0.0)) throw UsageError("inverter: Pso must be > 0");
    if (!(mppt_low < mppt_high)) throw UsageError("inverter: MPPT window is empty");
}

void PvSystemSpec::check() const {
    location.check();
    array.check();
    module.check();
    inverter.check();
    if (loss_fraction < 0.0 || loss_fraction >= 1.0) {
        throw UsageError("system: loss fraction outside [0,1)");
    }
    if (!(cell_temp.u0 > 0.0) || cell_temp.u1 < 0.0) {
        throw UsageError("system: Faiman coefficients require u0 > 0, u1 >= 0");
    }
}

double angle_of_incidence(const SolarGeometry& geom, const ArrayGeometry& array) {
    const double zr = geom.zenith * kDegToRad;
    const double br = array.tilt * kDegToRad;
    const double cos_aoi = std::cos(br) * std::cos(zr) +
                           std::sin(br) * std::sin(zr) *
                               std::cos((geom.apparent_azimuth - array.azimuth) * kDegToRad);
    return std::acos(std::clamp(cos_aoi, -1.0, 1.0)) / kDegToRad;
}

double hay_davies_sky_diffuse(double dhi, double dni, const SolarGeometry& geom,
                              const ArrayGeometry& array) {
    const double anisotropy = geom.extraterrestrial_dni > 0.0
                                  ? dni / geom.extraterrestrial_dni
                                  : 0.0;
    const double cos_aoi = std::max(std::cos(geom.aoi * kDegToRad), 0.0);
    const double cos_zen = std::max(std::cos(geom.zenith * kDegToRad), kCos87);
    const double rb = cos_aoi / cos_zen;
    const double isotropic = (1.0 + std::cos(array.tilt * kDegToRad)) / 2.0;
    const double sky = dhi * (anisotropy * rb + (1.0 - anisotropy) * isotropic);
    return std::max(sky, 0.0);
}

PoaIrradiance poa_total(double ghi, double dhi, double dni, const SolarGeometry& geom,
                        const ArrayGeometry& array) {
    PoaIrradiance poa;
    if (geom.zenith >= 90.0) {
        return poa;
    }
    SolarGeometry g = geom;
    g.aoi = angle_of_incidence(geom, array);
    const double cos_aoi = std::max(std::cos(g.aoi * kDegToRad), 0.0);
    poa.beam = dni * cos_aoi;
    poa.sky_diffuse = hay_davies_sky_diffuse(dhi, dni, g, array);
    poa.ground_reflected =
        ghi * array.albedo * (1.0 - std::cos(array.tilt * kDegToRad)) / 2.0;
    poa.global = poa.beam + poa.sky_diffuse + poa.ground_reflected;
    return poa;
}

double faiman_cell_temp(double g_poa, double t_ambient, double wind_speed,
                        const CellTempParams& params) {
    const double denom = params.u0 + params.u1 * wind_speed;
    if (!(denom > 0.0)) {
        throw UsageError("faiman: u0 + u1*wind must be > 0");
    }
    return t_ambient + g_poa / denom;
}

namespace {

struct DiodeParams {
    double i_l = 0.0;
    double i_o = 0.0;
    double a = 0.0;
    double r_s = 0.0;
    double r_sh = 0.0;
};

// De Soto / CEC translation of the reference parameters to operating
// conditions. The Adjust term derates the short-circuit temperature
// coefficient used for the photocurrent.
DiodeParams translate_cec(const ModuleParamsCEC& p, double effective_irradiance,
                          double cell_temp) {
    DiodeParams d;
    const double tk = cell_temp + 273.15;
    const double alpha = p.alpha_sc * (1.0 - p.adjust / 100.0);
    const double g_norm = effective_irradiance / 1000.0;
    d.i_l = g_norm * (p.i_l_ref + alpha * (tk - kTRefK));
    const double eg = kEgRefEv * (1.0 + kDEgDt * (tk - kTRefK));
    d.i_o = p.i_o_ref * std::pow(tk / kTRefK, 3.0) *
            std::exp(kEgRefEv / (kBoltzmannEvK * kTRefK) - eg / (kBoltzmannEvK * tk));
    d.a = p.a_ref * tk / kTRefK;
    d.r_sh = g_norm > 0.0 ? p.r_sh_ref / g_norm : p.r_sh_ref;
    d.r_s = p.r_s;
    return d;
}

// Current at voltage v: I = I_L - I_o*(exp((v + I*Rs)/a) - 1) - (v + I*Rs)/Rsh,
// solved for I by safeguarded Newton iteration.
double solve_current(const DiodeParams& d, double v) {
    double lo = -d.i_l - 1.0;
    double hi = d.i_l + 1.0;
    double i = std::clamp(d.i_l * (1.0 - v / (d.a * 40.0 + 1.0)), lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double vd = v + i * d.r_s;
        const double e = std::exp(vd / d.a);
        const double f = d.i_l - d.i_o * (e - 1.0) - vd / d.r_sh - i;
        if (std::abs(f) < 1e-12) return i;
        if (f > 0.0) {
            lo = std::max(lo, i);
        } else {
            hi = std::min(hi, i);
        }
        const double fprime = -d.i_o * e * d.r_s / d.a - d.r_s / d.r_sh - 1.0;
        double next = i - f / fprime;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - i) < 1e-14 * std::max(1.0, std::abs(i)) && std::abs(f) < 1e-10) {
            return next;
        }
        i = next;
    }
    const double vd = v + i * d.r_s;
    const double residual = d.i_l - d.i_o * (std::exp(vd / d.a) - 1.0) - vd / d.r_sh - i;
    if (std::abs(residual) < 1e-10) return i;
    throw ConvergenceError("single diode: current solve failed at V=" + std::to_string(v) +
                           " (residual " + std::to_string(residual) + " A)");
}

double solve_open_circuit(const DiodeParams& d) {
    // I = 0: f(v) = I_L - I_o*(exp(v/a) - 1) - v/Rsh, strictly decreasing.
    double lo = 0.0;
    double hi = d.a * std::log1p(d.i_l / d.i_o) + 1.0;
    double v = hi - 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double e = std::exp(v / d.a);
        const double f = d.i_l - d.i_o * (e - 1.0) - v / d.r_sh;
        if (std::abs(f) < 1e-12 * std::max(1.0, d.i_l)) return v;
        if (f > 0.0) {
            lo = std::max(lo, v);
        } else {
            hi = std::min(hi, v);
        }
        const double fprime = -d.i_o * e / d.a - 1.0 / d.r_sh;
        double next = v - f / fprime;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - v) < 1e-13 * std::max(1.0, v)) return next;
        v = next;
    }
    throw ConvergenceError("single diode: open-circuit solve failed");
}

}  // namespace

double recover_i_o_ref(const ModuleParamsCEC& p) {
    const double numerator = p.i_l_ref - p.v_oc_ref / p.r_sh_ref;
    const double denominator = std::expm1(p.v_oc_ref / p.a_ref);
    if (!(numerator > 0.0) || !(denominator > 0.0)) {
        throw UsageError("module '" + p.name + "': cannot recover I_o_ref from Voc");
    }
    return numerator / denominator;
}

double single_diode_current(const ModuleParamsCEC& params, double effective_irradiance,
                            double cell_temp, double voltage) {
    const DiodeParams d = translate_cec(params, effective_irradiance, cell_temp);
    return solve_current(d, voltage);
}

MaxPowerPoint single_diode_max_power(const ModuleParamsCEC& params,
                                     double effective_irradiance, double cell_temp) {
    if (effective_irradiance < 0.0) {
        throw UsageError("single diode: negative irradiance");
    }
    MaxPowerPoint mpp;
    if (effective_irradiance == 0.0) {
        return mpp;
    }
    const DiodeParams d = translate_cec(params, effective_irradiance, cell_temp);
    mpp.v_oc = solve_open_circuit(d);
    mpp.i_sc = solve_current(d, 0.0);

    // Golden-section search on P(V); the single-diode power curve is unimodal.
    constexpr double kInvPhi = 0.6180339887498949;
    double a = 0.0;
    double b = mpp.v_oc;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double p1 = x1 * solve_current(d, x1);
    double p2 = x2 * solve_current(d, x2);
    while (b - a > 1e-9 * std::max(1.0, mpp.v_oc)) {
        if (p1 < p2) {
            a = x1;
            x1 = x2;
            p1 = p2;
            x2 = a + kInvPhi * (b - a);
            p2 = x2 * solve_current(d, x2);
        } else {
            b = x2;
            x2 = x1;
            p2 = p1;
            x1 = b - kInvPhi * (b - a);
            p1 = x1 * solve_current(d, x1);
        }
    }
    mpp.v_mp = 0.5 * (a + b);
    mpp.i_mp = solve_current(d, mpp.v_mp);
    mpp.p_mp = mpp.v_mp * mpp.i_mp;
    return mpp;
}

double inverter_ac_power(double p_dc, double v_dc, const InverterParamsSNL& params) {
    if (v_dc < 0.0 || v_dc > params.vdcmax) {
        throw UsageError("inverter: Vdc outside [0, Vdcmax]");
    }
    if (p_dc <= params.pso) {
        return -params.pnt;
    }
    const double dv = v_dc - params.vdco;
    const double a = params.pdco * (1.0 + params.c1 * dv);
    const double b = params.pso * (1.0 + params.c2 * dv);
    const double c = params.c0 * (1.0 + params.c3 * dv);
    if (!(a > b)) {
        throw UsageError("inverter: A <= B at Vdc=" + std::to_string(v_dc) +
                         "; coefficients outside their valid domain");
    }
    const double span = a - b;
    const double pac =
        (params.paco / span - c * span) * (p_dc - b) + c * (p_dc - b) * (p_dc - b);
    return std::min(pac, params.paco);
}

EnergySimulation simulate_energy(const IrradianceSeries& predictions,
                                 const TimeSeries& weather, const PvSystemSpec& system) {
    system.check();
    if (predictions.epoch_minutes.size() != predictions.ghi.size() ||
        predictions.ghi.size() != predictions.dni.size() ||
        predictions.dni.size() != predictions.dhi.size()) {
        throw DataError("simulate: ragged prediction series");
    }
    std::unordered_map<int64_t, size_t> weather_index;
    weather_index.reserve(weather.size());
    for (size_t i = 0; i < weather.records.size(); ++i) {
        weather_index.emplace(weather.records[i].epoch_minutes, i);
    }

    EnergySimulation sim;
    sim.hours.reserve(predictions.epoch_minutes.size());
    int64_t current_day = INT64_MIN;
    for (size_t i = 0; i < predictions.epoch_minutes.size(); ++i) {
        const int64_t stamp = predictions.epoch_minutes[i];
        auto it = weather_index.find(stamp);
        if (it == weather_index.end()) {
            throw DataError("simulate: no weather record for timestamp " +
                            format_timestamp(from_epoch_minutes(stamp)));
        }
        const HourlyRecord& wx = weather.records[it->second];

        HourlySimulation hour;
        hour.epoch_minutes = stamp;

        const CivilTime sun_time =
            from_epoch_minutes(stamp + system.solar_offset_minutes);
        const SolarGeometry geom = solar_position(sun_time, system.location);

        ArrayGeometry array = system.array;
        if (system.albedo_from_records && wx.surface_albedo > 0.0 &&
            wx.surface_albedo <= 1.0) {
            array.albedo = wx.surface_albedo;
        }
        const PoaIrradiance poa =
            poa_total(predictions.ghi[i], predictions.dhi[i], predictions.dni[i], geom, array);
        hour.g_poa = poa.global;
        hour.cell_temp =
            faiman_cell_temp(poa.global, wx.temperature, wx.wind_speed, system.cell_temp);
        const double effective = poa.global * (1.0 - system.loss_fraction);
        const MaxPowerPoint mpp =
            single_diode_max_power(system.module, effective, hour.cell_temp);
        hour.p_dc = mpp.p_mp;
        const double v_dc = mpp.p_mp > 0.0 ? mpp.v_mp : system.inverter.vdco;
        hour.p_ac = inverter_ac_power(hour.p_dc, v_dc, system.inverter);
        sim.hours.push_back(hour);

        const int64_t day = stamp >= 0 ? stamp / 1440 : (stamp - 1439) / 1440;
        if (day != current_day) {
            DailyEnergy d;
            d.date = from_epoch_minutes(day * 1440);
            sim.days.push_back(d);
            current_day = day;
        }
        sim.days.back().energy_kwh += std::max(hour.p_ac, 0.0) / 1000.0;
    }
    return sim;
}

}  // namespace solarcast::pv
