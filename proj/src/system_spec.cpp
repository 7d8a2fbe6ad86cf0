#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "solarcast/common.hpp"
#include "solarcast/pv.hpp"

namespace solarcast::pv {

using nlohmann::json;

namespace {

double need(const json& j, const char* key, const std::string& context) {
    if (!j.contains(key)) {
        throw DataError("system spec: missing '" + std::string(key) + "' in " + context);
    }
    return j.at(key).get<double>();
}

}  // namespace

PvSystemSpec load_system_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open system spec: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError("system spec " + path + ": " + e.what());
    }

    PvSystemSpec spec;
    spec.name = j.value("name", path);

    const json& loc = j.at("location");
    spec.location.latitude = need(loc, "latitude", "location");
    spec.location.longitude = need(loc, "longitude", "location");
    spec.location.altitude = loc.value("altitude", 0.0);
    spec.location.timezone_offset = loc.value("timezone_offset", 0);

    const json& arr = j.at("array");
    spec.array.tilt = need(arr, "tilt", "array");
    spec.array.azimuth = need(arr, "azimuth", "array");
    spec.array.albedo = arr.value("albedo", 0.2);

    if (j.contains("cell_temp")) {
        spec.cell_temp.u0 = j["cell_temp"].value("u0", 25.0);
        spec.cell_temp.u1 = j["cell_temp"].value("u1", 6.84);
    }

    const json& mod = j.at("module");
    spec.module.name = mod.value("name", "module");
    spec.module.n_cells_series = static_cast<int>(need(mod, "N_s", "module"));
    spec.module.i_l_ref = need(mod, "I_L_ref", "module");
    spec.module.i_o_ref = mod.value("I_o_ref", 0.0);
    spec.module.r_s = need(mod, "R_s", "module");
    spec.module.r_sh_ref = need(mod, "R_sh_ref", "module");
    spec.module.a_ref = need(mod, "a_ref", "module");
    spec.module.alpha_sc = need(mod, "alpha_sc", "module");
    spec.module.adjust = mod.value("Adjust", 0.0);
    spec.module.stc_rating = mod.value("STC", 0.0);
    spec.module.v_oc_ref = need(mod, "V_oc_ref", "module");
    spec.module.i_sc_ref = need(mod, "I_sc_ref", "module");
    spec.module.v_mp_ref = need(mod, "V_mp_ref", "module");
    spec.module.i_mp_ref = need(mod, "I_mp_ref", "module");
    spec.module.t_noct = mod.value("T_NOCT", 0.0);
    if (spec.module.i_o_ref <= 0.0) {
        spec.module.i_o_ref = recover_i_o_ref(spec.module);
        char io[32];
        std::snprintf(io, sizeof(io), "%.4e", spec.module.i_o_ref);
        log_info("system spec: recovered I_o_ref=" + std::string(io) + " A for module '" +
                 spec.module.name + "' from V_oc_ref");
    }

    const json& inv = j.at("inverter");
    spec.inverter.name = inv.value("name", "inverter");
    spec.inverter.paco = need(inv, "Paco", "inverter");
    spec.inverter.pdco = need(inv, "Pdco", "inverter");
    spec.inverter.pso = need(inv, "Pso", "inverter");
    spec.inverter.pnt = need(inv, "Pnt", "inverter");
    spec.inverter.vdco = need(inv, "Vdco", "inverter");
    spec.inverter.c0 = need(inv, "C0", "inverter");
    spec.inverter.c1 = need(inv, "C1", "inverter");
    spec.inverter.c2 = need(inv, "C2", "inverter");
    spec.inverter.c3 = need(inv, "C3", "inverter");
    spec.inverter.vdcmax = need(inv, "Vdcmax", "inverter");
    spec.inverter.mppt_low = need(inv, "Mppt_low", "inverter");
    spec.inverter.mppt_high = need(inv, "Mppt_high", "inverter");

    spec.loss_fraction = j.value("loss_fraction", 0.0);
    spec.solar_offset_minutes = j.value("solar_offset_minutes", 0);
    spec.albedo_from_records = j.value("albedo_from_records", true);

    spec.check();
    return spec;
}

void save_system_spec(const PvSystemSpec& spec, const std::string& path) {
    json j;
    j["name"] = spec.name;
    j["location"] = {{"latitude", spec.location.latitude},
                     {"longitude", spec.location.longitude},
                     {"altitude", spec.location.altitude},
                     {"timezone_offset", spec.location.timezone_offset}};
    j["array"] = {{"tilt", spec.array.tilt},
                  {"azimuth", spec.array.azimuth},
                  {"albedo", spec.array.albedo}};
    j["cell_temp"] = {{"u0", spec.cell_temp.u0}, {"u1", spec.cell_temp.u1}};
    j["module"] = {{"name", spec.module.name},
                   {"N_s", spec.module.n_cells_series},
                   {"I_L_ref", spec.module.i_l_ref},
                   {"I_o_ref", spec.module.i_o_ref},
                   {"R_s", spec.module.r_s},
                   {"R_sh_ref", spec.module.r_sh_ref},
                   {"a_ref", spec.module.a_ref},
                   {"alpha_sc", spec.module.alpha_sc},
                   {"Adjust", spec.module.adjust},
                   {"STC", spec.module.stc_rating},
                   {"V_oc_ref", spec.module.v_oc_ref},
                   {"I_sc_ref", spec.module.i_sc_ref},
                   {"V_mp_ref", spec.module.v_mp_ref},
                   {"I_mp_ref", spec.module.i_mp_ref},
                   {"T_NOCT", spec.module.t_noct}};
    j["inverter"] = {{"name", spec.inverter.name},
                     {"Paco", spec.inverter.paco},
                     {"Pdco", spec.inverter.pdco},
                     {"Pso", spec.inverter.pso},
                     {"Pnt", spec.inverter.pnt},
                     {"Vdco", spec.inverter.vdco},
                     {"C0", spec.inverter.c0},
                     {"C1", spec.inverter.c1},
                     {"C2", spec.inverter.c2},
                     {"C3", spec.inverter.c3},
                     {"Vdcmax", spec.inverter.vdcmax},
                     {"Mppt_low", spec.inverter.mppt_low},
                     {"Mppt_high", spec.inverter.mppt_high}};
    j["loss_fraction"] = spec.loss_fraction;
    j["solar_offset_minutes"] = spec.solar_offset_minutes;
    j["albedo_from_records"] = spec.albedo_from_records;

    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot open system spec for writing: " + path);
    }
    out << j.dump(2) << '\n';
}

}  // namespace solarcast::pv
