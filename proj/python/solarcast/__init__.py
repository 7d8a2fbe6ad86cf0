"""Solar irradiance forecasting and PV energy simulation bindings."""

from solarcast._core import (  # noqa: F401
    Forest,
    MaxPowerPoint,
    SolarcastError,
    SolarGeometry,
    __version__,
    classify_nrmse,
    faiman_cell_temp,
    fit_forest,
    generate_dataset,
    inverter_ac_power,
    load_forest,
    mae,
    mase,
    module_max_power,
    nrmse,
    parse_csv,
    rmse,
    solar_position,
    summary_stats_csv,
)
