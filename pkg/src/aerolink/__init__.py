"""aerolink: system-level simulator for cellular networks serving both
terrestrial UEs and cellular-connected UAVs, with five interference
management schemes (exclusive RBs, opportunistic access, terrestrial
ICIC, sensing-assisted ICIC, cooperative interference cancellation)."""

from .allocation import (
    RbAllocation,
    allocate_terrestrial_icic,
    allocate_uav_scheme3,
    allocate_uav_scheme4,
    allocate_uavs_reserved,
    sense_rb_power,
    sensing_matrix,
)
from .channel import (
    LinkClass,
    LinkGain,
    antenna_gain_db,
    los_probability,
    path_loss_db,
    sample_link,
    shadowing_sigma_db,
)
from .cic import CicPlan, allocate_helper_power, plan_downlink_cic, plan_uplink_cic
from .config import SystemConfig, config_to_text, load_config, parse_config_text
from .errors import (
    AerolinkError,
    ConfigurationError,
    GeometryError,
    InfeasibleError,
    PlanningError,
    SimulationError,
)
from .geometry import CellSite, Layout, build_layout, distance_3d, elevation_angle_deg
from .harness import SweepResult, SweepRow, evaluate_drop, run_sweep, write_csv
from .metrics import MetricsRecord, downlink_sinr, sum_rates, uplink_sinr
from .scenario import Drop, LinkTable, associate, associate_all, generate_drop, sample_positions

__version__ = "0.1.0"
