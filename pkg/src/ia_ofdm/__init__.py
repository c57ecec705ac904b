"""Interference alignment over OFDM subcarriers: precoders, outage and DoF planning."""
from .channel import ChannelSet, Rayleigh, Uniform, draw_channel_set
from .dof_planner import enumerate_feasible, practical_dof, table_one
from .errors import InfeasiblePlanError, NumericalError
from .ia_core import build_decoders, build_precoders, decode, encode, plan_groups, receive, verify_alignment
from .outage import outage_mc, outage_quadrature, outage_rayleigh, outage_uniform
from .simulator import SimConfig, run_sweep, run_trial

__version__ = "0.1.0"

__all__ = [
    "ChannelSet", "Rayleigh", "Uniform", "draw_channel_set",
    "enumerate_feasible", "practical_dof", "table_one",
    "InfeasiblePlanError", "NumericalError",
    "build_decoders", "build_precoders", "decode", "encode", "plan_groups", "receive", "verify_alignment",
    "outage_mc", "outage_quadrature", "outage_rayleigh", "outage_uniform",
    "SimConfig", "run_sweep", "run_trial",
]
