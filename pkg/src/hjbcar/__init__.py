"""Time-optimal paths for a rectangular car among moving obstacles via a
backward-in-time HJB solve on an (x, y, theta, t) grid."""
from .grid import CFLError, Grid4, NodeIndex, cfl_max_dt
from .kinematics import CONTROL_PAIRS, CarParams, Configuration, ControlPair, controls_from_gradient, motion, upwind_coeffs
from .oracle import shoot, simulate
from .scene import Scene, collides, footprint, illegal_mask, load_scene, occupied
from .solver import Solver, SolverParams, ValueFunction, argmin_controls, solve, step_backward, terminal_slice
from .tracer import Trajectory, TracerParams, interpolate, trace, validate_trajectory

__version__ = "0.1.0"
