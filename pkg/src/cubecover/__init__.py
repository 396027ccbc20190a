"""Executable constructions for finite CAT(0) cube complexes.

Median graphs and their walls (:mod:`.median`), normal cube paths and the
normal metric (:mod:`.normal`), separated nets and bounded covers
(:mod:`.nets`), and generic cover/S-system machinery (:mod:`.asdim`).
"""
from .asdim import (
    Cover,
    FiniteMetricSpace,
    SSystem,
    ad_oracle,
    cover_metrics,
    cover_to_s_system,
    inner_neighborhood,
    lebesgue_number,
    s_system_to_cover,
    verify_s_system,
)
from .generators import GenSpec, generate
from .kernels import BACKEND
from .median import (
    Hyperplane,
    IntervalView,
    MedianGraph,
    build_graph,
    crossing,
    dimension,
    hyperplanes,
    interval,
    median,
)
from .nets import NetBuilder, build_cover, build_net, constants, net_s_system, s_set
from .normal import (
    NormalPath,
    gate_vertex,
    h_map,
    normal_ball_sphere,
    normal_cube_path,
    normal_distance,
    sphere_decomposition,
)

__version__ = "0.1.0"
