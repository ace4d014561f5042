"""Numerical core of multiport-fama."""

from multiport_fama.core.linalg import (
    hermitian_eig,
    cholesky_pd,
    inv_sqrt_pd,
    power_method_gen,
    eigenvector_eigenvalue_identity_check,
    interlacing_check,
)
from multiport_fama.core.channel import (
    build_topology,
    correlation_matrix,
    sample_channels,
    trial_streams,
)
from multiport_fama.core.receivers import (
    build_pair,
    per_port_sinr,
    sinr_of_design,
    spectral_efficiency,
    solve_combiner,
    design_slow_fama,
    design_dc,
    design_mrc,
    design_geport,
    sinr_drop_exact,
    sinr_drop_bound,
)
from multiport_fama.core.oracle import OracleResult, exhaustive_best_subset, drop_both_sides
from multiport_fama.core.output_handler import OutputHandler

__all__ = [
    "hermitian_eig",
    "cholesky_pd",
    "inv_sqrt_pd",
    "power_method_gen",
    "eigenvector_eigenvalue_identity_check",
    "interlacing_check",
    "build_topology",
    "correlation_matrix",
    "sample_channels",
    "trial_streams",
    "build_pair",
    "per_port_sinr",
    "sinr_of_design",
    "spectral_efficiency",
    "solve_combiner",
    "design_slow_fama",
    "design_dc",
    "design_mrc",
    "design_geport",
    "sinr_drop_exact",
    "sinr_drop_bound",
    "OracleResult",
    "exhaustive_best_subset",
    "drop_both_sides",
    "OutputHandler",
]
