from ._polylin import (
    ConfigError,
    GasModel,
    QuadratureSpec,
    ScatteringModel,
    assemble,
    kernel,
    nu_general,
    nu_reduced,
    read_blop,
    run_suite,
)

__all__ = [
    "ConfigError",
    "GasModel",
    "QuadratureSpec",
    "ScatteringModel",
    "assemble",
    "kernel",
    "nu_general",
    "nu_reduced",
    "read_blop",
    "run_suite",
]
