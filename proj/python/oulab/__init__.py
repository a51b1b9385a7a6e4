"""Python bindings for the oulab C++ library."""

from ._oulab import (
    Profile,
    Spectrum,
    __version__,
    chain_bound,
    divergence_lower_bound,
    grad_resolvent,
    odd_reduce,
    radial_reduce,
    resolvent,
    run_cli,
    sign_closed_form,
    witness,
)

__all__ = [
    "Profile",
    "Spectrum",
    "__version__",
    "chain_bound",
    "divergence_lower_bound",
    "grad_resolvent",
    "odd_reduce",
    "radial_reduce",
    "resolvent",
    "run_cli",
    "sign_closed_form",
    "witness",
]
