"""q^2-Fourier analysis on the lattice {+-q^(2n)}: special functions, skeletons,
transforms, distributions and an exact normal-ordering algebra."""
from .distributions import (
    Delta,
    Derivative,
    Linear,
    PowDelta,
    PowInt,
    PowMinusNu,
    PowPlusNu,
    PowSign,
    Regular,
    SignS,
    ThetaMinus,
    ThetaPlus,
    TransformTableEntry,
    c_nu,
    dist_derivative,
    fourier_numeric,
    fourier_table,
    pair,
    parseval_check,
    table_rows,
)
from .errors import (
    ConvergenceWarning,
    InvalidNuError,
    NonConvergentError,
    NonIntegrableError,
    OutOfStripError,
    PoleProximityError,
    QFourierError,
    UnsupportedDistributionError,
    WindowError,
    ZeroArgumentError,
)
from .lattice import (
    Skeleton,
    Window,
    basis,
    default_window,
    jackson_integral,
    q_derivative,
    sample,
    shift_lambda,
)
from .qcore import E_q2, QParams, big_trig, bigQ, e_q2, phi01, small_trig, theta0, theta_lattice
from .transform import (
    TransformDirection,
    commutation_check,
    fourier_forward,
    fourier_inverse,
    orthogonality,
)

__version__ = "0.1.0"

__all__ = [
    "basis",
    "big_trig",
    "bigQ",
    "c_nu",
    "commutation_check",
    "ConvergenceWarning",
    "default_window",
    "Delta",
    "Derivative",
    "dist_derivative",
    "e_q2",
    "E_q2",
    "fourier_forward",
    "fourier_inverse",
    "fourier_numeric",
    "fourier_table",
    "InvalidNuError",
    "jackson_integral",
    "Linear",
    "NonConvergentError",
    "NonIntegrableError",
    "orthogonality",
    "OutOfStripError",
    "pair",
    "parseval_check",
    "phi01",
    "PoleProximityError",
    "PowDelta",
    "PowInt",
    "PowMinusNu",
    "PowPlusNu",
    "PowSign",
    "q_derivative",
    "QFourierError",
    "QParams",
    "Regular",
    "sample",
    "shift_lambda",
    "SignS",
    "Skeleton",
    "small_trig",
    "table_rows",
    "theta0",
    "theta_lattice",
    "ThetaMinus",
    "ThetaPlus",
    "TransformDirection",
    "TransformTableEntry",
    "UnsupportedDistributionError",
    "Window",
    "WindowError",
    "ZeroArgumentError",
]
