"""Numerical tools for the generalized Gauss map T_p(x) = {p/x}: invariant
measure, transfer operator, Gauss-Kuzmin iterates and the rate constant Q_p."""

from .estimators import KuzminRateEstimator, TransferOperator
from .funcspace import FuncRep, differentiate, evaluate, from_callable, integral, sup_norm
from .gauss_map import OrbitRecord, orbit, phi_monte_carlo, t_apply
from .hurwitz import (
    BoundedValue,
    PrecisionError,
    QpBounds,
    asymptotic_residual,
    hurwitz_zeta,
    q_bounds,
    q_constant,
)
from .kuzmin import (
    IterateRecord,
    RateReport,
    delta_sup,
    fit_decay_rate,
    phi_iterate,
    phi_recursion_direct,
)
from .measure import InvariantMeasure, MapParams, cdf_phi, density_eta, mu_interval
from .transfer import (
    ProofDiagnostics,
    TailToleranceError,
    TruncationPolicy,
    apply_transfer,
    diagnostics,
    g_substitution,
    iterate_transfer,
    q_of_x,
)

__version__ = "0.1.0"
