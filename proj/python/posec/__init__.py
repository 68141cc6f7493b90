"""Simulation and verification toolkit for the partially ordered secretary problem."""

from fractions import Fraction

from ._posec import (
    CycleError,
    DEFAULT_THRESHOLD,
    DimensionError,
    ElementIndexError,
    EmptyPosetError,
    Estimate,
    InvalidParameter,
    LemmaReport,
    NotMaximalError,
    Outcome,
    ParseError,
    Poset,
    PosecError,
    TagEvent,
    TooLargeError,
    Trial,
    ZeroTrialsError,
    __version__,
    antichain,
    boolean_lattice,
    chain,
    estimate_success,
    forest_of_chains,
    greedy_chain,
    greedy_maximum,
    is_tagged,
    load_poset_source,
    parse_poset,
    random_poset,
    run_strategy,
    sample_trial,
    discrete_adapter,
    tag_sequence,
    threshold_sweep,
    verify_last_tag_uniform,
    verify_tag_independence,
    verify_tag_marginals,
    verify_tagged_given_arrival,
    wedge,
    format_poset,
)
from . import _posec


def mu_exact(poset, cap=10):
    """Exact greedy-maximum probabilities as a list of Fractions."""
    return [Fraction(s) for s in _posec.mu_exact(poset, cap)]


def mu_t_exact(poset, x, t, cap=8):
    """Exact mu_t(x) for a maximal element x; t may be a Fraction, int or str."""
    return Fraction(_posec.mu_t_exact(poset, x, str(Fraction(t)), cap))


def check_mu_monotonicity(poset, grid, cap=8):
    """List of (element, t, mu_t, mu) violations of mu_t >= mu; empty when it holds."""
    raw = _posec.check_mu_monotonicity(poset, [str(Fraction(t)) for t in grid], cap)
    return [(x, Fraction(t), Fraction(a), Fraction(b)) for x, t, a, b in raw]
