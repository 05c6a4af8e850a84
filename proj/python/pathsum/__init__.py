"""Exact evolution of periodically driven two-level systems.

Drive specs are plain dicts with keys omega, eps0, eps_mult, delta_mult,
a_coeffs [{n, A}], b_coeffs [{m, B}] and d_coeffs [{k, re, im}].
"""

import json

import numpy as np

from . import _pathsum
from ._pathsum import BudgetError, ConvergenceError, SpecError, __version__

__all__ = [
    "BudgetError",
    "ConvergenceError",
    "SpecError",
    "__version__",
    "avg_map",
    "effective_hamiltonian",
    "evolve",
    "exp_divided_difference",
    "gbf_coefficients",
    "gbf_via_bessel_convolution",
    "hamiltonian",
    "kernel",
    "normalize_spec",
    "period",
    "preset",
    "preset_names",
    "quasienergies",
    "rabi_map",
    "rwa_average",
    "rwa_probability",
    "transition_probability",
    "transition_probabilities",
    "weighted_coefficients",
]


def _text(spec):
    return spec if isinstance(spec, str) else json.dumps(spec)


def normalize_spec(spec):
    """Validate a drive spec and return it with every key filled in."""
    return json.loads(_pathsum.normalize_spec(_text(spec)))


def preset_names():
    return list(_pathsum.preset_names())


def preset(name):
    return json.loads(_pathsum.preset(name))


def period(spec):
    return 2.0 * np.pi / normalize_spec(spec)["omega"]


def hamiltonian(spec, t):
    return _pathsum.hamiltonian(_text(spec), float(t))


def gbf_coefficients(spec, p_max):
    return dict(_pathsum.gbf_coefficients(_text(spec), int(p_max)))


def gbf_via_bessel_convolution(spec, p_max):
    return dict(_pathsum.gbf_via_bessel_convolution(_text(spec), int(p_max)))


def weighted_coefficients(spec, threshold=1e-12):
    return dict(_pathsum.weighted_coefficients(_text(spec), float(threshold)))


def exp_divided_difference(nodes, tau):
    return _pathsum.exp_divided_difference([float(x) for x in nodes], float(tau))


def kernel(spec, t, s, form="sinc"):
    return _pathsum.kernel(_text(spec), float(t), float(s), form)


def evolve(spec, times, engine="series", frame="lab", tol=1e-8, k_max=40):
    """U(times[i], times[0]) as an (n, 2, 2) complex array."""
    times = [float(t) for t in np.asarray(times, dtype=float).ravel()]
    return _pathsum.evolve(_text(spec), times, engine, frame, float(tol), int(k_max))


def transition_probability(u):
    return _pathsum.transition_probability(np.asarray(u, dtype=complex))


def transition_probabilities(us):
    return np.abs(np.asarray(us)[:, 0, 1]) ** 2


def quasienergies(u_period, T):
    return _pathsum.quasienergies(np.asarray(u_period, dtype=complex), float(T))


def effective_hamiltonian(spec, n_quad=256):
    return _pathsum.effective_hamiltonian(_text(spec), int(n_quad))


def rwa_probability(spec, t, paper_sign=False, paper_rabi_scale=False):
    return _pathsum.rwa_probability(_text(spec), float(t), paper_sign, paper_rabi_scale)


def rwa_average(spec, paper_sign=False, paper_rabi_scale=False):
    return _pathsum.rwa_average(_text(spec), paper_sign, paper_rabi_scale)


def rabi_map(sweep, l):
    return _pathsum.rabi_map(_text(sweep), int(l))


def avg_map(sweep, paper_sign=False, paper_rabi_scale=False):
    return _pathsum.avg_map(_text(sweep), paper_sign, paper_rabi_scale)
