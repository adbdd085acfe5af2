"""The two-point correlation map, its physical branches, and exact values.

For a state rho and observables A, B on one d-dimensional system, the target
quantity Tr[A rho B] equals Tr[T(rho) (A (x) B)] for the (unphysical) map
T(rho) = S (1 (x) rho) built from the swap operator S. T splits into a
Hermitian-output real part and imaginary part, T = R - iI, and each part is a
weighted difference of two genuine channels:

    R = (d+1)/2 * R+  -  (d-1)/2 * R-      R±(rho) = 2/(d±1) P± (1(x)rho) P±
    I = c/2 * I+  -  c/2 * I-,  c = sqrt(d^2-1),
                                           I±(rho) = 2d/(d^2-1) Q± (1(x)rho) Q∓

with P± the exchange-sector projectors and Q± the complex-phase blends
(1 + zS)/2. In instrument form the branch pairs {R±/2} and {I±/2} carry
weights ±(d±1) and ±sqrt(d^2-1); the resulting error-amplification factors d
and sqrt(d^2-1) meet the universal lower bound at every input state, with
branch probabilities exactly 1/2 each.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .choi import ChoiOperator
from .decomposition import StatisticalDecomposition
from .linalg import (
    check_density_matrix,
    maximally_entangled_projector,
    q_operator,
    sector_projector,
    swap_operator,
)


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m)
    m.flags.writeable = False
    return m


@dataclass(frozen=True, eq=False)
class CorrelatorFamily:
    """Eagerly cached fixed operators for one system dimension d >= 2.

    Holds the swap operator, sector projectors, phase blends, the maximally
    entangled projector, and the representing operators of all six maps
    (real/imaginary parts and their four physical branches). All caches are
    immutable and safe to share across threads.
    """

    d: int
    swap: np.ndarray = field(init=False, repr=False)
    proj_sym: np.ndarray = field(init=False, repr=False)
    proj_anti: np.ndarray = field(init=False, repr=False)
    q_plus: np.ndarray = field(init=False, repr=False)
    q_minus: np.ndarray = field(init=False, repr=False)
    entangled: np.ndarray = field(init=False, repr=False)
    j_real: ChoiOperator = field(init=False, repr=False)
    j_imag: ChoiOperator = field(init=False, repr=False)
    j_sym: ChoiOperator = field(init=False, repr=False)
    j_anti: ChoiOperator = field(init=False, repr=False)
    j_phase_plus: ChoiOperator = field(init=False, repr=False)
    j_phase_minus: ChoiOperator = field(init=False, repr=False)

    def __post_init__(self):
        d = self.d
        if d < 2:
            raise ValueError(f"family requires dimension >= 2, got {d}")
        set_ = lambda name, value: object.__setattr__(self, name, value)
        set_("swap", _frozen(swap_operator(d)))
        set_("proj_sym", _frozen(sector_projector(d, +1)))
        set_("proj_anti", _frozen(sector_projector(d, -1)))
        set_("q_plus", _frozen(q_operator(d, +1)))
        set_("q_minus", _frozen(q_operator(d, -1)))
        set_("entangled", _frozen(maximally_entangled_projector(d)))

        # Triple-tensor builders on (output1, output2, input), slowest first.
        eye1 = np.eye(d)
        phi23 = np.kron(eye1, self.entangled)
        s12 = np.kron(self.swap, eye1)
        x = phi23 @ s12
        y = s12 @ phi23
        jr = (d / 2) * (x + y)
        ji = (d / 2j) * (x - y)

        def sandwich(left: np.ndarray, right: np.ndarray, scale: float):
            return scale * (np.kron(left, eye1) @ phi23 @ np.kron(right, eye1))

        jrp = sandwich(self.proj_sym, self.proj_sym, 2 * d / (d + 1))
        jrm = sandwich(self.proj_anti, self.proj_anti, 2 * d / (d - 1))
        jip = sandwich(self.q_plus, self.q_minus, 2 * d * d / (d * d - 1))
        jim = sandwich(self.q_minus, self.q_plus, 2 * d * d / (d * d - 1))

        wrap = lambda m: ChoiOperator(_frozen(m), d_in=d, d_out=d * d)
        set_("j_real", wrap(jr))
        set_("j_imag", wrap(ji))
        set_("j_sym", wrap(jrp))
        set_("j_anti", wrap(jrm))
        set_("j_phase_plus", wrap(jip))
        set_("j_phase_minus", wrap(jim))


def ideal_correlator_apply(fam: CorrelatorFamily, rho: np.ndarray) -> np.ndarray:
    """S (1 (x) rho): the unphysical map whose pairing with A (x) B gives
    Tr[A rho B]. The output is generally not Hermitian."""
    rho = _check_dim(fam, rho)
    return fam.swap @ np.kron(np.eye(fam.d), rho)


def real_part_apply(fam: CorrelatorFamily, rho: np.ndarray) -> np.ndarray:
    """[(1 (x) rho) S + S (1 (x) rho)] / 2 — Hermitian, trace 1."""
    rho = _check_dim(fam, rho)
    x = np.kron(np.eye(fam.d), rho)
    return (x @ fam.swap + fam.swap @ x) / 2


def imag_part_apply(fam: CorrelatorFamily, rho: np.ndarray) -> np.ndarray:
    """[(1 (x) rho) S - S (1 (x) rho)] / 2i — Hermitian, trace 0."""
    rho = _check_dim(fam, rho)
    x = np.kron(np.eye(fam.d), rho)
    return (x @ fam.swap - fam.swap @ x) / 2j


def cloner_apply(fam: CorrelatorFamily, sign: int, rho: np.ndarray) -> np.ndarray:
    """The two-copy channel 2/(d±1) P± (1 (x) rho) P±.

    ``sign=+1`` spreads the input symmetrically over both output copies (the
    optimal cloning channel); ``sign=-1`` projects into the antisymmetric
    sector.
    """
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    rho = _check_dim(fam, rho)
    p = fam.proj_sym if sign > 0 else fam.proj_anti
    return (2 / (fam.d + sign)) * (p @ np.kron(np.eye(fam.d), rho) @ p)


def rootswap_apply(fam: CorrelatorFamily, sign: int, rho: np.ndarray) -> np.ndarray:
    """The two-copy channel 2d/(d^2-1) Q± (1 (x) rho) Q∓ (adjoint sandwich,
    hence completely positive and trace preserving)."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    rho = _check_dim(fam, rho)
    q, qdag = (fam.q_plus, fam.q_minus) if sign > 0 else (fam.q_minus, fam.q_plus)
    return (2 * fam.d / (fam.d**2 - 1)) * (q @ np.kron(np.eye(fam.d), rho) @ qdag)


def universal_real_decomposition(d: int) -> StatisticalDecomposition:
    """Instrument form of the real part: effects {R±/2}, weights ±(d±1)."""
    fam = CorrelatorFamily(d)
    half = lambda j: ChoiOperator(j.matrix / 2, d_in=d, d_out=d * d)
    return StatisticalDecomposition(
        weights=(float(d + 1), -float(d - 1)),
        effects=(half(fam.j_sym), half(fam.j_anti)),
    )


def universal_imag_decomposition(d: int) -> StatisticalDecomposition:
    """Instrument form of the imaginary part: effects {I±/2}, weights
    ±sqrt(d^2-1)."""
    fam = CorrelatorFamily(d)
    lam = float(np.sqrt(d * d - 1))
    half = lambda j: ChoiOperator(j.matrix / 2, d_in=d, d_out=d * d)
    return StatisticalDecomposition(
        weights=(lam, -lam),
        effects=(half(fam.j_phase_plus), half(fam.j_phase_minus)),
    )


def choi_builders(fam: CorrelatorFamily) -> dict[str, ChoiOperator]:
    """All six representing operators keyed by branch name."""
    return {
        "real": fam.j_real,
        "imag": fam.j_imag,
        "sym": fam.j_sym,
        "anti": fam.j_anti,
        "phase_plus": fam.j_phase_plus,
        "phase_minus": fam.j_phase_minus,
    }


def two_point_exact(rho: np.ndarray, a: np.ndarray, b: np.ndarray) -> complex:
    """Ground truth: the product trace Tr[A rho B]."""
    rho = np.asarray(rho, dtype=complex)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not (rho.shape == a.shape == b.shape) or rho.shape[0] != rho.shape[1]:
        raise ValueError(
            f"dimension mismatch: rho {rho.shape}, a {a.shape}, b {b.shape}"
        )
    return complex(np.trace(a @ rho @ b))


def _check_dim(fam: CorrelatorFamily, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (fam.d, fam.d):
        raise ValueError(
            f"state shape {rho.shape} does not match family dimension {fam.d}"
        )
    return rho
