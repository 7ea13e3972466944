"""Decohered Ising models: builders and closed-form references.

Two dephasing channels on an open chain of L qubits are covered:

  NN: nearest-neighbor two-site dephasing, bond channels
      E_i[rho] = (1-p) rho + p Z_i Z_{i+1} rho Z_i Z_{i+1}, i = 0..L-2,
      equal to e^{-(L-1) tau} e^{-tau H} with tau = -ln(1-2p)/2;

  IR: infinite-range dephasing over all pairs, exactly e^{-tau H}.

Both effective Hamiltonians commute with the layer-swap parities of the
doubled space, and on the positive-parity sector (tau^z product basis,
dimension 2^L) they are diagonal:

  NN:  H = -Sum_i tau^z_i tau^z_{i+1}
  IR:  H = -Sum_{i<j} (tau^z_i tau^z_j - 1)/L     (stored with its +L/2
       offset so the Lanczos diagonal matches the closed form literally).

The initial state is the uniform vector Prod_i (|up_i> + |down_i>)/sqrt(2).
Closed forms: the NN Krylov space has dimension exactly L with b_n =
sqrt(n(L-n)) (a free collective spin after the Kramers-Wannier map); the
IR Krylov space has dimension L/2+1 with the collective-spin coefficients
implemented in analytic_lanczos.  Binomials beyond L = 30 go through
log-gamma; tests cross-check against exact integer arithmetic below that.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .doubled import (
    FULL_SPACE_MAX_LENGTH,
    DoubledState,
    KrausChannel,
    PauliString,
    Sector,
)
from .errors import ArgumentError, DomainError
from .lintri import KrylovState, TridiagonalOperator

REDUCED_MAX_LENGTH = 14  # dense 2^L paths stop here (16384 amplitudes)


class ModelKind(enum.Enum):
    NN = "nn"
    IR = "ir"


@dataclass(frozen=True)
class ModelSpec:
    """A decohered system: model kind and chain length."""

    kind: ModelKind
    length: int

    def __post_init__(self):
        if self.length < 2:
            raise ArgumentError("length must be at least 2")
        if self.kind is ModelKind.IR and self.length % 2:
            raise DomainError("IR model requires even L")


@dataclass(frozen=True)
class KrylovSpec:
    """Krylov-space data of a model: dimension and tridiagonal operator."""

    model: ModelSpec
    krylov_dim: int
    tridiag: TridiagonalOperator

    def __post_init__(self):
        if self.tridiag.dim != self.krylov_dim:
            raise ArgumentError("tridiag dimension must equal krylov_dim")


def _check_reduced_length(length):
    if length > REDUCED_MAX_LENGTH:
        raise ArgumentError(
            f"dense reduced-sector path is capped at L <= {REDUCED_MAX_LENGTH}"
        )


def _site_spins(length):
    """(2^L, L) array of tau^z = +/-1 values per basis state and site."""
    states = np.arange(2**length)
    bits = (states[:, None] >> np.arange(length)) & 1
    return 1.0 - 2.0 * bits


def reduced_diagonal(model):
    """Diagonal of the reduced Hamiltonian in the tau^z product basis."""
    _check_reduced_length(model.length)
    length = model.length
    spins = _site_spins(length)
    if model.kind is ModelKind.NN:
        return -np.sum(spins[:, :-1] * spins[:, 1:], axis=1)
    total = spins.sum(axis=1)
    pair_sum = 0.5 * (total**2 - length)  # Sum_{i<j} z_i z_j
    return -(pair_sum - length * (length - 1) / 2.0) / length


def build_reduced_hamiltonian(model):
    """Dense reduced Hamiltonian (diagonal matrix, 2^L x 2^L)."""
    return np.diag(reduced_diagonal(model))


def reduced_initial_state(model):
    """Uniform positive-parity state, amplitudes 2^{-L/2}."""
    length = model.length
    amps = np.full(2**length, 2.0 ** (-length / 2.0))
    return DoubledState(
        length=length, sector=Sector.PARITY_REDUCED, amplitudes=amps
    )


def kw_transform_nn(length):
    """Kramers-Wannier image of the reduced NN model.

    Returns the pair (H, v0) with H = -Sum_i tau^x on the L-1 link spins
    (dense 2^{L-1} matrix) and v0 the all-up link state.  The Krylov space
    generated from v0 matches the NN chain's: same Lanczos coefficients,
    dimension exactly L.
    """
    if length < 2:
        raise ArgumentError("length must be at least 2")
    _check_reduced_length(length)
    links = length - 1
    dim = 2**links
    ham = np.zeros((dim, dim))
    states = np.arange(dim)
    for link in range(links):
        ham[states ^ (1 << link), states] -= 1.0
    initial = np.zeros(dim)
    initial[0] = 1.0
    return ham, initial


def analytic_lanczos(model):
    """Closed-form Lanczos coefficients of a model.

    NN: a_n = 0, b_n = sqrt(n(L-n)), Krylov dimension L.
    IR: a_n = -2n + 4n^2/L - 1/2 + L/2 for n = 0..L/2 and
        b_n = sqrt(2n(L-2n+1)(2n-1)(L-2n+2)) / (2L), dimension L/2+1.
    """
    length = model.length
    if model.kind is ModelKind.NN:
        steps = np.arange(1.0, length)
        tridiag = TridiagonalOperator(
            diag=np.zeros(length), offdiag=np.sqrt(steps * (length - steps))
        )
        return KrylovSpec(model=model, krylov_dim=length, tridiag=tridiag)
    n = np.arange(0.0, length // 2 + 1)
    diag = -2.0 * n + 4.0 * n**2 / length - 0.5 + length / 2.0
    m = np.arange(1.0, length // 2 + 1)
    offdiag = np.sqrt(
        2.0 * m * (length - 2.0 * m + 1.0) * (2.0 * m - 1.0) * (length - 2.0 * m + 2.0)
    ) / (2.0 * length)
    tridiag = TridiagonalOperator(diag=diag, offdiag=offdiag)
    return KrylovSpec(model=model, krylov_dim=length // 2 + 1, tridiag=tridiag)


def nn_lambda(tau):
    """The NN spreading weight lambda = sinh^2(tau) / (1 + 2 sinh^2(tau)).

    Evaluated as (1 - sech(2 tau))/2 through decaying exponentials, which
    stays accurate for arbitrarily large tau (limit 1/2).
    """
    if tau < 0:
        raise ArgumentError("tau must be nonnegative")
    e2 = math.exp(-2.0 * tau)
    return 0.5 * (1.0 - 2.0 * e2 / (1.0 + e2 * e2))


def psi_nn_analytic(length, tau):
    """Closed-form NN wavepacket.

    psi_n = (-1)^n sqrt(C(L-1, n) lambda^n (1-lambda)^{L-1-n}); the signed
    square root of a binomial profile.  Log-gamma binomials keep this
    valid to L = 1e4.
    """
    if length < 2:
        raise ArgumentError("length must be at least 2")
    lam = nn_lambda(tau)
    if lam == 0.0:
        psi = np.zeros(length)
        psi[0] = 1.0
        return KrylovState(tau=float(tau), psi=psi)
    n = np.arange(length)
    log_binom = (
        gammaln(length) - gammaln(n + 1.0) - gammaln(length - n.astype(float))
    )
    log_psi2 = log_binom + n * math.log(lam) + (length - 1 - n) * math.log1p(-lam)
    psi = (-1.0) ** n * np.exp(0.5 * log_psi2)
    psi /= np.linalg.norm(psi)
    return KrylovState(tau=float(tau), psi=psi)


def k_nn_analytic(length, tau):
    """Closed-form NN Krylov complexity K = (L-1) lambda; limit (L-1)/2."""
    if length < 2:
        raise ArgumentError("length must be at least 2")
    return (length - 1) * nn_lambda(tau)


def area_law_psi(n, tau):
    """Large-L area-law wavepacket amplitude at Krylov index n.

    psi_n = [sqrt((2n)!) / (2^n n!)] sqrt(1/(1-tau)) (-tau/(1-tau))^n
            (1-2 tau)^{1/4},

    normalizable only for 0 <= tau < 1/2 (the (1-2 tau)^{1/4} factor is
    real there); tau >= 1/2 is a domain error.
    """
    if n < 0:
        raise ArgumentError("n must be nonnegative")
    if not 0 <= tau < 0.5:
        raise DomainError(f"area-law profile requires 0 <= tau < 1/2, got {tau!r}")
    if tau == 0.0:
        return 1.0 if n == 0 else 0.0
    log_mag = (
        0.5 * gammaln(2 * n + 1.0)
        - n * math.log(2.0)
        - gammaln(n + 1.0)
        - 0.5 * math.log1p(-tau)
        + n * (math.log(tau) - math.log1p(-tau))
        + 0.25 * math.log1p(-2.0 * tau)
    )
    return (-1.0) ** n * math.exp(log_mag)


def area_law_k(tau):
    """Area-law Krylov complexity K = tau^2 / (2(1-2 tau)), 0 <= tau < 1/2."""
    if not 0 <= tau < 0.5:
        raise DomainError(f"area-law K requires 0 <= tau < 1/2, got {tau!r}")
    return tau * tau / (2.0 * (1.0 - 2.0 * tau))


def volume_law_k(length):
    """Volume-law Krylov complexity K = L/4 (even L)."""
    if length % 2 or length < 2:
        raise DomainError("volume law is defined for even L >= 2")
    return length / 4.0


def _z_string(length, support):
    letters = "".join(
        "Z" if support & (1 << site) else "I" for site in range(length)
    )
    return PauliString(letters=letters)


def build_nn_channel(length, p):
    """The composed NN bond channel as an explicit Kraus sum.

    Expands Prod_i [(1-p) id + p ZZ_i] into 2^{L-1} Pauli-string terms
    (bond supports XOR freely, so every subset of bonds gives a distinct
    Z-string).  Intended for the full doubled-space validation path.
    """
    if length < 2:
        raise ArgumentError("length must be at least 2")
    if length > FULL_SPACE_MAX_LENGTH:
        raise ArgumentError(
            f"explicit channel expansion is capped at L <= {FULL_SPACE_MAX_LENGTH}"
        )
    if not 0 <= p < 0.5:
        raise DomainError(f"p must lie in [0, 1/2), got {p!r}")
    bonds = length - 1
    terms = []
    for subset in range(2**bonds):
        weight = p ** subset.bit_count() * (1.0 - p) ** (bonds - subset.bit_count())
        if weight == 0.0:
            continue
        support = subset ^ (subset << 1)
        terms.append((weight, _z_string(length, support)))
    return KrausChannel(terms=tuple(terms))


def build_ir_channel(length, tau):
    """The composed infinite-range pair channel as an explicit Kraus sum.

    Each pair (i, j) applies (w+ id + w- Z_i Z_j) with
    w(+/-) = (1 +/- e^{-2 tau/L})/2; the product over all pairs is
    convolved in the space of Z-supports (at most 2^L distinct strings).
    """
    model = ModelSpec(kind=ModelKind.IR, length=length)
    if length > FULL_SPACE_MAX_LENGTH:
        raise ArgumentError(
            f"explicit channel expansion is capped at L <= {FULL_SPACE_MAX_LENGTH}"
        )
    if tau < 0:
        raise ArgumentError("tau must be nonnegative")
    length = model.length
    w_plus = 0.5 * (1.0 + math.exp(-2.0 * tau / length))
    w_minus = 0.5 * (1.0 - math.exp(-2.0 * tau / length))
    weights = np.zeros(2**length)
    weights[0] = 1.0
    supports = np.arange(2**length)
    for i in range(length):
        for j in range(i + 1, length):
            mask = (1 << i) | (1 << j)
            weights = w_plus * weights + w_minus * weights[supports ^ mask]
    terms = tuple(
        (float(weights[s]), _z_string(length, s))
        for s in range(2**length)
        if weights[s] > 0.0
    )
    return KrausChannel(terms=terms)
