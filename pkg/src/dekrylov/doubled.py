"""Choi vectorization and Kraus channels in the doubled Hilbert space.

A density matrix rho on L qubits is reshaped column-wise into a vector
|rho> living on two copies of the chain:

    rho = [rho_11 rho_12; rho_21 rho_22]  ->  (rho_11, rho_21, rho_12, rho_22)

so the doubled basis index is the lower-layer (column) bitstring
concatenated with the upper-layer (row) bitstring, little-endian in the
site label:

    index = upper + 2^L * lower.

Under this map a channel E[rho] = Sum_m B_m rho B_m^dag acts as
Sum_m (B_m^* (x) B_m) |rho>.  For Pauli-string Kraus operators the
conjugation is a pure sign rule (Y -> -Y), so the whole layer stays in
real arithmetic: X and Y flip the addressed bit in both layers, while Z
and Y each contribute a sign (-1)^(upper bit + lower bit) at their site.
The dense complex oracle in the test-suite validates this shortcut.

Full-space operations are capped at L <= 7 (4^7 = 16384 amplitudes); they
exist to validate the parity-reduced code paths, not for production scans.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ArgumentError, DomainError

PAULI_LETTERS = "IXYZ"

FULL_SPACE_MAX_LENGTH = 7

# Parity of the popcount of every 14-bit word; covers indices up to 4^7.
_PARITY = np.zeros(1 << 14, dtype=np.int8)
for _bit in range(14):
    _PARITY[1 << _bit : 2 << _bit] = _PARITY[: 1 << _bit] ^ 1


class Sector(enum.Enum):
    """Basis sector a DoubledState lives in."""

    FULL = "full"  # all 4^L doubled basis states
    PARITY_REDUCED = "parity-reduced"  # positive-parity block, 2^L states


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-site Paulis, e.g. ``"IZZI"``."""

    letters: str

    def __post_init__(self):
        if not self.letters:
            raise ArgumentError("PauliString must have at least one site")
        bad = set(self.letters) - set(PAULI_LETTERS)
        if bad:
            raise ArgumentError(f"invalid Pauli letters: {sorted(bad)}")

    @property
    def length(self):
        return len(self.letters)


@dataclass(frozen=True)
class KrausChannel:
    """A Pauli channel: terms (w_m, P_m) with Kraus operators sqrt(w_m) P_m."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(w), op) for w, op in self.terms)
        if not terms:
            raise ArgumentError("channel needs at least one Kraus term")
        length = terms[0][1].length
        for w, op in terms:
            if op.length != length:
                raise ArgumentError("all Kraus strings must share one length")
            if not w > 0:
                raise ArgumentError("Kraus weights must be strictly positive")
        total = math.fsum(w for w, _ in terms)
        if abs(total - 1.0) > 1e-12:
            raise ArgumentError(f"Kraus weights sum to {total!r}, expected 1")
        object.__setattr__(self, "terms", terms)

    @property
    def length(self):
        return self.terms[0][1].length


@dataclass
class DoubledState:
    """Amplitude vector over the doubled basis (full or parity-reduced)."""

    length: int
    sector: Sector
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=float)
        expected = 4**self.length if self.sector is Sector.FULL else 2**self.length
        if amps.shape != (expected,):
            raise ArgumentError(
                f"{self.sector.value} sector at L={self.length} needs "
                f"{expected} amplitudes, got {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ArgumentError("amplitudes must be finite")
        if not np.linalg.norm(amps) > 0:
            raise ArgumentError("state must have positive norm")
        self.amplitudes = amps


@dataclass(frozen=True)
class SymmetryReport:
    """Strong/weak symmetry classification of a channel under a generator."""

    strong: bool
    weak: bool
    generator: PauliString
    phases: tuple

    def __post_init__(self):
        if self.strong and not self.weak:
            raise ArgumentError("strong symmetry implies weak symmetry")


def _check_full_length(length):
    if length > FULL_SPACE_MAX_LENGTH:
        raise ArgumentError(
            f"full doubled-space path is capped at L <= {FULL_SPACE_MAX_LENGTH}"
        )


def vectorize(rho):
    """Column-reshape a Hermitian density matrix into a DoubledState.

    The input must be real-symmetric up to 1e-12: every state handled by
    this package is real in the computational basis, which is what keeps
    the doubled layer in real arithmetic.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ArgumentError("rho must be a square matrix")
    dim = rho.shape[0]
    length = dim.bit_length() - 1
    if 2**length != dim:
        raise ArgumentError(f"matrix size {dim} is not a power of two")
    _check_full_length(length)
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise ArgumentError("rho must be Hermitian within 1e-12")
    if np.max(np.abs(np.imag(rho))) > 1e-12:
        raise ArgumentError("rho must be real within 1e-12 in this basis")
    amps = np.real(rho).reshape(-1, order="F").copy()
    return DoubledState(length=length, sector=Sector.FULL, amplitudes=amps)


def devectorize(state):
    """Inverse of vectorize: reshape a full-sector state back to a matrix."""
    if state.sector is not Sector.FULL:
        raise ArgumentError("devectorize needs a full-sector state")
    dim = 2**state.length
    return state.amplitudes.reshape((dim, dim), order="F").copy()


def _term_masks(op):
    """Flip mask and sign mask (single layer) for one Pauli string."""
    flip = 0
    sign = 0
    for site, letter in enumerate(op.letters):
        if letter in "XY":
            flip |= 1 << site
        if letter in "ZY":
            sign |= 1 << site
    return flip, sign


def apply_channel(channel, state):
    """Apply Sum_m (B_m^* (x) B_m) to a full-sector doubled state."""
    if state.sector is not Sector.FULL:
        raise ArgumentError("apply_channel needs a full-sector state")
    if channel.length != state.length:
        raise ArgumentError(
            f"channel length {channel.length} != state length {state.length}"
        )
    length = state.length
    _check_full_length(length)
    vec = state.amplitudes
    indices = np.arange(4**length)
    out = np.zeros_like(vec)
    for weight, op in channel.terms:
        flip, sign = _term_masks(op)
        both_flip = flip | (flip << length)
        both_sign = sign | (sign << length)
        signs = 1.0 - 2.0 * _PARITY[indices & both_sign]
        # out[idx ^ F] += w * sign(idx) * vec[idx], gathered form
        out += (weight * signs * vec)[indices ^ both_flip]
    return DoubledState(length=length, sector=Sector.FULL, amplitudes=out)


def channel_matrix(channel):
    """Dense 4^L x 4^L superoperator matrix of a Pauli channel."""
    length = channel.length
    _check_full_length(length)
    size = 4**length
    indices = np.arange(size)
    mat = np.zeros((size, size))
    for weight, op in channel.terms:
        flip, sign = _term_masks(op)
        both_flip = flip | (flip << length)
        both_sign = sign | (sign << length)
        signs = 1.0 - 2.0 * _PARITY[indices & both_sign]
        np.add.at(mat, (indices ^ both_flip, indices), weight * signs)
    return mat


def effective_hamiltonian_check(channel, hamiltonian, prefactor, tau):
    """Max-abs deviation between a channel and prefactor * exp(-tau H).

    H is a dense real matrix on the full doubled space.  Diagonal H is
    exponentiated elementwise; otherwise a dense matrix exponential is
    used.  Returns max |channel_matrix - prefactor * exp(-tau H)|.
    """
    length = channel.length
    if length > 6:
        raise ArgumentError("effective_hamiltonian_check is capped at L <= 6")
    hamiltonian = np.asarray(hamiltonian, dtype=float)
    size = 4**length
    if hamiltonian.shape != (size, size):
        raise ArgumentError(
            f"hamiltonian shape {hamiltonian.shape} != ({size}, {size})"
        )
    mat = channel_matrix(channel)
    diag = np.diagonal(hamiltonian)
    if np.count_nonzero(hamiltonian - np.diag(diag)) == 0:
        target = np.diag(np.exp(-tau * diag))
    else:
        target = scipy.linalg.expm(-tau * hamiltonian)
    return float(np.max(np.abs(mat - prefactor * target)))


def tau_from_p(p):
    """Imaginary time tau = -ln(1-2p)/2 of a dephasing strength p in [0, 1/2)."""
    if not 0 <= p < 0.5:
        raise DomainError(f"p must lie in [0, 1/2), got {p!r}")
    return -0.5 * math.log1p(-2.0 * p)


def _letters_commute(a, b):
    return a == "I" or b == "I" or a == b


def classify_symmetry(channel, generator):
    """Classify a Pauli channel as strongly/weakly symmetric.

    Purely symbolic Pauli algebra, no floating point.  Every Pauli string
    either commutes or anticommutes with the generator, so the channel is
    always weakly symmetric; it is strongly symmetric iff every Kraus
    string commutes (phase +1).  The per-term phase pattern is reported.
    """
    if generator.length != channel.length:
        raise ArgumentError(
            f"generator length {generator.length} != channel length "
            f"{channel.length}"
        )
    phases = []
    for _, op in channel.terms:
        anticommuting_sites = sum(
            not _letters_commute(a, g)
            for a, g in zip(op.letters, generator.letters)
        )
        phases.append(-1 if anticommuting_sites % 2 else 1)
    strong = all(phase == 1 for phase in phases)
    return SymmetryReport(
        strong=strong, weak=True, generator=generator, phases=tuple(phases)
    )


def trace_functional(state):
    """Trace of the density matrix a full-sector state represents.

    Sums the amplitudes at doubled indices with equal upper and lower
    labels; apply_channel preserves this value for any Kraus channel.
    """
    if state.sector is not Sector.FULL:
        raise ArgumentError("trace_functional needs a full-sector state")
    dim = 2**state.length
    return float(np.sum(state.amplitudes[np.arange(dim) * (dim + 1)]))


def parity_symmetrize(state):
    """Project a full-sector state onto the positive-parity sector.

    Averages over the group generated by the per-site layer-swap parities
    g_i = X_i^u X_i^l (flip bit i in both layers); idempotent.
    """
    if state.sector is not Sector.FULL:
        raise ArgumentError("parity_symmetrize needs a full-sector state")
    length = state.length
    vec = state.amplitudes.copy()
    indices = np.arange(4**length)
    for site in range(length):
        mask = (1 << site) | (1 << (site + length))
        vec = 0.5 * (vec + vec[indices ^ mask])
    return DoubledState(length=length, sector=Sector.FULL, amplitudes=vec)


def restrict_to_parity_sector(state):
    """Overlaps of a full-sector state with the parity-sector basis.

    The positive-parity basis state labeled by bits r embeds as
    2^{-L/2} Sum_u |upper=u, lower=u xor r>, so component r is
    2^{-L/2} Sum_u amplitudes[u + 2^L (u xor r)].
    """
    if state.sector is not Sector.FULL:
        raise ArgumentError("restrict_to_parity_sector needs a full-sector state")
    length = state.length
    dim = 2**length
    upper = np.arange(dim)
    reduced = np.empty(dim)
    for r in range(dim):
        reduced[r] = np.sum(state.amplitudes[upper + dim * (upper ^ r)])
    reduced *= 2.0 ** (-length / 2.0)
    return DoubledState(
        length=length, sector=Sector.PARITY_REDUCED, amplitudes=reduced
    )


def embed_parity_sector(state):
    """Embed a parity-reduced state back into the full doubled basis."""
    if state.sector is not Sector.PARITY_REDUCED:
        raise ArgumentError("embed_parity_sector needs a parity-reduced state")
    length = state.length
    _check_full_length(length)
    dim = 2**length
    upper = np.arange(dim)
    full = np.zeros(4**length)
    for r in range(dim):
        full[upper + dim * (upper ^ r)] = state.amplitudes[r]
    full *= 2.0 ** (-length / 2.0)
    return DoubledState(length=length, sector=Sector.FULL, amplitudes=full)
