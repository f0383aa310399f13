"""
Schwinger representation of two optical modes carrying N photons.

The second order products of the two field amplitudes form a spin of length
l = N/2.  All matrices are written in the eigenbasis of the path intensity
difference J3, ordered by descending eigenvalue, so that row/column k belongs
to m3 = N/2 - k.  Units are hbar = 1 throughout.
"""
import logging
import operator
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import linalg

from .exceptions import DiagonalizationError, InvalidConfigurationError

logger = logging.getLogger(__name__)

HERMITICITY_TOLERANCE = 1e-12
EIGEN_TOLERANCE = 1e-10


def photon_number(N):
    """Validate and return the total photon number as a plain int."""
    if isinstance(N, bool):
        raise InvalidConfigurationError(f'N must be an integer photon number, got {N!r}')
    try:
        n = operator.index(N)
    except TypeError:
        raise InvalidConfigurationError(f'N must be an integer photon number, got {N!r}') from None
    if n < 1:
        raise InvalidConfigurationError(
            f'N must be at least 1, got {n} (N = 0 is a one-dimensional algebra)'
        )
    return n


def _twice(value, name):
    twice = 2.0 * float(value)
    if not np.isfinite(twice) or abs(twice - round(twice)) > 1e-9:
        raise InvalidConfigurationError(f'{name} must be a multiple of 1/2, got {value!r}')
    return int(round(twice))


@dataclass(frozen=True)
class TwoModeConfig:
    """
    The knobs of one experiment: N photons, input half-difference m_psi and
    output half-difference m (both in units of hbar).

    The input ports carry N/2 + m_psi and N/2 - m_psi photons, the output ports
    N/2 + m and N/2 - m, so 2*m_psi and 2*m must share the parity of N.
    """
    N: int
    m_psi: float
    m: float

    def __post_init__(self):
        n = photon_number(self.N)
        object.__setattr__(self, 'N', n)
        for name in ('m_psi', 'm'):
            twice = _twice(getattr(self, name), name)
            if abs(twice) > n:
                raise InvalidConfigurationError(
                    f'|{name}| <= N/2 violated: {name} = {twice / 2:g}, N/2 = {n / 2:g}'
                )
            if (twice - n) % 2:
                raise InvalidConfigurationError(
                    f'2*{name} = {twice} must have the parity of N = {n} '
                    f'(port photon numbers N/2 +- {name} must be integers)'
                )
            object.__setattr__(self, name, twice / 2)

    @classmethod
    def from_differences(cls, N, input_diff, output_diff):
        """Build a config from the integer photon-number differences 2*m_psi and 2*m."""
        for name, value in (('input_diff', input_diff), ('output_diff', output_diff)):
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidConfigurationError(f'{name} must be an integer, got {value!r}')
        return cls(N, input_diff / 2, output_diff / 2)

    @property
    def spin(self):
        """The spin N/2."""
        return self.N / 2

    @property
    def input_diff(self):
        """Photon-number difference 2*m_psi between the input ports."""
        return int(round(2 * self.m_psi))

    @property
    def output_diff(self):
        """Photon-number difference 2*m between the output ports."""
        return int(round(2 * self.m))

    @property
    def port_photons(self):
        """((input port a, input port b), (output port a, output port b)) photon counts."""
        half = self.N / 2
        return (
            (int(round(half + self.m_psi)), int(round(half - self.m_psi))),
            (int(round(half + self.m)), int(round(half - self.m))),
        )

    def exchanged(self):
        """The same experiment with input and output photon numbers swapped."""
        return TwoModeConfig(self.N, self.m, self.m_psi)

    def __str__(self):
        return f'N={self.N}, m_psi={self.m_psi:g}, m={self.m:g}'


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """Dense Hermitian J1, J2, J3 for a fixed photon number, in the J3 basis."""
    N: int
    j1: np.ndarray
    j2: np.ndarray
    j3: np.ndarray
    j3_eigenvalues: np.ndarray

    @property
    def dim(self):
        """Dimension N + 1 of the spin N/2 representation."""
        return self.N + 1

    @property
    def casimir(self):
        """Eigenvalue N(N+2)/4 of J1^2 + J2^2 + J3^2."""
        return self.N * (self.N + 2) / 4

    def j_phi(self, phi):
        """Output intensity difference cos(phi) J1 - sin(phi) J2 after a phase shift phi."""
        return np.cos(phi) * self.j1 - np.sin(phi) * self.j2


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """
    Orthonormal eigenvectors (columns) of one J component, ordered by
    descending eigenvalue N/2, N/2 - 1, ..., -N/2.
    """
    basis_label: str
    vectors: np.ndarray
    eigenvalues: np.ndarray

    @property
    def dim(self):
        """Number of basis vectors."""
        return self.vectors.shape[0]

    def index(self, m):
        """
        Column of the eigenvector with eigenvalue ``m``.

        Eigenvalues run N/2, N/2 - 1, ..., -N/2, so the column is N/2 - m.
        Raises ``InvalidConfigurationError`` when ``m`` is not in the spectrum.
        """
        k = int(round(self.eigenvalues[0] - m))
        if not 0 <= k < self.dim or abs(self.eigenvalues[k] - m) > 1e-9:
            raise InvalidConfigurationError(
                f'{m:g} is not an eigenvalue of {self.basis_label} for N = {self.dim - 1}'
            )
        return k

    def vector(self, m):
        """The eigenvector |m> as a column of J3-basis components."""
        return self.vectors[:, self.index(m)]


def _frozen(array):
    array.setflags(write=False)
    return array


def ladder_operators(N):
    """Raising and lowering operators J+ and J- for spin N/2 in the J3 basis."""
    n = photon_number(N)
    spin = n / 2
    m3 = spin - np.arange(n + 1)
    # J+ |m3> = sqrt(l(l+1) - m3(m3+1)) |m3+1>, and |m3+1> sits one row up
    raising = np.diag(np.sqrt(spin * (spin + 1) - m3[1:] * (m3[1:] + 1)), k=1).astype(complex)
    return raising, raising.conj().T


def build_operator_set(N):
    """Construct J1, J2, J3 for N photons (spin l = N/2)."""
    return _operator_set(photon_number(N))


@lru_cache(maxsize=128)
def _operator_set(n):
    raising, lowering = ladder_operators(n)
    j1 = 0.5 * (raising + lowering)
    j2 = -0.5j * (raising - lowering)
    m3 = n / 2 - np.arange(n + 1)
    j3 = np.diag(m3).astype(complex)
    for name, matrix in (('J1', j1), ('J2', j2), ('J3', j3)):
        if np.max(np.abs(matrix - matrix.conj().T)) > HERMITICITY_TOLERANCE:
            raise DiagonalizationError(f'{name} is not Hermitian for N = {n}')
    logger.debug('built operator set for N=%d (dimension %d)', n, n + 1)
    return OperatorSet(
        N=n,
        j1=_frozen(j1),
        j2=_frozen(j2),
        j3=_frozen(j3),
        j3_eigenvalues=_frozen(m3),
    )


def _fix_phase(vector):
    """Rotate a vector so that its first non-negligible component is real positive."""
    magnitudes = np.abs(vector)
    first = np.flatnonzero(magnitudes > 1e-10 * magnitudes.max())[0]
    return vector * (np.conj(vector[first]) / magnitudes[first])


def j1_eigenbasis(ops):
    """
    Eigenstates of the input (and, at phi = 0, output) intensity difference J1.

    With the phase fixed by ``_fix_phase`` every vector is real and mirror
    symmetric, v[dim-1-k] = (-1)**(N/2 - m) v[k], which is the path symmetry
    <m3|m> = <-m3|m> of photon-number states.
    """
    return _j1_eigenbasis(ops.N)


@lru_cache(maxsize=128)
def _j1_eigenbasis(n):
    ops = _operator_set(n)
    try:
        values, vectors = linalg.eigh(ops.j1)
    except linalg.LinAlgError as exc:
        raise DiagonalizationError(f'diagonalization of J1 failed for N = {n}: {exc}') from exc

    values = values[::-1]
    vectors = vectors[:, ::-1]
    expected = ops.j3_eigenvalues
    if np.max(np.abs(values - expected)) > EIGEN_TOLERANCE:
        raise DiagonalizationError(f'J1 spectrum for N = {n} deviates from N/2, ..., -N/2')

    fixed = np.column_stack([_fix_phase(vectors[:, k]) for k in range(n + 1)])
    residual = np.linalg.norm(ops.j1 @ fixed - fixed * expected, axis=0).max()
    if residual > EIGEN_TOLERANCE:
        raise DiagonalizationError(f'J1 eigenvector residual {residual:.3g} for N = {n}')

    return MeasurementBasis(
        basis_label='J1',
        vectors=_frozen(fixed),
        eigenvalues=_frozen(expected.copy()),
    )


def j3_eigenbasis(ops):
    """The path basis |m3>; trivially the identity in the J3 representation."""
    return MeasurementBasis(
        basis_label='J3',
        vectors=_frozen(np.eye(ops.dim, dtype=complex)),
        eigenvalues=ops.j3_eigenvalues,
    )
