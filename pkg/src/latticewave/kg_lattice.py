"""The lattice Klein-Gordon operator and its implicit time evolution.

The wave operator combines second differences and second averages along
each axis (writing f+ , f, f- for the three-point stencil values):

    D2 f = f+ - 2 f + f-          second difference
    A2 f = (f+ + 2 f + f-) / 4    second average

and reads, with mu^2 = (m0 c / hbar)^2,

    L[psi] = -(1/(c tau)^2) D2_n A2_j psi + (1/eps^2) D2_j A2_n psi
             - mu^2 A2_j A2_n psi.

Exponential modes solve L[psi] = 0 exactly when the symmetric tan
relation (4/(c tau)^2) tan^2(pi/N) - (4/eps^2) tan^2(pi/M) = mu^2 holds;
cayley modes when the linear relation (1/c^2)(1/(N tau))^2 -
(1/(M eps))^2 = m0^2 c^2/h^2 holds. ``calibrate_time_coefficient``
recovers the factor 4 on the time term directly from the stencil.

Space is periodic (j wraps mod Nx); time is open. The residual evaluator
returns interior time slices only: output row i is input time i+1.

Stepping is necessarily implicit: every term of the operator touches the
n+1 slice, and the spatial averaging couples its neighbors, so each step
solves a cyclic tridiagonal system. With constant coefficients the
system matrix is circulant; its inverse is applied as a circulant
convolution with a precomputed kernel, which keeps the update exactly
translation-equivariant and bit-for-bit deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularSystemError
from .grid import FieldSlab, GridSpec, Infinite, INFINITE
from .waves import WaveForm, WaveSpec, eval_wave, sample_wave


@dataclass(frozen=True)
class KGParams:
    """Mass and grid constants entering the lattice wave operator."""

    m0: float
    grid: GridSpec

    def __post_init__(self):
        if not (self.m0 >= 0 and math.isfinite(self.m0)):
            raise DomainError(f"m0 must be finite and >= 0, got {self.m0!r}")

    @property
    def mass_term(self) -> float:
        """mu^2 = (m0 c / hbar)^2."""
        return (self.m0 * self.grid.c / self.grid.hbar) ** 2


def _second_diff_space(a: np.ndarray) -> np.ndarray:
    return np.roll(a, -1, axis=1) - 2.0 * a + np.roll(a, 1, axis=1)


def _second_avg_space(a: np.ndarray) -> np.ndarray:
    return (np.roll(a, -1, axis=1) + 2.0 * a + np.roll(a, 1, axis=1)) / 4.0


def _second_diff_time(a: np.ndarray) -> np.ndarray:
    return a[2:] - 2.0 * a[1:-1] + a[:-2]


def _second_avg_time(a: np.ndarray) -> np.ndarray:
    return (a[2:] + 2.0 * a[1:-1] + a[:-2]) / 4.0


def apply_kg_operator(f: FieldSlab, p: KGParams) -> FieldSlab:
    """Residual field L[psi] on interior time slices, periodic in space.

    Output shape is (Nt - 2, Nx); output row i corresponds to input time
    index i + 1.
    """
    psi = f.psi
    if psi.shape[0] < 3 or psi.shape[1] < 3:
        raise DomainError(f"operator needs extents >= 3 in both axes, got {psi.shape}")
    grid = p.grid
    inv_ct2 = 1.0 / (grid.c * grid.tau) ** 2
    inv_eps2 = 1.0 / grid.eps**2
    mu2 = p.mass_term
    residual = (
        -inv_ct2 * _second_diff_time(_second_avg_space(psi))
        + inv_eps2 * _second_avg_time(_second_diff_space(psi))
        - mu2 * _second_avg_time(_second_avg_space(psi))
    )
    return FieldSlab(psi=residual, grid=grid)


def plane_wave_residual(spec: WaveSpec, p: KGParams, extent: tuple[int, int] = (16, 16)) -> float:
    """Max |L[psi]| over interior sites for a sampled plane-wave mode.

    Interior means time rows 1..Nt-2 and space columns 1..Nx-2: the wrap
    columns are excluded so the check is honest for modes that are not
    grid-periodic (every cayley mode, and exponential modes whose M does
    not divide Nx).
    """
    nt, nx = extent
    if nt < 8 or nx < 8:
        raise DomainError(f"plane-wave certification needs extent >= 8x8, got {extent}")
    slab = sample_wave(spec, nt, nx, grid=p.grid)
    residual = apply_kg_operator(slab, p)
    return float(np.max(np.abs(residual.psi[:, 1:-1])))


def calibrate_time_coefficient(N: int, extent: tuple[int, int] = (8, 8)) -> float | Infinite:
    """Stencil ratio -(D2_n psi)/(A2_n psi) for a pure time mode of period N.

    Analytically equal to 4 tan^2(pi/N); this is the oracle fixing the
    coefficient of the tan^2 time term in the exponential dispersion
    relation. At N = 2 the second average annihilates the alternating
    mode and the ratio is reported as symbolic INFINITE.
    """
    if not (isinstance(N, int) and N >= 2):
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    nt = max(extent[0], 4)
    spec = WaveSpec(form=WaveForm.EXPONENTIAL, N=N, M=INFINITE)
    values = np.array([eval_wave(spec, n, 0) for n in range(nt)])
    n0 = nt // 2
    num = -(values[n0 + 1] - 2.0 * values[n0] + values[n0 - 1])
    den = (values[n0 + 1] + 2.0 * values[n0] + values[n0 - 1]) / 4.0
    if den == 0.0:
        return INFINITE
    return float((num / den).real)


# --- cyclic tridiagonal solve -------------------------------------------------


def _thomas(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Plain tridiagonal solve; sub[0] and sup[-1] are ignored."""
    n = len(diag)
    c_prime = np.zeros(n - 1, dtype=np.complex128)
    d_prime = np.zeros(n, dtype=np.complex128)
    scale = float(np.max(np.abs(diag))) + float(np.max(np.abs(sub))) + float(np.max(np.abs(sup)))
    pivot = diag[0]
    if abs(pivot) <= 1e-300 * max(scale, 1.0):
        raise SingularSystemError("zero pivot in tridiagonal elimination")
    c_prime[0] = sup[0] / pivot
    d_prime[0] = rhs[0] / pivot
    for i in range(1, n):
        pivot = diag[i] - sub[i] * c_prime[i - 1]
        if abs(pivot) <= 1e-300 * max(scale, 1.0):
            raise SingularSystemError("zero pivot in tridiagonal elimination")
        if i < n - 1:
            c_prime[i] = sup[i] / pivot
        d_prime[i] = (rhs[i] - sub[i] * d_prime[i - 1]) / pivot
    x = np.zeros(n, dtype=np.complex128)
    x[-1] = d_prime[-1]
    for i in range(n - 2, -1, -1):
        x[i] = d_prime[i] - c_prime[i] * x[i + 1]
    return x


def solve_cyclic_tridiagonal(
    sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, rhs: np.ndarray
) -> np.ndarray:
    """Solve the periodic tridiagonal system A x = rhs.

    Row i couples x[i-1], x[i], x[i+1] with coefficients sub[i], diag[i],
    sup[i]; indices wrap, so A[0, n-1] = sub[0] and A[n-1, 0] = sup[n-1].
    Thomas elimination plus the rank-one (Sherman-Morrison) corner
    correction; deterministic sequential arithmetic.
    """
    sub = np.asarray(sub, dtype=np.complex128)
    diag = np.asarray(diag, dtype=np.complex128)
    sup = np.asarray(sup, dtype=np.complex128)
    rhs = np.asarray(rhs, dtype=np.complex128)
    n = len(diag)
    if n < 3:
        raise DomainError("cyclic tridiagonal systems need n >= 3")
    if not (len(sub) == len(sup) == len(rhs) == n):
        raise DomainError("sub, diag, sup, rhs must share one length")
    alpha = sup[n - 1]  # corner A[n-1, 0]
    beta = sub[0]       # corner A[0, n-1]
    gamma = -diag[0] if diag[0] != 0 else np.complex128(1.0)
    mod_diag = diag.copy()
    mod_diag[0] = diag[0] - gamma
    mod_diag[-1] = diag[-1] - alpha * beta / gamma
    u = np.zeros(n, dtype=np.complex128)
    u[0] = gamma
    u[-1] = alpha
    y = _thomas(sub, mod_diag, sup, rhs)
    q = _thomas(sub, mod_diag, sup, u)
    denom = 1.0 + q[0] + (beta / gamma) * q[-1]
    if abs(denom) <= 1e-300:
        raise SingularSystemError("singular cyclic tridiagonal system (corner correction collapsed)")
    factor = (y[0] + (beta / gamma) * y[-1]) / denom
    x = y - factor * q
    # a singular system still yields a backward-stable-looking garbage x, so
    # check the residual against the right-hand side, not against ||x||
    residual = diag * x + sup * np.roll(x, -1) + sub * np.roll(x, 1) - rhs
    bound = 1e-6 * float(np.max(np.abs(rhs))) + 1e-300
    if not np.all(np.isfinite(x)) or float(np.max(np.abs(residual))) > bound:
        raise SingularSystemError("cyclic tridiagonal system is singular or too ill-conditioned to solve")
    return x


# --- implicit evolution --------------------------------------------------------


def _stencil_constants(p: KGParams) -> tuple[float, float, float, float]:
    """(off_A, diag_A, off_B, diag_B) for the n+1 and n slice operators.

    Collecting the psi[n+1] terms of L[psi] = 0 gives A = alpha A2_j +
    beta D2_j with alpha = -1/(c tau)^2 - mu^2/4, beta = 1/(4 eps^2); the
    psi[n] operator is B = 2 (g A2_j + beta D2_j) with g = 1/(c tau)^2 -
    mu^2/4, and the psi[n-1] operator equals A.
    """
    grid = p.grid
    mu2 = p.mass_term
    inv_ct2 = 1.0 / (grid.c * grid.tau) ** 2
    beta = 1.0 / (4.0 * grid.eps**2)
    alpha = -inv_ct2 - mu2 / 4.0
    g = inv_ct2 - mu2 / 4.0
    off_a = alpha / 4.0 + beta
    diag_a = alpha / 2.0 - 2.0 * beta
    off_b = g / 2.0 + 2.0 * beta
    diag_b = g - 4.0 * beta
    return off_a, diag_a, off_b, diag_b


def _apply_symmetric_circulant(off: float, diag: float, f: np.ndarray) -> np.ndarray:
    return off * (np.roll(f, -1) + np.roll(f, 1)) + diag * f


def _circulant_eigenvalues(off: float, diag: float, n: int) -> np.ndarray:
    q = np.arange(n)
    return diag + 2.0 * off * np.cos(2.0 * np.pi * q / n)


def _inverse_kernel(off: float, diag: float, n: int, p: KGParams) -> np.ndarray:
    eigs = _circulant_eigenvalues(off, diag, n)
    scale = abs(off) * 2.0 + abs(diag)
    if float(np.min(np.abs(eigs))) <= 1e-14 * max(scale, 1.0):
        grid = p.grid
        raise SingularSystemError(
            "implicit step matrix is singular for m0="
            f"{p.m0!r}, tau={grid.tau!r}, eps={grid.eps!r}, c={grid.c!r}, hbar={grid.hbar!r}, Nx={n}"
        )
    unit = np.zeros(n, dtype=np.complex128)
    unit[0] = 1.0
    sub = np.full(n, off, dtype=np.complex128)
    sup = np.full(n, off, dtype=np.complex128)
    diag_vec = np.full(n, diag, dtype=np.complex128)
    return solve_cyclic_tridiagonal(sub, diag_vec, sup, unit)


def _convolve_circulant(kernel: np.ndarray, f: np.ndarray) -> np.ndarray:
    # x[j] = sum_m kernel[m] f[(j - m) mod n]; fixed summation order makes
    # the result exactly equivariant under cyclic shifts of f.
    out = np.zeros_like(f)
    for m in range(len(kernel)):
        out += kernel[m] * np.roll(f, m)
    return out


def evolve(initial: np.ndarray, steps: int, p: KGParams) -> FieldSlab:
    """March the lattice wave equation from two consecutive time slices.

    ``initial`` has shape (2, Nx); the returned slab has shape
    (steps + 2, Nx) and starts with the two given slices. Space is
    periodic; each step solves the constant-coefficient cyclic
    tridiagonal system once factored into a circulant inverse kernel.
    """
    initial = np.asarray(initial, dtype=np.complex128)
    if initial.ndim != 2 or initial.shape[0] != 2:
        raise DomainError(f"initial data must have shape (2, Nx), got {initial.shape}")
    nx = initial.shape[1]
    if nx < 3:
        raise DomainError("evolution needs Nx >= 3")
    if not (isinstance(steps, int) and steps >= 0):
        raise DomainError("steps must be a non-negative integer")
    off_a, diag_a, off_b, diag_b = _stencil_constants(p)
    kernel = _inverse_kernel(off_a, diag_a, nx, p)
    slab = np.empty((steps + 2, nx), dtype=np.complex128)
    slab[0] = initial[0]
    slab[1] = initial[1]
    for n in range(1, steps + 1):
        rhs = -(
            _apply_symmetric_circulant(off_b, diag_b, slab[n])
            + _apply_symmetric_circulant(off_a, diag_a, slab[n - 1])
        )
        slab[n + 1] = _convolve_circulant(kernel, rhs)
    return FieldSlab(psi=slab, grid=p.grid)
