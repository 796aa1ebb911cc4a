"""The toolkit's exit criteria, runnable as one report.

Each criterion bundles the numerical checks that certify one family of
identities, with tolerances pinned here. ``run_acceptance`` executes all
of them (deterministically for a given seed) and reports measured values
next to their bounds; the ``as_printed`` switches substitute the two
published-table variants that are expected to fail, demonstrating the
documented corrections.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .diffcalc import SampledSequence, forward_avg, forward_diff
from .dispersion import DispersionForm, dispersion_residual, mass_from_rest_period, quantization_check, solve_modes
from .grid import GridSpec, INFINITE
from .kg_lattice import KGParams, evolve, plane_wave_residual
from .kinematics import (
    LatticeStep,
    ParticleState,
    debroglie_map,
    discrete_energy_momentum,
    energy_momentum_squared_exact,
    four_difference_invariant,
    step_velocity,
    total_difference_mass_shell,
    transform_particle,
    transform_wave,
)
from .lorentz_int import (
    enumerate_ball,
    eval_word,
    factorize,
    generator,
    metric_gram_defect,
    preserves_metric,
    printed_s4,
)
from .waves import (
    BeatSpec,
    WaveForm,
    WaveSpec,
    beat_field,
    beat_velocities,
    eval_wave,
    measure_group_velocity,
)

AS_PRINTED_CHOICES = ("s4", "tan-dispersion")


@dataclass
class CriterionResult:
    cid: int
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.cid}: {self.title}"


class _Checker:
    def __init__(self):
        self.passed = True
        self.details: list[str] = []

    def check(self, label: str, measured: float, bound: float) -> None:
        ok = measured <= bound
        self.passed &= ok
        self.details.append(f"{label}: {measured:.3e} (bound {bound:.1e}) {'ok' if ok else 'FAILED'}")

    def require(self, label: str, ok: bool, note: str = "") -> None:
        self.passed &= ok
        suffix = f" [{note}]" if note else ""
        self.details.append(f"{label}: {'ok' if ok else 'FAILED'}{suffix}")

    def note(self, text: str) -> None:
        self.details.append(text)


GRID = GridSpec()


def _criterion_1_transform_equivalence(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    worst = 0.0
    for _ in range(1000):
        s = ParticleState.from_momentum([rng.uniform(-3, 3), 0, 0], rng.uniform(0.05, 5.0), 1.0)
        w, k = debroglie_map(s, 1.0)
        v = [rng.uniform(-0.9, 0.9), 0, 0]
        wp, kp = transform_wave(w, k, v, 1.0)
        sp = transform_particle(s, v, 1.0)
        scale = max(abs(sp.E), float(np.max(np.abs(sp.p))))
        worst = max(worst, abs(wp - sp.E) / scale, float(np.max(np.abs(kp - sp.p))) / scale)
    c.check("wave/particle boost agreement over 1000 states, relative", worst, 1e-12)
    return c


def _criterion_2_discrete_mass_shell(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    grid = GridSpec(tau=0.625, eps=0.25, c=2.0)
    worst = 0.0
    exact_ok = True
    count = 0
    while count < 1000:
        dn = int(rng.integers(1, 40))
        dj = tuple(int(x) for x in rng.integers(-12, 13, 3))
        if (grid.c * dn * grid.tau) ** 2 <= sum((d * grid.eps) ** 2 for d in dj):
            continue
        m0 = float(rng.uniform(0.05, 5.0))
        step = LatticeStep(dn=dn, dj=dj)
        state = discrete_energy_momentum(m0, step, grid)
        worst = max(worst, state.mass_shell_residual(grid.c))
        m = Fraction(m0)
        cf = Fraction(grid.c)
        E2, p2, u2 = energy_momentum_squared_exact(m, step, grid)
        exact_ok &= E2 - p2 * cf * cf == m * m * cf**4
        exact_ok &= step_velocity(step, grid) == tuple(
            Fraction(d) * Fraction(grid.eps) / (dn * Fraction(grid.tau)) for d in dj
        )
        if p2 > 0:
            exact_ok &= u2 == p2 * cf**4 / E2
        count += 1
    c.check("mass-shell relative residual over 1000 timelike steps", worst, 1e-12)
    c.require("u = dx/dt and the shell identity, exact in rational arithmetic", exact_ok)
    return c


def _criterion_3_product_identity(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 64))
        f = rng.normal(size=n) + 1j * rng.normal(size=n)
        g = rng.normal(size=n) + 1j * rng.normal(size=n)
        sf, sg, sfg = SampledSequence(f), SampledSequence(g), SampledSequence(f * g)
        lhs = forward_diff(sfg).values
        rhs = forward_diff(sf).values * forward_avg(sg).values + forward_avg(sf).values * forward_diff(sg).values
        scale = max(1.0, float((np.abs(f) * np.abs(g)).max()))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    c.check("discrete product rule, elementwise over 1000 sequences", worst, 1e-12)
    return c


def _criterion_4_total_difference(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    worst23 = worst24 = 0.0
    for _ in range(1000):
        m0 = rng.uniform(0.1, 3.0)
        a = ParticleState.from_momentum([rng.uniform(-3, 3), 0, 0], m0, 1.0)
        b = ParticleState.from_momentum([rng.uniform(-3, 3), 0, 0], m0, 1.0)
        r23, r24 = total_difference_mass_shell(a, b, 1.0)
        scale = max(a.E, b.E)
        worst23 = max(worst23, abs(r23) / scale**2)
        worst24 = max(worst24, abs(r24) / scale)
    c.check("total-difference shell residual over 1000 pairs", worst23, 1e-10)
    c.check("dE = u_avg dp with the average-velocity convention", worst24, 1e-10)
    worst_inv = 0.0
    for _ in range(200):
        grid = GRID
        dn = int(rng.integers(2, 20))
        dj = (int(rng.integers(-dn + 1, dn)), 0, 0)
        step = LatticeStep(dn=dn, dj=dj)
        m0 = float(rng.uniform(0.2, 4.0))
        s1 = discrete_energy_momentum(m0, step, grid)
        s2 = discrete_energy_momentum(m0, step, grid)  # next event of the same free motion
        worst_inv = max(worst_inv, abs(four_difference_invariant(s1, s2, grid.c)))
    c.check("difference four-vector invariant across consecutive free events", worst_inv, 1e-10)
    a = ParticleState.from_momentum([0.75, 0, 0], 1.0, 1.0)
    b = ParticleState.from_momentum([1.0, 0, 0], 1.0, 1.0)
    c.note(
        "distinct-momentum pair (p = 0.75, 1.0): invariant = "
        f"{four_difference_invariant(a, b, 1.0):.6f} (spacelike, nonzero by construction; documented)"
    )
    return c


def _criterion_5_beat_velocities(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    b = BeatSpec(T1=4.0, T2=6.0, lam1=3.0, lam2=5.0)
    v_phase, v_group = beat_velocities(b)
    vg_exact = (Fraction(1, 4) - Fraction(1, 6)) / (Fraction(1, 3) - Fraction(1, 5))
    vp_exact = (Fraction(1, 4) + Fraction(1, 6)) / (Fraction(1, 3) + Fraction(1, 5))
    c.check("printed group-velocity formula vs exact fraction 5/8", abs(v_group - float(vg_exact)), 1e-15)
    c.check("printed phase-velocity formula vs exact fraction 25/32", abs(v_phase - float(vp_exact)), 1e-15)
    worst = 0.0
    for _ in range(200):
        cc = rng.uniform(0.5, 3.0)
        m0 = rng.uniform(0.0, 2.0)
        k1, k2 = rng.uniform(0.2, 4.0, 2)
        if abs(k1 - k2) < 1e-3:
            continue
        w1 = math.sqrt(cc**2 * k1**2 + (m0 * cc**2) ** 2)
        w2 = math.sqrt(cc**2 * k2**2 + (m0 * cc**2) ** 2)
        bb = BeatSpec(T1=2 * math.pi / w1, T2=2 * math.pi / w2, lam1=2 * math.pi / k1, lam2=2 * math.pi / k2)
        vp, vg = beat_velocities(bb)
        worst = max(worst, abs(vp * vg - cc**2) / cc**2)
    c.check("v_phase * v_group = c^2 on mass-shell mode pairs, relative", worst, 1e-10)
    start = time.time()
    grid = GridSpec(Nt=256, Nx=1024)
    measured = measure_group_velocity(beat_field(b, grid), beat=b)
    elapsed = time.time() - start
    c.check("envelope-tracked group velocity vs dw/dk, relative (256x1024)", abs(measured - 0.625) / 0.625, 0.02)
    c.note(f"envelope measurement took {elapsed:.2f} s (budget 30 s)")
    return c


def _criterion_6_plane_wave_certification(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    printed = "tan-dispersion" in as_printed
    grid = GRID
    cayley_m0 = 2 * math.pi / math.sqrt(12)
    c.check(
        "cayley (N=3, M=6) wave-operator residual on 32x32",
        plane_wave_residual(WaveSpec(form=WaveForm.CAYLEY, N=3, M=6), KGParams(m0=cayley_m0, grid=grid), (32, 32)),
        1e-12,
    )
    if printed:
        # the published asymmetric time coefficient: mass from tan^2(pi/N) = mu^2
        m0_rest = math.tan(math.pi / 4)
        m0_48 = math.sqrt(math.tan(math.pi / 4) ** 2 - 4 * math.tan(math.pi / 8) ** 2)
        c.note("running with the as-printed asymmetric tan coefficient; failure expected")
    else:
        m0_rest = 2.0 * math.tan(math.pi / 4)
        m0_48 = math.sqrt(4 * math.tan(math.pi / 4) ** 2 - 4 * math.tan(math.pi / 8) ** 2)
    c.check(
        "exponential rest mode (N=4, M=inf) residual on 32x32",
        plane_wave_residual(
            WaveSpec(form=WaveForm.EXPONENTIAL, N=4, M=INFINITE), KGParams(m0=m0_rest, grid=grid), (32, 32)
        ),
        1e-12,
    )
    c.check(
        "exponential traveling mode (N=4, M=8) residual on 32x32",
        plane_wave_residual(WaveSpec(form=WaveForm.EXPONENTIAL, N=4, M=8), KGParams(m0=m0_48, grid=grid), (32, 32)),
        1e-12,
    )
    if not printed:
        off_shell = plane_wave_residual(
            WaveSpec(form=WaveForm.EXPONENTIAL, N=4, M=INFINITE), KGParams(m0=1.0, grid=grid), (32, 32)
        )
        c.require(
            "as-printed asymmetric coefficient leaves residual > 1e-3 (documented deviation)",
            off_shell > 1e-3,
            f"measured {off_shell:.3e}",
        )
    return c


def _criterion_7_mass_spectrum(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    grid = GRID
    ratios_exact = all(
        mass_from_rest_period(n, grid) / mass_from_rest_period(2 * n, grid) == 2.0 for n in range(1, 65)
    )
    c.require("m0(N) / m0(2N) == 2 exactly for N = 1..64", ratios_exact)
    c.check(
        "m0(1) equals 2 pi hbar / (c^2 tau) in natural units",
        abs(mass_from_rest_period(1, grid) - 2 * math.pi),
        1e-15,
    )
    result = quantization_check(LatticeStep(dn=1), 2 * math.pi, grid, tol=1e-12)
    c.require(
        "rest step with m0 = 2 pi recovers N = 1 exactly",
        result.N_real == 1.0 and result.N == 1 and result.M_real is INFINITE,
        f"N_real = {result.N_real!r}",
    )
    consistent = True
    for n in (3, 5, 11):
        m0 = mass_from_rest_period(n, grid)
        rest = [s for s in solve_modes(m0, DispersionForm.CAYLEY, 16, 16, 1e-12, grid) if s.M is INFINITE]
        consistent &= len(rest) == 1 and rest[0].N == n
    c.require("rest dispersion solutions reproduce the mass spectrum", consistent)
    return c


def _criterion_8_integral_lorentz(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    start = time.time()
    if "s4" in as_printed:
        c.note("running with the as-printed S4 table entry; failure expected")
        c.require(
            "printed S4 satisfies the metric invariant",
            preserves_metric(printed_s4()),
            f"columns 0,3 Gram defect = {metric_gram_defect(printed_s4(), 0, 3)}",
        )
        return c
    for name in ("S1", "S2", "S3", "S4"):
        c.require(f"{name} preserves the Minkowski form exactly", preserves_metric(generator(name)))
    c.require(
        "printed S4 fails with Gram defect 2 (documented deviation)",
        (not preserves_metric(printed_s4())) and metric_gram_defect(printed_s4(), 0, 3) == 2,
    )
    ball = enumerate_ball(6)
    entries = {m.entries for m in ball}
    c.require(f"ball(6) of {len(ball)} elements is metric-clean", all(preserves_metric(m) for m in ball))
    c.require("ball(6) closed under inverses", all(m.inverse().entries in entries for m in ball))
    c.require(
        "eval_word(factorize(L)) = L exactly for every ball(6) element",
        all(eval_word(factorize(m)).entries == m.entries for m in ball),
    )
    c.require("determinants all +/-1", all(m.determinant() in (-1, 1) for m in ball))
    c.note(f"group checks took {time.time() - start:.2f} s (budget 60 s)")
    return c


def _criterion_9_evolution_fidelity(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    grid = GRID

    def closed_form(spec, nt, nx):
        return np.array([[eval_wave(spec, n, j) for j in range(nx)] for n in range(nt)])

    m0_exp = math.sqrt(4 - 4 * math.tan(math.pi / 8) ** 2)
    exact = closed_form(WaveSpec(form=WaveForm.EXPONENTIAL, N=4, M=8), 18, 16)
    out = evolve(exact[:2], 16, KGParams(m0=m0_exp, grid=grid))
    c.check("exponential solution reproduced over 16 steps", float(np.max(np.abs(out.psi - exact))), 1e-10)

    m0_rest = mass_from_rest_period(5, grid)
    exact = closed_form(WaveSpec(form=WaveForm.CAYLEY, N=5, M=INFINITE), 18, 12)
    out = evolve(exact[:2], 16, KGParams(m0=m0_rest, grid=grid))
    c.check("rest cayley solution reproduced over 16 steps", float(np.max(np.abs(out.psi - exact))), 1e-10)

    m0_cayley = 2 * math.pi / math.sqrt(12)
    nx = 112
    exact = closed_form(WaveSpec(form=WaveForm.CAYLEY, N=3, M=6), 18, nx)
    out = evolve(exact[:2], 16, KGParams(m0=m0_cayley, grid=grid))
    window = slice(40, nx - 40)
    c.check(
        "traveling cayley solution reproduced away from the wrap seam",
        float(np.max(np.abs(out.psi[:, window] - exact[:, window]))),
        1e-10,
    )

    a = rng.normal(size=(2, 20)) + 1j * rng.normal(size=(2, 20))
    b2 = rng.normal(size=(2, 20)) + 1j * rng.normal(size=(2, 20))
    p = KGParams(m0=1.7, grid=grid)
    alpha, beta = 0.8 - 0.4j, -1.3 + 0.2j
    dev = np.max(np.abs(evolve(alpha * a + beta * b2, 14, p).psi - alpha * evolve(a, 14, p).psi - beta * evolve(b2, 14, p).psi))
    c.check("linearity of the march", float(dev), 1e-11)

    initial = rng.normal(size=(2, 24)) + 1j * rng.normal(size=(2, 24))
    equivariant = np.array_equal(
        evolve(np.roll(initial, 3, axis=1), 10, p).psi, np.roll(evolve(initial, 10, p).psi, 3, axis=1)
    )
    c.require("translation equivariance is exact (bit-for-bit)", equivariant)
    return c


def _criterion_10_continuum_limits(rng: np.random.Generator, as_printed: frozenset) -> _Checker:
    c = _Checker()
    from .waves import continuum_limit_error

    sizes = [50, 100, 200]
    errors = [continuum_limit_error(WaveForm.CAYLEY, n, INFINITE, n, 0) for n in sizes]
    slope = float(np.polyfit(np.log(sizes), np.log(errors), 1)[0])
    c.require(
        "cayley phase error convergence order 2 (log-log slope within -2 +/- 0.1)",
        -2.1 <= slope <= -1.9,
        f"slope {slope:.4f}",
    )
    scales = [4, 8, 16, 32]
    gaps = []
    for s in scales:
        exp_res = dispersion_residual(DispersionForm.EXPONENTIAL, 3 * s, 6 * s, 1.0, GRID)
        cont_res = dispersion_residual(DispersionForm.CONTINUUM, 3 * s, 6 * s, 1.0, GRID)
        w = 2 * math.pi / (3 * s)
        k = 2 * math.pi / (6 * s)
        gaps.append(abs(exp_res - cont_res) / (w**2 + k**2))
    slope2 = float(np.polyfit(np.log(scales), np.log(gaps), 1)[0])
    c.require(
        "tan dispersion approaches the continuum relation at order 2",
        -2.1 <= slope2 <= -1.9,
        f"slope {slope2:.4f}",
    )
    return c


_CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "wave and particle quantities transform identically under boosts", _criterion_1_transform_equivalence),
    (2, "discrete energy-momentum sits on the mass shell, exactly rational velocity", _criterion_2_discrete_mass_shell),
    (3, "exact discrete product rule for differences and averages", _criterion_3_product_identity),
    (4, "total-difference mass-shell argument and average-velocity relation", _criterion_4_total_difference),
    (5, "beat phase/group velocities: formulas, c^2 product, envelope tracking", _criterion_5_beat_velocities),
    (6, "lattice plane waves certified against both dispersion relations", _criterion_6_plane_wave_certification),
    (7, "discrete mass spectrum and mode-number quantization", _criterion_7_mass_spectrum),
    (8, "integral Lorentz group: generators, ball(6), factorization round-trip", _criterion_8_integral_lorentz),
    (9, "implicit evolution reproduces exact solutions, linear and equivariant", _criterion_9_evolution_fidelity),
    (10, "continuum limits approached at second order", _criterion_10_continuum_limits),
]


def criterion_ids() -> list[int]:
    return [cid for cid, _, _ in _CRITERIA]


def run_criterion(cid: int, seed: int = 0, as_printed: Iterable[str] = ()) -> CriterionResult:
    printed = frozenset(as_printed)
    unknown = printed - set(AS_PRINTED_CHOICES)
    if unknown:
        raise ValueError(f"unknown as-printed selector(s): {sorted(unknown)}")
    for num, title, fn in _CRITERIA:
        if num == cid:
            rng = np.random.default_rng(seed + cid)
            checker = fn(rng, printed)
            return CriterionResult(cid=cid, title=title, passed=checker.passed, details=checker.details)
    raise ValueError(f"no criterion {cid}")


def run_acceptance(seed: int = 0, as_printed: Iterable[str] = ()) -> list[CriterionResult]:
    return [run_criterion(cid, seed=seed, as_printed=as_printed) for cid in criterion_ids()]


def format_report(results: list[CriterionResult], verbose: bool = True) -> str:
    lines = []
    for r in results:
        lines.append(r.line())
        if verbose:
            lines.extend(f"    {d}" for d in r.details)
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - failed}/{len(results)} criteria passed")
    return "\n".join(lines)
