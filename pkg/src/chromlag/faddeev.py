"""Non-compact quantum dilogarithm and numerical checks of its identities.

The primary evaluator is the ratio of two q-Pochhammer products, valid when
Im(hbar^2) > 0; it is summed in log form so large arguments do not overflow.
The contour-integral definition is evaluated with mpmath's tanh-sinh
quadrature and serves as an independent cross-check.

Integral identities are evaluated on straight contours x(s) = s e^{i phi} + i delta.
The tilt phi is chosen so the integrand decays at both ends, delta is placed
between the pole families that must lie on either side, and the integral is
computed with the trapezoid rule (exponentially accurate for analytic
integrands decaying at both ends).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import mpmath
import numpy as np

__all__ = [
    "HbarParam",
    "PoleError",
    "ContourError",
    "log_phi",
    "phi_ncqd",
    "phi_integral",
    "li2",
    "contour_integral",
    "verify_identity",
    "IDENTITIES",
]


class PoleError(ValueError):
    pass


class ContourError(ValueError):
    pass


@dataclass(frozen=True)
class HbarParam:
    hbar: complex

    def __post_init__(self) -> None:
        h = complex(self.hbar)
        object.__setattr__(self, "hbar", h)
        if not h.real > 0:
            raise ValueError("hbar must have positive real part")

    @property
    def c(self) -> complex:
        h = self.hbar
        return 0.5j * (h + 1 / h)

    @property
    def zeta(self) -> complex:
        return cmath.exp(math.pi * 1j * (1 - 4 * self.c**2) / 12)

    @property
    def zeta_inv(self) -> complex:
        return self.zeta**-2 * cmath.exp(-math.pi * 1j * self.c**2)

    @property
    def is_unitary(self) -> bool:
        """hbar + 1/hbar real, i.e. |hbar| = 1 (or hbar real)."""
        return abs((self.hbar + 1 / self.hbar).imag) < 1e-14

    @property
    def product_converges(self) -> bool:
        return (self.hbar**2).imag > 0

    def poles(self, N: int = 40) -> np.ndarray:
        """Poles of phi: c + i m hbar + i n / hbar, m, n >= 0."""
        m, n = np.meshgrid(np.arange(N), np.arange(N))
        return (self.c + 1j * m * self.hbar + 1j * n / self.hbar).ravel()

    def zeros(self, N: int = 40) -> np.ndarray:
        return -self.poles(N)

    @classmethod
    def on_circle(cls, theta: float) -> "HbarParam":
        return cls(cmath.exp(1j * theta))


# ----------------------------------------------------------------------
# evaluators


def log_phi(z, p: HbarParam):
    """log phi_hbar(z) as a sum of principal logarithms of the product factors."""
    if not p.product_converges:
        raise ContourError("the product formula needs Im(hbar^2) > 0; use phi_integral")
    h, c = p.hbar, p.c
    z = np.asarray(z, dtype=complex)
    q2 = cmath.exp(2j * math.pi * h * h)
    qt2 = cmath.exp(-2j * math.pi / (h * h))
    out = np.zeros(z.shape, dtype=complex)
    for base, ratio, sgn in ((np.exp(2 * math.pi * h * (z + c)), q2, 1), (np.exp(2 * math.pi / h * (z - c)), qt2, -1)):
        term = base.copy()
        k = 0
        while True:
            out += sgn * np.log1p(-term)
            term = term * ratio
            k += 1
            if np.max(np.abs(term), initial=0.0) < 1e-17:
                break
            if k > 200000:
                raise ContourError("product did not converge")
    return out


def phi_ncqd(z: complex, p: HbarParam) -> complex:
    """phi_hbar(z) from the product formula; refuses points within 1e-6 of a pole."""
    z = complex(z)
    if np.min(np.abs(p.poles() - z)) < 1e-6:
        raise PoleError(f"{z} is too close to a pole of phi")
    return complex(np.exp(log_phi(z, p)))


def phi_integral(z: complex, p: HbarParam, dps: int = 20) -> complex:
    """phi_hbar(z) from the contour integral (valid for |Im z| < |Im c| when hbar is on the circle).

    The contour runs along R + i delta, which is the real line indented above
    the origin because there are no poles in between.
    """
    h = mpmath.mpc(p.hbar)
    zz = mpmath.mpc(z)
    cand = []
    for k in (1, -1):
        for w in (mpmath.mpc(0, 1) * mpmath.pi * k / h, mpmath.mpc(0, 1) * mpmath.pi * k * h):
            if mpmath.im(w) > 0:
                cand.append(mpmath.im(w))
    delta = min(cand) / 3
    with mpmath.workdps(dps):
        def f(x):
            t = x + mpmath.mpc(0, delta)
            return mpmath.exp(-2j * zz * t) / (mpmath.sinh(t * h) * mpmath.sinh(t / h) * t)

        val = mpmath.quad(f, [-mpmath.inf, -5, -1, 0, 1, 5, mpmath.inf])
        return complex(mpmath.exp(val / 4))


# ----------------------------------------------------------------------
# dilogarithm


def _bernoulli(n: int) -> list[float]:
    from fractions import Fraction

    B = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        A = [Fraction(0)] * (m + 1)
        for j in range(m + 1):
            A[j] = Fraction(1, j + 1)
            for k in range(j, 0, -1):
                A[k - 1] = k * (A[k - 1] - A[k])
        B[m] = A[0]
    B[1] = -B[1]  # use B_1 = -1/2
    return [float(b) for b in B]


_BERN = _bernoulli(40)


def li2(x: complex) -> complex:
    """Dilogarithm: power series near 0, Bernoulli series in -log(1-x) near |x| = 1, inversion outside."""
    x = complex(x)
    if x == 0:
        return 0j
    if x == 1:
        return complex(math.pi**2 / 6)
    if abs(x) <= 0.5:
        s, t, k = 0j, x, 1
        while abs(t) > 1e-18 * max(1.0, abs(s)):
            s += t / (k * k)
            k += 1
            t *= x
        return s
    if abs(x) >= 2:
        return -math.pi**2 / 6 - 0.5 * cmath.log(-x) ** 2 - li2(1 / x)
    u = -cmath.log(1 - x)
    s = 0j
    fact = 1.0
    for n in range(0, 40):
        fact *= n + 1
        if n > 1 and n % 2 == 1:
            continue
        s += _BERN[n] * u ** (n + 1) / fact
    return s


# ----------------------------------------------------------------------
# contour integration


DEFAULT_TILTS = (0.0, 0.02, -0.02, 0.05, -0.05, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3, 0.45, -0.45, 0.6, -0.6, 0.78, -0.78)


def _line_integral(f, phi: float, delta: float, dist: float, x0: float, tol: float):
    """Trapezoid rule on x(s) = x0 + s e^{i phi} + i (delta + x0 tan phi), truncated where |f| < tol * |f(x(0))|."""
    e = cmath.exp(1j * phi)
    base = x0 + 1j * (delta + x0 * math.tan(phi))
    x_of = lambda s: base + s * e  # noqa: E731
    with np.errstate(all="ignore"):
        scale = abs(f(np.array([base]))[0])
    if not np.isfinite(scale) or scale == 0:
        return None
    ends = []
    for sgn in (1, -1):
        S = 2.0
        while True:
            with np.errstate(all="ignore"):
                vals = np.abs(f(x_of(sgn * np.linspace(S, S + 3, 7))))
            if np.all(np.isfinite(vals)) and np.max(vals) < tol * scale:
                break
            S += 1.0
            if S > 80:
                return None
        ends.append(S)
    h = min(0.05, dist / 6)
    s = np.arange(-ends[1], ends[0] + h / 2, h)
    with np.errstate(all="ignore"):
        vals = f(x_of(s))
    if not np.all(np.isfinite(vals)):
        return None
    total = complex(h * e * (np.sum(vals) - 0.5 * (vals[0] + vals[-1])))
    mass = float(h * np.sum(np.abs(vals)))
    info = {"tilt": phi, "offset": float(delta), "anchor": x0, "range": (-ends[1], ends[0]), "nodes": len(s), "step": h}
    return total, mass, info


def contour_integral(
    f: Callable[[np.ndarray], np.ndarray],
    above: Sequence[np.ndarray] = (),
    below: Sequence[np.ndarray] = (),
    tol: float = 1e-15,
    tilts: Sequence[float] | None = None,
    center: complex | None = None,
) -> tuple[complex, dict]:
    """Integrate f along a line passing below the poles in ``above`` and above those in ``below``.

    Every candidate tilt with a pole-free strip is tried; among those where f
    decays at both ends, the line with the least cancellation (ratio of the
    integral of |f| to the absolute value of the result) wins.  ``center``
    suggests a point, such as a saddle, the line should pass through.
    """
    above_pts = np.concatenate([np.asarray(a, dtype=complex).ravel() for a in above]) if above else np.zeros(0, complex)
    below_pts = np.concatenate([np.asarray(b, dtype=complex).ravel() for b in below]) if below else np.zeros(0, complex)
    best = None
    for phi in DEFAULT_TILTS if tilts is None else tilts:
        tn = math.tan(phi)
        hi = np.min(above_pts.imag - above_pts.real * tn) if above_pts.size else math.inf
        lo = np.max(below_pts.imag - below_pts.real * tn) if below_pts.size else -math.inf
        if hi <= lo:
            continue
        options = []
        if center is not None:
            want = center.imag - center.real * tn
            margin = min(0.4, (hi - lo) / 4)
            options.append((min(max(want, lo + margin), hi - margin), center.real))
        if math.isinf(hi) and math.isinf(lo):
            options.append((0.0, 0.0))
        elif math.isinf(hi):
            options.append((lo + 0.4, 0.0))
        elif math.isinf(lo):
            options.append((hi - 0.4, 0.0))
        else:
            options.append(((hi + lo) / 2, 0.0))
        for delta, x0 in options:
            dist = min(hi - delta, delta - lo) * math.cos(phi)
            got = _line_integral(f, phi, delta, dist, x0, tol)
            if got is None or got[0] == 0:
                continue
            cond = got[1] / abs(got[0])
            if best is None or cond < best[0]:
                best = (cond, got)
    if best is None:
        raise ContourError("no straight contour separates the pole families with decay at both ends")
    cond, (total, _, info) = best
    info["cancellation"] = cond
    return total, info


# ----------------------------------------------------------------------
# identities


def _rng(seed: int):
    return np.random.default_rng(seed)


def _points(p: HbarParam, n: int, seed: int, radius: float = 1.0) -> list[complex]:
    r = _rng(seed)
    out = []
    while len(out) < n:
        z = complex(r.uniform(-radius, radius), r.uniform(-0.3, 0.3) * radius)
        if min(np.min(np.abs(p.poles() - z)), np.min(np.abs(p.zeros() - z))) > 0.05:
            out.append(z)
    return out


def _inversion(pairs):
    res = []
    for p, z in pairs:
        lhs = phi_ncqd(z, p) * phi_ncqd(-z, p)
        rhs = p.zeta_inv * cmath.exp(math.pi * 1j * z * z)
        res.append(abs(lhs / rhs - 1))
    return res


def _functional(pairs, sign):
    res = []
    for p, z in pairs:
        hb = p.hbar if sign > 0 else 1 / p.hbar
        lhs = phi_ncqd(z - 0.5j * hb, p)
        rhs = (1 + cmath.exp(2 * math.pi * hb * z)) * phi_ncqd(z + 0.5j * hb, p)
        res.append(abs(lhs / rhs - 1))
    return res


def _algebraic_points(hbar, n: int, seed: int) -> list[tuple[HbarParam, complex]]:
    """n pairs (hbar, z); hbar random on the unit circle unless fixed."""
    r = _rng(seed)
    out = []
    for i in range(n):
        p = HbarParam(hbar) if hbar is not None else HbarParam.on_circle(r.uniform(0.15, 0.7))
        out.append((p, _points(p, 1, seed * 1000 + i)[0]))
    return out


def _lphi(p):
    return lambda x: log_phi(x, p)


def _fourier(p, pts, which):
    c, L = p.c, _lphi(p)
    res = []
    for w in pts:
        if which == 1:
            f = lambda x: np.exp(2j * math.pi * x * (w - c) - L(x - c))  # noqa: E731
            val, _ = contour_integral(f, below=[p.zeros() + c])
            expected = p.zeta * phi_ncqd(w, p)
        else:
            f = lambda x: np.exp(L(x + c) - 2j * math.pi * x * (w + c))  # noqa: E731
            val, _ = contour_integral(f, above=[p.poles() - c])
            expected = 1 / (p.zeta * phi_ncqd(w, p))
        res.append(abs(val / expected - 1))
    return res


def _beta(p, pairs, which):
    c, L = p.c, _lphi(p)
    res = []
    for a, w in pairs:
        if which == 1:
            f = lambda x: np.exp(L(x + a) - L(x - c) + 2j * math.pi * x * (w - c))  # noqa: E731
            val, _ = contour_integral(f, above=[p.poles() - a], below=[p.zeros() + c])
            expected = phi_ncqd(a, p) * phi_ncqd(w, p) / phi_ncqd(a + w - c, p) * p.zeta
        else:
            f = lambda x: np.exp(L(x + c) - L(x + a) - 2j * math.pi * x * (w + c))  # noqa: E731
            val, _ = contour_integral(f, above=[p.poles() - c], below=[p.zeros() - a])
            expected = phi_ncqd(a + w + c, p) / (phi_ncqd(a, p) * phi_ncqd(w, p)) / p.zeta
        res.append(abs(val / expected - 1))
    return res


def _sigma_on_pair(p: HbarParam, z1: complex, z2: complex) -> complex:
    """Nested Fourier evaluation of the reframing operator on phi(z1-c)phi(z2-c), up to a constant.

    Inner integral over s (Fourier transform of phi(s+c)) for every node t of
    the outer contour, then the outer integral over t.
    """
    c, L = p.c, _lphi(p)

    def inner(t: complex) -> complex:
        f = lambda s: np.exp(L(s + c) - 2j * math.pi * s * (z2 + t + 2 * c))  # noqa: E731
        w = z2 + t + c
        if w.real > 1:
            # Gaussian regime: steepest descent line through the saddle
            val, _ = contour_integral(f, above=[p.poles() - c], center=w, tilts=(0.78,), tol=1e-13)
        else:
            val, _ = contour_integral(f, above=[p.poles() - c], tilts=(0.02, 0.3), tol=1e-13)
        return val

    # the outer contour passes below the poles of phi(t+c) and above those of 1/phi(t+z2+c)
    def outer(tarr: np.ndarray) -> np.ndarray:
        tarr = np.atleast_1d(tarr)
        inn = np.array([inner(complex(t)) for t in tarr])
        return np.exp(L(tarr + c) - 2j * math.pi * tarr * (z1 + 2 * c)) * inn

    # choose the outer contour with the closed form of the inner integral, then integrate numerically
    closed = lambda t: np.exp(L(t + c) - L(t + z2 + c) - 2j * math.pi * t * (z1 + 2 * c))  # noqa: E731
    _, info = contour_integral(closed, above=[p.poles() - c], below=[p.zeros() - z2 - c], tilts=(0.0,))
    e = cmath.exp(1j * info["tilt"])
    base = info["anchor"] + 1j * (info["offset"] + info["anchor"] * math.tan(info["tilt"]))
    lo, hi = info["range"]
    h = info["step"] * 2
    s = np.arange(lo, hi + h / 2, h)
    vals = outer(base + s * e)
    return complex(h * e * (np.sum(vals) - 0.5 * (vals[0] + vals[-1])))


def _projective_spread(lhs: Sequence[complex], rhs: Sequence[complex]) -> tuple[float, float]:
    ratios = [a / b for a, b in zip(lhs, rhs)]
    r0 = ratios[0]
    return max(abs(r / r0 - 1) for r in ratios), abs(r0)


def _lemma23(p, pts2):
    c = p.c
    lhs = [_sigma_on_pair(p, z1, z2) for z1, z2 in pts2]
    rhs = [phi_ncqd(z1 + z2 + 3 * c, p) / (phi_ncqd(z2 + c, p) * phi_ncqd(z1 + c, p)) for z1, z2 in pts2]
    return _projective_spread(lhs, rhs)


def psi_cube(z: Sequence[complex], p: HbarParam) -> complex:
    c = p.c
    z1, z2, z3 = z
    f = phi_ncqd
    return f(-z1 + 3 * c, p) * f(-z2 - c, p) * f(-z3 - c, p) / (f(-z1 - z3 + c, p) * f(-z1 - z2 + c, p))


def _cube_chain(p: HbarParam, z: Sequence[complex]) -> complex:
    """Wavefunction of the cube seed through the mutation and reframing chain, up to a constant."""
    c = p.c
    f = phi_ncqd
    # coordinates before the final change of basis
    y1, y2, y3 = -z[0] - z[1], z[1], -z[2]
    reframed = _sigma_on_pair(p, y1, y2) * f(y3 - c, p) / f(y1 + y2 + y3 + c, p)
    return reframed * f(-y2 - c, p) * f(y2 + c, p)


def _cube(p, pts3):
    lhs = [_cube_chain(p, z) for z in pts3]
    rhs = [psi_cube(z, p) for z in pts3]
    return _projective_spread(lhs, rhs)


def log_psi_cube(z: Sequence[complex], p: HbarParam) -> complex:
    c = p.c
    z1, z2, z3 = z
    L = lambda x: complex(log_phi(x, p))  # noqa: E731
    return L(-z1 + 3 * c) + L(-z2 - c) + L(-z3 - c) - L(-z1 - z3 + c) - L(-z1 - z2 + c)


def cube_superpotential(z: Sequence[complex]) -> complex:
    Z = [cmath.exp(-x) for x in z]
    return li2(Z[0]) + li2(Z[1]) + li2(Z[2]) - li2(Z[0] * Z[1]) - li2(Z[0] * Z[2])


def _cube_semiclassical(z, theta: float, radii: Sequence[float]):
    errs = []
    for r in radii:
        p = HbarParam(r * cmath.exp(1j * theta))
        h = p.hbar
        val = 2j * math.pi * h * h * log_psi_cube([x / (2 * math.pi * h) for x in z], p)
        errs.append(abs(val - cube_superpotential(z)))
    return errs


IDENTITIES = (
    "inversion",
    "functional_plus",
    "functional_minus",
    "fourier_1",
    "fourier_2",
    "beta_1",
    "beta_2",
    "lemma23",
    "cube",
    "cube_semiclassical",
)

THRESHOLDS = {
    "inversion": 1e-8,
    "functional_plus": 1e-8,
    "functional_minus": 1e-8,
    "fourier_1": 1e-5,
    "fourier_2": 1e-5,
    "beta_1": 1e-5,
    "beta_2": 1e-5,
    "lemma23": 1e-4,
    "cube": 1e-4,
}


def verify_identity(name: str, hbar: complex | None = None, points: int | None = None, seed: int = 0) -> dict:
    """Residual report for one identity; ``ok`` compares with the identity's threshold."""
    if name not in IDENTITIES:
        raise ValueError(f"unknown identity {name!r}; choose from {IDENTITIES}")
    if name == "cube_semiclassical":
        theta = math.pi / 16 if hbar is None else cmath.phase(hbar)
        z = (3.5, 1.0, 1.5)
        radii = (0.4, 0.2, 0.1)
        errs = _cube_semiclassical(z, theta, radii)
        ok = all(b < a for a, b in zip(errs, errs[1:]))
        return {"name": name, "theta": theta, "z": list(z), "radii": list(radii), "errors": errs, "ok": ok}
    p = HbarParam(cmath.exp(1j * math.pi / 5) if hbar is None else hbar)
    out = {"name": name, "hbar": [p.hbar.real, p.hbar.imag]}
    if name in ("inversion", "functional_plus", "functional_minus"):
        pairs = _algebraic_points(hbar, points or 20, seed)
        if hbar is None:
            out["hbar"] = "random on the unit circle"
        if name == "inversion":
            res = _inversion(pairs)
        else:
            res = _functional(pairs, 1 if name.endswith("plus") else -1)
        out["residual"] = max(res)
    elif name.startswith("fourier"):
        pts = _points(p, points or 3, seed, radius=0.4)
        out["residual"] = max(_fourier(p, pts, int(name[-1])))
    elif name.startswith("beta"):
        # the integral converges when Im(a + w) is positive (first form) or negative (second form)
        r = _rng(seed)
        sgn = 1 if name == "beta_1" else -1
        pairs = [
            tuple(complex(r.uniform(-0.4, 0.4), sgn * r.uniform(0.1, 0.25)) for _ in range(2)) for _ in range(points or 3)
        ]
        out["residual"] = max(_beta(p, pairs, int(name[-1])))
    elif name == "lemma23":
        r = _rng(seed)
        pts2 = [tuple(complex(r.uniform(-0.3, 0.3), -1.0) for _ in range(2)) for _ in range(points or 5)]
        out["residual"], out["ratio_modulus"] = _lemma23(p, pts2)
    elif name == "cube":
        r = _rng(seed)
        pts3 = [
            (complex(r.uniform(-0.3, 0.3), 2.0), complex(r.uniform(-0.3, 0.3), -1.0), complex(r.uniform(-0.3, 0.3)))
            for _ in range(points or 5)
        ]
        out["residual"], out["ratio_modulus"] = _cube(p, pts3)
    out["threshold"] = THRESHOLDS[name]
    out["ok"] = bool(out["residual"] < THRESHOLDS[name])
    return out
