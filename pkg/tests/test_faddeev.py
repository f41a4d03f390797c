import cmath
import math

import mpmath
import numpy as np
import pytest

from chromlag.faddeev import (
    IDENTITIES,
    ContourError,
    HbarParam,
    PoleError,
    _fourier,
    contour_integral,
    cube_superpotential,
    li2,
    log_phi,
    log_psi_cube,
    phi_integral,
    phi_ncqd,
    psi_cube,
    verify_identity,
)

P = HbarParam.on_circle(math.pi / 5)


def test_hbar_param():
    assert P.is_unitary and P.product_converges
    assert abs(P.c - 1j * math.cos(math.pi / 5)) < 1e-15
    with pytest.raises(ValueError):
        HbarParam(-1 + 0.2j)
    assert not HbarParam.on_circle(-0.3).product_converges


@pytest.mark.parametrize("z", [0.3 + 0.1j, -0.5, 0.2 - 0.4j])
def test_product_matches_integral(z):
    assert abs(phi_ncqd(z, P) / phi_integral(z, P) - 1) < 1e-8


def test_inversion_at_zero():
    assert abs(phi_ncqd(0, P) ** 2 / P.zeta_inv - 1) < 1e-12


@pytest.mark.parametrize("z", [0.3 + 0.1j, 1.2 - 0.2j, -0.8 + 0.05j])
def test_unitarity(z):
    assert abs(phi_ncqd(z, P) * np.conj(phi_ncqd(np.conj(z), P)) - 1) < 1e-12


@pytest.mark.parametrize("z", [0.3 + 0.1j, -0.4])
def test_symmetry_in_hbar(z):
    inv = HbarParam(1 / P.hbar)
    assert abs(phi_integral(z, P, 30) / phi_integral(z, inv, 30) - 1) < 1e-10


def test_product_refuses_wrong_quadrant():
    with pytest.raises(ContourError):
        log_phi(0.1, HbarParam(cmath.exp(-0.4j)))


@pytest.mark.parametrize("x", [4.0, 6.0, 4.0 + 0.5j])
def test_asymptotics(x):
    assert abs(phi_ncqd(-x, P) - 1) < 0.01
    ref = P.zeta_inv * cmath.exp(math.pi * 1j * x * x)
    assert abs(phi_ncqd(x, P) / ref - 1) < 0.01


def test_semiclassical_limit():
    z = 0.5 + 0.2j
    errs = []
    for r in (0.4, 0.2, 0.1):
        p = HbarParam(r * cmath.exp(1j * math.pi / 8))
        h = p.hbar
        val = 2j * math.pi * h * h * complex(log_phi(z / (2 * math.pi * h), p))
        errs.append(abs(val - li2(-cmath.exp(z))))
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("x", [0.3, -0.7 + 0.2j, 1.5 - 0.3j, 3 + 4j, -10, 0.99j, 0.6 + 0.6j, 1])
def test_li2(x):
    assert abs(li2(x) - complex(mpmath.polylog(2, x))) < 1e-13


def test_cube_log_matches_value():
    z = (0.3 + 0.1j, -0.2, 0.15 - 0.05j)
    assert abs(cmath.exp(log_psi_cube(z, P)) / psi_cube(z, P) - 1) < 1e-12


def test_cube_superpotential_symmetry():
    a, b, c = 0.7, 1.1 + 0.2j, 2.0 - 0.1j
    assert abs(cube_superpotential((a, b, c)) - cube_superpotential((a, c, b))) < 1e-14


def test_pole_rejected():
    with pytest.raises(PoleError):
        phi_ncqd(P.poles()[7], P)


def test_gaussian_contour():
    val, info = contour_integral(lambda x: np.exp(-math.pi * x * x))
    assert abs(val - 1) < 1e-12
    assert info["tilt"] == 0.0


def test_fourier_at_point():
    assert _fourier(P, [0.2], 1)[0] < 1e-5


@pytest.mark.parametrize("name", ["inversion", "functional_plus", "functional_minus"])
def test_algebraic_identities(name):
    r = verify_identity(name, points=8, seed=4)
    assert r["ok"] and r["residual"] < 1e-8


def test_inversion_fixed_point():
    r = verify_identity("inversion", hbar=P.hbar, points=3)
    assert r["residual"] < 1e-8


@pytest.mark.parametrize("name", ["fourier_1", "fourier_2", "beta_1", "beta_2"])
def test_quadrature_identities(name):
    r = verify_identity(name, points=2, seed=1)
    assert r["ok"], r


def test_unknown_identity():
    with pytest.raises(ValueError):
        verify_identity("pentagon_9")
    assert "lemma23" in IDENTITIES
