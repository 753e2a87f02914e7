"""Torus cohomology as a polarized Hodge-Lefschetz module.

The underlying space is the exterior algebra on generators e_1..e_k,
ebar_1..ebar_k; wedging with the real (1,1) forms built from Hermitian
matrices gives the commuting operator family.  This is the one fixture
family with off-diagonal bidegrees (p != q), so it exercises every i^(p-q)
phase the diagonal polytope modules never touch.

The integration functional on the top exterior power is calibrated so the
k-th power of the reference form integrates to k!; the stored bilinear form
twists the integral by the usual degree sign, matching the polytope
convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exact import (
    GaussianRational,
    Matrix,
    as_fraction,
    hermitian_pd,
    i_power,
)
from .hodge_lefschetz import (
    BasisVector,
    ConstructionError,
    GradedSpace,
    HLModule,
    OperatorFamily,
    PolarizationForm,
    intersection_sign,
    lefschetz_property,
    polarization_check,
    validate_structure,
)


class TorusSpecError(ValueError):
    """Invalid torus input (non-Hermitian generator, indefinite reference)."""


@dataclass(frozen=True)
class TorusSpec:
    """Complex dimension plus Hermitian generator matrices and a reference
    coefficient vector whose combination must be positive definite."""

    dim: int
    hermitians: tuple[Matrix, ...]
    reference: tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# Exterior algebra bookkeeping
# ---------------------------------------------------------------------------
#
# Generator indexing: e_a -> 2a, ebar_a -> 2a + 1 (a = 0..k-1), so the
# orientation monomial e_1 ebar_1 ... e_k ebar_k is the sorted full tuple.


def exterior_monomials(k: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for d in range(2 * k + 1):
        out.extend(combinations(range(2 * k), d))
    return out


def wedge_monomials(m1: tuple[int, ...], m2: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted merge of two monomials, or None when they collide."""
    if set(m1) & set(m2):
        return None
    inversions = 0
    for x in m1:
        for y in m2:
            if x > y:
                inversions += 1
    merged = tuple(sorted(m1 + m2))
    return (1 if inversions % 2 == 0 else -1, merged)


def conjugate_monomial(m: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Swap e <-> ebar in a sorted monomial; sign counts the resorting."""
    swapped = [x ^ 1 for x in m]
    inversions = 0
    for i in range(len(swapped)):
        for j in range(i + 1, len(swapped)):
            if swapped[i] > swapped[j]:
                inversions += 1
    return (1 if inversions % 2 == 0 else -1, tuple(sorted(swapped)))


def _monomial_labels(k: int, m: tuple[int, ...]) -> tuple[int, int, int]:
    """(grade, p, q) of a monomial: grade = k - degree, p = k - #ebar,
    q = k - #e."""
    n_e = sum(1 for x in m if x % 2 == 0)
    n_bar = len(m) - n_e
    return (k - len(m), k - n_bar, k - n_e)


def kahler_form(h: Matrix, k: int) -> dict[tuple[int, int], GaussianRational]:
    """The (1,1) element i * sum h_ab e_a wedge ebar_b as a monomial dict."""
    if h.rows != k or h.cols != k:
        raise TorusSpecError("Hermitian matrix dimension mismatch")
    out: dict[tuple[int, int], GaussianRational] = {}
    for a in range(k):
        for b in range(k):
            c = h.data[a][b]
            if not c:
                continue
            res = wedge_monomials((2 * a,), (2 * b + 1,))
            sign, mono = res
            coeff = GaussianRational(0, 1) * c * sign
            if mono in out:
                coeff = out[mono] + coeff
            if coeff:
                out[mono] = coeff
            else:
                out.pop(mono, None)
    return out


def _wedge_operator_matrix(form: dict, monomials: list, index: dict) -> Matrix:
    n = len(monomials)
    mat = Matrix.zeros(n, n)
    for j, m in enumerate(monomials):
        for fm, fc in form.items():
            res = wedge_monomials(fm, m)
            if res is None:
                continue
            sign, merged = res
            mat.data[index[merged]][j] = mat.data[index[merged]][j] + fc * sign
    return mat


def kahler_operator(spec: TorusSpec, j: int) -> Matrix:
    """Matrix of wedging with the j-th generator form in the monomial basis."""
    k = spec.dim
    monomials = exterior_monomials(k)
    index = {m: i for i, m in enumerate(monomials)}
    return _wedge_operator_matrix(kahler_form(spec.hermitians[j], k), monomials, index)


def build_torus_module(spec: TorusSpec) -> HLModule:
    """Assemble the exterior algebra module and verify it end to end.

    Rejects non-Hermitian generators and references whose combined matrix is
    not positive definite; the finished module must pass the structural,
    Lefschetz, and polarization checks before it is returned.
    """
    k = spec.dim
    if k < 1:
        raise TorusSpecError("complex dimension must be at least 1")
    if len(spec.reference) != len(spec.hermitians):
        raise TorusSpecError("reference coefficient length mismatch")
    for h in spec.hermitians:
        if not h.is_hermitian():
            raise TorusSpecError("generator matrix is not Hermitian")

    h0 = Matrix.zeros(k, k)
    for c, h in zip(spec.reference, spec.hermitians):
        if c:
            h0 = h0 + h.scale(c)
    if not hermitian_pd(h0):
        raise TorusSpecError("reference combination is not positive definite")
    det_h0 = as_fraction(h0.det())

    monomials = exterior_monomials(k)
    index = {m: i for i, m in enumerate(monomials)}
    n = len(monomials)
    full = tuple(range(2 * k))

    vectors = tuple(
        BasisVector(i, *_monomial_labels(k, m)) for i, m in enumerate(monomials)
    )

    conjugation = Matrix.zeros(n, n)
    for j, m in enumerate(monomials):
        sign, m2 = conjugate_monomial(m)
        conjugation.data[index[m2]][j] = Fraction(sign)

    # integral of the orientation monomial, from int(omega_0^k) = k!
    integral_full = i_power(-k) * Fraction(1, 1) / det_h0

    form = Matrix.zeros(n, n)
    for i, mi in enumerate(monomials):
        sign_i = intersection_sign(len(mi))
        for j, mj in enumerate(monomials):
            res = wedge_monomials(mi, mj)
            if res is None or res[1] != full:
                continue
            form.data[i][j] = integral_full * (res[0] * sign_i)

    names = tuple(f"h{i + 1}" for i in range(len(spec.hermitians)))
    generators = tuple(
        _wedge_operator_matrix(kahler_form(h, k), monomials, index)
        for h in spec.hermitians
    )

    module = HLModule(
        space=GradedSpace(k, vectors, conjugation),
        form=PolarizationForm(form, (-1) ** k),
        family=OperatorFamily(names, generators),
        reference=tuple(Fraction(c) for c in spec.reference),
    )

    structure = validate_structure(module)
    if not structure.passed:
        raise ConstructionError(
            "torus module fails structure: "
            + "; ".join(s.name for s in structure.failures())
        )
    if not lefschetz_property(module, module.reference):
        raise ConstructionError("reference form fails the Lefschetz property")
    pol = polarization_check(module, module.reference)
    if not pol.passed:
        raise ConstructionError(
            "reference form fails polarization: "
            + "; ".join(s.name for s in pol.failures())
        )
    return module



# ---------------------------------------------------------------------------
# Standard fixtures
# ---------------------------------------------------------------------------


def t1_spec() -> TorusSpec:
    return TorusSpec(1, (Matrix([[Fraction(1)]]),), (Fraction(1),))


def t2_spec() -> TorusSpec:
    ident = Matrix.identity(2)
    diag = Matrix.diagonal([Fraction(1), Fraction(2)])
    skew = Matrix(
        [
            [Fraction(2), GaussianRational(0, 1)],
            [GaussianRational(0, -1), Fraction(2)],
        ]
    )
    return TorusSpec(2, (ident, diag, skew), (Fraction(1), Fraction(1), Fraction(1)))


def t3_spec() -> TorusSpec:
    ident = Matrix.identity(3)
    diag = Matrix.diagonal([Fraction(1), Fraction(2), Fraction(3)])
    mixed = Matrix(
        [
            [Fraction(2), GaussianRational(0, 1), Fraction(0)],
            [GaussianRational(0, -1), Fraction(2), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(2)],
        ]
    )
    return TorusSpec(3, (ident, diag, mixed), (Fraction(1), Fraction(1), Fraction(1)))
