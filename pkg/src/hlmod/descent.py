"""Descent to operator images, quotient presentations, and Koszul purity.

Descent passes from a module of weight k to the image T.V of weight k - 1,
with the form transported by Q~(Tu, Tv) := Q(u, Tv); repeating it lands on
T_1...T_t.V at weight k - t, and the quotient presentation V/ker replaces
the image through the canonical isomorphism.  The Koszul complex of a tuple
of cone elements carries the weight filtration inherited from the grading,
and the purity check certifies that its cohomology sits in weights <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import (
    Matrix,
    echelon_basis,
    intersect_spaces,
    kernel_basis,
    linear_solve,
    rank_of_vectors,
)
from .hodge_lefschetz import (
    BasisVector,
    ConstructionError,
    GradedSpace,
    HLModule,
    OperatorFamily,
    PolarizationForm,
    PreconditionError,
    _vector_witness,
    cone_membership,
    lefschetz_property,
    polarization_check,
    validate_structure,
)
from .mixed import ConeMembershipError, validate_tuple
from .report import CheckReport, timed


class FormIllDefinedError(PreconditionError):
    """The descended form is not well defined on the image subspace."""


class DescentError(ConstructionError):
    """The descended module failed a check the theory guarantees."""


@dataclass(frozen=True)
class DescentResult:
    """Image-presentation descent: the new module plus transport matrices.

    ``embedding`` has the new basis vectors as columns (in parent ambient
    coordinates), ``section`` holds chosen preimages column by column, and
    ``projection`` sends a parent vector to the coordinates of its image.
    """

    module: HLModule
    embedding: Matrix
    section: Matrix
    projection: Matrix


@dataclass(frozen=True)
class QuotientDescent:
    module: HLModule
    image: DescentResult
    isomorphism: Matrix


def _lambda_samples() -> list[Fraction]:
    return [Fraction(1, 2 ** j) for j in range(9)]


def descent(module: HLModule, coeffs, interior: bool = False) -> DescentResult:
    """Descend along one operator satisfying the closed-cone premise.

    The premise (T plus any positive multiple of the reference satisfies the
    Lefschetz property) is certified on a finite geometric sample of
    multipliers; by rank semicontinuity a failure inside the sampled range
    would surface at one of the sampled points or in the downstream
    well-definedness and validation checks.  Pass ``interior=True`` to also
    require the Lefschetz property for T itself.
    """
    c = module.coefficients(coeffs)
    ref = module.reference
    for lam in _lambda_samples():
        shifted = tuple(a + lam * b for a, b in zip(c, ref))
        if not lefschetz_property(module, shifted):
            raise PreconditionError(
                f"T + {lam} N0 fails the Lefschetz property; descent premise violated"
            )
    if interior and not lefschetz_property(module, c):
        raise PreconditionError("interior flag set but T fails the Lefschetz property")
    return _descend(module, [module.operator(c)])


def repeated_descent(module: HLModule, entries) -> DescentResult:
    """Descend along a tuple of cone elements in one step."""
    tuple_ = validate_tuple(module, entries, require_cone=True)
    if len(tuple_) > module.weight:
        raise PreconditionError("cannot descend below weight zero")
    mats = [module.operator(c) for c in tuple_.coefficients]
    return _descend(module, mats)


def _descend(module: HLModule, mats: Sequence[Matrix]) -> DescentResult:
    t = len(mats)
    k = module.weight
    new_weight = k - t
    n = module.dim

    product = Matrix.identity(n)
    for m in mats:
        product = product * m

    kern, _ = kernel_basis(product)
    image_cols = echelon_basis([product.column(j) for j in range(n)])
    bad_pair = None
    for u in kern:
        for w in image_cols:
            if module.form_value(u, w):
                bad_pair = (u, w)
                break
        if bad_pair:
            break
    if bad_pair:
        raise FormIllDefinedError(
            "form-ill-defined: Q(kernel, image) != 0 with witness "
            f"{_vector_witness(bad_pair[0])}"
        )

    bi = module.space.bidegree_indices()
    new_vectors: list[BasisVector] = []
    columns: list[list] = []
    preimages: list[int] = []
    ident = 0
    for total in range(2 * new_weight, -1, -1):
        for a in range(min(total, new_weight), -1, -1):
            b = total - a
            if b < 0 or b > new_weight:
                continue
            src = bi.get((a + t, b + t), [])
            if not src:
                continue
            block_cols: list[list] = []
            for i in src:
                w = product.column(i)
                if not any(w):
                    continue
                if rank_of_vectors(block_cols + [w]) > len(block_cols):
                    block_cols.append(w)
                    columns.append(w)
                    preimages.append(i)
                    new_vectors.append(
                        BasisVector(ident, a + b - new_weight, a, b)
                    )
                    ident += 1

    m_dim = ident
    embedding = Matrix.from_columns(columns, n) if columns else Matrix.zeros(n, 0)
    section = Matrix.zeros(n, m_dim)
    for j, i in enumerate(preimages):
        section.data[i][j] = Fraction(1)

    def new_coords(vec) -> list:
        coords = linear_solve(embedding, vec) if m_dim else ([] if not any(vec) else None)
        if coords is None:
            raise DescentError("vector escaped the descended subspace")
        return coords

    q_old = module.form.matrix
    form = Matrix.zeros(m_dim, m_dim)
    for i in range(m_dim):
        row_src = preimages[i]
        for j in range(m_dim):
            total_val = Fraction(0)
            wj = columns[j]
            for a_idx, qv in enumerate(q_old.data[row_src]):
                if qv and wj[a_idx]:
                    total_val = total_val + qv * wj[a_idx]
            if total_val:
                form.data[i][j] = total_val

    conj_cols = []
    for j in range(m_dim):
        conj_cols.append(new_coords(module.conjugate_vector(columns[j])))
    conjugation = (
        Matrix.from_columns(conj_cols, m_dim) if m_dim else Matrix.zeros(0, 0)
    )

    gen_mats = []
    for g in module.family.matrices:
        cols = [new_coords(g.apply(columns[j])) for j in range(m_dim)]
        gen_mats.append(Matrix.from_columns(cols, m_dim) if m_dim else Matrix.zeros(0, 0))

    new_module = HLModule(
        space=GradedSpace(max(new_weight, 0), tuple(new_vectors), conjugation),
        form=PolarizationForm(form, (-1) ** new_weight),
        family=OperatorFamily(module.family.names, tuple(gen_mats)),
        reference=module.reference,
    )

    structure = validate_structure(new_module)
    if not structure.passed:
        raise DescentError(
            "descended module fails structure: "
            + "; ".join(s.name for s in structure.failures())
        )
    if m_dim and not lefschetz_property(new_module, new_module.reference):
        raise DescentError("descended reference fails the Lefschetz property")
    if m_dim:
        pol = polarization_check(new_module, new_module.reference)
        if not pol.passed:
            raise DescentError(
                "descended reference fails polarization: "
                + "; ".join(s.name for s in pol.failures())
            )

    proj_cols = []
    for a in range(n):
        proj_cols.append(new_coords(product.column(a)))
    projection = Matrix.from_columns(proj_cols, m_dim) if n else Matrix.zeros(m_dim, 0)
    return DescentResult(new_module, embedding, section, projection)


def quotient_descent(module: HLModule, coeffs, power: int) -> QuotientDescent:
    """Present V/ker(T^power) and identify it with the image presentation."""
    c = module.coefficients(coeffs)
    if not cone_membership(module, c):
        raise ConeMembershipError("operator is not in the polarizing cone")
    if power < 0 or power > module.weight:
        raise PreconditionError("power must lie between 0 and the weight")
    t_mat = module.operator(c)
    product = t_mat.power(power)
    n = module.dim
    k = module.weight
    new_weight = k - power

    bi = module.space.bidegree_indices()
    kern_all, _ = kernel_basis(product)

    new_vectors: list[BasisVector] = []
    rep_indices: list[int] = []
    ident = 0
    for total in range(2 * new_weight, -1, -1):
        for a in range(min(total, new_weight), -1, -1):
            b = total - a
            if b < 0 or b > new_weight:
                continue
            src = bi.get((a + power, b + power), [])
            if not src:
                continue
            kern_block = [v for v in kern_all if all(not v[i] for i in range(n) if i not in src)]
            chosen: list[list] = [list(v) for v in kern_block]
            base_rank = rank_of_vectors(chosen)
            for i in src:
                unit = [Fraction(0)] * n
                unit[i] = Fraction(1)
                if rank_of_vectors(chosen + [unit]) > base_rank:
                    chosen.append(unit)
                    base_rank += 1
                    rep_indices.append(i)
                    new_vectors.append(BasisVector(ident, a + b - new_weight, a, b))
                    ident += 1

    m_dim = ident
    reps = []
    for i in rep_indices:
        unit = [Fraction(0)] * n
        unit[i] = Fraction(1)
        reps.append(unit)
    solve_basis = reps + [list(v) for v in kern_all]
    solve_matrix = (
        Matrix.from_columns(solve_basis, n) if solve_basis else Matrix.zeros(n, 0)
    )

    def class_coords(vec) -> list:
        coords = linear_solve(solve_matrix, vec)
        if coords is None:
            raise DescentError("vector outside representatives + kernel")
        return coords[:m_dim]

    q_old = module.form.matrix
    form = Matrix.zeros(m_dim, m_dim)
    for i in range(m_dim):
        for j in range(m_dim):
            w = product.column(rep_indices[j])
            value = Fraction(0)
            for a_idx, qv in enumerate(q_old.data[rep_indices[i]]):
                if qv and w[a_idx]:
                    value = value + qv * w[a_idx]
            if value:
                form.data[i][j] = value

    conj_cols = [class_coords(module.conjugate_vector(r)) for r in reps]
    gen_mats = []
    for g in module.family.matrices:
        cols = [class_coords(g.apply(r)) for r in reps]
        gen_mats.append(Matrix.from_columns(cols, m_dim) if m_dim else Matrix.zeros(0, 0))

    quotient_module = HLModule(
        space=GradedSpace(
            max(new_weight, 0),
            tuple(new_vectors),
            Matrix.from_columns(conj_cols, m_dim) if m_dim else Matrix.zeros(0, 0),
        ),
        form=PolarizationForm(form, (-1) ** new_weight),
        family=OperatorFamily(module.family.names, tuple(gen_mats)),
        reference=module.reference,
    )

    structure = validate_structure(quotient_module)
    if not structure.passed:
        raise DescentError(
            "quotient module fails structure: "
            + "; ".join(s.name for s in structure.failures())
        )

    image = repeated_descent(module, [c] * power)

    iso_cols = []
    for r in reps:
        target = product.apply(r)
        coords = (
            linear_solve(image.embedding, target)
            if image.module.dim
            else ([] if not any(target) else None)
        )
        if coords is None:
            raise DescentError("canonical map does not land in the image module")
        iso_cols.append(coords)
    iso = (
        Matrix.from_columns(iso_cols, image.module.dim)
        if m_dim
        else Matrix.zeros(image.module.dim, 0)
    )

    if m_dim != image.module.dim or (m_dim and not iso.det()):
        raise DescentError("canonical map between presentations is not invertible")
    for i_new, v_new in enumerate(quotient_module.space.vectors):
        for i_img in range(image.module.dim):
            if iso.data[i_img][i_new]:
                w = image.module.space.vectors[i_img]
                if (w.grade, w.p, w.q) != (v_new.grade, v_new.p, v_new.q):
                    raise DescentError("canonical map does not respect the bigrading")
    # transported form and operators must agree exactly
    if iso.transpose() * image.module.form.matrix * iso != quotient_module.form.matrix:
        raise DescentError("canonical map does not transport the form")
    for g_q, g_i in zip(quotient_module.family.matrices, image.module.family.matrices):
        if iso * g_q != g_i * iso:
            raise DescentError("canonical map does not intertwine the operators")
    return QuotientDescent(quotient_module, image, iso)


# ---------------------------------------------------------------------------
# Koszul complex with the inherited weight filtration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KoszulSummand:
    indices: tuple[int, ...]
    basis: tuple[tuple, ...]  # ambient vectors spanning T_J . V


@dataclass(frozen=True)
class KoszulComplex:
    module: HLModule
    operator_count: int
    terms: tuple[tuple[KoszulSummand, ...], ...]
    differentials: tuple[Matrix, ...]
    filtration: dict[tuple[int, int], tuple[tuple, ...]]

    def term_dim(self, p: int) -> int:
        return sum(len(s.basis) for s in self.terms[p])

    def filtration_basis(self, p: int, level: int) -> tuple[tuple, ...]:
        k = self.module.weight
        if level >= k - p:
            level = k - p
        if level < -k - p:
            return ()
        return self.filtration.get((p, level), ())


def koszul_complex(module: HLModule, entries, require_cone: bool = True) -> KoszulComplex:
    """Build the filtered complex of image subspaces with signed differentials.

    Terms are indexed by strictly increasing index tuples; the component of
    the differential into a target tuple J from the source omitting the s-th
    entry of J is (-1)^(s-1) times that operator.  Both d.d = 0 and
    compatibility of d with the filtration are verified exactly here.
    """
    tuple_ = validate_tuple(module, entries, require_cone)
    m = len(tuple_)
    if m < 1:
        raise PreconditionError("need at least one operator")
    mats = [module.operator(c) for c in tuple_.coefficients]
    n = module.dim
    k = module.weight

    products: dict[tuple[int, ...], Matrix] = {}

    def product_for(subset: tuple[int, ...]) -> Matrix:
        if subset in products:
            return products[subset]
        if not subset:
            out = Matrix.identity(n)
        else:
            out = product_for(subset[:-1]) * mats[subset[-1]]
        products[subset] = out
        return out

    terms: list[tuple[KoszulSummand, ...]] = []
    bases: dict[tuple[int, ...], list[tuple]] = {}
    for p in range(m + 1):
        summands = []
        for subset in combinations(range(m), p):
            mat = product_for(subset)
            basis = echelon_basis([mat.column(j) for j in range(n)])
            bases[subset] = basis
            summands.append(KoszulSummand(subset, tuple(basis)))
        terms.append(tuple(summands))

    offsets: list[dict[tuple[int, ...], int]] = []
    dims: list[int] = []
    for p in range(m + 1):
        off: dict[tuple[int, ...], int] = {}
        pos = 0
        for s in terms[p]:
            off[s.indices] = pos
            pos += len(s.basis)
        offsets.append(off)
        dims.append(pos)

    diffs: list[Matrix] = []
    for p in range(m):
        d = Matrix.zeros(dims[p + 1], dims[p])
        for target in terms[p + 1]:
            t_idx = target.indices
            t_basis = Matrix.from_columns(list(target.basis), n) if target.basis else None
            for s_pos, j_s in enumerate(t_idx):
                source = t_idx[:s_pos] + t_idx[s_pos + 1 :]
                sign = 1 if s_pos % 2 == 0 else -1
                src_off = offsets[p][source]
                dst_off = offsets[p + 1][t_idx]
                for b_i, b in enumerate(bases[source]):
                    vec = mats[j_s].apply(list(b))
                    if sign < 0:
                        vec = [-e for e in vec]
                    if t_basis is None:
                        if any(vec):
                            raise ConstructionError("differential escapes zero summand")
                        continue
                    coords = linear_solve(t_basis, vec)
                    if coords is None:
                        raise ConstructionError("differential escapes the target summand")
                    for r_i, cval in enumerate(coords):
                        if cval:
                            d.data[dst_off + r_i][src_off + b_i] = (
                                d.data[dst_off + r_i][src_off + b_i] + cval
                            )
        diffs.append(d)

    for p in range(m - 1):
        if not (diffs[p + 1] * diffs[p]).is_zero():
            raise ConstructionError("d.d != 0: Koszul sign bookkeeping is broken")

    # weight filtration: summand J at level l is the image of W_{l+p}(V)
    gi = module.space.grade_indices()
    filtration: dict[tuple[int, int], tuple[tuple, ...]] = {}
    for p in range(m + 1):
        for level in range(-k - p, k - p + 1):
            pieces: list[tuple] = []
            for s in terms[p]:
                if not s.basis:
                    continue
                t_basis = Matrix.from_columns(list(s.basis), n)
                mat = products[s.indices]
                block_vecs = []
                for grade, idx in gi.items():
                    if grade <= level + p:
                        for i in idx:
                            col = mat.column(i)
                            if any(col):
                                block_vecs.append(col)
                reduced = echelon_basis(block_vecs)
                off = offsets[p][s.indices]
                for v in reduced:
                    coords = linear_solve(t_basis, list(v))
                    if coords is None:
                        raise ConstructionError("filtration piece escapes its summand")
                    full = [Fraction(0)] * dims[p]
                    for r_i, cval in enumerate(coords):
                        full[off + r_i] = cval
                    pieces.append(tuple(full))
            filtration[(p, level)] = tuple(echelon_basis(pieces))

    kc = KoszulComplex(module, m, tuple(terms), tuple(diffs), filtration)

    for p in range(m):
        for level in range(-k - p, k - p + 1):
            w_here = kc.filtration_basis(p, level)
            if not w_here:
                continue
            w_next = list(kc.filtration_basis(p + 1, level))
            base_rank = len(w_next)
            for v in w_here:
                moved = diffs[p].apply(list(v))
                if any(moved) and rank_of_vectors(w_next + [moved]) != base_rank:
                    raise ConstructionError("differential does not respect the filtration")
    return kc


@timed
def purity_check(kc: KoszulComplex) -> CheckReport:
    """Cohomology of the filtered complex must sit in weights <= 0.

    Computes H^p = ker d^p / im d^{p-1} with the subquotient filtration
    ((ker ∩ W_l) + im) / im and reports the graded dimensions; any class
    surviving in weight l > 0 is a failure with a witness vector.
    """
    rep = CheckReport("koszul-purity", "koszul-purity")
    m = kc.operator_count
    k = kc.module.weight
    graded: dict[str, int] = {}
    for p in range(m + 1):
        dim_p = kc.term_dim(p)
        if p < m:
            kern, _ = kernel_basis(kc.differentials[p])
            z = echelon_basis(kern)
        else:
            z = echelon_basis(
                [tuple(row) for row in Matrix.identity(dim_p).data]
            )
        if p > 0:
            d_prev = kc.differentials[p - 1]
            b = echelon_basis([d_prev.column(j) for j in range(d_prev.cols)])
        else:
            b = []
        h_dim = len(z) - len(b)

        w_dims: dict[int, int] = {}
        for level in range(-k - p, k - p + 1):
            w = kc.filtration_basis(p, level)
            inter = intersect_spaces(z, w, dim_p) if w else []
            w_dims[level] = len(echelon_basis(list(inter) + list(b))) - len(b)
        prev = 0
        for level in range(-k - p, k - p + 1):
            gr = w_dims[level] - prev
            prev = w_dims[level]
            if gr:
                graded[f"p={p},l={level}"] = gr

        top_ok = w_dims.get(0, 0) == h_dim if h_dim else True
        witness = None
        if not top_ok:
            w0 = kc.filtration_basis(p, 0)
            inter0 = intersect_spaces(z, w0, dim_p) if w0 else []
            low = echelon_basis(list(inter0) + list(b))
            base_rank = len(low)
            for zv in z:
                if rank_of_vectors(list(low) + [list(zv)]) > base_rank:
                    bad_level = next(
                        lev
                        for lev in range(-k - p, k - p + 1)
                        if w_dims[lev] == w_dims[k - p]
                    )
                    witness = {
                        "p": p,
                        "level": bad_level,
                        "class": _vector_witness(zv),
                    }
                    break
        rep.add(f"weight-bound[p={p}]", top_ok, witness)
        rep.data[f"h-dim[p={p}]"] = h_dim
    rep.data["graded-dims"] = graded
    return rep
