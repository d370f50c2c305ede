"""The dynamical trigonometric R-matrix on C^2 (x) C^2.

Basis order (11, 12, 21, 22).  Entries are exact ``scalars.Scalar`` values;
the optional prefactor is the cocycle symbol, carried exactly (its two
branches cancel structurally, so unitarity closes without any series
manipulation).

The middle 2x2 block is

    [ b(u,P)     c(u,P)  ]        b  = q eta(P+1) eta(P-1) eta(u) / (eta(P)^2 eta(u+1))
    [ cbar(u,P)  bbar(u,P) ]      c  = eta(1) eta(P+u) / (eta(u+1) eta(P))
                                  cbar = q^2u eta(1) eta(P-u) / (eta(u+1) eta(P))
                                  bbar = q eta(u) / eta(u+1)

and both corners are 1 (times the prefactor).  As the dynamical exponential
goes to zero the matrix degenerates to the standard trigonometric one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .scalars import (
    AP, APH, ONE_AFF, U1, U2, U3,
    Aff, Scalar, aff, eta, q2, qk, rho_minus, rho_plus, scalar_eq,
)

# weight of the two basis states
WEIGHT = {1: 1, 2: -1}

BASIS: Tuple[Tuple[int, int], ...] = ((1, 1), (1, 2), (2, 1), (2, 2))
_BIDX = {p: i for i, p in enumerate(BASIS)}

Matrix4 = List[List[Scalar]]


# ---------------------------------------------------------------------------
# entries

def entry_b(u: Aff, dyn: Aff) -> Scalar:
    return (qk(1) * eta(dyn + ONE_AFF) * eta(dyn - ONE_AFF) * eta(u)
            / (eta(dyn) ** 2 * eta(u + ONE_AFF)))


def entry_c(u: Aff, dyn: Aff) -> Scalar:
    return eta(ONE_AFF) * eta(dyn + u) / (eta(u + ONE_AFF) * eta(dyn))


def entry_cbar(u: Aff, dyn: Aff) -> Scalar:
    return q2(u) * eta(ONE_AFF) * eta(dyn - u) / (eta(u + ONE_AFF) * eta(dyn))


def entry_bbar(u: Aff, dyn: Aff) -> Scalar:
    return qk(1) * eta(u) / eta(u + ONE_AFF)


def _core(u: Aff, dyn: Aff) -> Matrix4:
    z = Scalar.zero()
    one = Scalar.one()
    return [
        [one, z, z, z],
        [z, entry_b(u, dyn), entry_c(u, dyn), z],
        [z, entry_cbar(u, dyn), entry_bbar(u, dyn), z],
        [z, z, z, one],
    ]


def _core_inverse(u: Aff, dyn: Aff) -> Matrix4:
    """The explicit inverse of the core, transcribed as displayed."""
    z = Scalar.zero()
    one = Scalar.one()
    return [
        [one, z, z, z],
        [z,
         eta(u) / (qk(1) * eta(u - ONE_AFF)),
         -eta(ONE_AFF) * eta(dyn + u) / (qk(2) * eta(u - ONE_AFF) * eta(dyn)),
         z],
        [z,
         eta(ONE_AFF) * eta(dyn - u) / (eta(ONE_AFF - u) * eta(dyn)),
         eta(u) * eta(dyn - ONE_AFF) * eta(dyn + ONE_AFF)
         / (qk(1) * eta(u - ONE_AFF) * eta(dyn) ** 2),
         z],
        [z, z, z, one],
    ]


@dataclass
class RMatrix:
    """A built R-matrix: sign branch, spectral argument, dynamical variable
    ("P" or "Ph"), 4x4 entry array, and whether the prefactor is attached."""
    sign: str
    spectral: Aff
    dyn: str
    entries: Matrix4
    with_rho: bool

    def entry(self, row: Tuple[int, int], col: Tuple[int, int]) -> Scalar:
        return self.entries[_BIDX[row]][_BIDX[col]]

    def b(self) -> Scalar:
        return self.entry((1, 2), (1, 2))

    def c(self) -> Scalar:
        return self.entry((1, 2), (2, 1))

    def cbar(self) -> Scalar:
        return self.entry((2, 1), (1, 2))

    def bbar(self) -> Scalar:
        return self.entry((2, 1), (2, 1))


def _rho_symbol(sign: str, spectral: Aff) -> Scalar:
    if sign == "+":
        return rho_plus(spectral)
    if sign == "-":
        return rho_minus(spectral)
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def _dyn_aff(dyn: str) -> Aff:
    if dyn == "P":
        return AP
    if dyn == "Ph":
        return APH
    raise ValueError(f"dynamical variable must be 'P' or 'Ph', got {dyn!r}")


def _subs_matrix_dyn(m: Matrix4, dyn: str) -> Matrix4:
    _dyn_aff(dyn)  # validate the name
    if dyn == "P":
        return m
    return [[e if e.is_zero() else e.subs_x_to_y() for e in row] for row in m]


def build_r(sign: str, spectral: Aff, dyn: str = "P",
            with_rho: bool = True) -> RMatrix:
    """Construct the R-matrix for one sign branch.

    ``spectral`` is any affine exponent (may include the central charge),
    ``dyn`` selects which dynamical exponential the entries use.
    """
    core = _subs_matrix_dyn(_core(spectral, AP), dyn)
    if with_rho:
        pref = _rho_symbol(sign, spectral)
        core = [[e if e.is_zero() else pref * e for e in row] for row in core]
    return RMatrix(sign, spectral, dyn, core, with_rho)


def r_inverse(r: RMatrix) -> RMatrix:
    """The explicit printed inverse, with matching prefactor handling."""
    core = _subs_matrix_dyn(_core_inverse(r.spectral, AP), r.dyn)
    if r.with_rho:
        pref = _rho_symbol(r.sign, r.spectral).inverse()
        core = [[e if e.is_zero() else pref * e for e in row] for row in core]
    return RMatrix(r.sign, r.spectral, r.dyn, core, r.with_rho)


def swap_legs(r: RMatrix) -> RMatrix:
    """R_21 from R_12: entry((a,b),(c,d)) -> entry((b,a),(d,c))."""
    ent = [[r.entry((row[1], row[0]), (col[1], col[0]))
            for col in BASIS] for row in BASIS]
    return RMatrix(r.sign, r.spectral, r.dyn, ent, r.with_rho)


# ---------------------------------------------------------------------------
# generic matrix algebra over the scalar field

def mat_mul(a: Matrix4, b: Matrix4) -> Matrix4:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Scalar.zero()
            for k in range(n):
                if a[i][k].is_zero() or b[k][j].is_zero():
                    continue
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_identity(n: int = 4) -> Matrix4:
    return [[Scalar.one() if i == j else Scalar.zero() for j in range(n)]
            for i in range(n)]


def mat_eq(a: Matrix4, b: Matrix4, mode: str = "exact") -> bool:
    for ra, rb in zip(a, b):
        for ea, eb in zip(ra, rb):
            if not scalar_eq(ea, eb, mode=mode):
                return False
    return True


def mat_inverse_generic(m: Matrix4) -> Matrix4:
    """Gauss-Jordan over the scalar field (row pivoting on nonzero)."""
    n = len(m)
    a = [row[:] for row in m]
    inv = mat_identity(n)
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        lead = a[col][col].inverse()
        a[col] = [e * lead for e in a[col]]
        inv[col] = [e * lead for e in inv[col]]
        for r in range(n):
            if r == col or a[r][col].is_zero():
                continue
            f = a[r][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


# ---------------------------------------------------------------------------
# checks: inverse, unitarity, ice rule, determinant

def check_rr_inverse(mode: str = "exact") -> bool:
    """R times the explicit printed inverse is the identity (both orders)."""
    u = U1 - U2
    for sign in ("+", "-"):
        r = build_r(sign, u)
        ri = r_inverse(r)
        if not mat_eq(mat_mul(r.entries, ri.entries), mat_identity(), mode):
            return False
        if not mat_eq(mat_mul(ri.entries, r.entries), mat_identity(), mode):
            return False
    return True


def check_inverse_matches_generic(mode: str = "exact") -> bool:
    """The printed inverse equals the Gauss-Jordan inverse entrywise."""
    r = build_r("+", U1 - U2, with_rho=False)
    return mat_eq(mat_inverse_generic(r.entries),
                  r_inverse(RMatrix(r.sign, r.spectral, r.dyn, r.entries,
                                    False)).entries, mode)


def check_unitarity(mode: str = "exact", negative_control: bool = False)\
        -> bool:
    """Leg-swapped positive branch, inverted, equals the negative branch at
    negated argument.  The prefactors cancel structurally; with the control
    flag the argument negation is dropped, which must fail."""
    u = U1 - U2
    rswap = swap_legs(build_r("+", u))
    inv = mat_inverse_generic(rswap.entries)
    target = build_r("-", u if negative_control else -u)
    return mat_eq(inv, target.entries, mode)


def check_ice_rule(r: RMatrix) -> bool:
    """Weight conservation: entry ((a,b),(x,y)) vanishes unless
    w(a)+w(b) = w(x)+w(y)."""
    for row in BASIS:
        for col in BASIS:
            wr = WEIGHT[row[0]] + WEIGHT[row[1]]
            wc = WEIGHT[col[0]] + WEIGHT[col[1]]
            if wr != wc and not r.entry(row, col).is_zero():
                return False
    return True


def det_middle_direct(r: RMatrix) -> Scalar:
    return r.b() * r.bbar() - r.c() * r.cbar()


def det_middle_pivots(r: RMatrix) -> Scalar:
    """Same determinant as the product of Gaussian pivots."""
    return r.b() * (r.bbar() - r.cbar() * r.c() / r.b())


def check_det_middle(mode: str = "exact") -> bool:
    """Dual-route block determinant plus its closed form, which turns out
    to be free of the dynamical variable: q^2 eta(u-1)/eta(u+1)."""
    r = build_r("+", U1 - U2, with_rho=False)
    d1 = det_middle_direct(r)
    d2 = det_middle_pivots(r)
    if not scalar_eq(d1, d2, mode=mode):
        return False
    u = U1 - U2
    want = qk(2) * eta(u - ONE_AFF) / eta(u + ONE_AFF)
    return scalar_eq(d1, want, mode=mode)


# ---------------------------------------------------------------------------
# degeneration

def degenerate_nondynamical(r: RMatrix) -> Matrix4:
    """Entrywise limit as the dynamical exponential goes to zero; the
    prefactor is set to 1."""
    if r.dyn != "P":
        raise ValueError("degeneration is defined on the x-form")
    src = r.entries
    if r.with_rho:
        src = build_r(r.sign, r.spectral, r.dyn, with_rho=False).entries
    return [[e if e.is_zero() else e.limit_var_zero("x") for e in row]
            for row in src]


def nondynamical_reference(u: Aff) -> Matrix4:
    """The standard trigonometric matrix: middle block
    [[q eta(u)/eta(u+1), eta(1)/eta(u+1)],
     [q^2u eta(1)/eta(u+1), q eta(u)/eta(u+1)]]."""
    z = Scalar.zero()
    one = Scalar.one()
    bq = qk(1) * eta(u) / eta(u + ONE_AFF)
    cq = eta(ONE_AFF) / eta(u + ONE_AFF)
    cqbar = q2(u) * eta(ONE_AFF) / eta(u + ONE_AFF)
    return [
        [one, z, z, z],
        [z, bq, cq, z],
        [z, cqbar, bq, z],
        [z, z, z, one],
    ]


def check_nondynamical_limit(mode: str = "exact") -> bool:
    r = build_r("+", U1 - U2)
    return mat_eq(degenerate_nondynamical(r), nondynamical_reference(U1 - U2),
                  mode)


# ---------------------------------------------------------------------------
# the dynamical Yang-Baxter equation on three legs

Sparse8 = Dict[Tuple[int, int, int], Dict[Tuple[int, int, int], Scalar]]

_TRIPLES = tuple(product((1, 2), repeat=3))


def _leg_matrix(legs: Tuple[int, int], spectral: Aff, shift_leg: Optional[int],
                core: Matrix4) -> Sparse8:
    """Embed a 4x4 core acting on two of three legs, optionally shifting the
    dynamical variable by the weight of the spectator leg's index."""
    i, j = legs
    spectator = ({1, 2, 3} - {i, j}).pop()
    if shift_leg is not None and shift_leg != spectator:
        raise ValueError("only the spectator leg can shift the argument")
    out: Sparse8 = {}
    for row in _TRIPLES:
        r2 = (row[i - 1], row[j - 1])
        cols: Dict[Tuple[int, int, int], Scalar] = {}
        for col in _TRIPLES:
            if col[spectator - 1] != row[spectator - 1]:
                continue
            c2 = (col[i - 1], col[j - 1])
            e = core[_BIDX[r2]][_BIDX[c2]]
            if e.is_zero():
                continue
            if shift_leg is not None:
                e = e.shift(WEIGHT[row[shift_leg - 1]], 0)
            cols[col] = e
        out[row] = cols
    return out


def _sparse_mul(a: Sparse8, b: Sparse8) -> Sparse8:
    out: Sparse8 = {}
    for row, acols in a.items():
        acc: Dict[Tuple[int, int, int], Scalar] = {}
        for mid, av in acols.items():
            for col, bv in b.get(mid, {}).items():
                prev = acc.get(col)
                term = av * bv
                acc[col] = term if prev is None else prev + term
        out[row] = {c: v for c, v in acc.items() if not v.is_zero()}
    return out


def _sparse_eq(a: Sparse8, b: Sparse8, mode: str) -> bool:
    for row in _TRIPLES:
        ar, br = a.get(row, {}), b.get(row, {})
        for col in set(ar) | set(br):
            av = ar.get(col, Scalar.zero())
            bv = br.get(col, Scalar.zero())
            if not scalar_eq(av, bv, mode=mode):
                return False
    return True


# convention: shift legs for the factors (L12, L13, L23, R23, R13, R12);
# None means no shift.  The standard face-type convention shifts the first
# left factor by leg 3, the last left factor by leg 1, and the middle right
# factor by leg 2.
Convention = Tuple[Optional[int], Optional[int], Optional[int],
                   Optional[int], Optional[int], Optional[int]]

STANDARD_CONVENTION: Convention = (3, None, 1, None, 2, None)
NOSHIFT_CONVENTION: Convention = (None, None, None, None, None, None)


def _dqybe_sides(convention: Convention, cores: Dict[Tuple[int, int], Matrix4])\
        -> Tuple[Sparse8, Sparse8]:
    l12, l13, l23, r23, r13, r12 = convention
    lhs = _sparse_mul(
        _sparse_mul(_leg_matrix((1, 2), U1 - U2, l12, cores[(1, 2)]),
                    _leg_matrix((1, 3), U1 - U3, l13, cores[(1, 3)])),
        _leg_matrix((2, 3), U2 - U3, l23, cores[(2, 3)]))
    rhs = _sparse_mul(
        _sparse_mul(_leg_matrix((2, 3), U2 - U3, r23, cores[(2, 3)]),
                    _leg_matrix((1, 3), U1 - U3, r13, cores[(1, 3)])),
        _leg_matrix((1, 2), U1 - U2, r12, cores[(1, 2)]))
    return lhs, rhs


def _dqybe_cores(degenerate: bool) -> Dict[Tuple[int, int], Matrix4]:
    cores = {}
    for legs, arg in (((1, 2), U1 - U2), ((1, 3), U1 - U3), ((2, 3), U2 - U3)):
        r = build_r("+", arg, with_rho=False)
        cores[legs] = degenerate_nondynamical(r) if degenerate else r.entries
    return cores


def check_dqybe(convention: Convention = STANDARD_CONVENTION,
                degenerate: bool = False, mode: str = "rand") -> bool:
    """Three-leg compatibility under a given shift convention.

    With the standard convention and the dynamical matrix this is the
    dynamical Yang-Baxter equation; with no shifts it only holds for the
    degenerate (dynamical-free) matrix.
    """
    lhs, rhs = _dqybe_sides(convention, _dqybe_cores(degenerate))
    return _sparse_eq(lhs, rhs, mode)


def scan_dqybe_conventions(mode: str = "rand") -> List[Convention]:
    """Try all 64 spectator-shift on/off patterns; return those that pass."""
    cores = _dqybe_cores(False)
    passing = []
    for bits in product((False, True), repeat=6):
        conv: Convention = (3 if bits[0] else None, 2 if bits[1] else None,
                            1 if bits[2] else None, 1 if bits[3] else None,
                            2 if bits[4] else None, 3 if bits[5] else None)
        lhs, rhs = _dqybe_sides(conv, cores)
        if _sparse_eq(lhs, rhs, mode):
            passing.append(conv)
    return passing


# ---------------------------------------------------------------------------
# suite entry point

RMATRIX_CHECKS = {
    "r-times-inverse": lambda mode: check_rr_inverse(mode),
    "inverse-generic-route": lambda mode: check_inverse_matches_generic(mode),
    "unitarity": lambda mode: check_unitarity(mode),
    "unitarity-wrong-sign": lambda mode: not check_unitarity(
        mode, negative_control=True),
    "ice-rule": lambda mode: check_ice_rule(build_r("+", U1 - U2)),
    "det-middle-block": lambda mode: check_det_middle(mode),
    "nondynamical-limit": lambda mode: check_nondynamical_limit(mode),
    "dqybe-standard": lambda mode: check_dqybe(mode=mode),
    "dqybe-noshift-dynamical": lambda mode: not check_dqybe(
        NOSHIFT_CONVENTION, mode=mode),
    "dqybe-noshift-degenerate": lambda mode: check_dqybe(
        NOSHIFT_CONVENTION, degenerate=True, mode=mode),
}


def verify_rmatrix_identity(name: str, mode: str = "exact") -> bool:
    return RMATRIX_CHECKS[name](mode)
