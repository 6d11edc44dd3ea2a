"""Exact rational linear programming.

A two-phase primal simplex over the rationals.  The entering variable is the
most negative reduced cost (lowest index on ties); after a run of degenerate
pivots the rule drops to Bland's lowest-index choice until the objective
moves again, so the solver keeps the speed of the classical rule and the
termination guarantee of Bland's.  Both rules are fixed and deterministic.
Arithmetic is fraction-free integer pivoting: the working tableau T is
integral with a scalar denominator delta (the previous pivot), the true
tableau is T/delta, and every pivot performs the exact update

    T'[i] = (T[r][c] * T[i] - T[i][c] * T[r]) / delta

whose divisions are exact by the standard subdeterminant argument.  Rows are
kept in numpy arrays (int64 while safe, arbitrary-precision objects once
entries grow), so the inner loop is vectorized either way.

Results are exact: optimal solutions are vertices (basic feasible
solutions), infeasibility comes with a Farkas certificate extracted from the
phase-1 duals and re-verified before being returned, unboundedness comes
with an explicit ray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import as_rational
from .errors import InputError, InvariantError

REL_LE = "<="
REL_EQ = "="
REL_GE = ">="
_RELS = (REL_LE, REL_EQ, REL_GE)

# int64 entries beyond this trigger promotion to Python-int (object) arrays;
# chosen so a pivot's intermediate products stay far below 2**63.
_INT64_SAFE = 1 << 30

# consecutive degenerate pivots tolerated before falling back to Bland's rule
_BLAND_AFTER = 32


@dataclass(frozen=True)
class Constraint:
    coeffs: dict[int, Fraction]
    rel: str
    rhs: Fraction


def constraint(coeffs: Mapping[int, object], rel: str, rhs) -> Constraint:
    if rel not in _RELS:
        raise InputError(f"constraint relation must be one of {_RELS}, got {rel!r}")
    cleaned = {}
    for j, v in coeffs.items():
        fv = as_rational(v)
        if fv != 0:
            cleaned[int(j)] = fv
    return Constraint(cleaned, rel, as_rational(rhs))


@dataclass
class LinearProgram:
    """min/max of a linear objective subject to linear constraints.

    Variables are indices 0..num_vars-1; those in `nonneg` carry an implicit
    x >= 0 bound, the rest are free.
    """

    num_vars: int
    constraints: list[Constraint]
    objective: dict[int, Fraction]
    sense: str = "min"
    nonneg: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise InputError(f"objective sense must be min or max, got {self.sense!r}")
        self.objective = {int(j): as_rational(v) for j, v in self.objective.items()}
        self.nonneg = frozenset(int(j) for j in self.nonneg)
        for c in self.constraints:
            bad = [j for j in c.coeffs if not (0 <= j < self.num_vars)]
            if bad:
                raise InputError(f"constraint references unknown variables {bad}")
        bad = [j for j in self.objective if not (0 <= j < self.num_vars)]
        if bad:
            raise InputError(f"objective references unknown variables {bad}")
        if any(not (0 <= j < self.num_vars) for j in self.nonneg):
            raise InputError("nonneg references unknown variables")


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    primal: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    certificate: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def _sign(v) -> int:
    return (v > 0) - (v < 0)


class _Tableau:
    """Integer tableau with scalar denominator; rows = constraints, last
    column = rhs.  Column layout: structural | slacks | artificials."""

    def __init__(self, rows: list[list[int]], n_struct_slack: int):
        self.m = len(rows)
        self.art0 = n_struct_slack
        width = n_struct_slack + self.m + 1
        big = any(abs(v) > _INT64_SAFE for row in rows for v in row)
        dtype = object if big else np.int64
        T = np.zeros((self.m, width), dtype=dtype)
        for i, row in enumerate(rows):
            for j, v in enumerate(row[:-1]):
                T[i, j] = v
            T[i, self.art0 + i] = 1
            T[i, width - 1] = row[-1]
        self.T = T
        self.obj = np.zeros(width, dtype=dtype)
        self.delta = 1
        self.basis = [self.art0 + i for i in range(self.m)]
        self.alive = [True] * self.m
        self.width = width

    # -- exact arithmetic helpers ------------------------------------------

    def _promote_if_needed(self, piv: int):
        if self.T.dtype == object:
            return
        mx = 0
        if self.m:
            mx = int(np.abs(self.T).max())
        mx = max(mx, int(np.abs(self.obj).max()) if self.width else 0, abs(piv))
        if mx > _INT64_SAFE:
            self.T = self.T.astype(object)
            self.obj = self.obj.astype(object)

    def true_sign(self, v) -> int:
        return _sign(v) * _sign(self.delta)

    def rhs(self, i) -> Fraction:
        return Fraction(int(self.T[i, -1]), self.delta)

    def pivot(self, r: int, c: int):
        piv = int(self.T[r, c])
        if piv == 0:
            raise InvariantError("pivot on a zero element")
        self._promote_if_needed(piv)
        T, d = self.T, self.delta
        col = T[:, c].copy()
        rowr = T[r].copy()
        upd = T * piv - np.outer(col, rowr)
        if T.dtype == np.int64:
            q, rem = np.divmod(upd, d)
            if rem.any():
                raise InvariantError("inexact division in integer pivoting")
        else:
            q = upd // d
            if (upd - q * d).any():
                raise InvariantError("inexact division in integer pivoting")
        q[r] = rowr
        self.T = q
        o = self.obj * piv - int(self.obj[c]) * rowr
        if o.dtype == np.int64:
            od, orem = np.divmod(o, d)
            if orem.any():
                raise InvariantError("inexact division in objective row update")
        else:
            od = o // d
            if (o - od * d).any():
                raise InvariantError("inexact division in objective row update")
        self.obj = od
        self.delta = piv
        self.basis[r] = c

    # -- simplex core -------------------------------------------------------

    def _entering(self, allowed_hi: int, bland: bool) -> int | None:
        sgn = _sign(self.delta)
        o = self.obj[:allowed_hi]
        neg = np.nonzero((o < 0) if sgn > 0 else (o > 0))[0]
        if not len(neg):
            return None
        if bland:
            return int(neg[0])
        vals = o[neg]
        pick = np.argmin(vals) if sgn > 0 else np.argmax(vals)
        return int(neg[pick])

    def _leaving(self, c: int) -> int | None:
        """Min-ratio row (Bland tie-break on basis index); None if no
        positive entry in the column among alive rows."""
        best = None  # (num, den, basis_var, row)
        sgn = _sign(self.delta)
        col = self.T[:, c]
        rhs = self.T[:, -1]
        for i in range(self.m):
            if not self.alive[i]:
                continue
            t = int(col[i])
            if t * sgn <= 0:
                continue
            num, den = int(rhs[i]), t  # ratio num/den, both scaled by delta
            if num * sgn < 0:
                raise InvariantError("negative rhs in feasible tableau")
            if best is None:
                best = (num, den, self.basis[i], i)
                continue
            bn, bd, bver, _ = best
            # num/den - bn/bd = (num*bd - bn*den)/(den*bd); den and bd carry
            # the sign of delta, so den*bd > 0 and the numerator decides.
            diff = num * bd - bn * den
            if diff < 0 or (diff == 0 and self.basis[i] < bver):
                best = (num, den, self.basis[i], i)
        return None if best is None else best[3]

    def run(self, allowed_hi: int) -> str:
        stall = 0
        bland = False
        while True:
            c = self._entering(allowed_hi, bland)
            if c is None:
                return "optimal"
            r = self._leaving(c)
            if r is None:
                self._unbounded_col = c
                return "unbounded"
            degenerate = int(self.T[r, -1]) == 0
            self.pivot(r, c)
            if degenerate:
                stall += 1
                bland = bland or stall >= _BLAND_AFTER
            else:
                stall = 0
                bland = False


def lp_solve(lp: LinearProgram, *, self_check: bool | None = None) -> LPResult:
    """Solve exactly.  Optimal results are vertices; Infeasible results carry
    a Farkas certificate that has already passed verify_farkas; Unbounded
    results carry an improving ray."""

    ncon = len(lp.constraints)

    # --- presolve: all-zero rows ------------------------------------------
    trivial_cert = [Fraction(0)] * ncon
    kept: list[int] = []
    for k, c in enumerate(lp.constraints):
        if c.coeffs:
            kept.append(k)
            continue
        if c.rel == REL_LE:
            ok = 0 <= c.rhs
        elif c.rel == REL_GE:
            ok = 0 >= c.rhs
        else:
            ok = c.rhs == 0
        if not ok:
            # equality rows may take either sign; pick the one that makes the
            # combined rhs positive (0 = rhs with rhs < 0 needs -1).
            trivial_cert[k] = Fraction(-1 if (c.rel == REL_EQ and c.rhs < 0) else 1)
            cert = tuple(trivial_cert)
            if not verify_farkas(lp, cert):
                raise InvariantError("trivial infeasibility certificate failed")
            return LPResult("infeasible", certificate=cert)

    # --- variable mapping: free vars split into two nonneg columns --------
    col_of: list[tuple[int, int] | tuple[int, int, int]] = []  #  var -> cols
    var_cols: list[tuple[int, int]] = []  # col -> (var, sign)
    for v in range(lp.num_vars):
        if v in lp.nonneg:
            col_of.append((len(var_cols),))
            var_cols.append((v, 1))
        else:
            col_of.append((len(var_cols), len(var_cols) + 1))
            var_cols.append((v, 1))
            var_cols.append((v, -1))
    n_struct = len(var_cols)

    # --- build integer rows: structural | slacks | rhs --------------------
    n_slack = sum(1 for k in kept if lp.constraints[k].rel != REL_EQ)
    rows: list[list[int]] = []
    scales: list[Fraction] = []  # original-row multiplier applied (sigma * s)
    slack_idx = 0
    for k in kept:
        con = lp.constraints[k]
        den = con.rhs.denominator
        for v in con.coeffs.values():
            den = _lcm(den, v.denominator)
        s = Fraction(den)
        row = [0] * (n_struct + n_slack + 1)
        for var, v in con.coeffs.items():
            sv = v * den
            for ci in col_of[var]:
                row[ci] = int(sv) * var_cols[ci][1]
        if con.rel != REL_EQ:
            row[n_struct + slack_idx] = den if con.rel == REL_LE else -den
            slack_idx += 1
        row[-1] = int(con.rhs * den)
        if row[-1] < 0:
            row = [-x for x in row]
            s = -s
        rows.append(row)
        scales.append(s)

    tab = _Tableau(rows, n_struct + n_slack)

    # --- phase 1: minimize sum of artificials ------------------------------
    # reduced costs: obj[j] = delta*c_j - sum_i c_B(i) T[i][j]; here delta=1,
    # c = 1 exactly on artificials, and the basis is all artificials.
    if tab.m:
        colsum = tab.T.sum(axis=0)
        tab.obj = -colsum
        for i in range(tab.m):
            tab.obj[tab.art0 + i] = 0
        tab.obj[-1] = 0
        status = tab.run(tab.art0)
        if status != "optimal":
            raise InvariantError("phase 1 cannot be unbounded")
        phase1_val = Fraction(0)
        for i in range(tab.m):
            if tab.basis[i] >= tab.art0:
                phase1_val += tab.rhs(i)
        if phase1_val > 0:
            cert = _farkas_from_phase1(lp, tab, kept, scales, ncon)
            if not verify_farkas(lp, cert):
                raise InvariantError("extracted Farkas certificate failed verification")
            return LPResult("infeasible", certificate=cert)
        # drive artificials out of the basis / drop redundant rows
        for i in range(tab.m):
            if tab.basis[i] < tab.art0:
                continue
            piv_col = None
            rowi = tab.T[i]
            for j in range(tab.art0):
                if int(rowi[j]) != 0:
                    piv_col = j
                    break
            if piv_col is None:
                tab.alive[i] = False
            else:
                tab.pivot(i, piv_col)

    # --- phase 2 ------------------------------------------------------------
    obj_den = 1
    for v in lp.objective.values():
        obj_den = _lcm(obj_den, v.denominator)
    flip = -1 if lp.sense == "max" else 1
    c_std = [0] * tab.width
    for var, v in lp.objective.items():
        iv = int(v * obj_den) * flip
        for ci in col_of[var]:
            c_std[ci] = iv * var_cols[ci][1]
    if any(c_std):
        # Guard the rebuild against int64 overflow: the accumulated row is
        # delta*c - sum_i c_B(i) T[i], bounded by B*|delta| + S*max|T|.
        if tab.T.dtype == np.int64:
            bound_c = max(abs(v) for v in c_std)
            s_basic = sum(
                abs(c_std[tab.basis[i]]) for i in range(tab.m) if tab.alive[i]
            )
            max_t = int(np.abs(tab.T).max()) if tab.m else 0
            if bound_c * abs(tab.delta) + s_basic * max_t >= 1 << 62:
                tab.T = tab.T.astype(object)
                tab.obj = tab.obj.astype(object)
        cvec = np.array(c_std, dtype=tab.T.dtype)
        newobj = cvec * tab.delta
        for i in range(tab.m):
            if tab.alive[i]:
                cb = c_std[tab.basis[i]]
                if cb:
                    newobj = newobj - cb * tab.T[i]
        tab.obj = newobj
    else:
        tab.obj = np.zeros(tab.width, dtype=tab.T.dtype)
    status = tab.run(tab.art0)

    if status == "unbounded":
        c = tab._unbounded_col
        ray_std = [Fraction(0)] * tab.art0
        ray_std[c] = Fraction(1)
        for i in range(tab.m):
            if tab.alive[i] and tab.basis[i] < tab.art0:
                ray_std[tab.basis[i]] = Fraction(-int(tab.T[i, c]), tab.delta)
        ray = [Fraction(0)] * lp.num_vars
        for ci in range(n_struct):
            var, sg = var_cols[ci]
            ray[var] += sg * ray_std[ci]
        return LPResult("unbounded", ray=tuple(ray))

    prim_std = [Fraction(0)] * tab.art0
    for i in range(tab.m):
        if tab.alive[i] and tab.basis[i] < tab.art0:
            prim_std[tab.basis[i]] = tab.rhs(i)
    primal = [Fraction(0)] * lp.num_vars
    for ci in range(n_struct):
        var, sg = var_cols[ci]
        primal[var] += sg * prim_std[ci]
    value = sum((v * primal[j] for j, v in lp.objective.items()), Fraction(0))

    if self_check is None:
        self_check = lp.num_vars * max(1, ncon) <= 200_000
    if self_check:
        _assert_feasible(lp, primal)

    return LPResult("optimal", primal=tuple(primal), value=value)


def _farkas_from_phase1(lp, tab, kept, scales, ncon) -> tuple[Fraction, ...]:
    cert = [Fraction(0)] * ncon
    for pos, k in enumerate(kept):
        # dual y_i = 1 - reduced_cost(artificial_i); certificate multiplier
        # for the >=-normalized original row is y * sigma*s * tau.
        r = Fraction(int(tab.obj[tab.art0 + pos]), tab.delta)
        y = 1 - r
        tau = -1 if lp.constraints[k].rel == REL_LE else 1
        cert[k] = y * scales[pos] * tau
    return tuple(cert)


def _assert_feasible(lp: LinearProgram, primal: Sequence[Fraction]):
    for j in lp.nonneg:
        if primal[j] < 0:
            raise InvariantError("optimal primal violates nonnegativity")
    for c in lp.constraints:
        lhs = sum((v * primal[j] for j, v in c.coeffs.items()), Fraction(0))
        ok = lhs <= c.rhs if c.rel == REL_LE else lhs >= c.rhs if c.rel == REL_GE else lhs == c.rhs
        if not ok:
            raise InvariantError("optimal primal violates a constraint")


def verify_farkas(lp: LinearProgram, certificate: Sequence[Fraction]) -> bool:
    """Check a certificate of infeasibility.

    Multipliers apply to the >=-normalized constraints (a <= row is negated
    first; = rows may take either sign).  The certified combination must have
    nonpositive coefficients on nonnegative variables, zero on free ones, and
    a positive combined right-hand side -- an unsatisfiable consequence.
    """
    if len(certificate) != len(lp.constraints):
        return False
    combo: dict[int, Fraction] = {}
    rhs = Fraction(0)
    for lam, con in zip(certificate, lp.constraints):
        lam = as_rational(lam)
        if lam == 0:
            continue
        if con.rel != REL_EQ and lam < 0:
            return False
        sg = -1 if con.rel == REL_LE else 1
        for j, v in con.coeffs.items():
            combo[j] = combo.get(j, Fraction(0)) + lam * sg * v
        rhs += lam * sg * con.rhs
    if rhs <= 0:
        return False
    for j, v in combo.items():
        if j in lp.nonneg:
            if v > 0:
                return False
        elif v != 0:
            return False
    return True
