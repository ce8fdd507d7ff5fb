"""Numeric materialization and verification of alignment plans.

Beam columns are monomials ``prod_c T_c ** alpha_c w_i``.  They are stored
normalized to unit max-magnitude together with the natural log of the
dropped scale, so large exponents cannot overflow.  Rank and alignment
checks are invariant to per-column scaling, so nothing is lost.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from .errors import OutOfRegionError, PreconditionError, SingularChannelError
from .plan import (column_budget, decode_sets, dof_fraction, make_plan,
                   original_constraint, verify_plan_symbolic)
from .rational import fmt, fmt_point, to_point

log = logging.getLogger(__name__)

RANK_TOL = 1e-6
ALIGN_TOL = 1e-10
DIAG_TOL = 1e-9
MAX_RETRIES = 3
EQUILIBRATION_SWEEPS = 20
_SEED_STEP = 0x9E3779B97F4A7C15


@dataclass(eq=False)
class Beams:
    """``V[k-1]`` is ``tau x |V_k|`` (unit max-norm columns); ``logscale[k-1]`` the scales."""

    V: list
    logscale: list
    index: list  # per transmitter: plan column -> position

    def scaled(self, k):
        """``V_k`` with true column scales restored (may overflow for huge exponents)."""
        return self.V[k - 1] * np.exp(self.logscale[k - 1])[None, :]


def plan_operators(plan, chan, dense_limit=ch.DENSE_LIMIT):
    """Diagonals of every ``T`` in ``plan.constraints`` (same order).

    Multi-antenna plans also return the off-diagonal residual of each block.
    """
    if not plan.multi:
        diags = [ch.assemble_T(chan, c.m, c.n, c.j).diag for c in plan.constraints]
        return diags, [0.0] * len(diags)
    cache = {}
    diags, residuals = [], []
    for c in plan.constraints:
        key = (c.m, c.n, c.p, c.j)
        if key not in cache:
            cache[key] = ch.multi_blocks(chan, c.m, c.n, c.p, c.j, dense_limit)
        d, r = cache[key]
        diags.append(d[c.q - 1])
        residuals.append(r[c.q - 1])
    return diags, residuals


class _Powers:
    """Normalized powers ``T**a`` with their log scales, built on demand."""

    def __init__(self, diag):
        self.vals = [np.ones_like(diag)]
        self.logs = [0.0]
        self.diag = diag

    def __getitem__(self, a):
        while len(self.vals) <= a:
            v = self.vals[-1] * self.diag
            s = np.max(np.abs(v))
            self.vals.append(v / s)
            self.logs.append(self.logs[-1] + np.log(s))
        return self.vals[a], self.logs[a]


def _monomial(w, factors):
    v = np.array(w, dtype=complex)
    logscale = 0.0
    for pw, a in factors:
        if a:
            f, lf = pw[a]
            v = v * f
            logscale += lf
            s = np.max(np.abs(v))
            v /= s
            logscale += np.log(s)
    s = np.max(np.abs(v))
    return v / s, logscale + np.log(s)


def build_beams(plan, chan, bases, operators=None):
    """Numeric beamforming matrices for every transmitter, columns in plan order."""
    if operators is None:
        operators = plan_operators(plan, chan)[0]
    powers = [_Powers(d) for d in operators]
    tau = plan.tau
    V, logscale, index = [], [], []
    if plan.multi:
        positions = {q: [pos for pos, c in enumerate(plan.constraints) if c.q == q]
                     for q in range(1, plan.spec.M + 1)}
    for cols in plan.columns:
        mat = np.empty((tau, len(cols)), dtype=complex)
        ls = np.empty(len(cols))
        for idx, col in enumerate(cols):
            if plan.multi:
                q, i, alpha = col
                factors = [(powers[pos], a) for pos, a in zip(positions[q], alpha)]
            else:
                i, alpha = col
                factors = [(powers[pos], a) for pos, a in enumerate(alpha)]
            mat[:, idx], ls[idx] = _monomial(bases[i], factors)
        V.append(mat)
        logscale.append(ls)
        index.append({col: idx for idx, col in enumerate(cols)})
    return Beams(V, logscale, index)


def _span_residual(basis, v):
    """Relative distance of ``v`` from the column span of ``basis``."""
    if basis.shape[1] == 0:
        return 1.0
    coef, *_ = np.linalg.lstsq(basis, v, rcond=None)
    return float(np.linalg.norm(basis @ coef - v) / np.linalg.norm(v))


def check_alignment_numeric(plan, chan, beams, operators=None):
    """Max residual per constraint of ``T v`` against the predicted column of ``V_m``.

    The predicted column is the same base vector with the constraint's
    exponent raised by one; the residual is the max-norm difference
    relative to that column.  Columns whose prediction is missing from the
    plan are scored by their relative distance from ``span(V_m)`` instead.
    """
    if operators is None:
        operators = plan_operators(plan, chan)[0]
    out = []
    for pos, c in enumerate(plan.constraints):
        if plan.multi:
            branch = [p for p, cc in enumerate(plan.constraints) if cc.q == c.q]
            slot = branch.index(pos)
        worst = 0.0
        Vn, Vm = beams.V[c.n - 1], beams.V[c.m - 1]
        for col, idx in beams.index[c.n - 1].items():
            if plan.multi:
                q, i, alpha = col
                if q != c.q:
                    continue
                bumped = (q, i, alpha[:slot] + (alpha[slot] + 1,) + alpha[slot + 1:])
            else:
                i, alpha = col
                bumped = (i, alpha[:pos] + (alpha[pos] + 1,) + alpha[pos + 1:])
            image = operators[pos] * Vn[:, idx]
            target = beams.index[c.m - 1].get(bumped)
            if target is None:
                res = _span_residual(Vm, image)
            else:
                shift = beams.logscale[c.n - 1][idx] - beams.logscale[c.m - 1][target]
                res = float(np.max(np.abs(image * np.exp(shift) - Vm[:, target])))
            worst = max(worst, res)
        out.append(worst)
    return out


def _normalized(A):
    norms = np.linalg.norm(A, axis=0)
    return A / np.where(norms == 0, 1.0, norms)


def equilibrate(A, sweeps=EQUILIBRATION_SWEEPS):
    """Alternate row and column 2-norm scaling, ending on unit-norm columns.

    Positive diagonal scaling on either side leaves the rank (and the rank
    of any column subset) unchanged.  Monomial beams vary by orders of
    magnitude from one time slot to the next, so without row scaling the
    smallest singular value mostly measures that spread.
    """
    A = np.array(A, dtype=complex)
    if A.size == 0:
        return A
    for _ in range(sweeps):
        rows = np.linalg.norm(A, axis=1, keepdims=True)
        A /= np.where(rows == 0, 1.0, rows)
        A = _normalized(A)
    return A


def _min_singular(A):
    if A.shape[1] == 0:
        return None
    return float(np.linalg.svd(equilibrate(A), compute_uv=False)[-1])


def check_tx_rank(beams, tau=None):
    """Smallest singular value of each equilibrated ``V_k`` (``None`` if empty)."""
    margins = []
    for k, V in enumerate(beams.V, start=1):
        rows = V.shape[0] if tau is None else tau
        if V.shape[1] > rows:
            raise PreconditionError(
                f"V_{k} has {V.shape[1]} columns but only {rows} rows")
        margins.append(_min_singular(V))
    return margins


def numeric_rank(A, tol=RANK_TOL):
    if A.shape[1] == 0:
        return 0
    s = np.linalg.svd(equilibrate(A), compute_uv=False)
    return int(np.sum(s > tol))


def _orth(A, tol):
    if A.shape[1] == 0:
        return A[:, :0]
    U, s, _ = np.linalg.svd(_normalized(A), full_matrices=False)
    return U[:, :int(np.sum(s > tol))]


@dataclass
class RxResult:
    """Separation outcome at one receiver.

    ``status`` is ``"ok"``, ``"rank"`` (margin below tolerance) or
    ``"precondition"`` (column budget or dimension exceeded).
    """

    receiver: int
    margin: object
    status: str
    columns: int = 0
    rows: int = 0
    signal_rank: object = None
    interference_rank: object = None
    detail: str = ""


def _images(plan, chan, beams, j, messages):
    if plan.multi:
        return [ch.apply_channel(chan, j, k, beams.V[k - 1], p)
                for k in messages for p in range(1, plan.spec.M + 1)]
    return [ch.apply_channel(chan, j, k, beams.V[k - 1]) for k in messages]


def _hstack(blocks, rows):
    return np.hstack(blocks) if blocks else np.zeros((rows, 0), dtype=complex)


def check_rx_separation(spec, plan, chan, beams, grouped=True, tol=RANK_TOL):
    """Signal/interference separation at every receiver.

    Single antenna: smallest singular value of the equilibrated
    ``[H_jm V_m for m decoded | H_j,delta V_delta]``.  Multi antenna: the
    joint matrix ``[S I]`` of signal and interference images is
    equilibrated, ``I`` is reduced to an orthonormal basis ``Q`` and the
    margin is the smallest singular value of ``S`` projected away from
    ``Q``; it is positive exactly when the signal columns are independent
    and ``rank([S I]) = rank(S) + rank(I)``.  ``spec`` is in plan space.
    """
    budget = {j: (used, avail) for j, used, avail in column_budget(spec, plan.ip, grouped)}
    rows = plan.tau * (spec.M if plan.multi else 1)
    results = []
    for j, (want, delta) in enumerate(decode_sets(spec, grouped), start=1):
        want = sorted(want)
        if j in budget:
            used, avail = budget[j]
            results.append(RxResult(j, None, "precondition", rows=rows, detail=(
                f"column budget violated: {used} > kappa*M = {avail}")))
            continue
        if not plan.multi:
            blocks = _images(plan, chan, beams, j, want + ([delta] if delta else []))
            Lam = _hstack(blocks, rows)
            if Lam.shape[1] > rows:
                results.append(RxResult(j, None, "precondition", Lam.shape[1], rows,
                                        detail="Lambda_j is wider than tall"))
                continue
            margin = _min_singular(Lam)
            ok = margin is None or margin > tol
            results.append(RxResult(j, margin, "ok" if ok else "rank", Lam.shape[1], rows))
            continue
        S = _hstack(_images(plan, chan, beams, j, want), rows)
        others = [k for k in range(1, spec.K + 1) if k not in set(want)]
        joint = equilibrate(np.hstack([S, _hstack(_images(plan, chan, beams, j, others), rows)]))
        Sn, In = joint[:, :S.shape[1]], joint[:, S.shape[1]:]
        Q = _orth(In, tol)
        r_s = int(np.sum(np.linalg.svd(Sn, compute_uv=False) > tol)) if S.shape[1] else 0
        if S.shape[1] + Q.shape[1] > rows:
            results.append(RxResult(j, None, "precondition", S.shape[1] + Q.shape[1], rows,
                                    r_s, Q.shape[1], "signal plus interference exceed M*tau"))
            continue
        P = Sn - Q @ (Q.conj().T @ Sn)
        margin = None if S.shape[1] == 0 else float(np.linalg.svd(P, compute_uv=False)[-1])
        ok = margin is None or margin > tol
        results.append(RxResult(j, margin, "ok" if ok else "rank", S.shape[1] + Q.shape[1],
                                rows, r_s, Q.shape[1]))
    return results


def interference_dimension(spec, plan, chan, beams, j, grouped=True, tol=RANK_TOL):
    """Numeric rank of all undesired images at receiver ``j`` (plan space)."""
    want, _ = decode_sets(spec, grouped)[j - 1]
    others = [k for k in range(1, spec.K + 1) if k not in want]
    rows = plan.tau * (spec.M if plan.multi else 1)
    return numeric_rank(_hstack(_images(plan, chan, beams, j, others), rows), tol)


def _clean(x, digits=12):
    if x is None:
        return None
    return float(f"{x:.{digits}g}")


@dataclass
class VerificationReport:
    spec: object
    point: tuple
    l: int
    seed: int
    grouped: bool
    mode: str
    symbolicPass: bool
    alignmentResiduals: list
    txRankMargins: list
    rxRankMargins: list
    diagResiduals: list
    dofFractions: list
    verdict: dict
    plan: object = field(default=None, repr=False)
    rx: list = field(default_factory=list, repr=False)

    @property
    def passed(self):
        return self.verdict["overall"]

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "point": fmt_point(self.point),
            "l": self.l,
            "seed": self.seed,
            "grouped": self.grouped,
            "mode": self.mode,
            "symbolicPass": self.symbolicPass,
            "alignmentResiduals": [{"constraint": c, "residual": _clean(r)}
                                   for c, r in self.alignmentResiduals],
            "txRankMargins": [_clean(m) for m in self.txRankMargins],
            "rxRankMargins": [_clean(m) for m in self.rxRankMargins],
            "diagResiduals": [{"constraint": c, "residual": _clean(r)}
                              for c, r in self.diagResiduals],
            "dofFractions": [fmt(f) for f in self.dofFractions],
            "verdict": self.verdict,
        }


def _fresh_seed(seed, attempt):
    return (seed + attempt * _SEED_STEP) % 2 ** 64


def run_verification(spec, point, l=1, seed=42, grouped=True, multi=None,
                     tol=RANK_TOL, align_tol=ALIGN_TOL, diag_tol=DIAG_TOL,
                     tau_cap=None, enforce_region=True, max_retries=MAX_RETRIES,
                     lo=ch.LO, hi=ch.HI):
    """Build the plan for ``point`` and run every symbolic and numeric check.

    With ``enforce_region`` (the default) an out-of-region point raises
    :class:`OutOfRegionError` before anything numeric happens; otherwise
    the pipeline runs and the receiver check reports the column-budget
    precondition failure.  ``lo`` and ``hi`` bound every channel and
    base-vector magnitude.
    """
    point = to_point(point)
    kwargs = {} if tau_cap is None else {"tau_cap": tau_cap}
    try:
        plan = make_plan(spec, point, l=l, grouped=grouped, multi=multi, **kwargs)
    except OutOfRegionError:
        if enforce_region:
            raise
        plan = make_plan(spec, point, l=l, grouped=grouped, multi=multi,
                         allow_outside=True, **kwargs)
    pspec, ip = plan.spec, plan.ip
    symbolic = verify_plan_symbolic(plan)

    retries = 0
    while True:
        used_seed = _fresh_seed(seed, retries)
        chan = ch.generate_channels(pspec, plan.tau, used_seed, lo, hi)
        try:
            operators, diag_res = plan_operators(plan, chan)
            break
        except SingularChannelError:
            if retries >= max_retries:
                raise
            retries += 1
            log.warning("singular stacked channel with seed %d; retrying", used_seed)
    count = ip.dbar[0] if ip.dbar else 0
    bases = ch.generate_base_vectors(plan.tau, count, used_seed, lo, hi)
    beams = build_beams(plan, chan, bases, operators)

    align = check_alignment_numeric(plan, chan, beams, operators)
    tx = check_tx_rank(beams, plan.tau)
    rx = check_rx_separation(pspec, plan, chan, beams, grouped, tol)

    cons = [original_constraint(c, ip) for c in plan.constraints]
    alignment_residuals = list(zip(cons, align))
    diag_residuals = list(zip(cons, diag_res)) if plan.multi else []
    preconditions = [{"receiver": r.receiver, "check": "column_budget"
                      if "budget" in r.detail else "dimension", "detail": r.detail}
                     for r in rx if r.status == "precondition"]
    verdict = {
        "symbolic": bool(symbolic),
        "alignment": all(r <= align_tol for r in align),
        "txRank": all(m is None or m > tol for m in tx),
        "rxSeparation": all(r.status == "ok" for r in rx),
        # blocks above the dense limit are not re-derived densely (residual None)
        "diagonal": all(r is None or r <= diag_tol for r in diag_res),
        "preconditions": preconditions,
        "channelRetries": retries,
    }
    verdict["overall"] = all(verdict[k] for k in
                             ("symbolic", "alignment", "txRank", "rxSeparation", "diagonal"))
    fractions = ip.to_original([dof_fraction(plan, k) for k in range(1, plan.K + 1)])
    return VerificationReport(
        spec=spec, point=point, l=l, seed=seed, grouped=grouped,
        mode="multi" if plan.multi else "single", symbolicPass=bool(symbolic),
        alignmentResiduals=alignment_residuals,
        txRankMargins=ip.to_original(tx),
        rxRankMargins=[r.margin for r in rx],
        diagResiduals=diag_residuals,
        dofFractions=fractions, verdict=verdict, plan=plan, rx=rx)
