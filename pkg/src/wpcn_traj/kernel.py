"""Small dense structured convex solver for the per-iteration subproblems.

One log-barrier Newton engine covers both subproblem shapes the alternating
solvers emit: linear programs (epigraph max-min time allocation) and smooth
concave programs whose curvature comes from logarithmic rate terms plus convex
quadratic geometry constraints.  Instances stay small (tens to a few hundred
variables), so dense factorizations are adequate, and everything is
deterministic: identical problem and start give bit-identical outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import cho_factor, cho_solve, null_space


class Status(Enum):
    OPTIMAL = "optimal"
    MAX_ITER = "max_iter"
    INFEASIBLE = "infeasible"


class StartInfeasible(RuntimeError):
    """The supplied start point is not strictly feasible."""


@dataclass
class KernelOptions:
    mu: float = 10.0              # barrier parameter growth per stage
    armijo: float = 0.25          # sufficient-decrease fraction
    backtrack: float = 0.5        # step shrink factor
    gap_abs: float = 1e-9
    gap_rel: float = 1e-9
    newton_tol: float = 1e-8      # half squared Newton decrement
    max_stage_steps: int = 100
    max_stages: int = 64


@dataclass(frozen=True)
class SolveOutcome:
    x: np.ndarray
    objective: float
    status: Status
    iterations: int
    residuals: dict


# ---------------------------------------------------------------------------
# Structured expression pieces
# ---------------------------------------------------------------------------

@dataclass
class LogGroup:
    """sum_j w_j * ln(off_j + C[j] . x[idx[j]]) with w_j > 0."""

    idx: np.ndarray      # (J, k) int
    coeffs: np.ndarray   # (J, k)
    offsets: np.ndarray  # (J,)
    weights: np.ndarray  # (J,)

    def __post_init__(self):
        self.idx = np.atleast_2d(np.asarray(self.idx, dtype=int))
        self.coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        self.offsets = np.asarray(self.offsets, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(self.weights <= 0.0):
            raise ValueError("log weights must be positive")

    def args(self, x: np.ndarray) -> np.ndarray:
        return self.offsets + np.einsum("jk,jk->j", self.coeffs, x[self.idx])

    def value(self, x: np.ndarray) -> float:
        v = self.args(x)
        if np.any(v <= 0.0):
            return -np.inf
        return float((self.weights * np.log(v)).sum())

    def add_grad(self, x: np.ndarray, out: np.ndarray) -> None:
        v = self.args(x)
        coef = self.weights / v
        np.add.at(out, self.idx, coef[:, None] * self.coeffs)

    def add_curvature(self, x: np.ndarray, H: np.ndarray, coef: float) -> None:
        """H += coef * (-d2/dx2 of this group), PSD for coef > 0."""
        v = self.args(x)
        w = coef * self.weights / v**2
        block = w[:, None, None] * self.coeffs[:, :, None] * self.coeffs[:, None, :]
        np.add.at(H, (self.idx[:, :, None], self.idx[:, None, :]), block)


@dataclass
class NegLogGroup:
    """sum_j -w_j * ln(base_j + scale_j / v_j),  v_j = off_j + C[j] . x[idx[j]].

    Concave and increasing in each v_j for v_j > 0 (base > 0, scale >= 0);
    the standard interference-rate term of the trajectory surrogates.
    """

    idx: np.ndarray
    coeffs: np.ndarray
    offsets: np.ndarray
    weights: np.ndarray
    bases: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        self.idx = np.atleast_2d(np.asarray(self.idx, dtype=int))
        self.coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        self.offsets = np.asarray(self.offsets, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.bases = np.asarray(self.bases, dtype=float)
        self.scales = np.asarray(self.scales, dtype=float)
        if np.any(self.weights <= 0.0) or np.any(self.bases <= 0.0) or np.any(self.scales < 0.0):
            raise ValueError("need weights > 0, bases > 0, scales >= 0")

    def args(self, x: np.ndarray) -> np.ndarray:
        return self.offsets + np.einsum("jk,jk->j", self.coeffs, x[self.idx])

    def value(self, x: np.ndarray) -> float:
        v = self.args(x)
        if np.any(v <= 0.0):
            return -np.inf
        return float(-(self.weights * np.log(self.bases + self.scales / v)).sum())

    def add_grad(self, x: np.ndarray, out: np.ndarray) -> None:
        v = self.args(x)
        p = self.bases * v**2 + self.scales * v
        coef = self.weights * self.scales / p
        np.add.at(out, self.idx, coef[:, None] * self.coeffs)

    def add_curvature(self, x: np.ndarray, H: np.ndarray, coef: float) -> None:
        v = self.args(x)
        p = self.bases * v**2 + self.scales * v
        t2 = self.weights * self.scales * (2.0 * self.bases * v + self.scales) / p**2
        w = coef * t2
        block = w[:, None, None] * self.coeffs[:, :, None] * self.coeffs[:, None, :]
        np.add.at(H, (self.idx[:, :, None], self.idx[:, None, :]), block)


@dataclass
class ConcaveRow:
    """Concave row F(x) >= 0 with
    F = const + lin.x - 0.5 x'diag(dneg)x + sum(logs) + sum(neglogs)."""

    n: int
    const: float = 0.0
    lin: np.ndarray | None = None
    diag_neg: np.ndarray | None = None   # entries >= 0
    logs: tuple = ()
    neglogs: tuple = ()

    def value(self, x: np.ndarray) -> float:
        v = self.const
        if self.lin is not None:
            v += float(self.lin @ x)
        if self.diag_neg is not None:
            v -= 0.5 * float(self.diag_neg @ (x * x))
        for grp in self.logs:
            v += grp.value(x)
        for grp in self.neglogs:
            v += grp.value(x)
        return v  # -inf on domain violation

    def grad_neg(self, x: np.ndarray) -> np.ndarray:
        """Gradient of g = -F (the <= 0 form)."""
        gF = np.zeros(self.n)
        if self.lin is not None:
            gF += self.lin
        if self.diag_neg is not None:
            gF -= self.diag_neg * x
        for grp in self.logs:
            grp.add_grad(x, gF)
        for grp in self.neglogs:
            grp.add_grad(x, gF)
        return -gF

    def add_curvature(self, x: np.ndarray, H: np.ndarray, coef: float) -> None:
        """H += coef * (d2 of -F), which is PSD."""
        if self.diag_neg is not None:
            H[np.diag_indices_from(H)] += coef * self.diag_neg
        for grp in self.logs:
            grp.add_curvature(x, H, coef)
        for grp in self.neglogs:
            grp.add_curvature(x, H, coef)


_PAIR_P = 2.0 * np.block([[np.eye(2), -np.eye(2)], [-np.eye(2), np.eye(2)]])


class Problem:
    """Maximize c.x + const over affine, convex-quadratic and concave-form rows.

    Quadratic rows are either diagonal (0.5 x'diag(d)x + lin.x + c <= 0) or
    squared pair differences (||x[a] - x[b]||^2 + c <= 0); both batch cleanly.
    """

    def __init__(self, n: int, c, const: float = 0.0):
        self.n = n
        self.c = np.zeros(n) if c is None else np.asarray(c, dtype=float)
        self.const = const
        self._aff_rows: list = []
        self._aff_rhs: list = []
        self._diag_rows: list = []   # (diag, lin, const)
        self._pair_rows: list = []   # (idx4, const)
        self.conc_rows: list[ConcaveRow] = []
        self._compiled = None
        self._gbuf = None

    # -- construction -------------------------------------------------------
    def add_affine(self, a, b) -> None:
        """Add rows a.x <= b."""
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        for row, rhs in zip(a, b):
            self._aff_rows.append(row)
            self._aff_rhs.append(float(rhs))
        self._compiled = None

    def add_quad(self, diag=None, blocks=(), lin=None, const: float = 0.0) -> None:
        """Add one convex quadratic row; `blocks` must follow the squared
        pair-difference pattern used by the speed constraints."""
        if blocks:
            if diag is not None or lin is not None or len(blocks) != 1:
                raise ValueError("unsupported quadratic row shape")
            idx, P = blocks[0]
            if not np.allclose(P, _PAIR_P):
                raise ValueError("unsupported quadratic block pattern")
            self._pair_rows.append((np.asarray(idx, dtype=int), float(const)))
        else:
            d = np.zeros(self.n) if diag is None else np.asarray(diag, dtype=float)
            l = np.zeros(self.n) if lin is None else np.asarray(lin, dtype=float)
            self._diag_rows.append((d, l, float(const)))
        self._compiled = None

    def add_concave_ge(self, **kw) -> None:
        self.conc_rows.append(ConcaveRow(n=self.n, **kw))
        self._compiled = None

    # -- compiled evaluation --------------------------------------------------
    @property
    def num_rows(self) -> int:
        return (len(self._aff_rows) + len(self._diag_rows) + len(self._pair_rows)
                + len(self.conc_rows))

    def _parts(self):
        if self._compiled is None:
            self._gbuf = None
            A = np.vstack(self._aff_rows) if self._aff_rows else np.zeros((0, self.n))
            b = np.asarray(self._aff_rhs) if self._aff_rhs else np.zeros(0)
            if self._diag_rows:
                D = np.stack([r[0] for r in self._diag_rows])
                L = np.stack([r[1] for r in self._diag_rows])
                dc = np.array([r[2] for r in self._diag_rows])
            else:
                D = np.zeros((0, self.n))
                L = np.zeros((0, self.n))
                dc = np.zeros(0)
            if self._pair_rows:
                PI = np.stack([r[0] for r in self._pair_rows])  # (r, 4)
                pc = np.array([r[1] for r in self._pair_rows])
            else:
                PI = np.zeros((0, 4), dtype=int)
                pc = np.zeros(0)
            self._compiled = (A, b, D, L, dc, PI, pc)
        return self._compiled

    def slacks(self, x: np.ndarray) -> np.ndarray:
        """All row slacks (-g_i); any non-positive entry means infeasible.
        Order: affine, diagonal-quadratic, pair-quadratic, concave."""
        A, b, D, L, dc, PI, pc = self._parts()
        parts = [b - A @ x]
        parts.append(-(0.5 * (D @ (x * x)) + L @ x + dc))
        if PI.shape[0]:
            diff = x[PI[:, :2]] - x[PI[:, 2:]]
            parts.append(-((diff**2).sum(axis=1) + pc))
        else:
            parts.append(np.zeros(0))
        parts.append(np.array([row.value(x) for row in self.conc_rows]))
        return np.concatenate(parts)

    def row_grads(self, x: np.ndarray) -> np.ndarray:
        A, b, D, L, dc, PI, pc = self._parts()
        if self._gbuf is None or self._gbuf.shape != (self.num_rows, self.n):
            self._gbuf = np.zeros((self.num_rows, self.n))
            self._gbuf[:A.shape[0]] = A
        G = self._gbuf
        off = A.shape[0]
        nd = D.shape[0]
        if nd:
            np.multiply(D, x[None, :], out=G[off:off + nd])
            G[off:off + nd] += L
        off += nd
        if PI.shape[0]:
            blk = G[off:off + PI.shape[0]]
            blk[:] = 0.0
            diff = 2.0 * (x[PI[:, :2]] - x[PI[:, 2:]])
            rows = np.arange(PI.shape[0])[:, None]
            np.add.at(blk, (rows, PI[:, :2]), diff)
            np.add.at(blk, (rows, PI[:, 2:]), -diff)
            off += PI.shape[0]
        for i, row in enumerate(self.conc_rows):
            G[off + i] = row.grad_neg(x)
        return G

    def add_row_curvatures(self, x: np.ndarray, H: np.ndarray, inv_s: np.ndarray) -> None:
        A, b, D, L, dc, PI, pc = self._parts()
        off = A.shape[0]
        nd = D.shape[0]
        if nd:
            H[np.diag_indices_from(H)] += inv_s[off:off + nd] @ D
        off += nd
        npair = PI.shape[0]
        if npair:
            w = 2.0 * inv_s[off:off + npair]
            for c in range(2):
                a_i, b_i = PI[:, c], PI[:, 2 + c]
                np.add.at(H, (a_i, a_i), w)
                np.add.at(H, (b_i, b_i), w)
                np.add.at(H, (a_i, b_i), -w)
                np.add.at(H, (b_i, a_i), -w)
        off += npair
        for i, row in enumerate(self.conc_rows):
            row.add_curvature(x, H, inv_s[off + i])

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ x) + self.const


# ---------------------------------------------------------------------------
# Barrier engine
# ---------------------------------------------------------------------------

def _solve_spd(H: np.ndarray, g: np.ndarray) -> np.ndarray:
    # Jacobi equilibration keeps the factorization well-scaled; the barrier
    # Hessian mixes position, slack and epigraph blocks of wildly different
    # magnitudes.
    d = np.sqrt(np.maximum(H.diagonal(), 1e-300))
    inv_d = 1.0 / d
    Hs = H * inv_d[:, None] * inv_d[None, :]
    gs = g * inv_d
    damp = 0.0
    for _ in range(40):
        try:
            M = Hs if damp == 0.0 else Hs + damp * np.eye(Hs.shape[0])
            cf = cho_factor(M, lower=True, check_finite=False)
            return cho_solve(cf, gs, check_finite=False) * inv_d
        except np.linalg.LinAlgError:
            damp = 1e-12 if damp == 0.0 else damp * 10.0
    raise np.linalg.LinAlgError("barrier Hessian could not be factorized")


def solve_concave(problem: Problem, start, options: KernelOptions | None = None,
                  stop_when=None) -> SolveOutcome:
    """Log-barrier maximization from a strictly feasible start.

    Raises StartInfeasible if any row slack at the start is non-positive.
    With stop_when given, the stage loop exits early once it returns True at
    the current iterate (used by the phase-1 feasibility search).
    """
    opts = options or KernelOptions()
    x = np.asarray(start, dtype=float).copy()
    if x.shape != (problem.n,):
        raise ValueError(f"start must have shape ({problem.n},)")
    s0 = problem.slacks(x)
    if s0.size and s0.min() <= 0.0:
        raise StartInfeasible(f"start violates {int((s0 <= 0).sum())} row(s); "
                              f"worst slack {s0.min():.3e}")
    m = problem.num_rows
    if m == 0:
        return SolveOutcome(x, problem.objective(x), Status.OPTIMAL, 0,
                            {"feasibility": 0.0, "gap": 0.0, "stationarity": 0.0,
                             "dual_bound": problem.objective(x)})

    cnorm = float(np.linalg.norm(problem.c))
    pure_center = cnorm == 0.0
    # Start with the barrier term dominant (objective weight O(1) per unit of
    # gradient) so the first centering is cheap even from near the boundary.
    t = 1.0 if pure_center else 1.0 / max(1.0, cnorm)

    def center(t: float, x: np.ndarray, tol: float, steps: int):
        count = 0
        for _it in range(opts.max_stage_steps if steps is None else steps):
            s = problem.slacks(x)
            G = problem.row_grads(x)
            inv_s = 1.0 / s
            grad = -t * problem.c + G.T @ inv_s
            Gs = G * inv_s[:, None]
            H = Gs.T @ Gs
            problem.add_row_curvatures(x, H, inv_s)
            d = _solve_spd(H, -grad)
            lam2 = float(-grad @ d)
            count += 1
            if lam2 / 2.0 <= tol:
                break
            # First-order cap on the step keeps most trials inside the domain.
            gd_rows = G @ d
            pos = gd_rows > 0.0
            alpha = 1.0
            if pos.any():
                alpha = min(1.0, 0.99 * float((s[pos] / gd_rows[pos]).min()))
            f0 = -t * float(problem.c @ x) - float(np.log(s).sum())
            gd = float(grad @ d)

            def psi(xx: np.ndarray) -> float:
                ss = problem.slacks(xx)
                if ss.min() <= 0.0:
                    return np.inf
                return -t * float(problem.c @ xx) - float(np.log(ss).sum())

            while psi(x + alpha * d) > f0 + opts.armijo * alpha * gd:
                alpha *= opts.backtrack
                if alpha < 1e-16:
                    break
            if alpha < 1e-16:
                break
            x = x + alpha * d
        return x, count

    total_steps = 0
    gap = np.inf
    # Intermediate stages are centered loosely (long-step style); the final
    # stage is polished to the tight Newton tolerance.
    loose = max(1e-6, opts.newton_tol)
    for _stage in range(opts.max_stages):
        gap = m / t
        obj = problem.objective(x)
        last = pure_center or gap <= opts.gap_abs + opts.gap_rel * abs(obj)
        x, took = center(t, x, opts.newton_tol if last else loose, None)
        total_steps += took
        if stop_when is not None and stop_when(x):
            break
        obj = problem.objective(x)
        gap = m / t
        if pure_center or gap <= opts.gap_abs + opts.gap_rel * abs(obj):
            gap = 0.0 if pure_center else gap
            break
        t *= opts.mu
    obj = problem.objective(x)
    converged = pure_center or gap <= opts.gap_abs + opts.gap_rel * abs(obj) or (
        stop_when is not None and stop_when(x))
    s = problem.slacks(x)
    G = problem.row_grads(x)
    stationarity = float(np.abs(-problem.c + (G.T @ (1.0 / s)) / t).max())
    return SolveOutcome(
        x=x,
        objective=obj,
        status=Status.OPTIMAL if converged else Status.MAX_ITER,
        iterations=total_steps,
        residuals={
            "feasibility": max(0.0, float(-s.min())),
            "gap": gap,
            "stationarity": stationarity,
            "dual_bound": obj + gap,
        },
    )


# ---------------------------------------------------------------------------
# Linear programs
# ---------------------------------------------------------------------------

@dataclass
class LinearProgram:
    """Maximize c.x subject to a_ub x <= b_ub, a_eq x = b_eq, lb <= x <= ub."""

    c: np.ndarray
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    lb: np.ndarray | None = None
    ub: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)


def _lp_rows(lp: LinearProgram, n: int):
    rows, rhs = [], []
    if lp.a_ub is not None:
        A = np.atleast_2d(np.asarray(lp.a_ub, dtype=float))
        rows.append(A)
        rhs.append(np.atleast_1d(np.asarray(lp.b_ub, dtype=float)))
    if lp.lb is not None:
        lb = np.broadcast_to(np.asarray(lp.lb, dtype=float), (n,))
        fin = np.isfinite(lb)
        if fin.any():
            rows.append(-np.eye(n)[fin])
            rhs.append(-lb[fin])
    if lp.ub is not None:
        ub = np.broadcast_to(np.asarray(lp.ub, dtype=float), (n,))
        fin = np.isfinite(ub)
        if fin.any():
            rows.append(np.eye(n)[fin])
            rhs.append(ub[fin])
    if rows:
        return np.vstack(rows), np.concatenate(rhs)
    return np.zeros((0, n)), np.zeros(0)


def solve_lp(lp: LinearProgram, options: KernelOptions | None = None) -> SolveOutcome:
    """Barrier LP solve with an internal phase-1 feasibility search.

    Equality rows are eliminated through their null space.  Infeasibility is
    certified when the minimized worst violation stays positive beyond its
    duality gap.
    """
    opts = options or KernelOptions()
    n = lp.c.shape[0]
    A, b = _lp_rows(lp, n)

    x_part = np.zeros(n)
    basis = None
    if lp.a_eq is not None and np.size(lp.a_eq):
        Aeq = np.atleast_2d(np.asarray(lp.a_eq, dtype=float))
        beq = np.atleast_1d(np.asarray(lp.b_eq, dtype=float))
        x_part, *_ = np.linalg.lstsq(Aeq, beq, rcond=None)
        if np.abs(Aeq @ x_part - beq).max() > 1e-8 * (1.0 + np.abs(beq).max()):
            return SolveOutcome(x_part, np.nan, Status.INFEASIBLE, 0,
                                {"feasibility": np.inf, "gap": np.inf,
                                 "stationarity": np.inf, "dual_bound": np.nan})
        basis = null_space(Aeq)
        if basis.shape[1] == 0:
            viol = float((A @ x_part - b).max()) if b.size else 0.0
            ok = viol <= 1e-8 * (1.0 + (np.abs(b).max() if b.size else 1.0))
            return SolveOutcome(x_part, float(lp.c @ x_part),
                                Status.OPTIMAL if ok else Status.INFEASIBLE, 0,
                                {"feasibility": max(0.0, viol), "gap": 0.0,
                                 "stationarity": 0.0, "dual_bound": float(lp.c @ x_part)})
        A_r = A @ basis
        b_r = b - A @ x_part
        c_r = basis.T @ lp.c
    else:
        A_r, b_r, c_r = A, b, lp.c

    nr = c_r.shape[0]
    scale = 1.0 + (np.abs(b_r).max() if b_r.size else 0.0)

    # Phase 1: minimize the worst violation s over (z, s) in a big box.
    box = 1e8
    p1 = Problem(nr + 1, np.concatenate([np.zeros(nr), [-1.0]]))
    if b_r.size:
        p1.add_affine(np.hstack([A_r, -np.ones((A_r.shape[0], 1))]), b_r)
    eye = np.eye(nr + 1)[:nr]
    p1.add_affine(eye, np.full(nr, box))
    p1.add_affine(-eye, np.full(nr, box))
    z0 = np.zeros(nr + 1)
    z0[-1] = (float((-b_r).max()) if b_r.size else 0.0) + 1.0

    margin = max(1e-9, 1e-9 * scale)

    def strictly_inside(v: np.ndarray) -> bool:
        return bool(b_r.size == 0 or (A_r @ v[:nr] - b_r).max() < -margin)

    out1 = solve_concave(p1, z0, opts, stop_when=strictly_inside)
    z_try = out1.x[:nr]
    if b_r.size and (A_r @ z_try - b_r).max() >= 0.0:
        s_star = float(out1.x[-1])
        certified = s_star - out1.residuals["gap"] > 0.0
        note = "certified" if certified else "empty interior"
        return SolveOutcome(x_part + (basis @ z_try if basis is not None else z_try),
                            np.nan, Status.INFEASIBLE, out1.iterations,
                            {"feasibility": max(0.0, s_star), "gap": out1.residuals["gap"],
                             "stationarity": np.inf, "dual_bound": np.nan,
                             "infeasibility": note})

    # Phase 2 from the interior point.
    p2 = Problem(nr, c_r)
    if b_r.size:
        p2.add_affine(A_r, b_r)
    out2 = solve_concave(p2, z_try, opts)
    x = x_part + (basis @ out2.x if basis is not None else out2.x)
    viol = float(max(0.0, (A @ x - b).max())) if b.size else 0.0
    if lp.a_eq is not None and np.size(lp.a_eq):
        viol = max(viol, float(np.abs(np.atleast_2d(lp.a_eq) @ x
                                      - np.atleast_1d(lp.b_eq)).max()))
    res = dict(out2.residuals)
    res["feasibility"] = viol
    res["dual_bound"] = float(lp.c @ x) + res["gap"]
    return SolveOutcome(x, float(lp.c @ x), out2.status,
                        out1.iterations + out2.iterations, res)
