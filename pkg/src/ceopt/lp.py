"""Dense linear programming by two-phase revised simplex with Bland's rule.

Built for the small restricted-master and verification LPs this package
solves: determinism and exact basis duals matter more than speed.  Every
iteration recomputes the basic solution, duals, and entering direction
directly from the original matrix, so round-off never accumulates across
pivots.  Duals follow the shadow-price convention (rate of change of the
optimal value per unit of right-hand side), so for a max problem the dual
of a binding ``>=`` row is nonpositive.

Tolerances: pivots smaller than ``pivot_tol`` (1e-10) are treated as zero
and feasibility is judged at ``feas_tol`` (1e-8).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

LE, GE, EQ = "<=", ">=", "="

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-8
NONZERO_CAP_DEFAULT = 20_000
_MAX_PIVOTS = 200_000
_ENTER_TOL = 1e-9  # reduced costs beyond this count as dual infeasibility
_STABILITY_FLOOR = 1e-8  # smallest pivot element accepted in the ratio test


@dataclass
class LpProblem:
    objective: np.ndarray
    sense: str  # "max" | "min"
    a: np.ndarray
    relations: tuple[str, ...]
    b: np.ndarray
    lower: np.ndarray | None = None  # default all-zero
    upper: np.ndarray | None = None  # default unbounded

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float)
        self.a = np.atleast_2d(np.asarray(self.a, dtype=float))
        self.b = np.asarray(self.b, dtype=float)
        self.relations = tuple(self.relations)
        m, n = self.a.shape
        if self.objective.shape != (n,):
            raise ValueError(f"objective has shape {self.objective.shape}, want ({n},)")
        if self.b.shape != (m,):
            raise ValueError(f"rhs has shape {self.b.shape}, want ({m},)")
        if len(self.relations) != m:
            raise ValueError(f"{len(self.relations)} relations for {m} rows")
        if any(r not in (LE, GE, EQ) for r in self.relations):
            raise ValueError(f"relations must be one of {LE!r}, {GE!r}, {EQ!r}")
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")
        if self.lower is None:
            self.lower = np.zeros(n)
        else:
            self.lower = np.asarray(self.lower, dtype=float)
        if self.upper is None:
            self.upper = np.full(n, np.inf)
        else:
            self.upper = np.asarray(self.upper, dtype=float)
        for arr in (self.objective, self.a, self.b, self.lower):
            if not np.all(np.isfinite(arr)):
                raise ValueError("problem data must be finite")
        if np.any(np.isneginf(self.upper)) or np.any(np.isnan(self.upper)):
            raise ValueError("upper bounds must be finite or +inf")

    @property
    def num_vars(self) -> int:
        return self.a.shape[1]

    @property
    def num_rows(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    duals: np.ndarray | None = None
    objective: float | None = None


def _solve_pair(a: np.ndarray, basis: list[int], b: np.ndarray, cost_b: np.ndarray):
    """Basic values and duals for the current basis, clamping the tiny
    negative / nonzero noise that degenerate bases produce."""
    base = a[:, basis]
    try:
        xb = np.linalg.solve(base, b)
        y = np.linalg.solve(base.T, cost_b)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("simplex basis became singular") from exc
    xb[np.abs(xb) < 1e-11] = 0.0
    xb[(xb < 0.0) & (xb > -FEAS_TOL)] = 0.0
    return xb, y


def _revised_simplex(
    a: np.ndarray,
    b: np.ndarray,
    cost: np.ndarray,
    basis: list[int],
    allowed_idx: np.ndarray,
    pivot_tol: float,
) -> str:
    """Minimize ``cost`` subject to ``a x = b, x >= 0`` starting from the
    feasible ``basis`` (mutated in place).  Bland's rule: the lowest-index
    column with a negative reduced cost enters; the exact minimum ratio,
    ties broken by lowest basic index, leaves.  ``allowed_idx`` restricts
    the entering candidates (phase 2 locks out artificials).
    """
    floor = max(pivot_tol, _STABILITY_FLOOR)
    # the dual solve leaves residuals proportional to the cost scale, so the
    # entering test must stay above them or noise re-enters basic columns
    enter_tol = max(_ENTER_TOL, 1e-11 * (1.0 + float(np.max(np.abs(cost)))))
    in_basis = np.zeros(a.shape[1], dtype=bool)
    for _ in range(_MAX_PIVOTS):
        xb, y = _solve_pair(a, basis, b, cost[basis])
        reduced = cost - y @ a
        in_basis[:] = False
        in_basis[basis] = True
        entering = -1
        for j in allowed_idx:
            if not in_basis[j] and reduced[j] < -enter_tol:
                entering = int(j)
                break
        if entering < 0:
            return "optimal"
        direction = np.linalg.solve(a[:, basis], a[:, entering])
        eligible = np.flatnonzero(direction > floor)
        if eligible.size == 0:
            eligible = np.flatnonzero(direction > pivot_tol)
            if eligible.size == 0:
                return "unbounded"
            eligible = eligible[[int(np.argmax(direction[eligible]))]]
        leaving = -1
        best_ratio = np.inf
        for r in eligible:
            # degenerate rows all get ratio exactly 0, keeping ties exact
            ratio = xb[r] / direction[r] if xb[r] > 0.0 else 0.0
            if ratio < best_ratio or (
                ratio == best_ratio and basis[r] < basis[leaving]
            ):
                best_ratio = ratio
                leaving = int(r)
        basis[leaving] = entering
    raise RuntimeError("simplex failed to terminate within the pivot budget")


def solve_lp(
    problem: LpProblem,
    pivot_tol: float = PIVOT_TOL,
    feas_tol: float = FEAS_TOL,
    nonzero_cap: int = NONZERO_CAP_DEFAULT,
) -> LpSolution:
    """Solve a dense LP; returns primal values, per-row duals, and status.

    Deterministic: identical inputs take identical pivot sequences.
    """
    nnz = int(np.count_nonzero(problem.a))
    if nnz > nonzero_cap:
        raise ResourceLimitError(
            f"constraint matrix has {nnz} nonzeros, cap is {nonzero_cap}"
        )
    n = problem.num_vars
    m_user = problem.num_rows

    # shift to zero lower bounds
    lb = problem.lower
    a_rows = [problem.a]
    b_shift = problem.b - problem.a @ lb
    relations = list(problem.relations)
    rhs_list = list(b_shift)

    # finite upper bounds become internal rows
    ub_rows = []
    for j in np.flatnonzero(np.isfinite(problem.upper)):
        gap = problem.upper[j] - lb[j]
        if gap < -feas_tol:
            return LpSolution(status="infeasible")
        row = np.zeros(n)
        row[j] = 1.0
        ub_rows.append(row)
        relations.append(LE)
        rhs_list.append(gap)
    if ub_rows:
        a_rows.append(np.stack(ub_rows))
    a_all = np.vstack(a_rows)
    b_all = np.asarray(rhs_list, dtype=float)
    m_all = a_all.shape[0]

    cost = problem.objective if problem.sense == "min" else -problem.objective

    # equality form: one slack/surplus column per inequality row
    ineq_rows = [r for r in range(m_all) if relations[r] != EQ]
    n_slack = len(ineq_rows)
    a_eq = np.zeros((m_all, n + n_slack))
    a_eq[:, :n] = a_all
    for k, r in enumerate(ineq_rows):
        a_eq[r, n + k] = 1.0 if relations[r] == LE else -1.0
    b_eq = b_all.copy()
    flip = np.ones(m_all)
    is_ge = np.array([rel == GE for rel in relations])
    # flipping zero-rhs >= rows turns their surplus into a basis-ready slack
    neg = (b_eq < 0) | (is_ge & (b_eq == 0))
    a_eq[neg] *= -1.0
    b_eq[neg] *= -1.0
    flip[neg] = -1.0

    # initial basis: slack columns that survived the sign flip with a +1,
    # artificials everywhere else
    basis: list[int] = []
    needs_artificial: list[int] = []
    slack_of_row = {r: n + k for k, r in enumerate(ineq_rows)}
    for r in range(m_all):
        j = slack_of_row.get(r)
        if j is not None and a_eq[r, j] > 0.5:
            basis.append(j)
        else:
            basis.append(-1)
            needs_artificial.append(r)
    n_core = n + n_slack
    n_art = len(needs_artificial)
    a_full = np.zeros((m_all, n_core + n_art))
    a_full[:, :n_core] = a_eq
    for k, r in enumerate(needs_artificial):
        a_full[r, n_core + k] = 1.0
        basis[r] = n_core + k

    keep = np.ones(m_all, dtype=bool)
    if n_art:
        cost1 = np.zeros(n_core + n_art)
        cost1[n_core:] = 1.0
        status = _revised_simplex(
            a_full, b_eq, cost1, basis, np.arange(n_core + n_art), pivot_tol
        )
        assert status == "optimal"  # phase 1 is bounded below by 0
        xb, _ = _solve_pair(a_full, basis, b_eq, cost1[basis])
        infeas = float(cost1[basis] @ xb)
        if infeas > feas_tol:
            return LpSolution(status="infeasible")
        # pivot artificials out of the basis, dropping dependent rows
        for r in range(m_all):
            if basis[r] >= n_core:
                unit = np.zeros(m_all)
                unit[r] = 1.0
                row = np.linalg.solve(a_full[:, basis].T, unit) @ a_full[:, :n_core]
                j = int(np.argmax(np.abs(row)))
                if abs(row[j]) > pivot_tol:
                    basis[r] = j
                else:
                    keep[r] = False
        if not np.all(keep):
            rows = np.flatnonzero(keep)
            a_full = a_full[rows]
            b_eq = b_eq[rows]
            basis = [basis[r] for r in rows]

    cost2 = np.concatenate([cost, np.zeros(n_slack)])
    cost_full = np.concatenate([cost2, np.zeros(n_art)])
    status = _revised_simplex(
        a_full, b_eq, cost_full, basis, np.arange(n_core), pivot_tol
    )
    if status == "unbounded":
        return LpSolution(status="unbounded")

    xb, y_kept = _solve_pair(a_full, basis, b_eq, cost_full[basis])
    z = np.zeros(n_core + n_art)
    for r, j in enumerate(basis):
        z[j] = xb[r]
    x = z[:n] + lb
    objective = float(problem.objective @ x)

    # duals per original row; dropped redundant rows price at zero
    kept_rows = np.flatnonzero(keep)
    y_all = np.zeros(m_all)
    y_all[kept_rows] = y_kept
    y_all *= flip
    if problem.sense == "max":
        y_all = -y_all
    duals = y_all[:m_user]

    return LpSolution(status="optimal", x=x, duals=duals, objective=objective)


def kkt_report(problem: LpProblem, sol: LpSolution) -> dict[str, float]:
    """Residuals certifying an optimal solution from first principles:
    primal/dual feasibility, complementary slackness, and the duality gap.

    Variables pinned at a finite upper bound are exempt from the reduced-
    cost sign condition (their bound multiplier is not reported).
    """
    if sol.status != "optimal":
        raise ValueError(f"kkt_report needs an optimal solution, got {sol.status}")
    x, y = sol.x, sol.duals
    ax = problem.a @ x
    primal = 0.0
    comp = 0.0
    for r, rel in enumerate(problem.relations):
        resid = ax[r] - problem.b[r]
        if rel == LE:
            primal = max(primal, resid)
        elif rel == GE:
            primal = max(primal, -resid)
        else:
            primal = max(primal, abs(resid))
        comp = max(comp, abs(y[r] * resid))
    primal = max(primal, float(np.max(problem.lower - x, initial=0.0)))
    primal = max(primal, float(np.max(x - problem.upper, initial=0.0)))

    sign = 1.0 if problem.sense == "min" else -1.0
    dual = 0.0
    for r, rel in enumerate(problem.relations):
        if rel == LE:
            dual = max(dual, sign * y[r])  # min: y <= 0 on <= rows
        elif rel == GE:
            dual = max(dual, -sign * y[r])
    reduced = problem.objective - y @ problem.a
    at_upper = x >= problem.upper - 1e-9
    for j in range(problem.num_vars):
        if at_upper[j]:
            continue
        dual = max(dual, -sign * reduced[j])
        if x[j] > problem.lower[j] + 1e-9:
            comp = max(comp, abs(reduced[j]))

    dual_objective = float(y @ problem.b + reduced @ problem.lower)
    gap = abs(sol.objective - dual_objective)
    return {
        "primal_residual": float(primal),
        "dual_residual": float(dual),
        "complementary_slackness": float(comp),
        "duality_gap": float(gap),
    }
