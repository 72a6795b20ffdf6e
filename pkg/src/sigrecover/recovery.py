"""Recover ``A`` from ``G = A * C`` by iterated Gauss transformations.

For each pivot ``s = 1, ..., d-1`` the loop

1. finds an upper transformation making ``G`` *lower ready* at ``s``
   (:func:`up_general` for ``s <= d-3``, :func:`up_three` for ``s = d-2``,
   :func:`up_two` for ``s = d-1``),
2. clears column ``s`` with a lower transformation and normalises ``G[s,s,s]``
   to 1 with a diagonal one (:func:`lower_diag_step`).

Afterwards ``G`` lies in the orbit of ``I_s ⊕ GL_{d-s}``.  A final diagonal
scaling reaches the core tensor, and since the core tensor has a trivial
stabiliser, the inverse of the accumulated transformation is ``A``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import NamedTuple


from .exact import count_multiplications, exact_cbrt, format_scalar
from .gauss import Diag, GaussOp, General, Lower, Perm, Upper, accumulate, apply, apply_all, describe
from .linsys import build_system, solve_system
from .matrix import Matrix, SolveError, identity, inverse, random_invertible
from .tensor import Tensor3, check_lower_ready, check_orbit_conditions, congruence_act, core_tensor

log = logging.getLogger(__name__)

ROLES = ("upper", "random", "lower", "diag", "final")


class NotInOrbit(ValueError):
    """The input is not ``A * C`` for a rational invertible ``A``."""

    def __init__(self, step: str, detail: str):
        super().__init__(f"{step}: {detail}")
        self.step = step
        self.detail = detail


@dataclass(frozen=True)
class RecoveryConfig:
    rng_seed: int = 0
    random_entry_bound: int = 5
    max_retries: int = 32
    verify_result: bool = True
    deterministic_pivot: bool = False
    record_snapshots: bool = False

    def __post_init__(self):
        if self.random_entry_bound < 1:
            raise ValueError("random_entry_bound must be >= 1")
        if self.max_retries < 1:
            raise ValueError("max_retries must be >= 1")


class TraceStep(NamedTuple):
    s: int
    op: GaussOp
    role: str


@dataclass
class RecoveryTrace:
    dim: int
    random_seed: int
    steps: list[TraceStep] = field(default_factory=list)
    retries: dict[int, int] = field(default_factory=dict)
    final_matrix: Matrix | None = None
    mul_count: int = 0
    # (s, "upper" | "lower") -> tensor, only with record_snapshots
    snapshots: dict[tuple[int, str], Tensor3] = field(default_factory=dict)

    @property
    def ops(self) -> list[GaussOp]:
        return [step.op for step in self.steps]

    def ops_at(self, s: int, role: str | None = None) -> list[GaussOp]:
        return [st.op for st in self.steps if st.s == s and (role is None or st.role == role)]

    def transform(self) -> Matrix:
        """The accumulated matrix ``Q`` with ``Q * G = C``."""
        q = identity(self.dim)
        for op in self.ops:
            q = accumulate(q, op)
        return q

    def replay(self, g: Tensor3) -> Tensor3:
        return apply_all(self.ops, g)

    def total_retries(self) -> int:
        return sum(self.retries.values())


class UpStep(NamedTuple):
    ops: list[GaussOp]
    tensor: Tensor3
    retries: int


def _ready(h: Tensor3, s: int) -> bool:
    return check_lower_ready(h, s)


def _coordinate_changes(g: Tensor3, s: int, cfg: RecoveryConfig, rng: random.Random):
    """Yield ``(op, G')`` candidates: cycles first if requested, then random ``W``."""
    d = g.dim
    if cfg.deterministic_pivot:
        for t in range(s + 1, d + 1):
            op = Perm(s, t)
            yield op, apply(op, g)
    while True:
        op = General(s, random_invertible(d, s, cfg.random_entry_bound, rng))
        yield op, apply(op, g)


def up_general(g: Tensor3, s: int, cfg: RecoveryConfig, rng: random.Random) -> UpStep:
    """Upper step for ``1 <= s <= d-3`` via the antisymmetry system.

    When ``M x = B`` has no unique solution, or the result is not lower ready,
    the coordinates are changed (by a cycle or a random ``I_{s-1} ⊕ W``) and
    the system is rebuilt, at most ``cfg.max_retries`` times.  The returned
    ops are in application order.
    """
    d = g.dim
    if not 1 <= s <= d - 3:
        raise ValueError(f"up_general needs 1 <= s <= d-3, got s={s}, d={d}")
    prefix: list[GaussOp] = []
    current = g
    candidates = _coordinate_changes(g, s, cfg, rng)
    for attempt in range(cfg.max_retries + 1):
        if attempt:
            op, current = next(candidates)
            prefix = [op]
        try:
            x = solve_system(build_system(current, s, reduced=True))
        except SolveError as exc:
            log.debug("s=%d attempt %d: %s", s, attempt, exc)
            continue
        up = Upper(s, x)
        h = apply(up, current)
        if _ready(h, s):
            return UpStep(prefix + [up], h, attempt)
        log.debug("s=%d attempt %d: solution is not lower ready", s, attempt)
    raise NotInOrbit(f"upper step s={s}", f"no coordinate change worked in {cfg.max_retries} retries")


def _three_uppers(g: Tensor3) -> tuple[list[GaussOp], Tensor3] | None:
    d = g.dim
    p, q, r = d - 2, d - 1, d  # the last three coordinates
    den = g[q, r, r] - g[r, q, r]
    if den == 0:
        return None
    u1 = Upper(q, [(g[r, q, q] - g[q, r, q]) / den])
    g = apply(u1, g)
    den = g[q, r, r] - g[r, q, r]
    if den == 0:
        return None
    u2 = Upper(p, [0, (g[r, q, p] - g[q, r, p]) / den])
    g = apply(u2, g)
    den = g[p, q, q] - g[q, p, q]
    if den == 0:
        return None
    u3 = Upper(p, [(g[q, p, p] - g[p, q, p]) / den, 0])
    g = apply(u3, g)
    if g[p, p, p] == 0 or not _ready(g, p):
        return None
    return [u1, u2, u3], g


def up_three(g: Tensor3, cfg: RecoveryConfig, rng: random.Random) -> UpStep:
    """Upper step for ``s = d-2``: three upper ops read off the tensor.

    A vanishing denominator or a zero ``G[d-2,d-2,d-2]`` triggers a restart
    from the input after a random change ``I_{d-3} ⊕ W``.
    """
    d = g.dim
    if d < 3:
        raise ValueError("up_three needs d >= 3")
    s = d - 2
    prefix: list[GaussOp] = []
    current = g
    for attempt in range(cfg.max_retries + 1):
        if attempt:
            op = General(s, random_invertible(d, s, cfg.random_entry_bound, rng))
            prefix, current = [op], apply(op, g)
        found = _three_uppers(current)
        if found is not None:
            ops, h = found
            return UpStep(prefix + ops, h, attempt)
        log.debug("s=%d attempt %d: degenerate three-dimensional step", s, attempt)
    raise NotInOrbit(f"upper step s={s}", f"no coordinate change worked in {cfg.max_retries} retries")


def up_two(g: Tensor3) -> GaussOp:
    """Upper step for ``s = d-1``: one upper op, or a swap of the last two coordinates."""
    d = g.dim
    if d < 2:
        raise ValueError("up_two needs d >= 2")
    q, r = d - 1, d
    den = g[q, r, r] - g[r, q, r]
    if den != 0:
        return Upper(q, [(g[r, q, q] - g[q, r, q]) / den])
    return Perm(q, r)


def lower_diag_step(h: Tensor3, s: int) -> tuple[Lower, Diag]:
    """The lower op ``y[i] = -H[s,s+i,s] / H[s,s,s]`` and the scaling to ``G[s,s,s] = 1``."""
    d = h.dim
    if not check_lower_ready(h, s):
        raise NotInOrbit(f"lower step s={s}", "tensor is not lower ready")
    hsss = h[s, s, s]
    y = [-h[s, s + i, s] / hsss for i in range(1, d - s + 1)]
    root = exact_cbrt(1 / hsss)
    if root is None:
        raise NotInOrbit(f"lower step s={s}", f"1/H[s,s,s] = {format_scalar(1 / hsss)} is not a rational cube")
    return Lower(s, y), Diag(s, root)


def final_scale(g: Tensor3) -> Diag:
    """The scaling at pivot ``d`` that turns ``g`` into the core tensor."""
    d = g.dim
    gddd = g[d, d, d]
    if gddd == 0:
        raise NotInOrbit("final scaling", "G[d,d,d] = 0")
    root = exact_cbrt(1 / gddd)
    if root is None:
        raise NotInOrbit("final scaling", f"1/G[d,d,d] = {format_scalar(1 / gddd)} is not a rational cube")
    op = Diag(d, root)
    if apply(op, g) != core_tensor(d):
        raise NotInOrbit("final scaling", "result is not the core tensor")
    return op


def recover(g: Tensor3, cfg: RecoveryConfig | None = None) -> tuple[Matrix, RecoveryTrace]:
    """Find ``A`` with ``congruence_act(A, core_tensor(d)) == g``.

    Raises :class:`NotInOrbit` if some exact precondition fails for good.
    """
    cfg = cfg or RecoveryConfig()
    d = g.dim
    rng = random.Random(cfg.rng_seed)
    trace = RecoveryTrace(dim=d, random_seed=cfg.rng_seed)
    q = identity(d)
    g_input = g

    def record(s: int, op: GaussOp, role: str) -> None:
        nonlocal q
        trace.steps.append(TraceStep(s, op, role))
        q = accumulate(q, op)

    with count_multiplications() as counter:
        for s in range(1, d):
            if s <= d - 3:
                up = up_general(g, s, cfg, rng)
            elif s == d - 2:
                up = up_three(g, cfg, rng)
            else:
                op = up_two(g)
                up = UpStep([op], apply(op, g), 0)
            trace.retries[s] = up.retries
            for op in up.ops:
                record(s, op, "random" if isinstance(op, General) or (
                    isinstance(op, Perm) and s < d - 1) else "upper")
            h = up.tensor
            if cfg.record_snapshots:
                trace.snapshots[(s, "upper")] = h

            lower, diag = lower_diag_step(h, s)
            record(s, lower, "lower")
            record(s, diag, "diag")
            g = apply(diag, apply(lower, h))
            if cfg.record_snapshots:
                trace.snapshots[(s, "lower")] = g
            if not check_orbit_conditions(g, s):
                raise NotInOrbit(f"lower step s={s}", "result violates the stabiliser conditions")
            log.debug("s=%d done with %d retries", s, up.retries)

        record(d, final_scale(g), "final")
        a = inverse(q)
        if cfg.verify_result and congruence_act(a, core_tensor(d)) != g_input:
            raise NotInOrbit("verification", "A * C differs from the input")
    trace.final_matrix = a
    trace.mul_count = counter.count
    return a, trace


def format_trace(trace: RecoveryTrace) -> str:
    lines = [f"d={trace.dim} seed={trace.random_seed} retries={trace.total_retries()} mults={trace.mul_count}"]
    for step in trace.steps:
        lines.append(f"s={step.s:<3} {step.role:<6} {describe(step.op)}")
    return "\n".join(lines)
