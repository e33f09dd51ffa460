"""Finite-scale cover laboratory.

Builds balls in Cayley graphs of a few sample groups, constructs and
verifies (D, B)-covers (families of uniformly bounded subsets in which
distinct subsets of the same family are more than D apart), and
brute-forces the minimal family count on tiny instances as an independent
oracle.

Everything here is a fixed-scale experiment: a witness certifies one
(D, B) pair on one finite ball and never an asymptotic invariant.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

import numpy as np

DEFAULT_POINT_BUDGET = 200_000
_BUDGET_ENV = "ASDIMLAB_POINT_BUDGET"


class BallBudgetError(Exception):
    """A requested ball or search instance exceeds the configured budget."""


class WitnessFormatError(Exception):
    """Syntactically invalid witness text, carrying the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(message)
        self.message = message
        self.line = line


@dataclass(frozen=True)
class GroupSpec:
    """Sample group for desk-scale experiments.

    family is "FreeAbelian" (rank 1..3), "FreeGroup" (rank 1..2) or
    "Heisenberg3" (rank unused, kept 0); generating sets are the standard
    symmetric ones.
    """

    family: str
    rank: int = 0

    def __post_init__(self) -> None:
        if self.family == "FreeAbelian":
            if not 1 <= self.rank <= 3:
                raise ValueError(f"FreeAbelian rank must be 1..3, got {self.rank}")
        elif self.family == "FreeGroup":
            if not 1 <= self.rank <= 2:
                raise ValueError(f"FreeGroup rank must be 1..2, got {self.rank}")
        elif self.family == "Heisenberg3":
            if self.rank != 0:
                raise ValueError("Heisenberg3 takes no rank")
        else:
            raise ValueError(f"unknown group family {self.family!r}")

    def __str__(self) -> str:
        if self.family == "Heisenberg3":
            return "Heisenberg3"
        return f"{self.family}({self.rank})"


def parse_group_spec(text: str) -> GroupSpec:
    text = text.strip()
    if text == "Heisenberg3":
        return GroupSpec("Heisenberg3")
    for family in ("FreeAbelian", "FreeGroup"):
        prefix = family + "("
        if text.startswith(prefix) and text.endswith(")"):
            inner = text[len(prefix):-1]
            if not inner.isdigit():
                raise ValueError(f"bad group spec {text!r}")
            return GroupSpec(family, int(inner))
    raise ValueError(f"bad group spec {text!r}")


class FiniteMetricSpace:
    """An indexed point set with an eager integer distance matrix.

    Memory is quadratic in the point count; the point budget guards the
    count, not the matrix, so pick radii accordingly.
    """

    def __init__(self, points, dist, label: str):
        self.points = tuple(points)
        self.dist = dist
        self.label = label

    def __len__(self) -> int:
        return len(self.points)

    def check_metric(self) -> None:
        """Exhaustive metric axioms check; meant for small test spaces."""
        d = self.dist
        n = len(self.points)
        if d.shape != (n, n):
            raise ValueError("distance matrix shape mismatch")
        if np.any(np.diagonal(d) != 0):
            raise ValueError("nonzero diagonal")
        if np.any(d != d.T):
            raise ValueError("asymmetric distances")
        if n > 1 and np.min(d + np.eye(n, dtype=d.dtype) * (1 + np.max(d))) <= 0:
            raise ValueError("non-positive off-diagonal distance")
        for k in range(n):
            through_k = d[:, k : k + 1] + d[k : k + 1, :]
            if np.any(d > through_k):
                raise ValueError(f"triangle inequality fails through point {k}")


def _budget(override: int | None) -> int:
    if override is not None:
        return override
    return int(os.environ.get(_BUDGET_ENV, str(DEFAULT_POINT_BUDGET)))


def _ball_count(spec: GroupSpec, r: int) -> int | None:
    """Closed-form point count where one exists (None for Heisenberg3)."""
    if spec.family == "FreeAbelian":
        if spec.rank == 1:
            return 2 * r + 1
        if spec.rank == 2:
            return 2 * r * r + 2 * r + 1
        return (4 * r**3 + 6 * r**2 + 8 * r + 3) // 3
    if spec.family == "FreeGroup":
        if spec.rank == 1:
            return 2 * r + 1
        return 2 * 3**r - 1
    return None


def cayley_ball(spec: GroupSpec, radius: int, point_budget: int | None = None) -> FiniteMetricSpace:
    """Ball of the given radius around the identity, in the word metric.

    Free abelian and free groups get true word-length distances from closed
    forms.  Heisenberg3 uses breadth-first distances inside the ball
    (induced-ball metric), which can exceed the group's word metric near
    the boundary; the label carries a "metric=induced-ball" caveat so
    downstream output stays honest.
    """
    if radius < 1:
        raise ValueError(f"radius must be positive, got {radius}")
    budget = _budget(point_budget)
    expected = _ball_count(spec, radius)
    if expected is not None and expected > budget:
        raise BallBudgetError(
            f"{spec} ball of radius {radius} has {expected} points; budget is {budget}"
        )
    label = f"group={spec} radius={radius}"
    if spec.family == "FreeAbelian":
        points = _abelian_points(spec.rank, radius)
        dist = _l1_matrix(points)
    elif spec.family == "FreeGroup":
        points = _free_words(spec.rank, radius)
        dist = _word_matrix(points)
    else:
        points = _heisenberg_points(radius, budget)
        dist = _induced_matrix(points, _heisenberg_neighbors)
        label += " metric=induced-ball"
    return FiniteMetricSpace(points, dist, label)


def _abelian_points(rank: int, r: int) -> list[tuple[int, ...]]:
    pts: list[tuple[int, ...]] = []
    if rank == 1:
        pts = [(x,) for x in range(-r, r + 1)]
    else:
        ranges = [range(-r, r + 1)] * rank
        from itertools import product

        pts = [p for p in product(*ranges) if sum(abs(c) for c in p) <= r]
    pts.sort(key=lambda p: (sum(abs(c) for c in p), p))
    return pts


def _l1_matrix(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.int32)
    n = len(points)
    dist = np.empty((n, n), dtype=np.int32)
    for start in range(0, n, 256):
        block = arr[start : start + 256]
        dist[start : start + 256] = np.abs(block[:, None, :] - arr[None, :, :]).sum(
            axis=2, dtype=np.int32
        )
    return dist

_LETTER_ORDER = {1: 0, -1: 1, 2: 2, -2: 3}


def _free_words(rank: int, r: int) -> list[tuple[int, ...]]:
    letters = [1, -1, 2, -2][: 2 * rank]
    words: list[tuple[int, ...]] = [()]
    level: list[tuple[int, ...]] = [()]
    for _ in range(r):
        nxt = []
        for w in level:
            for letter in letters:
                if w and w[-1] == -letter:
                    continue
                nxt.append(w + (letter,))
        words.extend(nxt)
        level = nxt
    return words


def _word_matrix(words) -> np.ndarray:
    n = len(words)
    dist = np.zeros((n, n), dtype=np.int32)
    for i in range(n):
        u = words[i]
        for j in range(i + 1, n):
            v = words[j]
            lcp = 0
            for a, b in zip(u, v):
                if a != b:
                    break
                lcp += 1
            d = len(u) + len(v) - 2 * lcp
            dist[i, j] = d
            dist[j, i] = d
    return dist


def _heisenberg_neighbors(p: tuple[int, int, int]):
    a, b, c = p
    # Right multiplication by the generators X, Y and their inverses in the
    # integer Heisenberg group, coordinates (a, b, c).
    return (
        (a + 1, b, c),
        (a - 1, b, c),
        (a, b + 1, c + a),
        (a, b - 1, c - a),
    )


def _heisenberg_points(r: int, budget: int) -> list[tuple[int, int, int]]:
    lengths = {(0, 0, 0): 0}
    frontier = deque([(0, 0, 0)])
    while frontier:
        p = frontier.popleft()
        if lengths[p] == r:
            continue
        for q in _heisenberg_neighbors(p):
            if q not in lengths:
                lengths[q] = lengths[p] + 1
                if len(lengths) > budget:
                    raise BallBudgetError(
                        f"Heisenberg3 ball of radius {r} exceeds the budget of {budget} points"
                    )
                frontier.append(q)
    pts = sorted(lengths, key=lambda p: (lengths[p], p))
    return pts


def _induced_matrix(points, neighbors) -> np.ndarray:
    index = {p: i for i, p in enumerate(points)}
    adj: list[list[int]] = [
        [index[q] for q in neighbors(p) if q in index] for p in points
    ]
    n = len(points)
    dist = np.full((n, n), -1, dtype=np.int32)
    for src in range(n):
        row = dist[src]
        row[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if row[w] < 0:
                    row[w] = row[u] + 1
                    queue.append(w)
    if np.any(dist < 0):
        raise AssertionError("induced ball is disconnected")
    return dist


# ---------------------------------------------------------------------------
# Covers


@dataclass
class CoverWitness:
    """A concrete (D, B)-cover of a finite ball.

    families[f][s] is a list of point indices; distinct subsets of one
    family must be more than D apart, and B records the exact maximum
    subset diameter.
    """

    space: FiniteMetricSpace
    families: list[list[list[int]]]
    D: int
    B: int


@dataclass
class CoverReport:
    valid: bool
    violations: list[str]


def brick_cover(n: int, D: int, radius: int, point_budget: int | None = None) -> CoverWitness:
    """Shifted-brick cover of the rank-n free abelian ball.

    Args:
        n: rank, 1..3; the cover uses n+1 families.
        D: required separation between same-family bricks; positive.
        radius: ball radius.

    Returns:
        A CoverWitness that verify_cover accepts.

    The construction tiles each axis with period S = 2(n+1)(D+1) and, for
    family i, keeps points whose (coordinate - 2(D+1)i) mod S lands in
    [D+1, S-(D+1)).  Per axis the n+1 shifts miss the kept window exactly
    once, so each point survives in at least one family; same-family bricks
    are at least 2(D+1) > D apart per axis.  The resulting diameter bound
    B <= 2n(n+1)(D+1) is asserted, never assumed.
    """
    if not 1 <= n <= 3:
        raise ValueError(f"brick covers support ranks 1..3, got {n}")
    if D < 1:
        raise ValueError(f"separation D must be positive, got {D}")
    space = cayley_ball(GroupSpec("FreeAbelian", n), radius, point_budget)
    T = D + 1
    S = 2 * (n + 1) * T
    families: list[list[list[int]]] = []
    for i in range(n + 1):
        shift = 2 * T * i
        bricks: dict[tuple[int, ...], list[int]] = {}
        for idx, p in enumerate(space.points):
            shifted = [c - shift for c in p]
            if all(T <= (c % S) < S - T for c in shifted):
                key = tuple(c // S for c in shifted)
                bricks.setdefault(key, []).append(idx)
        families.append([bricks[k] for k in sorted(bricks)])
    B = 0
    for family in families:
        for subset in family:
            sub = space.dist[np.ix_(subset, subset)]
            B = max(B, int(sub.max()))
    assert B <= 2 * n * (n + 1) * (D + 1), "brick diameter exceeded its proven bound"
    return CoverWitness(space, families, D, B)


def verify_cover(witness: CoverWitness) -> CoverReport:
    """Check the three cover conditions and recompute B.

    Violations name the family/subset pair and the offending distance; the
    verdict is data, not an exception.
    """
    space = witness.space
    n = len(space)
    violations: list[str] = []
    covered: set[int] = set()
    for f, family in enumerate(witness.families):
        for s, subset in enumerate(family):
            if not subset:
                violations.append(f"family {f} subset {s} is empty")
                continue
            for idx in subset:
                if not 0 <= idx < n:
                    violations.append(
                        f"family {f} subset {s} references point {idx}, outside 0..{n - 1}"
                    )
            covered.update(i for i in subset if 0 <= i < n)
    for i in range(n):
        if i not in covered:
            violations.append(f"point {i} at {space.points[i]} is uncovered")
    recomputed = 0
    for f, family in enumerate(witness.families):
        clean = [
            (s, [i for i in subset if 0 <= i < n]) for s, subset in enumerate(family)
        ]
        clean = [(s, subset) for s, subset in clean if subset]
        for _, subset in clean:
            recomputed = max(recomputed, int(space.dist[np.ix_(subset, subset)].max()))
        for a in range(len(clean)):
            for b in range(a + 1, len(clean)):
                s, left = clean[a]
                t, right = clean[b]
                gap = int(space.dist[np.ix_(left, right)].min())
                if gap <= witness.D:
                    violations.append(
                        f"family {f}: subsets {s} and {t} are at distance {gap},"
                        f" need more than D={witness.D}"
                    )
    if recomputed != witness.B:
        violations.append(f"recorded B={witness.B} but recomputed B={recomputed}")
    return CoverReport(valid=not violations, violations=violations)


@dataclass
class SearchResult:
    """Outcome of the exhaustive minimal-family search: k is None when no
    cover with at most k_max families exists."""

    k: int | None
    witness: CoverWitness | None


def min_families_exhaustive(
    space: FiniteMetricSpace, D: int, B: int, k_max: int = 4
) -> SearchResult:
    """Exact smallest family count for a (D, B)-cover of a tiny space.

    Args:
        space: at most 24 points.
        D, B: positive separation and diameter parameters.
        k_max: largest family count tried, at most 4.

    Returns:
        SearchResult with the minimal k and a witness found at that k, or
        k=None when every count up to k_max fails.

    Why coloring suffices: in a valid cover, two subsets of one family that
    come within D of each other are forbidden, so assigning each point to
    the family covering it makes every family's subsets exactly the
    connected components of that family's points under the "distance <= D"
    relation; validity is then "every component has diameter <= B".
    Conversely any such coloring yields a witness with the components as
    subsets.  The search therefore enumerates k-colorings in canonical
    point order (first point pinned to family 0, new families introduced in
    order), pruning as soon as the component swallowing the newest point
    gets too wide.
    """
    n = len(space)
    if n > 24:
        raise BallBudgetError(f"exhaustive search is limited to 24 points, got {n}")
    if not 1 <= k_max <= 4:
        raise ValueError(f"k_max must be 1..4, got {k_max}")
    if D < 1 or B < 1:
        raise ValueError("D and B must be positive")
    dist = space.dist
    near = [[j for j in range(n) if j != i and dist[i, j] <= D] for i in range(n)]

    def component_ok(colors: list[int], i: int, c: int) -> bool:
        members = {j for j in range(i) if colors[j] == c}
        comp = [i]
        seen = {i}
        pos = 0
        while pos < len(comp):
            u = comp[pos]
            pos += 1
            for w in near[u]:
                if w in members and w not in seen:
                    seen.add(w)
                    comp.append(w)
        for a in range(len(comp)):
            for b in range(a + 1, len(comp)):
                if dist[comp[a], comp[b]] > B:
                    return False
        return True

    def solve(k: int) -> list[int] | None:
        colors = [-1] * n

        def dfs(i: int, used: int) -> bool:
            if i == n:
                return True
            for c in range(min(used + 1, k)):
                colors[i] = c
                if component_ok(colors, i, c) and dfs(i + 1, max(used, c + 1)):
                    return True
            colors[i] = -1
            return False

        return list(colors) if n == 0 or dfs(0, 0) else None

    for k in range(1, k_max + 1):
        colors = solve(k)
        if colors is None:
            continue
        families: list[list[list[int]]] = []
        for c in range(k):
            members = [i for i in range(n) if colors[i] == c]
            remaining = set(members)
            subsets = []
            while remaining:
                seed = min(remaining)
                comp = [seed]
                remaining.discard(seed)
                pos = 0
                while pos < len(comp):
                    u = comp[pos]
                    pos += 1
                    for w in near[u]:
                        if w in remaining:
                            remaining.discard(w)
                            comp.append(w)
                subsets.append(sorted(comp))
            families.append(subsets)
        actual_b = 0
        for family in families:
            for subset in family:
                actual_b = max(actual_b, int(dist[np.ix_(subset, subset)].max()))
        return SearchResult(k, CoverWitness(space, families, D, actual_b))
    return SearchResult(None, None)


# ---------------------------------------------------------------------------
# Witness files


def format_witness(witness: CoverWitness) -> str:
    lines = ["coarse-witness v1", witness.space.label, f"D {witness.D}", f"B {witness.B}"]
    for f, family in enumerate(witness.families):
        for s, subset in enumerate(family):
            lines.append(f"{f}:{s} " + ",".join(str(i) for i in subset))
    return "".join(line + "\n" for line in lines)


def _parse_label(label: str, lineno: int) -> FiniteMetricSpace:
    tokens = label.split()
    fields = {}
    for tok in tokens:
        key, eq, value = tok.partition("=")
        if not eq or key in fields:
            raise WitnessFormatError(f"bad space label {label!r}", lineno)
        fields[key] = value
    extra = set(fields) - {"group", "radius", "metric"}
    if "group" not in fields or "radius" not in fields or extra:
        raise WitnessFormatError(f"bad space label {label!r}", lineno)
    if not fields["radius"].isdigit():
        raise WitnessFormatError(f"bad radius in label {label!r}", lineno)
    try:
        spec = parse_group_spec(fields["group"])
    except ValueError as exc:
        raise WitnessFormatError(str(exc), lineno) from exc
    return cayley_ball(spec, int(fields["radius"]))


def parse_witness(text: str) -> CoverWitness:
    """Rebuild a CoverWitness from its file form.

    Syntactic problems raise WitnessFormatError with a line number;
    whether the witness is a valid cover is verify_cover's business.
    """
    lines = text.splitlines()
    if len(lines) < 4:
        raise WitnessFormatError("witness needs header, label, D and B lines", len(lines) + 1)
    if lines[0] != "coarse-witness v1":
        raise WitnessFormatError(f"bad header {lines[0]!r}", 1)
    space = _parse_label(lines[1], 2)
    d_line, b_line = lines[2], lines[3]
    if not d_line.startswith("D ") or not d_line[2:].isdigit() or int(d_line[2:]) < 1:
        raise WitnessFormatError(f"bad D line {d_line!r}", 3)
    if not b_line.startswith("B ") or not b_line[2:].isdigit():
        raise WitnessFormatError(f"bad B line {b_line!r}", 4)
    D, B = int(d_line[2:]), int(b_line[2:])
    families: list[list[list[int]]] = []
    for offset, line in enumerate(lines[4:]):
        lineno = offset + 5
        head, sep, body = line.partition(" ")
        fam_s, colon, idx_s = head.partition(":")
        if not sep or not colon or not fam_s.isdigit() or not idx_s.isdigit():
            raise WitnessFormatError(f"bad subset line {line!r}", lineno)
        fam, idx = int(fam_s), int(idx_s)
        if fam == len(families):
            families.append([])
        elif fam != len(families) - 1:
            raise WitnessFormatError(
                f"family indices must be contiguous, got family {fam}", lineno
            )
        if idx != len(families[fam]):
            raise WitnessFormatError(
                f"subset index {idx} out of order in family {fam}", lineno
            )
        subset: list[int] = []
        seen: set[int] = set()
        for piece in body.split(","):
            if not piece.isdigit():
                raise WitnessFormatError(f"bad point index {piece!r}", lineno)
            i = int(piece)
            if i >= len(space):
                raise WitnessFormatError(
                    f"point index {i} out of range for {len(space)}-point space", lineno
                )
            if i in seen:
                raise WitnessFormatError(f"duplicate point index {i}", lineno)
            seen.add(i)
            subset.append(i)
        families[fam].append(subset)
    return CoverWitness(space, families, D, B)
