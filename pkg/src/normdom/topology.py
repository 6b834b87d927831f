"""Open sets as truncated ball covers, norm extension along flags, and the
disjoint-balls counterexample.

A ``BallCover`` stands for the open set O. On the slice F_n of its flag, the
set O ∩ F_n is read as the union of the balls registered at levels <= n;
every ball is a box there, so all containment questions are decided exactly
with ``boxes``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .boxes import Box, Interval, box_in_union, max_dilation, uncovered_point
from .domination import DomCert, dominate_family, equivalence_constant
from .errors import (
    DomainViolationError,
    InvalidPairError,
    MalformedInputError,
    PreconditionError,
    SampleNotInSetError,
    UncoveredBallError,
    ZeroSeparationError,
)
from .norms import Diagonal, Extension, MaxOf, NormExpr, Scale, ball_box, eval_norm, slice_weights
from .vectorspace import FinVector, Flag, IndexSet, as_scalar, support


@dataclass(frozen=True)
class BallSpec:
    center: FinVector
    radius: Fraction
    norm: NormExpr
    open: bool = True

    def __post_init__(self):
        r = as_scalar(self.radius)
        if r <= 0:
            raise MalformedInputError(f"ball radius must be positive, got {r}")
        object.__setattr__(self, "radius", r)

    def __contains__(self, p: FinVector) -> bool:
        d = eval_norm(self.norm, p - self.center)
        return d < self.radius if self.open else d <= self.radius

    def box(self, J: IndexSet) -> Box:
        return ball_box(self.norm, J, self.radius, self.center, closed=not self.open)


@dataclass(frozen=True)
class BallCover:
    flag: Flag
    levels: tuple[tuple[int, tuple[BallSpec, ...]], ...] = ()

    def __init__(self, flag: Flag, levels: Mapping[int, Sequence[BallSpec]] | None = None):
        items = []
        for n, balls in sorted((levels or {}).items()):
            n = int(n)
            if not 0 <= n <= flag.depth:
                raise MalformedInputError(f"level {n} outside flag of depth {flag.depth}")
            F = set(flag.slice(n))
            for b in balls:
                if not set(support(b.center)) <= F:
                    raise MalformedInputError(
                        f"ball center {b.center} not inside the level-{n} slice {sorted(F)}"
                    )
            items.append((n, tuple(balls)))
        object.__setattr__(self, "flag", flag)
        object.__setattr__(self, "levels", tuple(items))

    def level(self, n: int) -> tuple[BallSpec, ...]:
        return dict(self.levels).get(n, ())

    def balls_upto(self, n: int) -> list[BallSpec]:
        return [b for m, balls in self.levels if m <= n for b in balls]

    def all_balls(self) -> list[tuple[int, BallSpec]]:
        return [(m, b) for m, balls in self.levels for b in balls]

    def translate(self, x: FinVector) -> BallCover:
        """The cover of O - x; a ball moves up to the level where its new center lives."""
        lx = self.flag.level_of(x)
        if lx is None:
            raise MalformedInputError(f"translation {x} leaves the flag")
        moved: dict[int, list[BallSpec]] = {}
        for m, b in self.all_balls():
            moved.setdefault(max(m, lx), []).append(
                BallSpec(b.center - x, b.radius, b.norm, b.open)
            )
        return BallCover(self.flag, moved)


def cover_boxes(cover: BallCover, n: int) -> list[Box]:
    """Boxes of the balls at levels <= n, cut down to the slice F_n."""
    F = cover.flag.slice(n)
    return [b.box(F) for b in cover.balls_upto(n)]


def slice_membership(cover: BallCover, p: FinVector, n: int) -> bool:
    F = cover.flag.slice(n)
    if not set(support(p)) <= set(F):
        raise DomainViolationError(
            f"point {p} is not inside the slice F_{n} = {list(F)}",
            {"point": p, "level": n},
        )
    return any(p in b for b in cover.balls_upto(n))


def cover_contains(cover: BallCover, p: FinVector) -> bool:
    """Membership in the union of every ball, ignoring slice truncation."""
    return any(p in b for _, b in cover.all_balls())


# -- one-step and flag extensions ---------------------------------------------

@dataclass
class EpsilonCert:
    """Certified epsilon for adjoining ``index`` to the slice ``base_slice``.

    ``separation`` is the exact distance, in max(base(y), |lambda|), from the
    closed base unit ball to the part of the extended slice outside O; the
    open dilation of the unit ball by ``separation`` lies in O, while the
    slightly larger dilation contains ``escape_point`` outside O.
    """

    index: int
    stage: int
    base_slice: IndexSet
    separation: Fraction
    epsilon: Fraction
    escape_point: FinVector | None = None

    def witness(self) -> dict:
        return {
            "stage": self.stage,
            "index": self.index,
            "base_slice": list(self.base_slice),
            "separation": self.separation,
            "escape_point": self.escape_point,
        }


def _unit_box(base: NormExpr, J: IndexSet, F: IndexSet) -> tuple[list, list, list]:
    w = slice_weights(base, J)
    lo = [(-1 / w[k]) if k in w else Fraction(0) for k in F]
    hi = [(1 / w[k]) if k in w else Fraction(0) for k in F]
    rates = [(1 / w[k]) if k in w else Fraction(1) for k in F]
    return lo, hi, rates


def extend_norm_step(base: NormExpr, cover: BallCover, j: int) -> tuple[EpsilonCert, Extension]:
    """Extend ``base`` from F_m to F_{m+1} = F_m + R e_j, keeping the closed
    unit ball inside the cover; ``j`` is the (m+1)-th added index of the flag.
    """
    try:
        m = cover.flag.added.index(j)
    except ValueError:
        raise MalformedInputError(f"index {j} is not an added index of the cover's flag") from None
    J, F = cover.flag.slice(m), cover.flag.slice(m + 1)
    dom = base.domain()
    if dom is not None and not set(J) <= set(dom):
        raise DomainViolationError(
            f"base norm is not defined on the slice {list(J)}", {"slice": list(J)}
        )
    boxes = cover_boxes(cover, m + 1)
    lo, hi, rates = _unit_box(base, J, F)
    unit = Box(F, tuple(Interval(a, b) for a, b in zip(lo, hi)))

    d, escape = max_dilation(F, lo, hi, rates, boxes, closed=False)
    if d == 0:
        hole = uncovered_point(unit, boxes)
        if hole is not None:
            # name a vertex when one is uncovered, it is the clearest diagnostic
            for v in unit.vertices():
                if not any(v in b for b in boxes):
                    raise UncoveredBallError(
                        f"unit-ball vertex {v} of the base norm is not in the cover",
                        {"stage": m, "uncovered_vertex": v},
                    )
            raise UncoveredBallError(
                f"unit ball of the base norm is not inside the cover near {hole}",
                {"stage": m, "uncovered_point": hole},
            )
        raise ZeroSeparationError(
            "unit ball touches the complement of the cover; refine the cover",
            {"stage": m, "escape_point": escape},
        )
    eps = d / 2
    if isinstance(base, Extension) and base.domain() == J:
        N = base.extended(j, eps)
    else:
        N = Extension(base, Flag(J, (j,)), (eps,))

    result = ball_box(N, F, 1, FinVector())
    if not box_in_union(result, boxes):
        raise AssertionError("extended unit ball escaped the cover")
    return EpsilonCert(j, m, J, d, eps, escape), N


def extension_chain(base: NormExpr, cover: BallCover, depth: int,
                    start: int = 0) -> tuple[NormExpr, list[EpsilonCert]]:
    """Apply ``extend_norm_step`` along added indices start .. start+depth-1."""
    if depth < 0 or start < 0 or start + depth > cover.flag.depth:
        raise MalformedInputError(
            f"cannot extend {depth} steps from stage {start} on a flag of depth {cover.flag.depth}"
        )
    N, certs = base, []
    for m in range(start, start + depth):
        try:
            cert, N = extend_norm_step(N, cover, cover.flag.added[m])
        except PreconditionError as exc:
            exc.diagnostic.setdefault("stage", m)
            exc.args = (f"stage {m}: {exc}",)
            raise
        certs.append(cert)
    return N, certs


def extend_norm_flag(base: NormExpr, cover: BallCover, depth: int, start: int = 0) -> NormExpr:
    return extension_chain(base, cover, depth, start)[0]


# -- the disjoint-balls counterexample ----------------------------------------

THIRD = Fraction(1, 3)


def counterexample_balls(norms: Sequence[NormExpr], radius=THIRD) -> BallCover:
    """Level k holds the open ball of radius 1/3 at e_k for max(sup, N_k)."""
    sup = Diagonal.sup()
    K = len(norms)
    flag = Flag([0], range(1, K)) if K else Flag()
    levels = {
        k: [BallSpec(FinVector.basis(k), radius, MaxOf([sup, N]), True)]
        for k, N in enumerate(norms)
    }
    return BallCover(flag, levels)


def _dominates_sup(N: NormExpr) -> bool:
    return isinstance(N, MaxOf) and any(m == Diagonal.sup() for m in N.members)


@dataclass
class DisjointnessCert:
    """sup(c_k - c_l) > r_k + r_l, with sup <= N_k and sup <= N_l, so B_k and B_l
    cannot share a point."""

    k: int
    l: int
    separation: Fraction
    radius_k: Fraction
    radius_l: Fraction
    premise_k: bool
    premise_l: bool

    @property
    def bound(self) -> Fraction:
        return self.radius_k + self.radius_l

    @property
    def valid(self) -> bool:
        return self.premise_k and self.premise_l and self.separation > self.bound


def disjointness_certificate(cover: BallCover, k: int, l: int) -> DisjointnessCert:
    if k == l:
        raise InvalidPairError(f"disjointness needs two distinct balls, got k = l = {k}")
    try:
        bk, bl = cover.level(k)[0], cover.level(l)[0]
    except IndexError:
        raise MalformedInputError(f"cover has no ball at level {k} or {l}") from None
    sep = eval_norm(Diagonal.sup(), bk.center - bl.center)
    return DisjointnessCert(k, l, sep, bk.radius, bl.radius,
                            _dominates_sup(bk.norm), _dominates_sup(bl.norm))


def check_disjointness(cover: BallCover, cert: DisjointnessCert) -> bool:
    """Recompute every quantity of the certificate from the cover."""
    fresh = disjointness_certificate(cover, cert.k, cert.l)
    return fresh == cert and fresh.valid


@dataclass
class AbsorptionResult:
    """Outcome of testing whether the candidate ball B(e_k, r) fits inside O.

    When ``absorbed``, every sampled direction u satisfies
    N_k(u) <= constant * candidate(u). Otherwise ``witness`` lies in the
    candidate ball but in no ball of the cover.
    """

    k: int
    r: Fraction
    absorbed: bool
    constant: Fraction | None = None
    directions: int = 0
    direction: FinVector | None = None
    witness: FinVector | None = None


def absorption_domination(candidate: NormExpr, k: int, r, cover: BallCover,
                          samples: Sequence[FinVector]) -> AbsorptionResult:
    """Segment test along each sampled direction u through e_k.

    The open candidate ball meets the line e_k + t u in |t| < r / N(u). Since
    the balls of the cover are disjoint and open, that connected segment lies
    in O only if it lies in B_k, i.e. only if r * N_k(u) / N(u) <= r_k.
    """
    r = as_scalar(r)
    if r <= 0:
        raise MalformedInputError("candidate radius must be positive")
    try:
        ball = cover.level(k)[0]
    except IndexError:
        raise MalformedInputError(f"cover has no ball at level {k}") from None
    count = 0
    for u in samples:
        if not u:
            continue
        count += 1
        nu, nk = eval_norm(candidate, u), eval_norm(ball.norm, u)
        if r * nk <= ball.radius * nu:
            continue
        # boundary point of B_k on the segment; strictly inside the candidate ball
        t0 = ball.radius / nk
        witness = ball.center + t0 * u
        assert eval_norm(candidate, witness - ball.center) < r
        assert not cover_contains(cover, witness)
        return AbsorptionResult(k, r, False, None, count, u, witness)
    return AbsorptionResult(k, r, True, ball.radius / r, count)


# -- opening norm ---------------------------------------------------------------

@dataclass
class OpeningCert:
    """Closed N-ball of radius ``radius`` around ``sample`` inside the cover,
    obtained through the extension norm built at ``center``."""

    sample: FinVector
    radius: Fraction
    center: FinVector
    member: int
    contained: bool


@dataclass
class OpeningResult:
    norm: NormExpr
    family: list[NormExpr] = field(default_factory=list)
    centers: list[FinVector] = field(default_factory=list)
    domination: DomCert | None = None
    certificates: list[OpeningCert] = field(default_factory=list)


def build_opening_norm(cover: BallCover, depth: int, samples: Sequence[FinVector],
                       reference: NormExpr | None = None) -> OpeningResult:
    """One norm N on F_depth for which O ∩ F_depth is open, with certificates.

    Centers are the ball centers at levels <= depth, plus any sample that no
    earlier center's unit ball already holds.
    Around each center x at level n, the largest closed reference ball inside
    O ∩ F_n is halved to radius r_x; the scaled reference norm r_x^-1 * ref
    on F_n is extended along the translated cover O - x up to F_depth, giving
    N_x. N is the family supremum of N_x / c_x, with c_x the equivalence
    constant of N_x against the reference. A sample p with N_x(p - x) < 1 gets
    radius (1 - N_x(p - x)) / c_x.
    """
    ref = reference if reference is not None else Diagonal.sup()
    if not 0 <= depth <= cover.flag.depth:
        raise MalformedInputError(f"depth {depth} outside flag of depth {cover.flag.depth}")
    top = cover.flag.slice(depth)

    levels = []
    for p in samples:
        n = cover.flag.level_of(p)
        if n is None or n > depth or not slice_membership(cover, p, n):
            raise SampleNotInSetError(
                f"sample {p} is not in the cover within F_{depth}", {"sample": p}
            )
        levels.append(n)

    centers: list[FinVector] = []
    family, consts = [], []

    def add_center(x: FinVector, n: int):
        F = cover.flag.slice(n)
        w0 = slice_weights(ref, F)
        coords = [x[k] for k in F]
        t_star, _ = max_dilation(F, coords, coords, [1 / w0[k] for k in F],
                                 cover_boxes(cover, n), closed=True)
        if t_star == 0:
            raise ZeroSeparationError(f"{x} is not an interior point of the cover", {"point": x})
        base = Scale(2 / t_star, ref)
        Nx, _ = extension_chain(base, cover.translate(x), depth - n, start=n)
        if depth == n:
            Nx = Extension(base, Flag(F, ()), ())
        centers.append(x)
        family.append(Nx)
        consts.append(equivalence_constant(Nx, ref, top))

    for m, ball in cover.all_balls():
        if m <= depth and ball.center not in centers:
            add_center(ball.center, m)
    # a sample becomes a center only when no unit ball built so far holds it
    for p, n in zip(samples, levels):
        if not any(eval_norm(N, p - x) < 1 for N, x in zip(family, centers)):
            add_center(p, n)

    if not centers:
        return OpeningResult(ref)

    dom = dominate_family(family, consts, list(samples))
    N = dom.dominating
    boxes = cover_boxes(cover, depth)
    certs = []
    for p in samples:
        best = None
        for i, x in enumerate(centers):
            inside = eval_norm(family[i], p - x)
            if inside < 1:
                rho = (1 - inside) / consts[i]
                if best is None or rho > best[0]:
                    best = (rho, i)
        rho, i = best
        ok = box_in_union(ball_box(N, top, rho, p), boxes)
        if not ok:
            raise AssertionError(f"certificate ball around {p} escapes the cover")
        certs.append(OpeningCert(p, rho, centers[i], i, ok))
    return OpeningResult(N, family, centers, dom, certs)


def check_opening(cover: BallCover, depth: int, norm: NormExpr, cert: OpeningCert) -> bool:
    top = cover.flag.slice(depth)
    return box_in_union(ball_box(norm, top, cert.radius, cert.sample), cover_boxes(cover, depth))


def sample_cover_points(cover: BallCover, depth: int, rng, count: int,
                        denominator_bound: int = 64, attempts: int = 50) -> list[FinVector]:
    """Seeded rational points of O ∩ F_depth (each checked at its own level)."""
    top = cover.flag.slice(depth)
    balls = [b for m, b in cover.all_balls() if m <= depth]
    if not balls:
        return []
    out = []
    for _ in range(count * attempts):
        if len(out) == count:
            break
        box = rng.choice(balls).box(top)
        coords = {}
        for k, iv in zip(box.indices, box.intervals):
            q = rng.randint(1, denominator_bound)
            u = Fraction(rng.randint(-q + 1, q - 1), q)
            coords[k] = (iv.lo + iv.hi) / 2 + u * (iv.hi - iv.lo) / 2
        p = FinVector(coords)
        n = cover.flag.level_of(p)
        if slice_membership(cover, p, n):
            out.append(p)
    return out
