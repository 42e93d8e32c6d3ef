"""Block families, Steiner-system checks and the small witness constructions.

Block-family files are plain text: a header ``n k label``, then one block per
line as space-separated 1-based points.  Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .combinat import KSet, SchemeParams, binom, divisibility_conditions, mask_of
from .config import cache_dir
from .graphs import ClassSet, VertexSet, build_graph
from .scheme import InternalConsistencyError
from .search.cover import Partition, exact_cover, exact_cover_partition, verify_colouring

__all__ = [
    "BlockFamily",
    "DesignReport",
    "SteinerVerdict",
    "SmallWitness",
    "WITNESS_CASES",
    "BUILTIN_NAMES",
    "read_blocks",
    "write_blocks",
    "verify_steiner",
    "design_report",
    "ekr_coclique",
    "builtin_design",
    "steiner_system",
    "overlarge_set_9_4",
    "small_witness",
    "section3_witness",
    "verify_large_set",
]


@dataclass(frozen=True)
class BlockFamily:
    n: int
    k: int
    blocks: tuple[KSet, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if len(set(self.blocks)) != len(self.blocks):
            raise ValueError(f"{self.label or 'family'} has repeated blocks")
        for b in self.blocks:
            if b.n != self.n or b.k != self.k:
                raise ValueError(f"block {b} is not a {self.k}-subset of 1..{self.n}")

    @classmethod
    def of(cls, n: int, blocks: Iterable[Iterable[int]], label: str = "") -> "BlockFamily":
        ks = tuple(KSet.of(n, b) for b in blocks)
        k = ks[0].k if ks else 0
        return cls(n, k, ks, label)

    @property
    def tuples(self) -> list[tuple[int, ...]]:
        return [b.elements for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)

    def vertex_set(self, n: int | None = None) -> VertexSet:
        """The blocks as vertices of J(n, k); ``n`` may exceed the family's own n."""
        return VertexSet.from_blocks(SchemeParams(n or self.n, self.k), self.tuples)

    def intersection_profile(self) -> frozenset[int]:
        masks = [b.mask for b in self.blocks]
        return frozenset((a & b).bit_count() for a, b in itertools.combinations(masks, 2))


def read_blocks(path: str | Path) -> BlockFamily:
    header = None
    blocks = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if header is None:
            if len(fields) < 2:
                raise ValueError(f"{path}:{lineno}: header must be 'n k label'")
            header = (int(fields[0]), int(fields[1]), " ".join(fields[2:]))
            continue
        block = [int(f) for f in fields]
        if len(block) != header[1]:
            raise ValueError(f"{path}:{lineno}: block of size {len(block)}, expected {header[1]}")
        blocks.append(block)
    if header is None:
        raise ValueError(f"{path}: no header line")
    n, k, label = header
    if not blocks:
        return BlockFamily(n, k, (), label)
    fam = BlockFamily.of(n, blocks, label)
    return fam


def write_blocks(fam: BlockFamily, path: str | Path, comment: str | None = None) -> None:
    lines = [f"{fam.n} {fam.k} {fam.label}".rstrip()]
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.extend(" ".join(map(str, b)) for b in fam.tuples)
    Path(path).write_text("\n".join(lines) + "\n")


# -- verification ----------------------------------------------------------


@dataclass(frozen=True)
class SteinerVerdict:
    ok: bool
    failure: str | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_steiner(fam: BlockFamily, t: int) -> SteinerVerdict:
    """Check that every t-subset of 1..n lies in exactly one block."""
    n, k = fam.n, fam.k
    if not 0 < t < k:
        raise ValueError(f"needs 0 < t < k, got t={t}, k={k}")
    expect = binom(n, t) // binom(k, t)
    if binom(n, t) % binom(k, t) or len(fam) != expect:
        return SteinerVerdict(False, f"{len(fam)} blocks, an S({t},{k},{n}) has C(n,t)/C(k,t)")
    seen: dict[int, int] = {}
    for b in fam.blocks:
        for sub in itertools.combinations(b.elements, t):
            m = mask_of(sub)
            if m in seen:
                return SteinerVerdict(False, f"{sub} covered twice", sub)
            seen[m] = 1
    for sub in itertools.combinations(range(1, n + 1), t):
        if mask_of(sub) not in seen:
            return SteinerVerdict(False, f"{sub} not covered", sub)
    return SteinerVerdict(True)


@dataclass(frozen=True)
class DesignReport:
    is_steiner_for: frozenset[int]
    intersection_profile: frozenset[int]
    large_set_note: str | None = None


def design_report(fam: BlockFamily) -> DesignReport:
    ts = frozenset(t for t in range(1, fam.k) if verify_steiner(fam, t))
    return DesignReport(ts, fam.intersection_profile())


def verify_large_set(fams: Sequence[BlockFamily], t: int) -> tuple[bool, str]:
    """True iff every family is an S(t,k,n) and together they partition all k-sets."""
    if not fams:
        return False, "no families"
    n, k = fams[0].n, fams[0].k
    if any(f.n != n or f.k != k for f in fams):
        return False, "families over different (n, k)"
    for idx, f in enumerate(fams):
        verdict = verify_steiner(f, t)
        if not verdict:
            return False, f"family {idx} is not an S({t},{k},{n}): {verdict.failure}"
    seen: set[int] = set()
    for idx, f in enumerate(fams):
        for b in f.blocks:
            if b.mask in seen:
                return False, f"block {b} repeated in family {idx}"
            seen.add(b.mask)
    if len(seen) != binom(n, k):
        return False, f"{len(seen)} of {binom(n, k)} k-sets covered"
    return True, "large set"


def ekr_coclique(n: int, k: int, kernel: Iterable[int]) -> VertexSet:
    """All k-subsets of 1..n containing ``kernel``."""
    kern = sorted(set(kernel))
    t = len(kern)
    if not t < k:
        raise ValueError(f"kernel of size {t} needs to be smaller than k={k}")
    if kern and (kern[0] < 1 or kern[-1] > n):
        raise ValueError(f"kernel {kern} outside 1..{n}")
    rest = [p for p in range(1, n + 1) if p not in kern]
    return VertexSet.from_blocks(
        SchemeParams(n, k), (kern + list(extra) for extra in itertools.combinations(rest, k - t))
    )


# -- builtins and constructions --------------------------------------------


BUILTIN_NAMES = ("fano", "sqs8", "s2_4_13", "w11", "w12")
_BUILTIN_T = {"fano": 2, "sqs8": 3, "s2_4_13": 2, "w11": 4, "w12": 5}


def _affine_planes(m: int) -> list[list[int]]:
    """Planes of AG(m, 2) on points 1..2^m (point p is the vector p-1)."""
    blocks = set()
    for a, b, c in itertools.combinations(range(2 ** m), 3):
        blocks.add(tuple(sorted(p + 1 for p in (a, b, c, a ^ b ^ c))))
    return sorted(blocks)


def _fano() -> list[list[int]]:
    return [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]]


def _pg23() -> list[list[int]]:
    # lines of PG(2,3): translates of the difference set {0,1,3,9} mod 13
    return [sorted((i + d) % 13 + 1 for d in (0, 1, 3, 9)) for i in range(13)]


def _data_family(name: str) -> BlockFamily:
    text = resources.files("jscheme").joinpath("data", f"{name}.blocks")
    with resources.as_file(text) as path:
        return read_blocks(path)


@lru_cache(maxsize=None)
def builtin_design(name: str) -> BlockFamily:
    """Embedded Steiner systems; each one is verified before it is returned."""
    if name == "fano":
        fam = BlockFamily.of(7, _fano(), "fano")
    elif name == "sqs8":
        fam = BlockFamily.of(8, _affine_planes(3), "sqs8")
    elif name == "s2_4_13":
        fam = BlockFamily.of(13, _pg23(), "s2_4_13")
    elif name in ("w11", "w12"):
        fam = _data_family(name)
    else:
        raise KeyError(f"unknown design {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    verdict = verify_steiner(fam, _BUILTIN_T[name])
    if not verdict:
        raise InternalConsistencyError(f"builtin {name} fails verification: {verdict.failure}")
    return fam


def _shapes(n: int) -> list[list[int]]:
    """Permutations of 0..n-1 tried as automorphisms: an n-cycle, an (n-1)-cycle
    fixing the last point, and two n/2-cycles."""
    out = [[(x + 1) % n for x in range(n)]]
    out.append([(x + 1) % (n - 1) for x in range(n - 1)] + [n - 1])
    if n % 2 == 0:
        h = n // 2
        out.append([(x + 1) % h + (x // h) * h for x in range(n)])
    return out


def _orbit_steiner(t: int, k: int, n: int, perm: list[int], budget: float) -> list[tuple[int, ...]] | None:
    """S(t,k,n) invariant under the cyclic group generated by ``perm``, by exact cover on orbits."""
    powers = [list(range(n))]
    while True:
        nxt = [perm[x] for x in powers[-1]]
        if nxt == powers[0]:
            break
        powers.append(nxt)

    def orbit(s):
        return {tuple(sorted(g[x] for x in s)) for g in powers}

    t_orbit_of: dict = {}
    t_len: dict = {}
    for s in itertools.combinations(range(n), t):
        if s not in t_orbit_of:
            o = orbit(s)
            key = min(o)
            t_len[key] = len(o)
            for m in o:
                t_orbit_of[m] = key
    rows = {}
    done = set()
    for b in itertools.combinations(range(n), k):
        if b in done:
            continue
        o = orbit(b)
        done |= o
        hits: dict = {}
        for sub in itertools.combinations(b, t):
            key = t_orbit_of[sub]
            hits[key] = hits.get(key, 0) + 1
        if all(c * len(o) == t_len[key] for key, c in hits.items()):
            rows[min(o)] = (list(hits), o)
    try:
        sol = next(exact_cover(sorted(t_len), {r: v[0] for r, v in rows.items()}, time_budget=budget), None)
    except TimeoutError:
        return None
    if sol is None:
        return None
    return sorted(tuple(x + 1 for x in blk) for r in sol for blk in rows[r][1])


def _cache_file(name: str) -> Path:
    return cache_dir() / name


def _load_cached(name: str, n: int, k: int, t: int) -> BlockFamily | None:
    path = _cache_file(name)
    if not path.exists():
        return None
    try:
        fam = read_blocks(path)
    except (OSError, ValueError):
        return None
    if fam.n == n and fam.k == k and verify_steiner(fam, t):
        return fam
    return None


def _store(fam: BlockFamily, name: str, comment: str) -> None:
    try:
        path = _cache_file(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_blocks(fam, path, comment)
    except OSError:
        pass  # the cache is an optimisation only


def steiner_system(t: int, k: int, n: int, *, budget: float = 60.0) -> BlockFamily | None:
    """A verified S(t,k,n) when one is known or found here, else None.

    Sources, in order: partitions for t = 1, the builtins, planes of AG(m,2)
    for S(3,4,2^m), the cache, and finally a search for a system with a cyclic automorphism.
    None means "not available", never "does not exist".
    """
    if not 0 < t < k < n:
        raise ValueError(f"needs 0 < t < k < n, got t={t}, k={k}, n={n}")
    label = f"S({t},{k},{n})"
    fam = None
    if t == 1 and n % k == 0:
        fam = BlockFamily.of(n, [range(i + 1, i + k + 1) for i in range(0, n, k)], label)
    for name in BUILTIN_NAMES:
        b = builtin_design(name)
        if fam is None and (b.n, b.k, _BUILTIN_T[name]) == (n, k, t):
            fam = b
    if fam is None and (t, k) == (3, 4) and n >= 8 and n & (n - 1) == 0:
        fam = BlockFamily.of(n, _affine_planes(n.bit_length() - 1), label)
    cache_name = f"steiner_{t}_{k}_{n}.blocks"
    if fam is None:
        fam = _load_cached(cache_name, n, k, t)
    if fam is None:
        if not divisibility_conditions(t, k, n)[0]:
            return None
        for perm in _shapes(n):
            blocks = _orbit_steiner(t, k, n, perm, budget)
            if blocks is not None:
                break
        else:
            return None
        fam = BlockFamily.of(n, blocks, label)
        _store(fam, cache_name, "system with a cyclic automorphism, found by exact cover")
    verdict = verify_steiner(fam, t)
    if not verdict:
        raise InternalConsistencyError(f"{label} fails verification: {verdict.failure}")
    return fam


# -- overlarge set and the small witnesses ---------------------------------


def _sqs8_copies() -> list[frozenset[int]]:
    """All distinct S(3,4,8) on points 0..7, as sets of block masks (30 of them)."""
    base = [[p - 1 for p in b] for b in builtin_design("sqs8").tuples]
    seen = set()
    for perm in itertools.permutations(range(8)):
        seen.add(frozenset(sum(1 << perm[p] for p in b) for b in base))
    return sorted(seen, key=lambda s: sorted(s))


def overlarge_set_9_4(*, use_cache: bool = True) -> list[BlockFamily]:
    """Nine S(3,4,8), one on each 8-subset of 1..9, partitioning all 4-subsets.

    Found by exact cover over every copy of S(3,4,8) on every 8-subset, and
    cached as JSON after the first run.
    """
    path = _cache_file("overlarge_9_4.json")
    if use_cache and path.exists():
        try:
            fams = [BlockFamily.of(9, b, f"sqs8 without {p}") for p, b in json.loads(path.read_text())]
            if _overlarge_ok(fams):
                return fams
        except (OSError, ValueError, TypeError):
            pass
    copies = _sqs8_copies()
    rows = {}
    for missing in range(1, 10):
        points = [p for p in range(1, 10) if p != missing]
        for idx, copy in enumerate(copies):
            blocks = [tuple(points[i] for i in range(8) if m >> i & 1) for m in copy]
            rows[(missing, idx)] = [mask_of(b) for b in blocks] + [("omit", missing)]
    columns = [mask_of(c) for c in itertools.combinations(range(1, 10), 4)]
    columns += [("omit", p) for p in range(1, 10)]
    sol = next(exact_cover(columns, rows), None)
    if sol is None:
        raise InternalConsistencyError("no overlarge set of S(3,4,8) found")
    fams = []
    payload = []
    for missing, idx in sorted(sol):
        points = [p for p in range(1, 10) if p != missing]
        blocks = sorted(tuple(points[i] for i in range(8) if m >> i & 1) for m in copies[idx])
        fams.append(BlockFamily.of(9, blocks, f"sqs8 without {missing}"))
        payload.append([missing, [list(b) for b in blocks]])
    if not _overlarge_ok(fams):
        raise InternalConsistencyError("overlarge set failed verification")
    if use_cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(payload))
        except OSError:
            pass
    return fams


def _overlarge_ok(fams: Sequence[BlockFamily]) -> bool:
    seen = set()
    for f in fams:
        pts = set().union(*(b.elements for b in f.blocks))
        if len(pts) != 8:
            return False
        relabel = {p: i + 1 for i, p in enumerate(sorted(pts))}
        local = BlockFamily.of(8, [[relabel[p] for p in b] for b in f.tuples])
        if not verify_steiner(local, 3):
            return False
        seen.update(b.mask for b in f.blocks)
    return len(seen) == binom(9, 4) and sum(len(f) for f in fams) == binom(9, 4)


@dataclass(frozen=True)
class SmallWitness:
    """A clique and a proper colouring with as many colours as clique vertices."""

    case_id: str
    params: SchemeParams
    classes: ClassSet
    clique: VertexSet
    colouring: Partition = field(repr=False)

    def verify(self) -> bool:
        g = build_graph(self.params, self.classes)
        return (
            g.is_clique(self.clique)
            and verify_colouring(g, self.colouring)
            and len(self.clique) == len(self.colouring)
        )


WITNESS_CASES = ("k3n7", "k3n8", "k4n9", "k5n11", "k5n12")


def _parts(params: SchemeParams, groups: Iterable[Iterable[Iterable[int]]]) -> Partition:
    return Partition(VertexSet.from_blocks(params, g) for g in groups)


def small_witness(case_id: str) -> SmallWitness:
    """Explicit clique-number-equals-chromatic-number certificates for small schemes."""
    if case_id == "k3n7":
        params = SchemeParams(7, 3)
        lines = builtin_design("fano").tuples
        groups = []
        for line in lines:
            rest = [p for p in range(1, 8) if p not in line]
            groups.append([line] + list(itertools.combinations(rest, 3)))
        w = SmallWitness(case_id, params, ClassSet.of(3, {2}),
                            VertexSet.from_blocks(params, lines), _parts(params, groups))
    elif case_id == "k3n8":
        params = SchemeParams(8, 3)
        lines = builtin_design("fano").tuples
        groups = []
        for line in lines:
            # the parallel class {L + 8, complement of L in 1..7} of the extended plane
            outside = [p for p in range(1, 8) if p not in line]
            groups.append(list(itertools.combinations(list(line) + [8], 3))
                          + list(itertools.combinations(outside, 3)))
        w = SmallWitness(case_id, params, ClassSet.of(3, {2}),
                            VertexSet.from_blocks(params, lines), _parts(params, groups))
    elif case_id == "k4n9":
        params = SchemeParams(9, 4)
        parts = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
        clique = [parts[i] + [x] for i in range(3) for x in parts[(i + 1) % 3]]
        g = build_graph(params, {1, 3})
        cands = [VertexSet.from_blocks(params, f.tuples) for f in overlarge_set_9_4()]
        colouring = exact_cover_partition(g, 14, cands)
        if colouring is None:
            raise InternalConsistencyError("overlarge set does not partition the 4-sets")
        w = SmallWitness(case_id, params, ClassSet.of(4, {1, 3}),
                            VertexSet.from_blocks(params, clique), colouring)
    elif case_id == "k5n11":
        params = SchemeParams(11, 5)
        blocks = builtin_design("w11").tuples
        groups = []
        for b in blocks:
            rest = [p for p in range(1, 12) if p not in b]
            groups.append([b] + list(itertools.combinations(rest, 5)))
        w = SmallWitness(case_id, params, ClassSet.of(5, {2, 3, 4}),
                            VertexSet.from_blocks(params, blocks), _parts(params, groups))
    elif case_id == "k5n12":
        params = SchemeParams(12, 5)
        hexads = builtin_design("w12").tuples
        hexad_set = {frozenset(h) for h in hexads}
        groups = []
        for h in hexads:
            comp = frozenset(range(1, 13)) - frozenset(h)
            if comp not in hexad_set:
                raise InternalConsistencyError("w12 is not closed under complements")
            if min(h) == 1:
                groups.append(list(itertools.combinations(h, 5))
                              + list(itertools.combinations(sorted(comp), 5)))
        clique = builtin_design("w11").tuples
        w = SmallWitness(case_id, params, ClassSet.of(5, {2, 3, 4}),
                            VertexSet.from_blocks(params, clique), _parts(params, groups))
    else:
        raise KeyError(f"unknown case {case_id!r}; known: {', '.join(WITNESS_CASES)}")
    if not w.verify():
        raise InternalConsistencyError(f"witness {case_id} fails verification")
    return w


section3_witness = small_witness
