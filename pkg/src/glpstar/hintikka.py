"""Canonical-model machinery: Hintikka candidates and witness elimination.

A candidate world over an adequate set is determined by a truth assignment
to its atoms (variables and diamond formulas); every other member's truth is
forced by boolean evaluation. Candidates additionally satisfy two local
closure constraints mirroring the completeness axioms: a diamond whose body
has sort at most its level pulls the body in, and a nested diamond <m><n>x
with m < n pulls <m>x in.

The engine enumerates assignments in blocks with numpy, keeping one packed
row per candidate: per level, the candidate's diamond mask, the diamonds a
witness demand would impose on a predecessor, and the concatenated masks of
the lower levels. The canonical relation then reduces to a few integer
comparisons, and the witness-elimination fixpoint to masked reductions.

The relation follows the four textbook conditions with condition (2) widened
from "same level" to "same or higher level": an edge at level n absorbs a
successor's diamonds at every level k >= n down to level n. The literal
same-level reading admits survivor triples x ->0 y ->1 z with no x ->0 z
edge, which breaks the inter-level frame conditions the validators enforce;
the widened reading provably restores them (see the repository notes).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .formulas import (
    OMEGA,
    And,
    Bot,
    Dia,
    Formula,
    Neg,
    Or,
    Top,
    Var,
    formula_size,
    is_adequate,
    modal_levels,
    sort_key,
    sort_of,
)
from .kripke import KripkeModel

DEFAULT_CANDIDATE_CAP = 1 << 20
_SPACE_SLACK = 64
_CHUNK_BITS = 16


class ResourceLimitError(RuntimeError):
    """The candidate enumeration exceeded its cap; no verdict was produced."""


@dataclass
class EliminationStats:
    delta_size: int = 0
    atom_count: int = 0
    candidates: int = 0
    rounds: list[int] = field(default_factory=list)

    @property
    def survivors(self) -> int:
        return self.rounds[-1] if self.rounds else self.candidates


def canonical_relation(delta: Iterable[Formula], x: Iterable[Formula], y: Iterable[Formula], n: int) -> bool:
    """Reference implementation of the canonical edge test at level n.

    (1) a body in y whose level-n diamond is in the set forces that diamond
    into x; (2) a diamond in y at level k >= n forces its level-n twin into
    x; (3) x and y agree on all diamonds below n; (4) some level-n diamond
    separates x from y. Levels without diamonds in the set carry no edges.
    """
    dset = frozenset(delta)
    xset = frozenset(x)
    yset = frozenset(y)
    if n not in modal_levels(dset):
        return False
    dias = [f for f in dset if isinstance(f, Dia)]
    for f in dias:
        if f.index == n and f.child in yset and f not in xset:
            return False
        if f.index >= n and f in yset and Dia(n, f.child) not in xset:
            return False
        if f.index < n and (f in xset) != (f in yset):
            return False
    return any(f.index == n and f in xset and f not in yset for f in dias)


class CanonicalEngine:
    """Packed candidate table over an adequate set, with witness elimination."""

    def __init__(self, delta: Iterable[Formula], candidate_cap: int = DEFAULT_CANDIDATE_CAP):
        dset = frozenset(delta)
        if not is_adequate(dset):
            raise ValueError("canonical construction needs an adequate formula set")
        self.delta = dset
        self.delta_sorted = sorted(dset, key=sort_key)
        self.levels = sorted(modal_levels(dset))
        self.cap = candidate_cap

        variables = sorted(
            {f for f in dset if isinstance(f, Var)}, key=lambda v: (v.name, sort_key(v))
        )
        diamonds = sorted(
            {f for f in dset if isinstance(f, Dia)}, key=lambda d: (formula_size(d), sort_key(d))
        )
        self.atoms: list[Formula] = list(variables) + list(diamonds)
        self.atom_pos = {f: i for i, f in enumerate(self.atoms)}
        self.variables = variables

        self.level_dias: dict[int, list[Dia]] = {
            n: sorted((d for d in diamonds if d.index == n), key=sort_key) for n in self.levels
        }
        self.level_bit = {
            d: i for n in self.levels for i, d in enumerate(self.level_dias[n])
        }
        for n in self.levels:
            if len(self.level_dias[n]) > 32:
                raise ResourceLimitError(f"more than 32 diamonds at level {n}")
        self.low_offset: dict[int, int] = {}
        offset = 0
        for n in self.levels:
            self.low_offset[n] = offset
            offset += len(self.level_dias[n])
        if offset > 63:
            raise ResourceLimitError("more than 63 diamond positions overall")

        # sigma constraints: <n>x true and sort(x) <= n forces x true
        self.sigma: list[tuple[int, Formula]] = []
        # transit constraints: <m><n>x true (m < n) forces <m>x true
        self.transit: list[tuple[int, int]] = []
        for d in diamonds:
            body_sort = sort_of(d.child)
            if body_sort is not OMEGA and body_sort <= d.index:
                self.sigma.append((self.atom_pos[d], d.child))
            if isinstance(d.child, Dia) and d.index < d.child.index:
                partner = Dia(d.index, d.child.child)
                if partner not in self.atom_pos:
                    raise AssertionError("adequate set is missing a transit partner")
                self.transit.append((self.atom_pos[d], self.atom_pos[partner]))

        # per level: (atom position of a >= level diamond, bit of its twin here)
        self.absorb_pairs: dict[int, list[tuple[int, int]]] = {n: [] for n in self.levels}
        for d in diamonds:
            for n in self.levels:
                if n > d.index:
                    continue
                twin = Dia(n, d.child)
                if twin not in self.level_bit:
                    raise AssertionError("adequate set is missing a level twin")
                self.absorb_pairs[n].append((self.atom_pos[d], self.level_bit[twin]))

        self._enumerate()
        self.alive = np.ones(self.count, dtype=bool)
        self.stats = EliminationStats(
            delta_size=len(dset), atom_count=len(self.atoms), candidates=self.count
        )
        self._eliminated = False

    # ----- candidate enumeration -----

    def _eval_block(self, indices: np.ndarray, formula: Formula, memo: dict) -> np.ndarray:
        hit = memo.get(formula)
        if hit is not None:
            return hit
        if isinstance(formula, Top):
            out = np.ones(len(indices), dtype=bool)
        elif isinstance(formula, Bot):
            out = np.zeros(len(indices), dtype=bool)
        elif isinstance(formula, (Var, Dia)):
            pos = self.atom_pos[formula]
            out = ((indices >> np.uint64(pos)) & np.uint64(1)).astype(bool)
        elif isinstance(formula, Neg):
            out = ~self._eval_block(indices, formula.child, memo)
        elif isinstance(formula, And):
            out = self._eval_block(indices, formula.left, memo) & self._eval_block(indices, formula.right, memo)
        elif isinstance(formula, Or):
            out = self._eval_block(indices, formula.left, memo) | self._eval_block(indices, formula.right, memo)
        else:
            raise TypeError(f"not a core formula: {formula!r}")
        memo[formula] = out
        return out

    def _enumerate(self) -> None:
        n_atoms = len(self.atoms)
        if n_atoms > 63:
            raise ResourceLimitError(f"{n_atoms} atoms exceed the 63-bit index budget")
        space = 1 << n_atoms
        if space > self.cap * _SPACE_SLACK:
            raise ResourceLimitError(
                f"assignment space 2^{n_atoms} exceeds the candidate cap {self.cap}"
            )
        kept_idx: list[np.ndarray] = []
        kept_cols: dict[tuple[str, int], list[np.ndarray]] = {}
        for n in self.levels:
            for kind in ("d", "need", "req", "low"):
                kept_cols[(kind, n)] = []
        pop_parts: list[np.ndarray] = []
        total = 0

        chunk = 1 << min(_CHUNK_BITS, n_atoms)
        for start in range(0, space, chunk):
            stop = min(start + chunk, space)
            indices = np.arange(start, stop, dtype=np.uint64)
            memo: dict = {}
            ok = np.ones(len(indices), dtype=bool)
            for atom_pos, body in self.sigma:
                dia_true = ((indices >> np.uint64(atom_pos)) & np.uint64(1)).astype(bool)
                ok &= ~dia_true | self._eval_block(indices, body, memo)
            for atom_pos, partner_pos in self.transit:
                dia_true = ((indices >> np.uint64(atom_pos)) & np.uint64(1)).astype(bool)
                partner_true = ((indices >> np.uint64(partner_pos)) & np.uint64(1)).astype(bool)
                ok &= ~dia_true | partner_true
            if not ok.any():
                continue
            indices = indices[ok]
            memo = {k: v[ok] for k, v in memo.items()}
            total += len(indices)
            if total > self.cap:
                raise ResourceLimitError(
                    f"candidate count exceeds the cap {self.cap}"
                )
            kept_idx.append(indices)

            level_d: dict[int, np.ndarray] = {}
            pop = np.zeros(len(indices), dtype=np.uint16)
            for n in self.levels:
                d = np.zeros(len(indices), dtype=np.uint32)
                need = np.zeros(len(indices), dtype=np.uint32)
                for bit, dia in enumerate(self.level_dias[n]):
                    dia_true = self._eval_block(indices, dia, memo)
                    d |= dia_true.astype(np.uint32) << np.uint32(bit)
                    body_true = self._eval_block(indices, dia.child, memo)
                    need |= body_true.astype(np.uint32) << np.uint32(bit)
                req = need.copy()
                for atom_pos, twin_bit in self.absorb_pairs[n]:
                    dia_true = ((indices >> np.uint64(atom_pos)) & np.uint64(1)).astype(np.uint32)
                    req |= dia_true << np.uint32(twin_bit)
                level_d[n] = d
                kept_cols[("d", n)].append(d)
                kept_cols[("need", n)].append(need)
                kept_cols[("req", n)].append(req)
                pop += np.bitwise_count(d).astype(np.uint16)
            for n in self.levels:
                low = np.zeros(len(indices), dtype=np.uint64)
                for m in self.levels:
                    if m >= n:
                        break
                    low |= level_d[m].astype(np.uint64) << np.uint64(self.low_offset[m])
                kept_cols[("low", n)].append(low)
            pop_parts.append(pop)

        self.count = total
        self._truth_cache: dict[Formula, np.ndarray] = {}
        if total:
            self.atom_index = np.concatenate(kept_idx)
            self.dia_pop = np.concatenate(pop_parts)
            self.col = {key: np.concatenate(parts) for key, parts in kept_cols.items()}
        else:
            self.atom_index = np.zeros(0, dtype=np.uint64)
            self.dia_pop = np.zeros(0, dtype=np.uint16)
            self.col = {
                key: np.zeros(0, dtype=np.uint64 if key[0] == "low" else np.uint32)
                for key in kept_cols
            }

    # ----- vector queries -----

    def truth_column(self, formula: Formula) -> np.ndarray:
        """Truth of a set member at every candidate, as a bool column."""
        cached = self._truth_cache.get(formula)
        if cached is None:
            cached = self._eval_block(self.atom_index, formula, {})
            self._truth_cache[formula] = cached
        return cached

    # ----- elimination -----

    def eliminate(self, stop_mask: Optional[np.ndarray] = None) -> EliminationStats:
        """Round-synchronous deletion of worlds with unwitnessed diamonds.

        With a stop mask the loop returns early once no masked row is alive;
        survivors only ever shrink, so an early exit is sound for callers
        that only care whether some masked row survives to the fixpoint.
        """
        if self._eliminated:
            return self.stats
        # Deletions are applied level by level as soon as they are found:
        # the witnessed-worlds operator is monotone, so any removal order
        # reaches the same greatest fixpoint as simultaneous rounds.
        while True:
            if stop_mask is not None and not bool((self.alive & stop_mask).any()):
                return self.stats
            changed = False
            for n in self.levels:
                alive_rows = np.flatnonzero(self.alive)
                if len(alive_rows) == 0:
                    break
                d = self.col[("d", n)][alive_rows]
                if not bool((d != 0).any()):
                    continue
                low = self.col[("low", n)][alive_rows]
                req = self.col[("req", n)][alive_rows]
                need = self.col[("need", n)][alive_rows]
                uncovered = self._uncovered(low, d, req, need, len(self.level_dias[n]))
                if len(uncovered):
                    self.alive[alive_rows[uncovered]] = False
                    changed = True
            if not changed:
                break
            self.stats.rounds.append(int(self.alive.sum()))
        self._eliminated = True
        return self.stats

    _LATTICE_LIMIT = 1 << 24

    @classmethod
    def _uncovered(cls, low: np.ndarray, d: np.ndarray, req: np.ndarray,
                   need: np.ndarray, width: int) -> np.ndarray:
        """Rows whose diamond mask is not covered by witnesses in their class.

        A witness for target mask D within a low-class is a row y with
        req(y) a subset of D and d(y) != D; it covers the diamond bits of
        need(y). Coverage is computed for every mask at once on a
        (class x 2^width) lattice: scatter the aggregated need masks to the
        req slots, take the strict-subset OR along the mask axis, and patch
        the diagonal slots, whose rows only count when d differs from req.
        """
        _, cls_id = np.unique(low, return_inverse=True)
        classes = int(cls_id.max()) + 1 if len(cls_id) else 0
        if classes << width > cls._LATTICE_LIMIT:
            return cls._uncovered_crossjoin(low, d, req, need)
        size = classes << width
        slot = (cls_id.astype(np.int64) << width) | req.astype(np.int64)
        f_all = np.zeros(size, dtype=np.uint32)
        np.bitwise_or.at(f_all, slot, need)
        f_offdiag = np.zeros(size, dtype=np.uint32)
        off = d != req
        np.bitwise_or.at(f_offdiag, slot[off], need[off])
        subset_or = f_all.reshape(classes, 1 << width)
        for b in range(width):
            view = subset_or.reshape(classes, 1 << (width - b - 1), 2, 1 << b)
            view[:, :, 1, :] |= view[:, :, 0, :]
        strict = np.zeros_like(subset_or)
        for b in range(width):
            sview = strict.reshape(classes, 1 << (width - b - 1), 2, 1 << b)
            hview = subset_or.reshape(classes, 1 << (width - b - 1), 2, 1 << b)
            sview[:, :, 1, :] |= hview[:, :, 0, :]
        target = (cls_id.astype(np.int64) << width) | d.astype(np.int64)
        cov = strict.reshape(-1)[target] | f_offdiag[target]
        return np.flatnonzero((d != 0) & ((d & ~cov) != 0))

    @staticmethod
    def _uncovered_crossjoin(low: np.ndarray, d: np.ndarray, req: np.ndarray,
                             need: np.ndarray) -> np.ndarray:
        """Fallback for lattices too large to materialize: ragged cross join
        of aggregated witness groups against distinct target profiles."""
        rows = len(low)
        gorder = np.lexsort((d, req, low))
        glow, greq, gd, gneed = low[gorder], req[gorder], d[gorder], need[gorder]
        gb = np.empty(rows, dtype=bool)
        gb[0] = True
        gb[1:] = (glow[1:] != glow[:-1]) | (greq[1:] != greq[:-1]) | (gd[1:] != gd[:-1])
        gstarts = np.flatnonzero(gb)
        glow, greq, gd = glow[gstarts], greq[gstarts], gd[gstarts]
        gneed = np.bitwise_or.reduceat(gneed, gstarts)

        torder = np.lexsort((d, low))
        tlow, td = low[torder], d[torder]
        tb = np.empty(rows, dtype=bool)
        tb[0] = True
        tb[1:] = (tlow[1:] != tlow[:-1]) | (td[1:] != td[:-1])
        profile_sorted = np.cumsum(tb) - 1
        profile_of = np.empty(rows, dtype=np.int64)
        profile_of[torder] = profile_sorted
        pstarts = np.flatnonzero(tb)
        plow, pd = tlow[pstarts], td[pstarts]

        class_start = np.searchsorted(glow, plow, side="left")
        class_end = np.searchsorted(glow, plow, side="right")
        gcount = class_end - class_start
        total = int(gcount.sum())
        cov = np.zeros(len(pd), dtype=np.uint32)
        if total:
            offsets = np.concatenate(([0], np.cumsum(gcount)))
            flat = np.arange(total, dtype=np.int64)
            pid = np.searchsorted(offsets, flat, side="right") - 1
            gid = class_start[pid] + (flat - offsets[pid])
            valid = ((greq[gid] & ~pd[pid]) == 0) & (gd[gid] != pd[pid])
            np.bitwise_or.at(cov, pid[valid], gneed[gid[valid]])
        return np.flatnonzero((d != 0) & ((d & ~cov[profile_of]) != 0))

    # ----- scalar queries -----

    def relation(self, i: int, j: int, n: int) -> bool:
        """Canonical edge between candidate rows, by packed masks."""
        if n not in self.low_offset:
            return False
        if self.col[("low", n)][i] != self.col[("low", n)][j]:
            return False
        d_i = int(self.col[("d", n)][i])
        if int(self.col[("req", n)][j]) & ~d_i:
            return False
        return int(self.col[("d", n)][j]) != d_i

    def membership(self, i: int) -> frozenset[Formula]:
        """The candidate's formula set."""
        idx = np.array([self.atom_index[i]], dtype=np.uint64)
        memo: dict = {}
        return frozenset(
            f for f in self.delta_sorted if bool(self._eval_block(idx, f, memo)[0])
        )

    def contains(self, i: int, formula: Formula) -> bool:
        idx = np.array([self.atom_index[i]], dtype=np.uint64)
        return bool(self._eval_block(idx, formula, {})[0])

    def find_witness(self, i: int, n: int, body: Formula) -> Optional[int]:
        """Least-junk alive successor at level n containing the body."""
        alive = self.alive.copy()
        alive &= self.col[("low", n)] == self.col[("low", n)][i]
        d_i = self.col[("d", n)][i]
        alive &= (self.col[("req", n)] & ~d_i) == 0
        alive &= self.col[("d", n)] != d_i
        if not alive.any():
            return None
        rows = np.flatnonzero(alive)
        rows = rows[self.truth_column(body)[rows]] if len(rows) else rows
        if len(rows) == 0:
            return None
        best = rows[np.lexsort((rows, self.dia_pop[rows]))][0]
        return int(best)

    def survivor_rows(self) -> np.ndarray:
        return np.flatnonzero(self.alive)

    # ----- materialization -----

    def build_model(self, rows: Iterable[int], names: Optional[list[str]] = None,
                    root: Optional[int] = None) -> KripkeModel:
        """Kripke model over the given candidate rows, worlds named w0, w1, ..."""
        rows = list(rows)
        if names is None:
            names = [f"w{k}" for k in range(len(rows))]
        name_of = dict(zip(rows, names))
        memberships = {r: self.membership(r) for r in rows}
        relations: dict[int, set[tuple[str, str]]] = {n: set() for n in self.levels}
        for a in rows:
            for b in rows:
                for n in self.levels:
                    if self.relation(a, b, n):
                        relations[n].add((name_of[a], name_of[b]))
        valuation = {}
        sorts = {}
        for var in self.variables:
            valuation[var.name] = frozenset(
                name_of[r] for r in rows if var in memberships[r]
            )
            sorts[var.name] = var.sort
        return KripkeModel(
            worlds=tuple(names),
            relations={n: frozenset(pairs) for n, pairs in relations.items() if pairs},
            valuation=valuation,
            sorts=sorts,
            root=name_of[root] if root is not None else None,
        )


def hintikka_candidates(delta: Iterable[Formula],
                        candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> frozenset[frozenset[Formula]]:
    """All subsets of the adequate set satisfying the candidate invariants."""
    engine = CanonicalEngine(delta, candidate_cap)
    return frozenset(engine.membership(i) for i in range(engine.count))


@dataclass
class CanonicalResult:
    model: KripkeModel
    membership: dict[str, frozenset[Formula]]
    stats: EliminationStats


def build_canonical_detailed(delta: Iterable[Formula],
                             candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                             verify_truth_lemma: bool = False) -> CanonicalResult:
    """Canonical model plus each world's formula set and elimination stats."""
    engine = CanonicalEngine(delta, candidate_cap)
    engine.eliminate()
    rows = [int(r) for r in engine.survivor_rows()]
    model = engine.build_model(rows)
    membership = {f"w{k}": engine.membership(r) for k, r in enumerate(rows)}
    if verify_truth_lemma:
        _assert_truth_lemma(model, membership, engine.delta)
    return CanonicalResult(model=model, membership=membership, stats=engine.stats)


def build_canonical(delta: Iterable[Formula],
                    candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                    verify_truth_lemma: bool = False) -> KripkeModel:
    """Worlds are the surviving candidates; truth there is membership."""
    return build_canonical_detailed(delta, candidate_cap, verify_truth_lemma).model


def _assert_truth_lemma(model: KripkeModel, membership: dict[str, frozenset[Formula]],
                        delta: frozenset[Formula]) -> None:
    from .kripke import Evaluator

    if not model.worlds:
        return
    ev = Evaluator(model)
    for formula in delta:
        ext = ev.extension(formula)
        for w in model.worlds:
            holds = bool(ext >> ev.index[w] & 1)
            if holds != (formula in membership[w]):
                raise AssertionError(
                    f"truth lemma failed at {w} for {formula!r}: "
                    f"satisfaction {holds}, membership {formula in membership[w]}"
                )
