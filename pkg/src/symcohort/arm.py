"""Association rule mining over per-questionnaire symptom transactions.

Each completed questionnaire becomes one transaction: the set of symptoms
the patient rated at or above the presence threshold at that timepoint.
Mining runs on raw (un-imputed) data only; carried-forward fills would
fabricate co-occurrence.

Supports and lifts are exact rationals throughout, so mining results are
bit-identical regardless of evaluation order. Frequent itemsets come from
a level-wise Apriori with vertical bitmask counting.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    EmptyTransactionSet,
    ImputedInputRejected,
    ZeroMarginalSupport,
)
from .model import CohortDataset
from .symptoms import ALL_SYMPTOMS
from .timegrid import PHASE_INDICES, TIME_GRID, Phase

DEFAULT_MIN_SUPPORT = 0.30
DEFAULT_MIN_LIFT = 1.2
DEFAULT_TOP_K = 20
DEFAULT_MAX_ITEMSET_SIZE = 4
DEFAULT_PRESENCE_THRESHOLD = 1


@dataclass(frozen=True)
class Transaction:
    tid: str
    items: frozenset


@dataclass(frozen=True)
class TransactionSet:
    transactions: tuple
    phase: Phase
    presence_threshold: int

    def __len__(self):
        return len(self.transactions)


@dataclass(frozen=True)
class ItemsetSupport:
    items: frozenset
    support: Fraction


@dataclass(frozen=True)
class AssociationRule:
    antecedent: frozenset
    consequent: frozenset
    support: Fraction
    lift: Fraction
    rule_id: int


def build_transactions(
    dataset: CohortDataset,
    phase: Phase,
    presence_threshold: int = DEFAULT_PRESENCE_THRESHOLD,
    merge_baseline: bool = False,
) -> TransactionSet:
    """One transaction per (patient, reported questionnaire) in the phase.

    A symptom joins the transaction iff its reported rating >= threshold;
    missing questionnaires yield no transaction, and all-zero questionnaires
    are dropped (empty item sets carry no co-occurrence information).
    `merge_baseline` folds the baseline questionnaire into the acute phase.
    """
    if dataset.imputed:
        raise ImputedInputRejected("rule mining requires raw (un-imputed) data")
    if not 1 <= presence_threshold <= 10:
        raise ValueError(f"presence_threshold must be in 1..10, got {presence_threshold}")
    indices = list(PHASE_INDICES[phase])
    if merge_baseline and phase == Phase.ACUTE:
        indices = [0] + indices

    transactions = []
    for pid in dataset.patient_ids():
        for t in indices:
            items = set()
            any_reported = False
            for sym in ALL_SYMPTOMS:
                s = dataset.series[(pid, sym)]
                if s.reported[t]:
                    any_reported = True
                    if s.values[t] >= presence_threshold:
                        items.add(sym)
            if any_reported and items:
                transactions.append(Transaction(f"{pid}@{TIME_GRID[t].label}", frozenset(items)))
    return TransactionSet(tuple(transactions), phase, presence_threshold)


def transaction_set_from_items(item_sets, phase=Phase.ACUTE, presence_threshold=1) -> TransactionSet:
    """Build a TransactionSet from bare item collections (fixtures, tests)."""
    txs = tuple(
        Transaction(f"t{i + 1:03d}", frozenset(items))
        for i, items in enumerate(item_sets)
        if items
    )
    return TransactionSet(txs, phase, presence_threshold)


def support(items, ts: TransactionSet) -> Fraction:
    """Fraction of transactions containing every item in `items` (exact)."""
    if not ts.transactions:
        raise EmptyTransactionSet("support is undefined on an empty transaction set")
    items = frozenset(items)
    if not items:
        raise ValueError("support of the empty itemset is not defined here")
    count = sum(1 for t in ts.transactions if items <= t.items)
    return Fraction(count, len(ts.transactions))


def lift(x, y, ts: TransactionSet) -> Fraction:
    """lift(X,Y) = support(X u Y) / (support(X) * support(Y)); >1 means
    the sets co-occur more often than independence predicts."""
    x, y = frozenset(x), frozenset(y)
    if x & y:
        raise ValueError("antecedent and consequent must be disjoint")
    sx, sy = support(x, ts), support(y, ts)
    if sx == 0 or sy == 0:
        raise ZeroMarginalSupport("lift is undefined when a marginal support is zero")
    return support(x | y, ts) / (sx * sy)


def _item_bitmasks(ts: TransactionSet):
    """Vertical layout: per item, an int whose bit i marks transaction i."""
    masks = {}
    for i, t in enumerate(ts.transactions):
        bit = 1 << i
        for item in t.items:
            masks[item] = masks.get(item, 0) | bit
    return masks


def apriori_frequent_itemsets(
    ts: TransactionSet, min_support, max_size: int | None = None
):
    """All itemsets with support >= min_support, with exact supports.

    Level-wise generation: candidates of size k are joins of frequent
    (k-1)-itemsets sharing a (k-2)-prefix, pruned by downward closure.
    Counting intersects per-item transaction bitmasks. The output is
    sorted by (size, items) and is exactly what brute-force enumeration
    over all nonempty itemsets produces.
    """
    if not ts.transactions:
        raise EmptyTransactionSet("no transactions to mine")
    min_support = Fraction(min_support)
    if not 0 < min_support <= 1:
        raise ValueError(f"min_support must be in (0, 1], got {min_support}")
    total = len(ts.transactions)
    min_count = min_support * total  # keep itemsets with count >= min_count

    masks = _item_bitmasks(ts)
    frequent = {}  # tuple(sorted items) -> (count, mask)
    level = []
    for item in sorted(masks):
        count = masks[item].bit_count()
        if count >= min_count:
            frequent[(item,)] = (count, masks[item])
            level.append((item,))

    k = 2
    while level and (max_size is None or k <= max_size):
        level_set = set(level)
        next_level = []
        for a_idx in range(len(level)):
            a = level[a_idx]
            for b_idx in range(a_idx + 1, len(level)):
                b = level[b_idx]
                if a[:-1] != b[:-1]:
                    break  # sorted level: shared prefixes are contiguous
                candidate = a + (b[-1],)
                # downward closure: every (k-1)-subset must be frequent
                if any(
                    candidate[:i] + candidate[i + 1 :] not in level_set
                    for i in range(len(candidate) - 2)
                ):
                    continue
                mask = frequent[a][1] & masks[b[-1]]
                count = mask.bit_count()
                if count >= min_count:
                    frequent[candidate] = (count, mask)
                    next_level.append(candidate)
        level = sorted(next_level)
        k += 1

    return [
        ItemsetSupport(frozenset(items), Fraction(count, total))
        for items, (count, _) in sorted(frequent.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]


def generate_rules(
    frequent,
    ts: TransactionSet,
    min_lift=DEFAULT_MIN_LIFT,
    top_k: int = DEFAULT_TOP_K,
):
    """Candidate rules are every nonempty proper bipartition X -> Y of each
    frequent itemset of size >= 2; those with lift < min_lift are dropped.

    Survivors are ranked by descending support, then descending lift, then
    lexicographic (antecedent, consequent), and the first top_k returned
    with rule_id = rank. Same item sets in opposite directions are distinct
    rules.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    min_lift = Fraction(min_lift)
    if min_lift <= 0:
        raise ValueError(f"min_lift must be > 0, got {min_lift}")

    by_items = {fs.items: fs.support for fs in frequent}

    def marginal(items):
        sup = by_items.get(items)
        return support(items, ts) if sup is None else sup

    candidates = []
    for fs in frequent:
        if len(fs.items) < 2:
            continue
        items = sorted(fs.items)
        for r in range(1, len(items)):
            for ant in combinations(items, r):
                antecedent = frozenset(ant)
                consequent = fs.items - antecedent
                lift_value = fs.support / (marginal(antecedent) * marginal(consequent))
                if lift_value >= min_lift:
                    candidates.append(
                        (fs.support, lift_value, ant, tuple(sorted(consequent)))
                    )

    ranked = heapq.nsmallest(
        top_k, candidates, key=lambda c: (-c[0], -c[1], c[2], c[3])
    )
    return [
        AssociationRule(frozenset(ant), frozenset(cons), sup, lv, rank)
        for rank, (sup, lv, ant, cons) in enumerate(ranked, start=1)
    ]


def mine_rules(
    ts: TransactionSet,
    min_support=DEFAULT_MIN_SUPPORT,
    min_lift=DEFAULT_MIN_LIFT,
    top_k: int = DEFAULT_TOP_K,
    max_itemset_size: int = DEFAULT_MAX_ITEMSET_SIZE,
):
    """Full pipeline: frequent itemsets -> filtered, ranked top-k rules."""
    frequent = apriori_frequent_itemsets(ts, min_support, max_size=max_itemset_size)
    return generate_rules(frequent, ts, min_lift=min_lift, top_k=top_k)
