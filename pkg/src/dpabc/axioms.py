"""Exact checkers for representation and efficiency axioms.

Definitions (standard in the approval-based committee voting literature), for
an instance with ``n`` voters, ``m`` alternatives, committee size ``k``:

* A voter group ``V`` is *l-cohesive* if ``|V| >= l*n/k`` and the voters in
  ``V`` commonly approve at least ``l`` alternatives. The size threshold is
  evaluated in exact integer arithmetic (``k*|V| >= l*n``), never floats.
* ``W`` satisfies **JR** if every 1-cohesive group contains a voter with an
  approved committee member.
* ``W`` satisfies **PJR** if for every l-cohesive group ``V``,
  ``|W & union of V's ballots| >= l``.
* ``W`` satisfies **EJR** if every l-cohesive group contains a voter with at
  least ``l`` approved committee members.
* ``W1`` *Pareto dominates* ``W2`` if no voter's approval overlap drops and
  some voter's strictly rises.
* A *Condorcet committee* beats every other committee in a strict pairwise
  majority of overlap comparisons.

Everything here is a pure function over immutable inputs; results for whole
instances are memoized.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

from .core import Instance, InvalidParametersError, enumerate_committees


class Axiom(Enum):
    JR = "jr"
    PJR = "pjr"
    EJR = "ejr"
    PE = "pe"
    CC = "cc"


JR_FAMILY = (Axiom.JR, Axiom.PJR, Axiom.EJR)


@dataclass(frozen=True)
class CohesiveWitness:
    """A maximal l-cohesive group: the set of all voters approving every
    member of ``core_alternatives`` (with ``|core_alternatives| = ell``)."""

    ell: int
    core_alternatives: frozenset
    voters: frozenset


def cohesive_witnesses(inst: Instance, ell: int) -> list:
    """For every alternative set ``T`` with ``|T| = ell``, the maximal voter
    set ``V_T = {i : T subset P_i}``, kept whenever ``k*|V_T| >= ell*n``.

    Maximal witnesses suffice for JR/EJR checking: any l-cohesive group with
    common core ``T`` is a subset of ``V_T``.
    """
    if not 1 <= ell <= inst.k:
        raise InvalidParametersError(f"need 1 <= ell <= k, got ell={ell}, k={inst.k}")
    out = []
    for T in itertools.combinations(range(inst.m), ell):
        core = frozenset(T)
        voters = frozenset(i for i, b in enumerate(inst.ballots) if core <= b)
        if inst.k * len(voters) >= ell * inst.n:
            out.append(CohesiveWitness(ell, core, voters))
    return out


def _jr_family_violation_ell(w: frozenset, inst: Instance, ell: int) -> bool:
    """True iff some l-cohesive group violates EJR at this ``ell`` (for
    ``ell = 1`` this is exactly a JR violation).

    A violating group exists iff for some core ``T`` of size ``ell`` the
    voters of the maximal group ``V_T`` that hold fewer than ``ell`` approved
    members of ``w`` are themselves numerous enough to be l-cohesive.
    """
    n, k = inst.n, inst.k
    for T in itertools.combinations(range(inst.m), ell):
        core = frozenset(T)
        bad = 0
        for b in inst.ballots:
            if core <= b and len(b & w) < ell:
                bad += 1
        if k * bad >= ell * n:
            return True
    return False


def _ballot_types(inst: Instance) -> list:
    return sorted(Counter(inst.ballots).items(), key=lambda t: sorted(t[0]))


def _pjr_violation(w: frozenset, inst: Instance) -> bool:
    """Exhaustive PJR check over subsets of distinct ballot types.

    A violating group's intersection and union depend only on which ballot
    types it contains, and taking every voter of each included type maximizes
    the group size, so scanning the 2^#types - 1 type subsets decides PJR
    exactly. Cost is exponential only in the number of distinct ballots.
    """
    n, k = inst.n, inst.k
    types = _ballot_types(inst)
    t = len(types)
    for mask in range(1, 1 << t):
        group_size = 0
        common = None
        union = frozenset()
        for idx in range(t):
            if mask >> idx & 1:
                ballot, count = types[idx]
                group_size += count
                union |= ballot
                common = ballot if common is None else common & ballot
        # largest l this group can be cohesive for
        cap = min(k, len(common), (k * group_size) // n)
        if cap > len(w & union):
            return True
    return False


def satisfies_axiom(w: Sequence, inst: Instance, ax: Axiom) -> bool:
    """Exact membership test of committee ``w`` in JR/PJR/EJR for ``inst``."""
    wset = frozenset(w)
    if ax is Axiom.JR:
        return not _jr_family_violation_ell(wset, inst, 1)
    if ax is Axiom.EJR:
        return not any(
            _jr_family_violation_ell(wset, inst, ell) for ell in range(1, inst.k + 1)
        )
    if ax is Axiom.PJR:
        return not _pjr_violation(wset, inst)
    raise InvalidParametersError(f"satisfies_axiom expects JR/PJR/EJR, got {ax}")


@lru_cache(maxsize=4096)
def axiom_committee_set(inst: Instance, ax: Axiom) -> tuple:
    """All committees satisfying ``ax``, in canonical order.

    The inclusion chain EJR subset PJR subset JR holds on every instance.
    """
    return tuple(
        w for w in enumerate_committees(inst.m, inst.k) if satisfies_axiom(w, inst, ax)
    )


def av_score(w: Sequence, profile: Sequence) -> int:
    """Total approval overlap: sum over voters of |ballot & w|."""
    wset = frozenset(w)
    return sum(len(frozenset(b) & wset) for b in profile)


def pareto_dominates(w1: Sequence, w2: Sequence, profile: Sequence) -> bool:
    """True iff every voter overlaps ``w1`` at least as much as ``w2`` and
    some voter strictly more."""
    s1, s2 = frozenset(w1), frozenset(w2)
    strict = False
    for b in profile:
        o1, o2 = len(b & s1), len(b & s2)
        if o1 < o2:
            return False
        if o1 > o2:
            strict = True
    return strict


@lru_cache(maxsize=4096)
def dominance_pairs(inst: Instance) -> tuple:
    """All ordered committee pairs (dominator, dominated), canonical order."""
    committees = enumerate_committees(inst.m, inst.k)
    overlaps = [tuple(len(b & frozenset(w)) for b in inst.ballots) for w in committees]
    pairs = []
    for i, j in itertools.permutations(range(len(committees)), 2):
        oi, oj = overlaps[i], overlaps[j]
        if all(a >= b for a, b in zip(oi, oj)) and oi != oj:
            pairs.append((committees[i], committees[j]))
    return tuple(pairs)


def pareto_frontier(inst: Instance) -> tuple:
    """Committees not Pareto-dominated by any other committee."""
    dominated = {lo for _, lo in dominance_pairs(inst)}
    return tuple(w for w in enumerate_committees(inst.m, inst.k) if w not in dominated)


def _beats(w1: Sequence, w2: Sequence, inst: Instance) -> bool:
    s1, s2 = frozenset(w1), frozenset(w2)
    wins = sum(1 for b in inst.ballots if len(b & s1) > len(b & s2))
    return 2 * wins > inst.n  # strict majority; exact ties block


@lru_cache(maxsize=4096)
def condorcet_committee(inst: Instance) -> Optional[tuple]:
    """The committee beating every other in strict pairwise majority, or None.

    Uniqueness is implied by the definition (two such committees would each
    have to beat the other). O(C(m,k)^2 * n) pairwise tallies.
    """
    committees = enumerate_committees(inst.m, inst.k)
    for w in committees:
        if all(w == other or _beats(w, other, inst) for other in committees):
            return w
    return None
