"""Randomized committee rules as exact distributions plus seeded samplers.

Every rule here returns a :class:`CommitteeDistribution` over the canonical
committee order. For the exponential-family rules the unnormalized weight of a
committee is ``e^(q * eps)`` with ``q`` an exact rational stored per committee,
so within-instance probability ratios are exact log-weight differences; only
the normalizer is floating point.

Rules:

* ``rr_axiom_distribution`` -- randomized response on a JR-family predicate:
  ``q = 1/2`` for committees satisfying the axiom, ``q = 0`` otherwise.
* ``exp_av_distribution`` -- committee-level exponential mechanism with the
  approval (AV) score as utility: ``q = AV(W) / (2k)``.
* ``sequential_av_distribution`` -- the exact law of the k-round
  without-replacement sampler that picks alternatives one at a time with
  per-alternative weights ``e^(approvals * eps / (2k))``. This law is close
  to, but not identical with, ``exp_av_distribution``; both are provided and
  ``total_variation`` quantifies the gap.
* ``rr_condorcet_distribution`` -- randomized response on the Condorcet
  committee: ``q = 1`` for it, ``q = 0`` elsewhere; uniform when none exists.
* ``uniform_distribution`` -- instance-independent baseline.

Sampling uses splitmix64, a fixed 64-bit generator (Steele et al.'s constants):
state advances by 0x9E3779B97F4A7C15 and is finalized by two xor-shift
multiplies; uniforms take the top 53 bits. Same (distribution, seed) always
yields the same committee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .axioms import JR_FAMILY, Axiom, av_score, axiom_committee_set, condorcet_committee
from .core import (
    Instance,
    InvalidParametersError,
    ResourceLimitError,
    enumerate_committees,
)

RandomSeed = int

_MASK64 = (1 << 64) - 1

# sequential law enumerates O(m!/(m-k)!) pick orders; keep it desk-scale
SEQUENTIAL_LAW_MAX_M = 8


def splitmix64(seed: RandomSeed) -> Iterator[int]:
    """Deterministic 64-bit stream; splittable by choice of seed."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def uniform_stream(seed: RandomSeed) -> Iterator[float]:
    """Uniforms in [0, 1) from the top 53 bits of splitmix64 words."""
    for word in splitmix64(seed):
        yield (word >> 11) * 2.0**-53


def as_epsilon(epsilon) -> Fraction:
    """Normalize a privacy budget to an exact positive rational.

    Strings are parsed as exact decimals (``"0.1" -> 1/10``); floats go
    through their shortest decimal repr.
    """
    if isinstance(epsilon, Fraction):
        eps = epsilon
    elif isinstance(epsilon, int):
        eps = Fraction(epsilon)
    elif isinstance(epsilon, float):
        eps = Fraction(str(epsilon))
    elif isinstance(epsilon, str):
        try:
            eps = Fraction(epsilon)
        except (ValueError, ZeroDivisionError):
            raise InvalidParametersError(f"cannot parse epsilon {epsilon!r}") from None
    else:
        raise InvalidParametersError(f"cannot parse epsilon {epsilon!r}")
    if eps <= 0:
        raise InvalidParametersError(f"epsilon must be positive, got {eps}")
    return eps


@dataclass(frozen=True, eq=False)
class CommitteeDistribution:
    """Exact distribution of a randomized rule on one instance.

    ``weight_coeffs`` holds the exact rational exponents ``q`` (unnormalized
    weight ``e^(q*eps)``) when the rule is exponential-family, else ``None``
    (the sequential law) and ``log_probs`` carries the law directly.
    Probabilities sum to 1 within 1e-9 and are all strictly positive.
    """

    instance: Instance
    epsilon: Fraction
    mechanism: str
    committees: tuple
    weight_coeffs: Optional[tuple]
    log_probs: tuple
    probs: tuple = field(default=())

    def __post_init__(self):
        if not self.probs:
            object.__setattr__(
                self, "probs", tuple(math.exp(lp) for lp in self.log_probs)
            )

    def index(self, committee: Sequence) -> int:
        return self.committees.index(tuple(sorted(committee)))

    def prob(self, committee: Sequence) -> float:
        return self.probs[self.index(committee)]

    def log_prob(self, committee: Sequence) -> float:
        return self.log_probs[self.index(committee)]

    def exact_ratio_coeff(self, w1: Sequence, w2: Sequence) -> Optional[Fraction]:
        """q(w1) - q(w2): the probability ratio is exactly e^(coeff * eps)."""
        if self.weight_coeffs is None:
            return None
        return self.weight_coeffs[self.index(w1)] - self.weight_coeffs[self.index(w2)]


def _from_weight_coeffs(
    inst: Instance, epsilon: Fraction, mechanism: str, coeffs: Sequence
) -> CommitteeDistribution:
    committees = tuple(enumerate_committees(inst.m, inst.k))
    exponents = [float(q * epsilon) for q in coeffs]
    hi = max(exponents)
    log_z = hi + math.log(sum(math.exp(x - hi) for x in exponents))
    return CommitteeDistribution(
        instance=inst,
        epsilon=epsilon,
        mechanism=mechanism,
        committees=committees,
        weight_coeffs=tuple(Fraction(q) for q in coeffs),
        log_probs=tuple(x - log_z for x in exponents),
    )


def rr_axiom_distribution(inst: Instance, epsilon, ax: Axiom) -> CommitteeDistribution:
    """Randomized response on a JR-family axiom.

    With t satisfying committees out of C(m,k), each satisfying committee wins
    with probability e^(eps/2) / (t*e^(eps/2) + C(m,k) - t).
    """
    eps = as_epsilon(epsilon)
    if ax not in JR_FAMILY:
        raise InvalidParametersError(f"randomized response expects JR/PJR/EJR, got {ax}")
    satisfying = set(axiom_committee_set(inst, ax))
    coeffs = [
        Fraction(1, 2) if w in satisfying else Fraction(0)
        for w in enumerate_committees(inst.m, inst.k)
    ]
    return _from_weight_coeffs(inst, eps, f"rr-{ax.value}", coeffs)


def exp_av_distribution(inst: Instance, epsilon) -> CommitteeDistribution:
    """Committee-level exponential mechanism with AV score utility:
    P(W) proportional to e^(AV(W) * eps / (2k))."""
    eps = as_epsilon(epsilon)
    coeffs = [
        Fraction(av_score(w, inst.ballots), 2 * inst.k)
        for w in enumerate_committees(inst.m, inst.k)
    ]
    return _from_weight_coeffs(inst, eps, "exp-av", coeffs)


def _approval_counts(inst: Instance) -> list:
    return [sum(1 for b in inst.ballots if a in b) for a in range(inst.m)]


def sequential_av_distribution(inst: Instance, epsilon) -> CommitteeDistribution:
    """Exact law of the k-round without-replacement AV sampler.

    Each round picks one not-yet-chosen alternative with probability
    proportional to e^(approvals(a) * eps / (2k)); the law is obtained by
    summing the probabilities of all ordered pick sequences per committee.
    """
    eps = as_epsilon(epsilon)
    if inst.m > SEQUENTIAL_LAW_MAX_M:
        raise ResourceLimitError(
            f"sequential law enumeration limited to m <= {SEQUENTIAL_LAW_MAX_M}, got m={inst.m}"
        )
    weights = [math.exp(c * float(eps) / (2 * inst.k)) for c in _approval_counts(inst)]
    committees = tuple(enumerate_committees(inst.m, inst.k))
    mass = {w: 0.0 for w in committees}
    chosen: list = []

    def descend(remaining: list, prob: float) -> None:
        if len(chosen) == inst.k:
            mass[tuple(sorted(chosen))] += prob
            return
        total = sum(weights[a] for a in remaining)
        for a in remaining:
            chosen.append(a)
            descend([b for b in remaining if b != a], prob * weights[a] / total)
            chosen.pop()

    descend(list(range(inst.m)), 1.0)
    return CommitteeDistribution(
        instance=inst,
        epsilon=eps,
        mechanism="seq-av",
        committees=committees,
        weight_coeffs=None,
        log_probs=tuple(math.log(mass[w]) for w in committees),
    )


def sample_sequential_av(inst: Instance, epsilon, seed: RandomSeed) -> tuple:
    """Run the k-round sampler literally (one shot, seeded)."""
    eps = as_epsilon(epsilon)
    weights = [math.exp(c * float(eps) / (2 * inst.k)) for c in _approval_counts(inst)]
    uniforms = uniform_stream(seed)
    chosen: list = []
    remaining = list(range(inst.m))
    for _ in range(inst.k):
        total = sum(weights[a] for a in remaining)
        u = next(uniforms) * total
        acc = 0.0
        pick = remaining[-1]
        for a in remaining:
            acc += weights[a]
            if u < acc:
                pick = a
                break
        chosen.append(pick)
        remaining.remove(pick)
    return tuple(sorted(chosen))


def rr_condorcet_distribution(inst: Instance, epsilon) -> CommitteeDistribution:
    """Randomized response on the Condorcet committee.

    When it exists: P(W_c) = e^eps / (e^eps + C(m,k) - 1) and every other
    committee gets 1 / (e^eps + C(m,k) - 1); otherwise uniform.
    """
    eps = as_epsilon(epsilon)
    winner = condorcet_committee(inst)
    coeffs = [
        Fraction(1) if w == winner else Fraction(0)
        for w in enumerate_committees(inst.m, inst.k)
    ]
    return _from_weight_coeffs(inst, eps, "rr-condorcet", coeffs)


def uniform_distribution(inst: Instance, epsilon=1) -> CommitteeDistribution:
    """Instance-independent uniform baseline over all committees."""
    eps = as_epsilon(epsilon)
    coeffs = [Fraction(0)] * len(enumerate_committees(inst.m, inst.k))
    return _from_weight_coeffs(inst, eps, "uniform", coeffs)


def sample(dist: CommitteeDistribution, seed: RandomSeed) -> tuple:
    """Inverse-CDF draw over the canonical committee order; deterministic in
    (dist, seed)."""
    u = next(uniform_stream(seed))
    acc = 0.0
    for committee, p in zip(dist.committees, dist.probs):
        acc += p
        if u < acc:
            return committee
    return dist.committees[-1]


def total_variation(d1: CommitteeDistribution, d2: CommitteeDistribution) -> float:
    """TV distance between two distributions on the same committee space."""
    if d1.committees != d2.committees:
        raise InvalidParametersError("distributions live on different committee spaces")
    return 0.5 * sum(abs(p - q) for p, q in zip(d1.probs, d2.probs))


# Rules exposed to the CLI and audits. The acceptance bound grids run against
# the committee-level Mechanism-2 law (exp-av); the sequential law is shipped
# alongside with its own divergence and fidelity checks.
MECHANISMS: dict = {
    "rr-jr": lambda inst, eps: rr_axiom_distribution(inst, eps, Axiom.JR),
    "rr-pjr": lambda inst, eps: rr_axiom_distribution(inst, eps, Axiom.PJR),
    "rr-ejr": lambda inst, eps: rr_axiom_distribution(inst, eps, Axiom.EJR),
    "exp-av": exp_av_distribution,
    "seq-av": sequential_av_distribution,
    "rr-condorcet": rr_condorcet_distribution,
    "uniform": uniform_distribution,
}

AUDIT_MECHANISMS = ("rr-jr", "rr-pjr", "rr-ejr", "exp-av", "rr-condorcet", "uniform")


def make_rule(mechanism: str, epsilon) -> Callable[[Instance], CommitteeDistribution]:
    """Bind a mechanism name and budget into an instance -> distribution rule."""
    if mechanism not in MECHANISMS:
        raise InvalidParametersError(
            f"unknown mechanism {mechanism!r}; valid: {', '.join(sorted(MECHANISMS))}"
        )
    eps = as_epsilon(epsilon)
    factory = MECHANISMS[mechanism]
    return lambda inst: factory(inst, eps)
