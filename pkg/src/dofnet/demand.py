"""Network instances with general message demands.

A network has ``K`` single-message transmitters, ``J`` receivers and ``M``
antennas at every node.  Receiver ``j`` requests the message set ``M_j``.
All indices are 1-based, matching the usual notation.
"""

import json
from dataclasses import dataclass, field

from .errors import SpecError


@dataclass(frozen=True)
class DemandSpec:
    """Validated network instance.

    Parameters
    ----------
    K : int
        Number of transmitters (one message each).
    M : int
        Antennas per node.
    demands : tuple of frozenset of int
        ``demands[j-1]`` is the set of messages requested by receiver ``j``.
    """

    K: int
    M: int
    demands: tuple

    def __post_init__(self):
        for name in ("K", "M"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise SpecError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise SpecError(f"{name} must be positive, got {value}")
        demands = tuple(frozenset(d) for d in self.demands)
        if not demands:
            raise SpecError("at least one receiver is required")
        for j, d in enumerate(demands, start=1):
            if not d:
                raise SpecError(f"receiver {j} has an empty demand set")
            for k in d:
                if isinstance(k, bool) or not isinstance(k, int):
                    raise SpecError(f"receiver {j}: message index {k!r} is not an integer")
                if not 1 <= k <= self.K:
                    raise SpecError(
                        f"receiver {j}: message index {k} out of range 1..{self.K}")
        object.__setattr__(self, "demands", demands)

    @property
    def J(self):
        return len(self.demands)

    @property
    def messages(self):
        return frozenset(range(1, self.K + 1))

    def complement(self, j):
        """Undesired messages ``M_j^c`` at receiver ``j`` (1-based)."""
        return self.messages - self.demands[j - 1]

    def restrict(self, receivers):
        """Spec keeping only the listed receivers, in the given order."""
        return DemandSpec(self.K, self.M, tuple(self.demands[j - 1] for j in receivers))

    def relabel(self, perm):
        """Renumber messages.

        ``perm[i]`` is the original index of new message ``i + 1``.
        """
        new_of = {old: new for new, old in enumerate(perm, start=1)}
        return DemandSpec(
            self.K, self.M, tuple(frozenset(new_of[k] for k in d) for d in self.demands))

    def to_json(self):
        return {"K": self.K, "M": self.M,
                "demands": [sorted(d) for d in self.demands]}


@dataclass(frozen=True)
class ReceiverMeta:
    receiver: int
    complement: frozenset
    delta: object  # int, or None when the receiver wants every message
    demand_size: int


@dataclass(frozen=True)
class Grouping:
    """Receivers grouped under the maximal demand sets.

    ``assignment`` maps receiver to a 1-based group index and ``primes``
    maps group index to its prime receiver.
    """

    maximal_sets: tuple
    assignment: dict = field(hash=False)
    primes: dict = field(hash=False)

    @property
    def G(self):
        return len(self.maximal_sets)

    @property
    def prime_receivers(self):
        return tuple(self.primes[g] for g in range(1, self.G + 1))

    def prime_of(self, j):
        return self.primes[self.assignment[j]]

    def to_json(self):
        return {
            "G": self.G,
            "maximalSets": [sorted(s) for s in self.maximal_sets],
            "assignment": {str(j): g for j, g in sorted(self.assignment.items())},
            "primes": {str(g): j for g, j in sorted(self.primes.items())},
        }


def parse_spec(text):
    """Parse a JSON demand document ``{"K": .., "M": .., "demands": [[..], ..]}``."""
    try:
        doc = json.loads(text)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"malformed demand document: {exc}") from None
    return spec_from_dict(doc)


def spec_from_dict(doc):
    if not isinstance(doc, dict):
        raise SpecError("demand document must be a JSON object")
    missing = {"K", "M", "demands"} - set(doc)
    if missing:
        raise SpecError(f"demand document is missing field(s): {', '.join(sorted(missing))}")
    demands = doc["demands"]
    if not isinstance(demands, list) or not all(isinstance(d, list) for d in demands):
        raise SpecError("'demands' must be a list of lists of message indices")
    return DemandSpec(doc["K"], doc["M"], tuple(demands))


def load_spec(path):
    with open(path) as fh:
        return parse_spec(fh.read())


def receiver_meta(spec):
    out = []
    for j in range(1, spec.J + 1):
        comp = spec.complement(j)
        out.append(ReceiverMeta(j, comp, min(comp) if comp else None,
                                len(spec.demands[j - 1])))
    return out


def compute_grouping(spec):
    """Group receivers by the maximal elements of the demand-set poset.

    Groups are numbered in order of their lowest receiver.  The prime of a
    group is the lowest receiver whose demand set equals the group's maximal
    set; a non-maximal receiver joins the lexicographically smallest maximal
    superset.
    """
    distinct = list(dict.fromkeys(spec.demands))
    maximal = [s for s in distinct if not any(s < t for t in distinct)]
    first_holder = {s: spec.demands.index(s) + 1 for s in maximal}
    maximal.sort(key=first_holder.__getitem__)
    group_of = {s: g for g, s in enumerate(maximal, start=1)}

    assignment = {}
    for j, d in enumerate(spec.demands, start=1):
        if d in group_of:
            assignment[j] = group_of[d]
        else:
            best = min((s for s in maximal if d < s), key=sorted)
            assignment[j] = group_of[best]
    primes = {g: first_holder[s] for s, g in group_of.items()}
    return Grouping(tuple(maximal), assignment, primes)
