"""Degree distribution, degree entropy and costs rounded up to multiples of 1/L.

All rounded quantities are kept as integer numerators over the denominator
L so sums are exact and reproducible across platforms.
"""

import itertools
import math
from fractions import Fraction

from .errors import DegreeOutsideSigma, InputError, TooLarge

ENUM_LIMIT = 12


class DegreeDistribution(object):
    """n and the sparse map degree -> n_i."""

    def __init__(self, n, counts):
        counts = {int(d): int(c) for d, c in counts.items() if c}
        if sum(counts.values()) != n:
            raise InputError("degree counts do not sum to n")
        if sum(d * c for d, c in counts.items()) != n - 1:
            raise InputError("degree counts do not describe a tree")
        if any(d < 0 or d >= max(n, 1) for d in counts):
            raise InputError("degree out of range")
        self.n = n
        self.counts = counts

    @classmethod
    def of(cls, tree):
        return cls(tree.n, tree.degree_counts())

    @property
    def sigma(self):
        return frozenset(self.counts)

    def dump(self):
        return "".join("{} {}\n".format(d, c) for d, c in sorted(self.counts.items()))

    @classmethod
    def load(cls, text):
        counts = {}
        for line in text.splitlines():
            if line.strip():
                d, c = line.split()
                counts[int(d)] = int(c)
        return cls(sum(counts.values()), counts)

    def __eq__(self, other):
        return self.n == other.n and self.counts == other.counts


def entropy(dist):
    """Tree degree entropy in bits per node."""
    n = dist.n
    return sum(c * math.log2(n / c) for c in dist.counts.values()) / n


def ceil_scaled_log2(num, den, L):
    """Smallest integer k with 2**k >= (num/den)**L, i.e. ceil(L*log2(num/den))."""
    if num <= den:
        return 0 if num == den else -1
    a, b = num ** L, den ** L
    k = max(0, int(L * math.log2(num / den)) - 2)
    while (b << k) < a:
        k += 1
    while k > 0 and (b << (k - 1)) >= a:
        k -= 1
    return k


class EntropyModel(object):
    """Rounded per-degree costs r_i = ceil(L*log2(n/n_i))/L, as numerators."""

    def __init__(self, dist, L):
        if L < 1:
            raise InputError("L must be positive")
        self.dist = dist
        self.n = dist.n
        self.L = L
        self._cost = {}
        self.unseen = ceil_scaled_log2(self.n, 1, L) if self.n > 1 else 0
        for d, c in dist.counts.items():
            self._cost[d] = ceil_scaled_log2(self.n, c, L)

    @property
    def sigma(self):
        return self.dist.sigma

    def cost(self, degree):
        """Numerator of r_degree."""
        return self._cost.get(degree, self.unseen)

    def rounded_cost(self, degree):
        return Fraction(self.cost(degree), self.L)

    def h_star(self, degrees, root_free=True):
        """Numerator of H* for a preorder degree sequence.

        Every non-root degree must occur in the distribution; the first entry
        is exempt when ``root_free``.
        """
        total = 0
        for k, d in enumerate(degrees):
            if d not in self._cost and (k or not root_free):
                raise DegreeOutsideSigma("degree {} does not occur in the tree".format(d))
            total += self._cost.get(d, self.unseen)
        return total


def rounded_cost(model, degree):
    return model.rounded_cost(degree)


def tree_rounded_entropy(tree, model):
    """H*(S) as a Fraction; S given as an OrderedTree or a degree sequence."""
    if tree is None:
        return Fraction(0)
    degrees = tree.degrees() if hasattr(tree, "degrees") else list(tree)
    return Fraction(model.h_star(degrees), model.L)


# -- exhaustive counting oracles ------------------------------------------------

def all_degree_sequences(m):
    """Every preorder degree sequence of an ordered tree with m nodes."""
    if m < 1:
        return
    seq = []

    def rec(open_slots, left):
        # open_slots: children still owed; left: nodes still to place
        if left == 0:
            if open_slots == 0:
                yield tuple(seq)
            return
        for d in range(0, left):
            need = open_slots - 1 + d if seq else d
            if need > left - 1 or (need == 0 and left > 1):
                continue
            seq.append(d)
            yield from rec(need, left - 1)
            seq.pop()

    yield from rec(0, m)


def sigma_tree_h_stars(m, model):
    """Map H* numerator -> number of Sigma-trees with m nodes."""
    if m > ENUM_LIMIT:
        raise TooLarge("exhaustive enumeration limited to {} nodes".format(ENUM_LIMIT))
    sigma = model.sigma
    out = {}
    for seq in all_degree_sequences(m):
        if all(d in sigma for d in seq[1:]):
            a = model.h_star(seq)
            out[a] = out.get(a, 0) + 1
    return out


def count_sigma_trees(m, a, model):
    """Number of Sigma-trees with m nodes and H* == a (a is a Fraction or numerator/L)."""
    num = a * model.L
    if Fraction(num).denominator != 1:
        return 0
    return sigma_tree_h_stars(m, model).get(int(num), 0)


def sigma_string_h_stars(m, model, exhaustive=True):
    """Map H* numerator -> number of strings over Sigma of length m."""
    sigma = sorted(model.sigma)
    if exhaustive:
        if len(sigma) ** m > 10 ** 7:
            raise TooLarge("too many strings to enumerate")
        out = {}
        for s in itertools.product(sigma, repeat=m):
            a = sum(model.cost(d) for d in s)
            out[a] = out.get(a, 0) + 1
        return out
    out = {0: 1}
    for _ in range(m):
        nxt = {}
        for a, c in out.items():
            for d in sigma:
                b = a + model.cost(d)
                nxt[b] = nxt.get(b, 0) + c
        out = nxt
    return out


def within_power_bound(count, a_num, L, extra=0):
    """count <= 2 ** (a_num / L + extra), decided exactly."""
    return count ** L <= 2 ** (a_num + extra * L)
