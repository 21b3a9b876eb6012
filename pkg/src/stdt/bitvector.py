"""Rank/select over bit strings.

Positions are 1-based.  rank1(i) counts ones among the first i bits and
select1(j) is the position of the j-th one, so rank1(select1(j)) == j.
"""

from bisect import bisect_right

from .errors import OutOfRange

WORD = 64
SUPER = 8  # words per superblock


class BitvectorRS(object):
    """Plain bits plus a two-level count directory."""

    def __init__(self, bits):
        bits = [1 if b else 0 for b in bits]
        self.n = len(bits)
        words = []
        for i in range(0, self.n, WORD):
            w = 0
            for b in bits[i:i + WORD]:
                w = (w << 1) | b
            words.append(w << (WORD - len(bits[i:i + WORD])))
        self.words = words
        self.super_counts = []   # ones before each superblock
        self.word_counts = []    # ones before each word, inside its superblock
        total = 0
        for i, w in enumerate(words):
            if i % SUPER == 0:
                self.super_counts.append(total)
                inner = 0
            self.word_counts.append(inner)
            c = w.bit_count()
            inner += c
            total += c
        self.ones = total

    @classmethod
    def from_positions(cls, n, positions):
        bits = [0] * n
        for p in positions:
            bits[p - 1] = 1
        return cls(bits)

    def __len__(self):
        return self.n

    def access(self, i):
        if not 1 <= i <= self.n:
            raise OutOfRange("bit {} outside 1..{}".format(i, self.n))
        i -= 1
        return (self.words[i // WORD] >> (WORD - 1 - i % WORD)) & 1

    def rank1(self, i):
        if not 0 <= i <= self.n:
            raise OutOfRange("rank1({}) outside 0..{}".format(i, self.n))
        if i == self.n:
            return self.ones
        w, r = divmod(i, WORD)
        c = self.super_counts[w // SUPER] + self.word_counts[w]
        if r:
            c += (self.words[w] >> (WORD - r)).bit_count()
        return c

    def select1(self, j):
        if not 1 <= j <= self.ones:
            raise OutOfRange("select1({}) outside 1..{}".format(j, self.ones))
        s = bisect_right(self.super_counts, j - 1) - 1
        w = s * SUPER
        end = min(w + SUPER, len(self.words))
        while w + 1 < end and self.super_counts[s] + self.word_counts[w + 1] < j:
            w += 1
        need = j - self.super_counts[s] - self.word_counts[w]
        word = self.words[w]
        for b in range(WORD):
            if (word >> (WORD - 1 - b)) & 1:
                need -= 1
                if need == 0:
                    return w * WORD + b + 1
        raise AssertionError("directory out of sync")

    def space_bits(self):
        """Bits plus directory: superblock counts at log n bits, word counts at 9 bits."""
        logn = max(1, self.n.bit_length())
        return self.n + len(self.super_counts) * logn + len(self.word_counts) * 9


class SparseBitvector(object):
    """Elias-Fano coded bit string for few ones; same interface as BitvectorRS."""

    def __init__(self, n, positions):
        positions = sorted(positions)
        if positions and (positions[0] < 1 or positions[-1] > n):
            raise OutOfRange("positions outside 1..{}".format(n))
        self.n = n
        self.ones = m = len(positions)
        self.low_bits = max(0, (n // m).bit_length() - 1) if m else 0
        lb = self.low_bits
        self.lows = [(p - 1) & ((1 << lb) - 1) for p in positions]
        highs = [(p - 1) >> lb for p in positions]
        hb = [0] * (m + (((n - 1) >> lb) if n else 0) + 1)
        for j, h in enumerate(highs):
            hb[h + j] = 1
        self.high = BitvectorRS(hb)

    @classmethod
    def from_bits(cls, bits):
        return cls(len(bits), [i for i, b in enumerate(bits, 1) if b])

    def __len__(self):
        return self.n

    def select1(self, j):
        if not 1 <= j <= self.ones:
            raise OutOfRange("select1({}) outside 1..{}".format(j, self.ones))
        h = self.high.select1(j) - j
        return ((h << self.low_bits) | self.lows[j - 1]) + 1

    def rank1(self, i):
        if not 0 <= i <= self.n:
            raise OutOfRange("rank1({}) outside 0..{}".format(i, self.n))
        lo, hi = 0, self.ones
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.select1(mid) <= i:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def access(self, i):
        return self.rank1(i) - self.rank1(i - 1)

    def positions(self):
        return [self.select1(j) for j in range(1, self.ones + 1)]

    def space_bits(self):
        return self.ones * self.low_bits + self.high.space_bits()
