"""MSB-first bit strings, a static arithmetic coder and small integer codes."""

from .errors import CorruptPayload


class BitWriter(object):
    """Accumulates bits as text chunks; one big-int conversion at the end."""

    def __init__(self):
        self.chunks = []
        self.nbits = 0

    def write(self, bit):
        self.chunks.append("1" if bit & 1 else "0")
        self.nbits += 1

    def write_int(self, x, width):
        if width <= 0:
            return
        if x < 0 or x >> width:
            raise ValueError("{} does not fit in {} bits".format(x, width))
        self.chunks.append(format(x, "0{}b".format(width)))
        self.nbits += width

    def write_gamma(self, x):
        """Elias gamma code of x >= 1."""
        w = x.bit_length()
        self.write_int(0, w - 1)
        self.write_int(x, w)

    def extend(self, other):
        if other.nbits:
            self.chunks.append(str(other))
            self.nbits += other.nbits

    def bits(self):
        text = "".join(self.chunks)
        return Bits(int(text, 2) if text else 0, len(text))


class Bits(object):
    """Immutable bit string; bit 0 is the most significant."""

    __slots__ = ("value", "nbits")

    def __init__(self, value=0, nbits=0):
        self.value = value
        self.nbits = nbits

    def __len__(self):
        return self.nbits

    def __eq__(self, other):
        return self.nbits == other.nbits and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.nbits))

    def slice(self, start, stop):
        stop = min(stop, self.nbits)
        if stop <= start:
            return Bits()
        return Bits((self.value >> (self.nbits - stop)) & ((1 << (stop - start)) - 1), stop - start)

    def to_bytes(self):
        pad = (-self.nbits) % 8
        return (self.value << pad).to_bytes((self.nbits + pad) // 8, "big")

    @classmethod
    def from_bytes(cls, data, nbits):
        v = int.from_bytes(data, "big")
        pad = len(data) * 8 - nbits
        if pad < 0 or pad >= 8 and data:
            raise CorruptPayload("bit length {} does not match {} bytes".format(nbits, len(data)))
        return cls(v >> pad, nbits)

    def flip(self, i):
        return Bits(self.value ^ (1 << (self.nbits - 1 - i)), self.nbits)

    def __str__(self):
        return format(self.value, "0{}b".format(self.nbits)) if self.nbits else ""


class BitReader(object):
    """Reads past the end as zeros when ``pad`` is set (the arithmetic decoder needs it)."""

    def __init__(self, bits, pos=0, end=None, pad=False):
        self.data = bits.to_bytes()
        self.pos = pos
        self.end = bits.nbits if end is None else end
        self.pad = pad

    def read(self):
        pos = self.pos
        self.pos = pos + 1
        if pos >= self.end:
            if self.pad:
                return 0
            raise CorruptPayload("read past end of bit string")
        return (self.data[pos >> 3] >> (7 - (pos & 7))) & 1

    def read_int(self, width):
        if width <= 0:
            return 0
        if self.pos + width > self.end and not self.pad:
            raise CorruptPayload("read past end of bit string")
        x = 0
        for _ in range(width):
            x = (x << 1) | self.read()
        return x

    def read_gamma(self):
        z = 0
        while self.read() == 0:
            z += 1
            if z > 64:
                raise CorruptPayload("bad gamma code")
        return (1 << z) | self.read_int(z)


def concat(parts):
    w = BitWriter()
    for b in parts:
        w.extend(b)
    return w.bits()


# -- static arithmetic coding ------------------------------------------------

STATE_BITS = 62
_FULL = 1 << STATE_BITS
_HALF = _FULL >> 1
_QUARTER = _HALF >> 1
_MASK = _FULL - 1
FREQ_BITS = 32


def integer_root_floor(x, k):
    """floor(x ** (1/k)) for non-negative integers."""
    if x < 2 or k == 1:
        return x
    g = int(round(2.0 ** (x.bit_length() / k))) + 1
    lo, hi = 0, max(g, 2)
    while hi ** k <= x:
        hi *= 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid ** k <= x:
            lo = mid
        else:
            hi = mid
    return lo


class FrequencyTable(object):
    """Static frequencies freq_s = floor(2**(FREQ_BITS - cost_s/L)).

    Computed with exact integer roots so code lengths are reproducible;
    an ideal coder then spends at most cost_s/L + 2**-FREQ_BITS-ish bits.
    """

    def __init__(self, costs, L):
        self.symbols = sorted(costs)
        freqs = []
        for s in self.symbols:
            # largest f with f**L <= 2**(FREQ_BITS*L - cost)
            e = FREQ_BITS * L - costs[s]
            f = integer_root_floor(1 << e, L) if e >= 0 else 0
            freqs.append(max(f, 1))
        cum = [0]
        for f in freqs:
            cum.append(cum[-1] + f)
        self.freqs = freqs
        self.cum = cum
        self.total = cum[-1]
        self.index = {s: i for i, s in enumerate(self.symbols)}


class ArithmeticEncoder(object):
    def __init__(self, table):
        self.table = table
        self.low = 0
        self.high = _MASK
        self.pending = 0
        self.out = BitWriter()

    def _emit(self, bit):
        self.out.write(bit)
        for _ in range(self.pending):
            self.out.write(bit ^ 1)
        self.pending = 0

    def encode(self, symbol):
        t = self.table
        i = t.index[symbol]
        rng = self.high - self.low + 1
        self.high = self.low + t.cum[i + 1] * rng // t.total - 1
        self.low = self.low + t.cum[i] * rng // t.total
        while True:
            if ((self.low ^ self.high) & _HALF) == 0:
                self._emit(self.low >> (STATE_BITS - 1))
                self.low = (self.low << 1) & _MASK
                self.high = ((self.high << 1) & _MASK) | 1
            elif self.low & ~self.high & _QUARTER:
                self.pending += 1
                self.low = (self.low << 1) ^ _HALF
                self.high = ((self.high ^ _HALF) << 1) | _HALF | 1
            else:
                break

    def finish(self):
        """Terminate; trailing zero bits are dropped (the decoder pads zeros)."""
        self._emit(1)
        b = self.out.bits()
        v, n = b.value, b.nbits
        while n and not v & 1:
            v >>= 1
            n -= 1
        return Bits(v, n)


class ArithmeticDecoder(object):
    def __init__(self, table, bits, start=0, end=None):
        self.table = table
        self.reader = BitReader(bits, start, end, pad=True)
        self.low = 0
        self.high = _MASK
        self.code = self.reader.read_int(STATE_BITS)
        self.limit = (self.reader.end - start) + 2 * STATE_BITS

    def decode(self):
        t = self.table
        rng = self.high - self.low + 1
        offset = self.code - self.low
        if not 0 <= offset < rng:
            raise CorruptPayload("arithmetic decoder lost sync")
        value = ((offset + 1) * t.total - 1) // rng
        lo, hi = 0, len(t.freqs)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if t.cum[mid] > value:
                hi = mid
            else:
                lo = mid
        i = lo
        if not t.cum[i] <= value < t.cum[i + 1]:
            raise CorruptPayload("arithmetic decoder lost sync")
        self.high = self.low + t.cum[i + 1] * rng // t.total - 1
        self.low = self.low + t.cum[i] * rng // t.total
        rd = self.reader
        while True:
            if ((self.low ^ self.high) & _HALF) == 0:
                self.low = (self.low << 1) & _MASK
                self.high = ((self.high << 1) & _MASK) | 1
                self.code = ((self.code << 1) & _MASK) | rd.read()
            elif self.low & ~self.high & _QUARTER:
                self.low = (self.low << 1) ^ _HALF
                self.high = ((self.high ^ _HALF) << 1) | _HALF | 1
                self.code = (self.code & _HALF) | ((self.code << 1) & (_MASK >> 1)) | rd.read()
            else:
                break
        if rd.pos - rd.end > self.limit:
            raise CorruptPayload("arithmetic decoder ran past its input")
        return t.symbols[i]
