"""Length-prefixed binary encoding helpers shared by every wire format.

Conventions, used everywhere a byte layout is documented:
  - scalars: 32-byte big-endian, canonical in [0, p)
  - variable fields: 4-byte big-endian length, then the bytes
  - integers of unknown width (Paillier, RSA): length-prefixed big-endian
"""

from .errors import InvalidEncoding, ParseError

SCALAR_BYTES = 32


def i2b32(x):
    return int(x).to_bytes(32, "big")


def b322i(b, p=None):
    if len(b) != 32:
        raise InvalidEncoding(f"scalar must be 32 bytes, got {len(b)}")
    v = int.from_bytes(b, "big")
    if p is not None and v >= p:
        raise InvalidEncoding("non-canonical scalar (>= p)")
    return v


def lp(b):
    return len(b).to_bytes(4, "big") + b


def lp_int(x):
    b = int(x).to_bytes((int(x).bit_length() + 7) // 8 or 1, "big")
    return lp(b)


class Reader:
    """Cursor over a byte string; every misread raises ParseError with position."""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.data):
            raise ParseError(f"truncated: wanted {n} bytes", self.pos)
        b = self.data[self.pos:self.pos + n]
        self.pos += n
        return b

    def u8(self):
        return self.take(1)[0]

    def u32(self):
        return int.from_bytes(self.take(4), "big")

    def u64(self):
        return int.from_bytes(self.take(8), "big")

    def lp(self):
        return self.take(self.u32())

    def lp_int(self):
        return int.from_bytes(self.lp(), "big")

    def done(self):
        if self.pos != len(self.data):
            raise ParseError("trailing bytes", self.pos)
