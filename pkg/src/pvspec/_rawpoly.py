"""Dense polynomial helpers over a field level.

Polynomials are Python lists of raw field values, lowest degree first, with
no trailing zeros.  ``F`` is any object exposing ``zero``, ``one``, ``add``,
``sub``, ``neg``, ``mul``, ``inv`` and ``is_zero``.
"""

from .errors import DivisionByZero


def strip(F, a):
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return a


def add(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = F.add(out[i], c)
    return strip(F, out)


def neg(F, a):
    return [F.neg(c) for c in a]


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, c):
    if F.is_zero(c):
        return []
    return strip(F, [F.mul(x, c) for x in a])


def mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return strip(F, out)


def divmod_(F, a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv_lc = F.inv(b[-1])
    q = [F.zero] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = F.mul(r[k + db], inv_lc)
        q[k] = c
        if F.is_zero(c):
            continue
        for j in range(db + 1):
            r[k + j] = F.sub(r[k + j], F.mul(c, b[j]))
    return strip(F, q), strip(F, r[:db])


def monic(F, a):
    if not a:
        return []
    return scale(F, a, F.inv(a[-1]))


def gcd(F, a, b):
    a, b = strip(F, a), strip(F, b)
    fast = getattr(F, "poly_gcd", None)
    if fast is not None and a and b:
        g = fast(a, b)
        if g is not None:
            return g
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def xgcd(F, a, b):
    """Return (g, s, t) with s*a + t*b = g and g monic (or zero)."""
    r0, r1 = strip(F, a), strip(F, b)
    s0, s1 = [F.one], []
    t0, t1 = [], [F.one]
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if not r0:
        return [], s0, t0
    c = F.inv(r0[-1])
    return scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)


def deriv(F, a):
    return strip(F, [F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def evaluate(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def pow_(F, a, n):
    out = [F.one]
    base = a
    while n:
        if n & 1:
            out = mul(F, out, base)
        n >>= 1
        if n:
            base = mul(F, base, base)
    return out


def taylor_shift(F, a, c):
    """Coefficients of a(x + c)."""
    out = list(a)
    n = len(out)
    if F.is_zero(c):
        return out
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = F.add(out[j], F.mul(c, out[j + 1]))
    return strip(F, out)


def compose(F, a, b):
    """a(b(x))."""
    out = []
    for c in reversed(a):
        out = add(F, mul(F, out, b), [c] if not F.is_zero(c) else [])
    return out
