"""Arithmetic in small finite fields GF(p^l).

Elements are plain integers in 0..q-1 using a discrete-log encoding:
0 is the zero element and value k+1 stands for alpha^k, where alpha is a
fixed primitive element.  This makes the element order

    0 < 1 = alpha^0 < alpha^1 < ... < alpha^(q-2)

canonical, which downstream code relies on for deterministic
lexicographic subspace forms.  Extension fields use fixed primitive
moduli so that symbols like w (= alpha) and v (= alpha^2) in GF(4) mean
the same thing everywhere.
"""

from itertools import product

# Fixed primitive polynomials, low-degree coefficient first.
# GF(4): x^2+x+1, GF(8): x^3+x+1, GF(9): x^2+2x+2, GF(16): x^4+x+1,
# GF(25): x^2+4x+2.
_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (5, 2): (2, 4, 1),
}

_MAX_Q = 2 ** 16


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod(a, b, modulus, p):
    """Multiply two GF(p)[x] polynomials (digit tuples) modulo `modulus`."""
    l = len(modulus) - 1
    res = [0] * (2 * l)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    # reduce: modulus is monic of degree l
    for i in range(len(res) - 1, l - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(l):
                res[i - l + j] = (res[i - l + j] - c * modulus[j]) % p
    return tuple(res[:l])


def _poly_index(digits, p):
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


def _primitive_root(p):
    order = p - 1
    factors = set()
    m, d = order, 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, order // f, p) != 1 for f in factors):
            return g
    raise ArithmeticError("no primitive root found")  # unreachable for prime p


def _find_primitive_poly(p, l):
    """Brute-force search for a monic primitive polynomial of degree l."""
    q = p ** l
    for tail in product(range(p), repeat=l):
        if tail[0] == 0:
            continue  # constant term 0 means x divides the polynomial
        modulus = tail + (1,)
        # x must have multiplicative order q-1
        x = tuple([0, 1] + [0] * (l - 2)) if l > 1 else (1,)
        e = x
        ok = True
        for _ in range(q - 2):
            e = _poly_mul_mod(e, x, modulus, p)
            if e == tuple([1] + [0] * (l - 1)):
                ok = False
                break
        if ok and _poly_mul_mod(e, x, modulus, p) == tuple([1] + [0] * (l - 1)):
            return modulus
    raise ArithmeticError(f"no primitive polynomial of degree {l} over GF({p})")


class FieldCtx:
    """Immutable context for GF(p^l): tables, element naming, subfield maps."""

    def __init__(self, p, l):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if l < 1 or p ** l > _MAX_Q:
            raise ValueError(f"unsupported field size {p}^{l}")
        self.p = p
        self.l = l
        self.q = p ** l

        if l == 1:
            g = _primitive_root(p) if p > 2 else 1
            self.modulus = ((-g) % p, 1)
            exp_poly = [1]
            for _ in range(self.q - 2):
                exp_poly.append(exp_poly[-1] * g % p)
        else:
            self.modulus = _MODULI.get((p, l)) or _find_primitive_poly(p, l)
            one = tuple([1] + [0] * (l - 1))
            x = tuple([0, 1] + [0] * (l - 2))
            exp_digits = [one]
            for _ in range(self.q - 2):
                exp_digits.append(_poly_mul_mod(exp_digits[-1], x, self.modulus, p))
            exp_poly = [_poly_index(d, p) for d in exp_digits]
            if len(set(exp_poly)) != self.q - 1:
                raise ArithmeticError("modulus is not primitive")

        # exp[k] = polynomial index of alpha^k; log inverse of that.
        self.exp = tuple(exp_poly)
        log = [0] * self.q
        for k, e in enumerate(exp_poly):
            log[e] = k
        self.log = tuple(log)

        # value <-> polynomial-index maps (value encoding: 0, then alpha^k -> k+1)
        poly_of_value = [0] + list(self.exp)
        value_of_poly = [0] * self.q
        for v, e in enumerate(poly_of_value):
            value_of_poly[e] = v
        self.poly_of_value = tuple(poly_of_value)
        self.value_of_poly = tuple(value_of_poly)

        digits = [self._digits(self.poly_of_value[a]) for a in range(self.q)]

        def _add_digits(a, b):
            da, db = digits[a], digits[b]
            ds = tuple((x + y) % p for x, y in zip(da, db))
            return self.value_of_poly[_poly_index(ds, p)]

        # dense addition table in value encoding (skipped for very large fields)
        if self.q <= 1024:
            self.add_table = tuple(
                tuple(_add_digits(a, b) for b in range(self.q)) for a in range(self.q)
            )
            table = self.add_table

            def _add(a, b):
                return table[a][b]

        else:
            self.add_table = None
            _add = _add_digits
        self.neg_table = tuple(
            self.value_of_poly[_poly_index(tuple(-x % p for x in digits[a]), p)]
            for a in range(self.q)
        )

        # bound closures for hot loops in downstream modules
        qm1 = self.q - 1
        negt = self.neg_table

        def _mul(a, b):
            if a == 0 or b == 0:
                return 0
            return (a + b - 2) % qm1 + 1

        def _inv(a):
            if a == 0:
                raise ZeroDivisionError("inverse of zero in " + repr(self))
            return (1 - a) % qm1 + 1

        self.add_fn = _add
        self.neg_fn = negt.__getitem__
        self.mul_fn = _mul
        self.inv_fn = _inv

    def _digits(self, poly_index):
        d, v = [], poly_index
        for _ in range(self.l):
            d.append(v % self.p)
            v //= self.p
        return tuple(d)

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.l) == (other.p, other.l)

    def __hash__(self):
        return hash((self.p, self.l))


_field_cache = {}


def make_field(p, l=1):
    """Return the (cached) FieldCtx for GF(p^l)."""
    key = (p, l)
    if key not in _field_cache:
        _field_cache[key] = FieldCtx(p, l)
    return _field_cache[key]


def factor_prime_power(q):
    """q = p^l with p prime -> (p, l); raises ValueError otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if _is_prime(p) and q % p == 0:
            l = 0
            m = q
            while m % p == 0:
                m //= p
                l += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, l
    raise ValueError(f"{q} is not a prime power")


def add(ctx, a, b):
    return ctx.add_fn(a, b)


def sub(ctx, a, b):
    return ctx.add_fn(a, ctx.neg_table[b])


def neg(ctx, a):
    return ctx.neg_table[a]


def mul(ctx, a, b):
    if a == 0 or b == 0:
        return 0
    return (a - 1 + b - 1) % (ctx.q - 1) + 1


def inv(ctx, a):
    if a == 0:
        raise ZeroDivisionError("inverse of zero in " + repr(ctx))
    return (ctx.q - 1 - (a - 1)) % (ctx.q - 1) + 1


def div(ctx, a, b):
    return mul(ctx, a, inv(ctx, b))


def power(ctx, a, k):
    if a == 0:
        return 0 if k else 1
    return (a - 1) * k % (ctx.q - 1) + 1


def frob(ctx, a, e=1):
    """Field automorphism x -> x^(p^e)."""
    if a == 0:
        return 0
    return (a - 1) * pow(ctx.p, e % ctx.l, ctx.q - 1) % (ctx.q - 1) + 1


def from_int(ctx, residue):
    """Element of a prime field from an integer residue."""
    if ctx.l != 1:
        raise ValueError("from_int is for prime fields")
    return ctx.value_of_poly[residue % ctx.p]


def to_int(ctx, a):
    """Integer residue of a prime-field element."""
    if ctx.l != 1:
        raise ValueError("to_int is for prime fields")
    return ctx.poly_of_value[a]


def _extension_degree(big, small):
    if big.p != small.p or big.l % small.l:
        raise ValueError(f"{small!r} is not a subfield of {big!r}")
    return big.l // small.l


def embed_subfield(big, small, e):
    """Image of a small-field element in the big field (alpha_small -> alpha_big^t)."""
    _extension_degree(big, small)
    if e == 0:
        return 0
    t = (big.q - 1) // (small.q - 1)
    return (e - 1) * t % (big.q - 1) + 1


_expand_cache = {}


def _expand_table(big, small):
    h = _extension_degree(big, small)
    key = (big.p, big.l, small.l)
    table = _expand_cache.get(key)
    if table is None:
        alpha = 2 if big.q > 2 else 1  # alpha^1 has value 2 (or 1 in GF(2))
        table = {}
        for coeffs in product(range(small.q), repeat=h):
            v = 0
            for i, c in enumerate(coeffs):
                term = mul(big, embed_subfield(big, small, c), power(big, alpha, i))
                v = add(big, v, term)
            table[v] = coeffs
        if len(table) != big.q:
            raise ArithmeticError("basis expansion is not a bijection")
        _expand_cache[key] = table
    return table


def expand_coords(big, small, e):
    """Coordinates of e over the basis (1, alpha, ..., alpha^(h-1)) of big/small."""
    return _expand_table(big, small)[e]


def combine_coords(big, small, coeffs):
    """Inverse of expand_coords: evaluate a coordinate vector at the basis."""
    h = _extension_degree(big, small)
    if len(coeffs) != h:
        raise ValueError("wrong number of coordinates")
    alpha = 2 if big.q > 2 else 1
    v = 0
    for i, c in enumerate(coeffs):
        v = add(big, v, mul(big, embed_subfield(big, small, c), power(big, alpha, i)))
    return v


# --- text rendering -------------------------------------------------------

_GF4_TOKENS = ("0", "1", "w", "v")


def render(ctx, a):
    """Canonical text token for an element (digits / w,v / a^k)."""
    if ctx.l == 1:
        return str(ctx.poly_of_value[a])
    if ctx.q == 4:
        return _GF4_TOKENS[a]
    if a == 0:
        return "0"
    if a == 1:
        return "1"
    return f"a^{a - 1}"


def parse_token(ctx, tok):
    """Inverse of render; raises ValueError on unknown tokens."""
    if ctx.l == 1:
        if not tok.isdigit() or int(tok) >= ctx.p:
            raise ValueError(f"bad element token {tok!r} for {ctx!r}")
        return ctx.value_of_poly[int(tok)]
    if ctx.q == 4 and tok in _GF4_TOKENS:
        return _GF4_TOKENS.index(tok)
    if tok == "0":
        return 0
    if tok == "1":
        return 1
    if tok.startswith("a^"):
        k = int(tok[2:])
        if 0 <= k < ctx.q - 1:
            return k + 1
    raise ValueError(f"bad element token {tok!r} for {ctx!r}")
