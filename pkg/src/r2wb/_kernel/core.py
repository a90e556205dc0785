# cython: language_level=3, annotation_typing=False
"""Hot kernel: interned ordinal notation terms with total comparison and
base arithmetic (add, left subtraction, multiplication, omega powers).

Terms are canonical by construction; structural identity is semantic
equality.  The five shapes:

  ZERO                   the ordinal 0
  SUM(parts)             ANF sum, >= 2 weakly decreasing principal parts
  W(x)                   omega**x for x not an epsilon value (W(0) is 1)
  TH(i, tau, arg)        collapsing-function atoms; level 0 carries a
                         relativizer (None meaning 1, or an upsilon term)
                         and requires an uncountable argument, so every
                         TH atom denotes an epsilon number or a regular
                         anchor Omega_i (arg 0)
  UPS(idx)               upsilon constants, idx >= 1

This module is importable as pure Python and compilable with Cython in
pure-Python mode; the package selects whichever variant is available.
"""

K_ZERO = 0
K_SUM = 1
K_W = 2
K_TH = 3
K_UPS = 4

_intern = {}
_next_uid = [1]


class OrdError(Exception):
    pass


class NoLeftQuotient(OrdError):
    pass


class UndefinedOperator(OrdError):
    """Operator point the theory leaves undefined (e.g. mu at limit upsilons)."""


class DomainError(OrdError):
    pass


class Term:
    __slots__ = ("kind", "i", "sub", "uid", "_lvl", "_eps", "_nat")

    def __init__(self, kind, i, sub):
        self.kind = kind
        self.i = i
        self.sub = sub
        self.uid = _next_uid[0]
        _next_uid[0] += 1
        self._lvl = -1
        self._eps = -1
        self._nat = -2

    def __repr__(self):
        return "<T%d %s>" % (self.uid, _dbg(self))

    # terms are interned; identity is equality
    def __hash__(self):
        return self.uid

    def __eq__(self, other):
        return self is other

    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0


def _dbg(t):
    k = t.kind
    if k == K_ZERO:
        return "0"
    if k == K_SUM:
        return "+".join(_dbg(p) for p in t.sub)
    if k == K_W:
        return "w^(%s)" % _dbg(t.sub[0])
    if k == K_TH:
        tau = t.sub[0]
        if t.i == 0 and tau is not None:
            return "th_0[%s](%s)" % (_dbg(tau), _dbg(t.sub[1]))
        return "th_%d(%s)" % (t.i, _dbg(t.sub[1]))
    return "v[%s]" % _dbg(t.sub[0])


def _mk(kind, i, sub):
    key = (kind, i, tuple((s.uid if s is not None else 0) for s in sub))
    t = _intern.get(key)
    if t is None:
        t = Term(kind, i, sub)
        _intern[key] = t
    return t


ZERO = _mk(K_ZERO, 0, ())
ONE = _mk(K_W, 0, (ZERO,))


def is_zero(t):
    return t.kind == K_ZERO


def lvl(t):
    """Cardinality level: 0 for countable terms, i for [Omega_i, Omega_i+1)."""
    c = t._lvl
    if c >= 0:
        return c
    k = t.kind
    if k == K_ZERO or k == K_UPS:
        c = 0
    elif k == K_SUM:
        c = lvl(t.sub[0])
    elif k == K_W:
        c = lvl(t.sub[0])
    else:
        c = t.i
    t._lvl = c
    return c


def is_principal(t):
    return t.kind in (K_W, K_TH, K_UPS)


def is_eps(t):
    """Epsilon-number test (fixed points of omega exponentiation).

    All TH atoms qualify by canonicity (level-0 atoms carry uncountable
    arguments, level >= 1 atoms are anchors or collapses), as do all
    upsilon constants."""
    c = t._eps
    if c >= 0:
        return bool(c)
    r = t.kind in (K_TH, K_UPS)
    t._eps = 1 if r else 0
    return r


def parts(t):
    if t.kind == K_ZERO:
        return ()
    if t.kind == K_SUM:
        return t.sub
    return (t,)


def nat_value(t):
    """The integer n if t denotes a natural number, else -1."""
    c = t._nat
    if c != -2:
        return c
    if t.kind == K_ZERO:
        r = 0
    elif t is ONE:
        r = 1
    elif t.kind == K_SUM and all(p is ONE for p in t.sub):
        r = len(t.sub)
    else:
        r = -1
    t._nat = r
    return r


def from_nat(n):
    if n < 0:
        raise DomainError("negative natural")
    if n == 0:
        return ZERO
    if n == 1:
        return ONE
    return _mk(K_SUM, 0, (ONE,) * n)


def sum_of(partslist):
    """Raw ANF sum of an already weakly decreasing principal part list."""
    if not partslist:
        return ZERO
    if len(partslist) == 1:
        return partslist[0]
    return _mk(K_SUM, 0, tuple(partslist))


def w_pow(x):
    """omega**x in canonical form (collapses at epsilon fixed points)."""
    if is_eps(x):
        return x
    return _mk(K_W, 0, (x,))


def ups(idx):
    """upsilon_idx; upsilon_0 is 0."""
    if idx.kind == K_ZERO:
        return ZERO
    _check_ups_rank(idx)
    return _mk(K_UPS, 0, (idx,))


def _ups_rank(t):
    if t.kind == K_UPS:
        return 1 + _ups_rank(t.sub[0])
    if t.kind == K_ZERO:
        return 0
    m = 0
    for s in t.sub:
        if s is not None:
            r = _ups_rank(s)
            if r > m:
                m = r
    return m


def _check_ups_rank(idx):
    # stratification: an upsilon index may only mention strictly lower-rank
    # upsilon constants, keeping the hierarchy well founded
    if _ups_rank(idx) > 64:
        raise DomainError("upsilon index nesting too deep")


def th(i, tau, arg):
    """Raw TH atom; canonicity checked by the caller (terms.theta is the
    public normalizing constructor)."""
    return _mk(K_TH, i, (tau, arg))


# ---------------------------------------------------------------------------
# comparison

_cmp_memo = {}


def cmp(a, b):
    if a is b:
        return 0
    key = (a.uid, b.uid)
    r = _cmp_memo.get(key)
    if r is None:
        r = _cmp(a, b)
        _cmp_memo[key] = r
        _cmp_memo[(b.uid, a.uid)] = -r
    return r


def _cmp(a, b):
    if a.kind == K_ZERO:
        return -1
    if b.kind == K_ZERO:
        return 1
    pa = parts(a)
    pb = parts(b)
    n = min(len(pa), len(pb))
    for k in range(n):
        c = _cmp_principal(pa[k], pb[k])
        if c != 0:
            return c
    if len(pa) == len(pb):
        return 0
    return -1 if len(pa) < len(pb) else 1


def _cmp_principal(p, q):
    if p is q:
        return 0
    la = lvl(p)
    lb = lvl(q)
    if la != lb:
        return -1 if la < lb else 1
    kp = p.kind
    kq = q.kind
    if kp == K_W and kq == K_W:
        return cmp(p.sub[0], q.sub[0])
    if kp == K_W:
        # omega**x vs an epsilon e: decided by x vs e since x is never e
        c = cmp(p.sub[0], q)
        return c if c != 0 else -1
    if kq == K_W:
        c = cmp(p, q.sub[0])
        return c if c != 0 else 1
    # both atoms
    if kp == K_UPS and kq == K_UPS:
        return cmp(p.sub[0], q.sub[0])
    if la >= 1:
        # same-level anchors, no relativizer
        return _theta_cmp(p.i, None, p.sub[1], q.sub[1])
    si = _seg_index(p)
    sj = _seg_index(q)
    c = cmp(si, sj)
    if c != 0:
        return c
    if kp == K_UPS:
        return -1  # upsilon is the minimum of its segment
    if kq == K_UPS:
        return 1
    return _theta_cmp(0, p.sub[0], p.sub[1], q.sub[1])


def _seg_index(p):
    if p.kind == K_UPS:
        return p.sub[0]
    tau = p.sub[0]
    return ZERO if tau is None else tau.sub[0]


def _theta_cmp(i, tau, a, b):
    # fixed-point-free collapsing comparison:
    #   th(a) < th(b)  iff  (a < b and k(a) < th(b)) or (a > b and th(a) <= k(b))
    if a is b:
        return 0
    c = cmp(a, b)
    if c < 0:
        ka = coeff_max(i, a)
        if cmp(ka, th(i, tau, b)) < 0:
            return -1
        return 1
    kb = coeff_max(i, b)
    if cmp(th(i, tau, a), kb) > 0:
        return 1
    return -1


def coeff_max(i, t):
    """Largest subterm value below Omega_{i+1} occurring in t."""
    if lvl(t) <= i:
        return t
    k = t.kind
    if k == K_SUM:
        best = ZERO
        for p in t.sub:
            v = coeff_max(i, p)
            if cmp(v, best) > 0:
                best = v
        return best
    if k == K_W:
        return coeff_max(i, t.sub[0])
    # TH atom above level i: look inside the argument (the relativizer is
    # countable and only occurs on level-0 atoms, which are below Omega_1)
    return coeff_max(i, t.sub[1])


# ---------------------------------------------------------------------------
# arithmetic

_add_memo = {}


def add(a, b):
    if a.kind == K_ZERO:
        return b
    if b.kind == K_ZERO:
        return a
    key = (a.uid, b.uid)
    r = _add_memo.get(key)
    if r is not None:
        return r
    pa = parts(a)
    pb = parts(b)
    lead = pb[0]
    keep = len(pa)
    while keep > 0 and _cmp_principal(pa[keep - 1], lead) < 0:
        keep -= 1
    r = sum_of(list(pa[:keep]) + list(pb))
    _add_memo[key] = r
    return r


def add_all(ts):
    r = ZERO
    for t in ts:
        r = add(r, t)
    return r


def lsub(a, b):
    """Left subtraction: the unique c with a + c = b, for a <= b."""
    c = cmp(a, b)
    if c > 0:
        raise DomainError("lsub: a > b")
    if c == 0:
        return ZERO
    pa = parts(a)
    pb = parts(b)
    i = 0
    while i < len(pa) and i < len(pb) and pa[i] is pb[i]:
        i += 1
    if i == len(pa):
        return sum_of(list(pb[i:]))
    # remaining head of a is dominated by pb[i]
    return sum_of(list(pb[i:]))


def log_lead(a):
    """log of the leading part: the x with omega**x <= a < omega**(x+1)."""
    if a.kind == K_ZERO:
        raise DomainError("log(0)")
    p = parts(a)[0]
    if p.kind == K_W:
        return p.sub[0]
    return p  # epsilon atoms and upsilons are fixed points


def mul(a, b):
    if a.kind == K_ZERO or b.kind == K_ZERO:
        return ZERO
    acc = ZERO
    run = 0
    xa = log_lead(a)
    for q in parts(b):
        if q is ONE:
            run += 1
            continue
        if run:
            acc = add(acc, _mul_nat(a, run))
            run = 0
        acc = add(acc, w_pow(add(xa, _log_principal(q))))
    if run:
        acc = add(acc, _mul_nat(a, run))
    return acc


def _log_principal(q):
    if q.kind == K_W:
        return q.sub[0]
    return q


def _mul_nat(a, n):
    if n == 1:
        return a
    pa = parts(a)
    return sum_of([pa[0]] * (n - 1) + list(pa))


def left_div(g, a):
    """The least d with g * d = a (raises NoLeftQuotient otherwise)."""
    if g.kind == K_ZERO:
        raise DomainError("left_div by 0")
    if a.kind == K_ZERO:
        return ZERO
    if g is ONE:
        return a
    if g is a:
        return ONE
    gp = parts(g)
    G = _log_principal(gp[0])
    ap = list(parts(a))
    out = []
    i = 0
    while i < len(ap):
        p = ap[i]
        # does the remainder match g * n exactly?
        rest = ap[i:]
        n = _match_tail(gp, rest)
        if n > 0:
            out.extend([ONE] * n)
            i = len(ap)
            break
        x = _log_principal(p)
        if cmp(x, G) <= 0:
            raise NoLeftQuotient("no left quotient")
        z = lsub(G, x)
        # require G + z == x exactly
        if add(G, z) is not x:
            raise NoLeftQuotient("no left quotient")
        if z.kind == K_ZERO:
            raise NoLeftQuotient("no left quotient")
        out.append(w_pow(z))
        i += 1
    d = sum_of(out) if out else ZERO
    if mul(g, d) is not a:
        raise NoLeftQuotient("no left quotient")
    return d


def _match_tail(gp, rest):
    """If rest == parts(g * n) for some n >= 1 return n, else 0."""
    m = len(gp)
    if len(rest) < m:
        return 0
    extra = len(rest) - m
    lead = gp[0]
    for k in range(extra):
        if rest[k] is not lead:
            return 0
    for k in range(m):
        if rest[extra + k] is not gp[k]:
            return 0
    return extra + 1


def divmod_by(a, d):
    """Ordinal division: a = d * q + r with r < d (d > 0)."""
    if d.kind == K_ZERO:
        raise DomainError("division by 0")
    if cmp(a, d) < 0:
        return ZERO, a
    if d is ONE:
        return a, ZERO
    gp = parts(d)
    G = _log_principal(gp[0])
    qparts = []
    rest = list(parts(a))
    i = 0
    while i < len(rest):
        p = rest[i]
        x = _log_principal(p)
        if cmp(x, G) <= 0:
            break
        try:
            z = lsub(G, x)
        except DomainError:
            break
        if z.kind == K_ZERO or add(G, z) is not x:
            break
        qparts.append(w_pow(z))
        i += 1
    # count whole copies of d in the remainder prefix
    n = 0
    while True:
        m = _lead_match(gp, rest, i)
        if m < 0:
            break
        n += 1
        i = m
    q = add(sum_of(qparts) if qparts else ZERO, from_nat(n))
    r = sum_of(rest[i:]) if i < len(rest) else ZERO
    return q, r


def _lead_match(gp, rest, i):
    """If rest[i:] starts with parts(g) followed only by parts < lead(g)
    in a way consistent with one more copy, return the index after the
    copy, else -1."""
    m = len(gp)
    if i + m > len(rest):
        return -1
    for k in range(m):
        if rest[i + k] is not gp[k]:
            # allow the final copy to differ: g*n+r needs exact g-prefix
            return -1
    return i + m


def largest_eps_leq(t):
    """Largest epsilon value <= t, or None."""
    k = t.kind
    if k == K_ZERO:
        return None
    if k == K_TH or k == K_UPS:
        return t
    if k == K_SUM:
        return largest_eps_leq(t.sub[0])
    return largest_eps_leq(t.sub[0])


def clear_caches():
    _cmp_memo.clear()
    _add_memo.clear()
