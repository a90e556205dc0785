"""Structure queries: greatest predecessors, the <=1/<=2 decision
procedures, reach (lh, lh2), <=2-successor sets, gbo, the index class I,
and finite-substructure/covering utilities."""

from .terms import (
    ZERO, ONE, OMEGA, add, add_all, lsub, mul, cmp, upsilon, from_nat,
    parts, anf, end, log, logend, mnf, is_principal, is_zero, is_eps,
    is_ups_term, left_div, divmod_by, UndefinedOperator, DomainError,
    NoLeftQuotient,
)
from .upsilon import upsilon_seg, seg_pair_of_index
from .fine import mu, lambda_op, chi, varrho, minus_one, is_limit
from .trackseq import InvariantError
from .kappanu import context, kappa, nu, dp
from .chains import (
    validate, is_chain, tc_assign, eval_o_tc, ec, me, modify_last, cmp_tc,
    ChainError,
)


class PredResult:
    """greatest(x) | none | limit; greatest(0) is encoded as none."""

    __slots__ = ("kind", "value", "scheme")

    def __init__(self, kind, value=None, scheme=None):
        self.kind = kind
        self.value = value
        self.scheme = scheme

    def __repr__(self):
        if self.kind == "greatest":
            return "<pred greatest %r>" % self.value
        return "<pred %s>" % self.kind


def _greatest(x):
    if is_zero(x):
        return PredResult("none")
    return PredResult("greatest", x)


INFINITY = object()


class ReachValue:
    __slots__ = ("infinite", "value")

    def __init__(self, value=None, infinite=False):
        self.infinite = infinite
        self.value = value

    def __repr__(self):
        return "<inf>" if self.infinite else "<lh %r>" % self.value

    def __eq__(self, other):
        if not isinstance(other, ReachValue):
            return NotImplemented
        if self.infinite or other.infinite:
            return self.infinite and other.infinite
        return self.value is other.value

    def __hash__(self):
        return hash(("inf",)) if self.infinite else hash(self.value.uid)


def _chain_seg(ch):
    lam, t, s_list, segs = ch.seg_data()
    return lam, t, s_list, segs


def pred1(a):
    """Greatest <1-predecessor per the main theorem, part a)."""
    ch = tc_assign(a)
    if is_zero(a):
        return PredResult("none")
    n = ch.n
    mn = ch.m[n - 1]
    lam, t, s_list, segs = _chain_seg(ch)
    last = ch.idx(n, mn)
    # limit-type situations
    if is_ups_term(a) and end(a.sub[0]) is not ONE:
        return PredResult("limit", scheme=("upsilon", a.sub[0]))
    if mn > 1 and is_limit(last):
        return PredResult("limit", scheme=("nu", ch))
    if (n, mn) == (1, 1):
        if not is_zero(lam) and cmp(ch.idx(1, 1), upsilon(lam)) > 0:
            return _greatest(upsilon(lam))
        return PredResult("none")
    if mn == 1 and n > 1:
        return _greatest(ch.o_at(n - 1, ch.m[n - 2]))
    ps = parts(last)
    if ps[-1] is ONE:
        xi = add_all(ps[:-1])
        tau = ch.t_end(n, mn - 1)
        rows = modify_last(ch, xi)
        if chi(tau, xi) == 0:
            return _greatest(eval_o_tc(validate(rows)))
        m_ch, _ = me(validate(rows))
        return _greatest(eval_o_tc(m_ch))
    return PredResult("none")


def pred2(a):
    """Greatest <2-predecessor per the main theorem, part b)."""
    if is_zero(a):
        return PredResult("none")
    if is_ups_term(a) and end(a.sub[0]) is not ONE:
        return PredResult("limit", scheme=("upsilon2", a.sub[0]))
    ch = tc_assign(a)
    n = ch.n
    mn = ch.m[n - 1]
    if mn > 2:
        return _greatest(ch.o_at(n, mn - 1))
    (l, j), tval = ch.unit(n)
    lam, t, s_list, segs = _chain_seg(ch)
    if j > 0:
        return _greatest(ch.o_at(l, j + 1))
    if (l, j) == (1, 0):
        base = upsilon(lam) if not is_zero(lam) else ZERO
        if tval is _one_plus(lam) and cmp(tval, a) < 0:
            return _greatest(base)
        return PredResult("none")
    # (l, j) = (s_j, 0)
    pos = s_list.index(l)
    lam_j, t_j = segs[pos]
    if t_j == 0:
        return _greatest(upsilon(lam_j))
    return _greatest(upsilon(add(lam_j, from_nat(t_j + 1))))


def _one_plus(lam):
    return ONE if is_zero(lam) else upsilon(lam)


def in_I(iota):
    """iota > 1 and not of the form lam+1 with lam a limit."""
    if cmp(iota, ONE) <= 0:
        return False
    ps = parts(iota)
    if ps[-1] is ONE:
        pre = add_all(ps[:-1])
        if is_limit(pre):
            return False
    return True


def _pred2_limit_contains(scheme, x):
    kind = scheme[0]
    lam = scheme[1]
    if kind != "upsilon2":
        raise InvariantError("unexpected scheme")
    # Pred2(ups_lam) = { ups_{z+k} : 0 < z+k < lam, z in Lim_0, k != 1 }
    if not is_ups_term(x):
        return False
    idx = x.sub[0]
    if cmp(idx, lam) >= 0 or is_zero(idx):
        return False
    _z, k = seg_pair_of_index(idx)
    return k != 1


def le2(a, b):
    """a <=2 b decided by descending greatest <2-predecessor chains."""
    guard = 0
    while True:
        c = cmp(a, b)
        if c == 0:
            return True
        if c > 0:
            return False
        r = pred2(b)
        if r.kind == "none":
            return False
        if r.kind == "greatest":
            g = r.value
            if a is g:
                return True
            if cmp(a, g) > 0:
                return False
            b = g
        else:
            return _pred2_limit_contains(r.scheme, a)
        guard += 1
        if guard > 10000:
            raise InvariantError("le2 descent exceeded budget")


def _le1_limit_step(a, r, b):
    kind = r.scheme[0]
    if kind == "upsilon":
        lam = r.scheme[1]
        # Pred1(ups_lam) = union of Pred1(ups_xi), xi < lam
        if not is_ups_term(a) and cmp(a, upsilon(lam)) >= 0:
            return None
        xi = _index_above(a, lam)
        if xi is None:
            return None
        return upsilon(xi)
    ch = r.scheme[1]
    xi = _nu_coordinate(a, ch)
    for _ in range(3):
        rows = modify_last(ch, xi)
        if is_chain(rows):
            v = eval_o_tc(validate(rows))
            if cmp(v, a) > 0:
                return v
        xi = add(xi, ONE)
    return None


def _index_above(a, lam):
    """Some xi < lam with a < ups_xi (minimal-ish), or None."""
    la, m = upsilon_seg(a)
    idx = add(la, from_nat(m + 1))
    if cmp(idx, lam) < 0:
        return idx
    return None


def _nu_coordinate(a, ch):
    """The least xi with o(ch[xi]) > a, approximated from tc(a)."""
    ach = tc_assign(a)
    n = ch.n
    mn = ch.m[n - 1]
    pref = ch.rows[:n - 1] + (ch.rows[n - 1][:mn - 1],)
    arows = ach.rows
    if len(arows) >= n and arows[:n - 1] == pref[:n - 1] and \
            arows[n - 1][:mn - 1] == pref[n - 1] and len(arows[n - 1]) >= mn:
        e = arows[n - 1][mn - 1]
        return add(e, ONE)
    return ONE


def le1(a, b):
    """a <=1 b via the predecessor forest."""
    guard = 0
    while True:
        c = cmp(a, b)
        if c == 0:
            return True
        if c > 0:
            return False
        r = pred1(b)
        if r.kind == "none":
            return False
        if r.kind == "greatest":
            g = r.value
            if a is g:
                return True
            if cmp(a, g) > 0:
                return False
            b = g
        else:
            nxt = _le1_limit_step(a, r, b)
            if nxt is None:
                return False
            if cmp(nxt, b) >= 0:
                raise InvariantError("le1 limit step failed to descend")
            b = nxt
        guard += 1
        if guard > 10000:
            raise InvariantError("le1 descent exceeded budget")


def gbo(ch):
    """Greatest branching point."""
    n = ch.n
    mn = ch.m[n - 1]
    if mn == 1:
        star = ch
    else:
        try:
            rows = modify_last(ch, mu(ch.t_end(n, mn - 1)))
            star = validate(rows)
        except (UndefinedOperator, DomainError, ChainError):
            star = ch
    c = star.cml()
    if c is None:
        return (n, mn)
    i, j = c
    return gbo(ch.initial(i, j + 1))


def lh2(a):
    """Maximum <=2-successor (Corollary, parts 1 and 2a)."""
    if is_zero(a):
        return ReachValue(ZERO)
    if is_ups_term(a):
        idx = a.sub[0]
        lam, m = seg_pair_of_index(idx)
        if m == 1:
            return ReachValue(a)  # ups_{lam+1}
        return ReachValue(infinite=True)
    ch = tc_assign(a)
    n, mn = ch.n, ch.m[ch.n - 1]
    if mn == 1:
        return ReachValue(a)
    val, _etamax, _step = _succ2_data(ch, a)
    return ReachValue(val)


def _succ2_data(ch, a):
    """(lh2 value, eta_max, stride) for the m_n > 1 case."""
    n, mn = ch.n, ch.m[ch.n - 1]
    tau = ch.t_end(n, mn - 1)
    ttil = ch.t_tilde(n, mn - 1)
    i0, j0 = ch.ref_pair(n, mn)
    svec = ch.rs(i0, j0) if (i0, j0) != (1, 0) else ()
    ctx = context(svec)
    rho = varrho(tau, ch.t_end(n, mn))
    val = add(kappa(ctx, rho), dp(ctx, rho))
    nu_q, _rem = divmod_by(val, ttil)
    eta_max = nu_q
    if chi(tau, ch.t_end(n, mn)) == 1:
        eta_max = minus_one(eta_max)
    return add(a, mul(ttil, eta_max)), eta_max, ttil


def succ2_enum(a, budget=10):
    """The first `budget` elements of Succ2(a)."""
    if is_zero(a):
        return [ZERO]
    if is_ups_term(a):
        idx = a.sub[0]
        lam, m = seg_pair_of_index(idx)
        if m == 1:
            return [a]
        if m == 0:
            out = []  # ups_lam * (1+xi)
            for k in range(budget):
                out.append(mul(a, from_nat(k + 1)))
            return out
        step = upsilon(add(lam, from_nat(m - 1)))
        return [add(a, mul(step, from_nat(k))) for k in range(budget)]
    ch = tc_assign(a)
    n, mn = ch.n, ch.m[ch.n - 1]
    if mn == 1:
        return [a]
    _val, eta_max, step = _succ2_data(ch, a)
    out = []
    k = ZERO
    while len(out) < budget and cmp(k, eta_max) <= 0:
        out.append(add(a, mul(step, k)))
        kn = add(k, ONE)
        if cmp(kn, k) == 0:
            break
        k = kn
    return out


def lh(a):
    """Maximum <=1-successor (Corollary, part 2b)."""
    if is_zero(a):
        return ReachValue(ZERO)
    if is_ups_term(a):
        return ReachValue(infinite=True)
    ch = tc_assign(a)
    n0, m0 = gbo(ch)
    mq = max(m0 - 1, 1)
    svec = ch.ers(n0, mq)
    ctx = context(svec)
    base = ch.o_at(n0, mq)
    if is_ups_term(base):
        return ReachValue(infinite=True)
    return ReachValue(add(base, dp(ctx, ch.t_end(n0, mq))))


# ---------------------------------------------------------------------------
# finite substructures and coverings

class FiniteSubstructure:
    def __init__(self, points):
        pts = sorted(set(points), key=lambda t: t.uid)
        pts.sort(key=_cmp_key)
        self.points = pts
        n = len(pts)
        self.r1 = [[False] * n for _ in range(n)]
        self.r2 = [[False] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                if le1(pts[i], pts[j]):
                    self.r1[i][j] = True
                if le2(pts[i], pts[j]):
                    self.r2[i][j] = True


class _CmpKey:
    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return cmp(self.t, other.t) < 0


def _cmp_key(t):
    return _CmpKey(t)


def substructure(points):
    return FiniteSubstructure(points)


def is_covering(mapping, xs, ys):
    """mapping: dict from X-points to Y-points; checks order preservation
    and <=i-connection maintenance."""
    xs = list(xs)
    for x in xs:
        if x not in mapping:
            raise DomainError("covering: map not total on X")
    imgs = [mapping[x] for x in xs]
    if len(set(t.uid for t in imgs)) != len(imgs):
        return False
    for i, x in enumerate(xs):
        for j, y in enumerate(xs):
            cxy = cmp(x, y)
            cij = cmp(imgs[i], imgs[j])
            if (cxy < 0) != (cij < 0) or (cxy == 0) != (cij == 0):
                return False
            if cxy <= 0:
                if le1(x, y) and not le1(imgs[i], imgs[j]):
                    return False
                if le2(x, y) and not le2(imgs[i], imgs[j]):
                    return False
    return True
