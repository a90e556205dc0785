"""Notation-system services: upsilon segments, the term-length measure,
and a deterministic bounded enumerator of canonical terms."""

from .terms import (
    ZERO, ONE, OMEGA, add, add_all, lsub, mul, cmp, omega_pow, theta,
    upsilon, from_nat, nat_value, parts, anf, is_principal, is_zero, is_eps,
    lvl, largest_eps_leq, omega_anchor, term_sort_key, DomainError,
)
from . import _kernel as K


def seg_kappa(a):
    """The index k with upsilon_k <= a < upsilon_{k+1} (k = 0 below ups_1)."""
    if is_zero(a):
        return ZERO
    p = parts(a)[0]
    if p.kind == K.K_UPS:
        return p.sub[0]
    if p.kind == K.K_TH:
        if p.i >= 1:
            raise DomainError("uncountable term has no upsilon segment")
        tau = p.sub[0]
        return ZERO if tau is None else tau.sub[0]
    return seg_kappa(p.sub[0])


def _split_limit_finite(k):
    """k = lam + m with lam in Lim_0 and m < omega."""
    m = 0
    ps = list(parts(k))
    while ps and ps[-1] is ONE:
        ps.pop()
        m += 1
    lam = add_all(ps) if ps else ZERO
    return lam, m


def upsilon_seg(a):
    """Lexicographically minimal (lam, m) with a < upsilon_{lam+m+1}."""
    k = seg_kappa(a)
    return _split_limit_finite(k)


def seg_pair_of_index(k):
    return _split_limit_finite(k)


def _d_skip(y):
    """ot(y minus the epsilons): the collapse-argument exponent for w**-."""
    e = largest_eps_leq(y)
    if e is None:
        return y
    s = lsub(e, y)
    if is_zero(s):
        return y  # y itself an epsilon: not a W exponent, defensive
    return add(e, lsub(ONE, s))


_len_memo = {}


def term_length(t):
    """The hereditary notation length: l(0)=0, additive over ANF,
    l(th(0))=1, l(th(arg))=l(arg)+4, upsilon parameters have length 1."""
    r = _len_memo.get(t.uid)
    if r is not None:
        return r
    k = t.kind
    if k == K.K_ZERO:
        r = 0
    elif k == K.K_SUM:
        r = sum(term_length(p) for p in t.sub)
    elif k == K.K_UPS:
        r = 1
    elif k == K.K_TH:
        arg = t.sub[1]
        r = 1 if is_zero(arg) else term_length(arg) + 4
    else:  # W(y): recover the collapsing argument
        y = t.sub[0]
        if is_zero(y):
            r = 1
        else:
            d = _d_skip(y)
            level = lvl(t)
            if level >= 1:
                arg = add(ONE, lsub(omega_anchor(level), d))
            else:
                kap = seg_kappa(t)
                if is_zero(kap):
                    arg = d
                else:
                    arg = add(ONE, lsub(upsilon(kap), d))
            r = term_length(arg) + 4
    _len_memo[t.uid] = r
    return r


class TermUniverse:
    """Finite deterministic enumeration budget.

    max_length bounds term_length, width bounds the number of ANF parts,
    ups_indices is the pool of upsilon indices, anchor level <= 2."""

    def __init__(self, bound=None, max_length=12, width=4, ups_indices=None,
                 theta_levels=2):
        self.bound = bound
        self.max_length = max_length
        self.width = width
        if ups_indices is None:
            w = OMEGA
            ups_indices = [from_nat(n) for n in range(1, 7)] + [
                w, add(w, ONE), add(w, from_nat(2)), mul(w, from_nat(2)),
                add(mul(w, from_nat(2)), ONE), omega_pow(from_nat(2)),
            ]
        self.ups_indices = ups_indices
        self.theta_levels = theta_levels


def _principals(u):
    L = u.max_length
    out = [ONE]
    for idx in u.ups_indices:
        out.append(upsilon(idx))
    # omega powers over small countable exponents, built in length layers
    layer = [ONE] + [upsilon(i) for i in u.ups_indices]
    small = list(layer)
    for _ in range(2):
        new = []
        for x in small:
            for y in ([ZERO] + layer[:4]):
                s = add(x, y) if y is not ZERO else x
                if term_length(s) + 4 <= L:
                    p = omega_pow(s)
                    if term_length(p) <= L and p not in new:
                        new.append(p)
        for p in new:
            if p not in out:
                out.append(p)
        small = [q.sub[0] if q.kind == K.K_W else q for q in new]
    # collapsing atoms over anchor arguments
    om1 = omega_anchor(1)
    anchor_args = [om1]
    if u.theta_levels >= 2:
        anchor_args.append(theta(2, None, ZERO))
    base_args = []
    for a in list(anchor_args):
        base_args.append(a)
        base_args.append(mul(a, from_nat(2)))
        base_args.append(mul(a, from_nat(3)))
        base_args.append(omega_pow(mul(a, from_nat(2))))  # a squared
    if u.theta_levels >= 2:
        base_args.append(theta(1, None, theta(2, None, ZERO)))
    coeffs = [ZERO, ONE, from_nat(2), from_nat(3), OMEGA, add(OMEGA, ONE)]
    taus = [None] + [upsilon(i) for i in u.ups_indices[:4]]
    for A in base_args:
        if lvl(A) != 1:
            continue
        for c in coeffs:
            arg = add(A, c)
            if term_length(arg) + 4 > L:
                continue
            for tau in taus:
                try:
                    p = theta(0, tau, arg)
                except DomainError:
                    continue
                if term_length(p) <= L and p not in out:
                    out.append(p)
    out = sorted(set(out), key=term_sort_key)
    return out


def enumerate_terms(u):
    """All canonical terms within the budgets, strictly increasing."""
    prin = [p for p in _principals(u) if term_length(p) <= u.max_length]
    acc = []

    def build(prefix, total, last_i, width_left):
        t = add_all(prefix) if prefix else ZERO
        acc.append(t)
        if width_left == 0:
            return
        for i in range(last_i, len(prin)):
            p = prin[i]
            lp = term_length(p)
            if total + lp > u.max_length:
                continue
            prefix.append(p)
            build(prefix, total + lp, i, width_left - 1)
            prefix.pop()

    # ANF requires weakly decreasing parts; prin is ascending, so we pick
    # from the top down by iterating combinations with non-decreasing index
    prin = list(reversed(prin))
    build([], 0, 0, u.width)
    seen = set()
    out = []
    for t in acc:
        if t.uid in seen:
            continue
        seen.add(t.uid)
        if u.bound is not None and cmp(t, u.bound) >= 0:
            continue
        out.append(t)
    out.sort(key=term_sort_key)
    return out
