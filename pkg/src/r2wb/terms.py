"""Canonical term algebra: construction, comparison, CNF arithmetic and
the decomposition helpers (end, log, ANF/MNF, left division) that the
tracking machinery consumes."""

from . import _kernel as K
from ._kernel import (
    ZERO, ONE, Term, OrdError, NoLeftQuotient, UndefinedOperator, DomainError,
    cmp, add, add_all, lsub, mul, left_div, divmod_by, from_nat, nat_value,
    is_zero, is_principal, is_eps, lvl, parts, sum_of, w_pow, ups,
    largest_eps_leq,
)

OMEGA = w_pow(ONE)


def nat(n):
    return from_nat(n)


def upsilon(idx):
    """The constant upsilon_idx (upsilon_0 = 0)."""
    return ups(idx)


UPS1 = upsilon(ONE)


def anf(a):
    """Weakly decreasing additive principal parts of a (empty iff a = 0)."""
    return parts(a)


def end(a):
    """Least additive component."""
    p = parts(a)
    if not p:
        raise DomainError("end(0)")
    return p[-1]


def log(a):
    """The x with omega**x <= a < omega**(x+1); error on 0."""
    if is_zero(a):
        raise DomainError("log(0)")
    return K.log_lead(a)


def logend(a):
    """log(end(a)); by convention 0 at a = 0."""
    if is_zero(a):
        return ZERO
    return log(end(a))


def is_mult_principal(a):
    """Multiplicatively principal: 1, omega**p for principal p, epsilons."""
    if a is ONE:
        return True
    if not is_principal(a):
        return False
    x = log(a)
    return is_zero(x) or is_principal(x)


def mnf(a):
    """Weakly decreasing multiplicatively principal factors with product a."""
    if not is_principal(a):
        raise DomainError("mnf: argument not additively principal")
    if a is ONE:
        return (ONE,)
    return tuple(omega_pow(x) for x in anf(log(a)))


def omega_pow(x):
    """omega**x, collapsing at epsilon fixed points."""
    return w_pow(x)


def omega_hat(y):
    """Enumeration of the additive principal non-epsilon numbers."""
    e = largest_eps_leq(y)
    if e is None:
        return w_pow(y)
    r = lsub(e, y)
    return K._mk(K.K_W, 0, (add(add(e, ONE), r),))


def _seg_sup(tau):
    """tau^infty: the next upsilon above the relativizer tau."""
    if tau is None:
        return UPS1
    return upsilon(add(tau.sub[0], ONE))


def theta(i, tau, arg):
    """The collapsing-function application theta_i^tau(arg), normalized.

    Level 0 accepts a relativizer tau in E_1 (None meaning 1); countable
    arguments evaluate through the enumeration closed form, uncountable
    ones build epsilon-class atoms."""
    if i == 0:
        if tau is not None:
            if tau is ONE:
                tau = None
            elif not is_eps(tau):
                raise DomainError("theta relativizer must be in E_1")
        if is_zero(arg):
            return ONE if tau is None else tau
        if lvl(arg) == 0:
            base = ONE if tau is None else tau
            alpha = lsub(ONE, arg)
            return omega_hat(add(base, alpha))
        if tau is not None and tau.kind != K.K_UPS:
            raise DomainError(
                "collapsing arguments require a plain or upsilon relativizer")
        if cmp(K.coeff_max(0, arg), _seg_sup(tau)) >= 0:
            raise DomainError("theta argument has coefficients beyond the "
                              "relativizer's segment")
        return K.th(0, tau, arg)
    if tau is not None:
        raise DomainError("only level-0 collapses are relativized")
    if is_zero(arg):
        return K.th(i, None, ZERO)
    la = lvl(arg)
    if la <= i:
        omega_i = K.th(i, None, ZERO)
        alpha = lsub(ONE, arg)
        return omega_hat(add(omega_i, alpha))
    if la > i + 1:
        raise DomainError("theta_%d argument must lie below Omega_%d" % (i, i + 2))
    return K.th(i, None, arg)


def omega_anchor(i):
    """Omega_i as a term (i >= 1)."""
    if i < 1:
        raise DomainError("anchor level must be >= 1")
    return K.th(i, None, ZERO)


def is_ups_term(a):
    return a.kind == K.K_UPS


def ups_index(a):
    if a.kind != K.K_UPS:
        raise DomainError("not an upsilon constant")
    return a.sub[0]


def principal_class(a):
    """Membership flags: (P, M, E, E_1, Im(upsilon))."""
    p = is_principal(a)
    m = p and is_mult_principal(a)
    e = is_eps(a)
    e1 = e or a is ONE
    im = a.kind == K.K_UPS or is_zero(a)
    return {"additively_principal": p, "mult_principal": m,
            "epsilon": e, "e1": e1, "im_upsilon": im}


def subterms(a):
    """All interned subterms, including relativizers."""
    seen = set()
    out = []

    def walk(t):
        if t is None or t.uid in seen:
            return
        seen.add(t.uid)
        out.append(t)
        for s in t.sub:
            walk(s)

    walk(a)
    return out


def eps_closure(a):
    """Countable epsilon values occurring hereditarily in a (including a)."""
    out = []
    seen = set()
    for t in subterms(a):
        if t.uid not in seen and lvl(t) == 0 and is_eps(t):
            seen.add(t.uid)
            out.append(t)
    out.sort(key=_sort_key)
    return out


class _SortKey:
    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return cmp(self.t, other.t) < 0

    def __eq__(self, other):
        return self.t is other.t


def _sort_key(t):
    return _SortKey(t)


def term_sort_key(t):
    return _SortKey(t)
