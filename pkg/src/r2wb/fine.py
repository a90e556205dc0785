"""Fine-structure operators feeding the tracking machinery: mu, lambda,
chi, varrho, the base-reduction bar, the hull bound hat, localization,
sk, mts, and the climb refinement h.

mu and lambda are computed from the collapsing argument of an epsilon
term: for theta^sigma(Omega*d + eta),

    mu     = omega ** d[Omega := alpha]
    lambda = alpha * d[Omega := alpha] + logend(eta)

anchored by the pinned values mu_{ups_{l+k}} = ups_{l+k+1} = lambda,
lambda_{ups_l} = ups_{l+1}, mu^tau_{tau^inf} = (tau^inf)^inf,
lambda_{eps_0} = eps_0, lambda_{eps_om} = eps_om + 1,
lambda_{eps_om^2} = eps_om^2 + 2, and validated by the round-trip and
order-isomorphism suites."""

from .terms import (
    ZERO, ONE, OMEGA, add, add_all, lsub, mul, cmp, omega_pow, theta,
    upsilon, from_nat, nat_value, parts, anf, end, log, logend, mnf,
    is_principal, is_zero, is_eps, lvl, largest_eps_leq, omega_anchor,
    left_div, eps_closure, term_sort_key,
    UndefinedOperator, DomainError, NoLeftQuotient,
)
from .upsilon import seg_kappa
from . import _kernel as K

_OM1 = omega_anchor(1)

_mu_memo = {}
_lam_memo = {}


def _eps_decompose(t):
    """For a countable epsilon atom: (sigma_or_None, Omega-part, eta)."""
    if t.kind != K.K_TH or t.i != 0:
        raise DomainError("not a collapsing atom")
    tau, a = t.sub
    hi = []
    lo = []
    for p in parts(a):
        (hi if lvl(p) >= 1 else lo).append(p)
    return tau, add_all(hi), add_all(lo)


def _collapse(d, alpha):
    """Substitute the anchor Omega by alpha inside the coefficient d."""
    k = d.kind
    if k == K.K_ZERO or lvl(d) == 0:
        return d
    if k == K.K_SUM:
        return add_all([_collapse(p, alpha) for p in d.sub])
    if k == K.K_W:
        return omega_pow(_collapse(d.sub[0], alpha))
    if d is _OM1:
        return alpha
    raise DomainError("coefficient collapse beyond the supported fragment")


def mu(tau):
    """Largest nu-index bound of the base tau (undefined at limit upsilons)."""
    r = _mu_memo.get(tau.uid)
    if r is not None:
        return r
    if tau.kind == K.K_UPS:
        idx = tau.sub[0]
        if end(idx) is not ONE:
            raise UndefinedOperator("mu undefined at limit upsilon points")
        r = upsilon(add(idx, ONE))
    elif is_eps(tau) and lvl(tau) == 0:
        _, om_part, _ = _eps_decompose(tau)
        if is_zero(om_part):
            raise DomainError("mu: argument is not an epsilon number")
        delta = left_div(_OM1, om_part)
        r = omega_pow(_collapse(delta, tau))
    else:
        raise DomainError("mu: argument outside E")
    _mu_memo[tau.uid] = r
    return r


def lambda_op(tau):
    """Index of the largest relative <=1-component (undefined at 0)."""
    r = _lam_memo.get(tau.uid)
    if r is not None:
        return r
    if is_zero(tau):
        raise UndefinedOperator("lambda_0 is undefined")
    if tau.kind == K.K_UPS:
        r = upsilon(add(tau.sub[0], ONE))
    elif is_eps(tau) and lvl(tau) == 0:
        _, om_part, eta = _eps_decompose(tau)
        delta = left_div(_OM1, om_part)
        r = mul(tau, _collapse(delta, tau))
        if not is_zero(eta):
            r = add(r, logend(eta))
    else:
        raise DomainError("lambda: argument outside E")
    _lam_memo[tau.uid] = r
    return r


def is_limit(t):
    return not is_zero(t) and end(t) is not ONE


def minus_one(t):
    """t - 1 if t is a successor, else t (the paper's dotted minus)."""
    ps = parts(t)
    if ps and ps[-1] is ONE:
        return add_all(ps[:-1])
    return t


def chi(tau, xi):
    """Flag for a main-line index carrying a <=2-copy.

    Reconstruction: 1 exactly for non-epsilon limit indices at or above
    the base; pinned by chi^{ups_l}(xi) = 1 on the maximal-extension
    kappa indices and chi(0) = 0, chi^{eps_0}(n or omega) = 0."""
    if is_zero(xi):
        return 0
    if not is_limit(xi):
        return 0
    if is_eps(xi):
        return 0
    return 1 if cmp(xi, tau) >= 0 else 0


def chi_check(tau, xi):
    """The dual flag used in the nu successor clause."""
    return 1 - chi(tau, xi)


def varrho(tau, xi):
    """Critical offset: tau * (l' + q - chi^tau(l')) for logend(xi) = l'+q."""
    if is_zero(xi):
        return ZERO
    le = logend(xi)
    lam, q = _limit_finite(le)
    amount = le
    if chi(tau, lam):
        amount = minus_one(le) if q > 0 else lam
    return mul(tau, amount)


def _limit_finite(t):
    ps = list(parts(t))
    q = 0
    while ps and ps[-1] is ONE:
        ps.pop()
        q += 1
    return (add_all(ps) if ps else ZERO), q


def bar(x):
    """Base reduction: the epsilon core of x (below x when x is epsilon)."""
    if is_zero(x):
        raise DomainError("bar(0)")
    if is_eps(x):
        if x.kind == K.K_UPS:
            idx = x.sub[0]
            if end(idx) is ONE:
                return upsilon(lsub(ONE, idx))
            raise DomainError("bar at limit upsilon")
        tau, _, _ = _eps_decompose(x)
        base = ONE if tau is None else tau
        best = base
        for e in eps_closure(x):
            if e is not x and cmp(e, best) > 0 and cmp(e, x) < 0:
                best = e
        return best
    e = largest_eps_leq(x)
    if e is not None:
        return e
    return mnf(parts(x)[0])[-1] if is_principal(x) else mnf(end(x))[-1]


def hat(gamma):
    """The least epsilon above gamma (the climb bound for h)."""
    if gamma.kind == K.K_UPS:
        raise DomainError("hat undefined on Im(upsilon)")
    if not is_eps(gamma):
        raise DomainError("hat: argument outside E")
    tau, a = gamma.sub
    return theta(0, tau, add(a, ONE))


def localize(alpha, beta):
    """The alpha-localization of beta: alpha = b_0 < ... < b_n = beta."""
    if cmp(alpha, beta) > 0:
        raise DomainError("localization: beta below alpha")
    chain = [alpha]
    for e in eps_closure(beta):
        if cmp(e, alpha) > 0 and cmp(e, beta) < 0:
            chain.append(e)
    if beta is not alpha:
        chain.append(beta)
    return tuple(chain)


def sk(beta, gamma):
    """Maximal climb sequence (delta_1, ..., delta_l) from gamma with
    width beta."""
    if not is_eps(gamma) or gamma.kind == K.K_UPS:
        raise DomainError("sk: gamma must be an epsilon outside Im(upsilon)")
    seq = [gamma]
    prev = ONE
    steps = 0
    while True:
        cur = seq[-1]
        if not (is_eps(cur) and cmp(cur, prev) > 0):
            break
        try:
            m = mu(cur)
        except (UndefinedOperator, DomainError):
            break
        if cmp(beta, m) > 0:
            break
        prev = cur
        seq.append(bar(mul(m, beta)))
        steps += 1
        if steps > 256:
            raise DomainError("sk failed to terminate")
    return tuple(seq)


def mts(alpha, beta, tau_for_mu=None):
    """Minimal tracking sequence of beta over alpha along the
    alpha-localization."""
    if alpha is beta:
        return (alpha,)
    loc = localize(alpha, beta)
    n = len(loc) - 1
    for i in range(n):
        ai = loc[i]
        if cmp(ai, beta) < 0 and is_eps(ai):
            try:
                m = mu(ai)
            except (UndefinedOperator, DomainError):
                continue
            if cmp(beta, m) <= 0:
                return mts(alpha, ai) + (beta,) if ai is not alpha else (alpha, beta)
    return (alpha,)


def h_beta(avec_gamma, beta):
    """Refine the last entry gamma of an RS-sequence by the width beta."""
    if not avec_gamma:
        raise DomainError("h: empty sequence")
    avec, gamma = avec_gamma[:-1], avec_gamma[-1]
    if gamma.kind == K.K_UPS:
        raise DomainError("h: gamma in Im(upsilon)")
    ghat = hat(gamma)
    if cmp(beta, gamma) > 0 and cmp(beta, ghat) < 0:
        seq = mts(gamma, beta)
        return _h_clause1(avec, gamma, seq, beta)
    if cmp(beta, ONE) > 0 and cmp(beta, gamma) <= 0:
        try:
            m = mu(gamma)
        except (UndefinedOperator, DomainError):
            return avec + (gamma,)
        if cmp(beta, m) <= 0:
            return avec + sk(beta, gamma)
        return avec + (gamma,)
    raise DomainError("h: width out of range")


def _h_clause1(avec, gamma, seq, beta):
    # mts^gamma(beta) = etas ^ (eps, beta); result avec ^ etas ^ sk_beta(eps)
    if seq[-1] is not beta or len(seq) < 2:
        raise DomainError("h: clause-1 shape")
    eps = seq[-2]
    etas = seq[:-2]
    return avec + tuple(etas) + sk(beta, eps)
