"""Enumeration functions of relativized connectivity components:
kappa (<=1-minimal points), nu (<=2-components along a main line), and
the padding dp, all indexed over a lambda-RS context."""

from .terms import (
    ZERO, ONE, add, add_all, lsub, mul, cmp, upsilon, from_nat, parts, anf,
    end, log, logend, mnf, is_principal, is_zero, is_eps, is_ups_term,
    left_div, UndefinedOperator, DomainError, NoLeftQuotient,
)
from .upsilon import upsilon_seg, seg_pair_of_index
from .fine import mu, lambda_op, chi_check, varrho
from .trackseq import o_ts, split_lambda_rs, _alpha0
from . import _kernel as K


class EnumContext:
    """A lambda-RS sequence with its derived data and memo tables."""

    def __init__(self, avec, seg=None):
        avec = tuple(avec)
        self.avec = avec
        if avec:
            sp = split_lambda_rs(avec)
            if sp is None:
                # tolerated: dp's epsilon clause builds contexts whose last
                # index may exceed the mu-bound; only the shape is needed
                lam, m = upsilon_seg(avec[0])
                self.lam, self.m, self.rest = lam, 0, avec
            else:
                self.lam, self.m, self.rest = sp
        else:
            lam, m = seg if seg is not None else (ZERO, 0)
            self.lam, self.m, self.rest = lam, m, ()
        self.alpha0 = _alpha0(self.lam, self.m)
        self.kappa_memo = {}
        self.dp_memo = {}
        self.nu_memo = {}
        self._o = None

    @property
    def alpha_n(self):
        return self.rest[-1] if self.rest else self.alpha0

    def o_value(self):
        if self._o is None:
            if not self.avec:
                raise DomainError("nu requires a nonempty context")
            self._o = o_ts(self.avec)
        return self._o


_ctx_cache = {}


def context(avec, seg=None):
    key = (tuple(t.uid for t in avec),
           None if seg is None else (seg[0].uid, seg[1]))
    c = _ctx_cache.get(key)
    if c is None:
        c = EnumContext(avec, seg)
        _ctx_cache[key] = c
    return c


GLOBAL = context(())


def global_context_for(beta):
    """The upsilon-prefix context of the global kappa at the index beta."""
    lam, m = _lex_min_seg_le(beta)
    pre = tuple(upsilon(add(lam, from_nat(j))) for j in range(1, m + 1))
    return context(pre, (lam, m))


def _lex_min_seg_le(beta):
    """Lex-minimal (lam, m) with beta <= ups_{lam+m+1}."""
    if is_ups_term(beta):
        idx = beta.sub[0]
        ps = parts(idx)
        if ps[-1] is ONE:
            return seg_pair_of_index(add_all(ps[:-1]))
        return idx, 0
    return upsilon_seg(beta)


def kappa_principal(ctx, beta):
    """kappanuprincipals: kappa at an additively principal index."""
    rest = ctx.rest
    n = len(rest)
    a_n = ctx.alpha_n
    if cmp(beta, a_n) <= 0:
        i = -1
        prev = ctx.alpha0
        if n > 0 and cmp(prev, beta) < 0:
            i = 0
            for j in range(n - 1):
                if cmp(rest[j], beta) < 0:
                    i = j + 1
        if i >= 0:
            pre = ctx.avec[:len(ctx.avec) - n]
            gvec = pre + tuple(rest[:i])
        else:
            xi, l = _lex_min_seg_le(beta)
            gvec = tuple(upsilon(add(xi, from_nat(j))) for j in range(1, l + 1))
    else:
        gvec = ctx.avec
    fs = mnf(beta)
    if not gvec:
        return o_ts((beta,))
    if len(fs) > 1 and fs[0] is gvec[-1]:
        return mul(o_ts(gvec), left_div(fs[0], beta))
    return o_ts(gvec + (beta,))


def _maybe_rebase(ctx, beta):
    """Pure upsilon-prefix contexts delegate indices beyond their segment
    to the matching prefix context (the global-kappa clause)."""
    if ctx.rest:
        return ctx
    sup = upsilon(add(ctx.lam, from_nat(ctx.m + 1)))
    if cmp(beta, sup) > 0:
        return global_context_for(beta)
    return ctx


def kappa(ctx, beta):
    r = ctx.kappa_memo.get(beta.uid)
    if r is not None:
        return r
    if is_zero(beta):
        r = ZERO
    elif beta is ONE:
        r = ONE
    elif is_principal(beta):
        r = kappa_principal(_maybe_rebase(ctx, beta), beta)
    else:
        ps = parts(beta)
        gamma = add_all(ps[:-1])
        delta = ps[-1]
        r = add(add(kappa(ctx, gamma), dp(ctx, gamma)), kappa(ctx, delta))
    ctx.kappa_memo[beta.uid] = r
    return r


def dp(ctx, beta):
    r = ctx.dp_memo.get(beta.uid)
    if r is not None:
        return r
    r = _dp(ctx, beta)
    ctx.dp_memo[beta.uid] = r
    return r


def _dp(ctx, beta):
    if is_ups_term(beta) or is_zero(beta) or beta is ONE:
        return ZERO
    if ctx.avec and beta is ctx.alpha_n:
        return ZERO
    if not is_principal(beta):
        return dp(ctx, end(beta))
    ctx = _maybe_rebase(ctx, beta)
    a_n = ctx.alpha_n
    if ctx.avec and cmp(beta, a_n) < 0:
        return dp(context(ctx.avec[:-1]), beta)
    if not is_eps(beta):
        g = left_div(a_n, beta) if cmp(beta, a_n) > 0 else beta
        out = ZERO
        for gi in anf(log(g)):
            out = add(out, add(kappa(ctx, gi), dp(ctx, gi)))
        return out
    # epsilon clause
    gctx = context(ctx.avec + (beta,))
    mu_b = mu(beta)
    lam_b = lambda_op(beta)
    return add(add(nu(gctx, mu_b), kappa(gctx, lam_b)), dp(gctx, lam_b))


def nu(ctx, beta):
    r = ctx.nu_memo.get(beta.uid)
    if r is not None:
        return r
    r = _nu(ctx, beta)
    ctx.nu_memo[beta.uid] = r
    return r


def _nu(ctx, beta):
    if not ctx.avec:
        raise DomainError("nu requires a nonempty context")
    alpha = ctx.o_value()
    if is_zero(beta):
        return alpha
    if is_principal(beta) and beta is not ONE:
        return o_ts(ctx.avec + (beta,))
    a_n = ctx.alpha_n
    ps = parts(beta)
    if ps[-1] is ONE:
        gamma = add_all(ps[:-1])
        rho = varrho(a_n, gamma)
        r = add(add(nu(ctx, gamma), kappa(ctx, rho)), dp(ctx, rho))
        if chi_check(a_n, gamma):
            r = add(r, alpha)
        return r
    gamma = add_all(ps[:-1])
    delta = ps[-1]
    rho = varrho(a_n, gamma)
    return add(add(add(nu(ctx, gamma), kappa(ctx, rho)), dp(ctx, rho)),
               nu(ctx, delta))


def kappa_global(beta):
    """The global kappa function of R2."""
    if is_zero(beta):
        return ZERO
    if is_principal(beta):
        return kappa(global_context_for(beta), beta)
    return kappa(GLOBAL, beta)


def dp_global(beta):
    if is_zero(beta):
        return ZERO
    if is_principal(beta):
        return dp(global_context_for(beta), beta)
    return dp(GLOBAL, beta)
