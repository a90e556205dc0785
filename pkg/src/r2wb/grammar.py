"""Text grammar for terms and tracking chains.

    0, decimal naturals, w, w^<factor>, <term>*<term|nat>, <term>+<term>,
    th_<i>[<tau>](<arg>) with [tau] optional at level 0, v[<term>],
    parentheses.

The printer emits the same grammar deterministically: ANF parts joined
by '+', equal parts grouped as <piece>*<count>, principal pieces printed
through their multiplicative normal form."""

from .terms import (
    ZERO, ONE, OMEGA, add, mul, omega_pow, theta, upsilon, from_nat,
    nat_value, parts, anf, mnf, log, is_principal, is_zero, DomainError,
)
from . import _kernel as K


class ParseError(Exception):
    def __init__(self, msg, pos):
        super().__init__("%s (at byte %d)" % (msg, pos))
        self.pos = pos


class _Scanner:
    def __init__(self, s):
        self.s = s
        self.i = 0

    def skip_ws(self):
        while self.i < len(self.s) and self.s[self.i] in " \t":
            self.i += 1

    def peek(self):
        self.skip_ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self, ch):
        self.skip_ws()
        if self.i < len(self.s) and self.s[self.i] == ch:
            self.i += 1
            return True
        return False

    def expect(self, ch):
        if not self.take(ch):
            raise ParseError("expected %r" % ch, self.i)

    def nat(self):
        self.skip_ws()
        j = self.i
        while j < len(self.s) and self.s[j].isdigit():
            j += 1
        if j == self.i:
            raise ParseError("expected number", self.i)
        n = int(self.s[self.i:j])
        self.i = j
        return n


def parse(s):
    sc = _Scanner(s)
    t = _sum(sc)
    sc.skip_ws()
    if sc.i != len(sc.s):
        raise ParseError("trailing input", sc.i)
    return t


def _sum(sc):
    t = _prod(sc)
    while sc.take("+"):
        t = add(t, _prod(sc))
    return t


def _prod(sc):
    t = _factor(sc)
    while sc.take("*"):
        t = mul(t, _factor(sc))
    return t


def _factor(sc):
    sc.skip_ws()
    c = sc.peek()
    if c == "(":
        sc.take("(")
        t = _sum(sc)
        sc.expect(")")
        return t
    if c.isdigit():
        return from_nat(sc.nat())
    if c == "w":
        sc.i += 1
        if sc.take("^"):
            return omega_pow(_factor(sc))
        return OMEGA
    if c == "v":
        sc.i += 1
        sc.expect("[")
        idx = _sum(sc)
        sc.expect("]")
        return upsilon(idx)
    if c == "t":
        if not sc.s.startswith("th_", sc.i):
            raise ParseError("expected term", sc.i)
        sc.i += 3
        lev = sc.nat()
        tau = None
        if sc.take("["):
            tau = _sum(sc)
            sc.expect("]")
        sc.expect("(")
        arg = _sum(sc)
        sc.expect(")")
        try:
            return theta(lev, tau, arg)
        except DomainError as e:
            raise ParseError(str(e), sc.i)
    raise ParseError("expected term", sc.i)


def _is_atomic(s):
    depth = 0
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif depth == 0 and ch in "+*":
            return False
    return True


def _print_factor(t):
    s = print_term(t)
    return s if _is_atomic(s) else "(" + s + ")"


def _print_principal(p):
    if p is ONE:
        return "1"
    if p.kind == K.K_UPS:
        return "v[" + print_term(p.sub[0]) + "]"
    if p.kind == K.K_TH:
        tau, arg = p.sub
        if p.i == 0 and tau is not None:
            return "th_0[" + print_term(tau) + "](" + print_term(arg) + ")"
        return "th_%d(%s)" % (p.i, print_term(arg))
    # omega power
    x = p.sub[0]
    if x is ONE:
        return "w"
    n = nat_value(x)
    if n >= 0:
        return "w^%d" % n
    fs = mnf(p)
    if len(fs) > 1:
        return "*".join(_print_factor(f) for f in fs)
    return "w^" + _print_factor(x)


def print_term(t):
    if is_zero(t):
        return "0"
    out = []
    ps = parts(t)
    i = 0
    while i < len(ps):
        p = ps[i]
        j = i
        while j < len(ps) and ps[j] is p:
            j += 1
        run = j - i
        if p is ONE:
            out.append(str(run))
        elif run == 1:
            out.append(_print_principal(p))
        else:
            out.append(_print_factor(p) + "*%d" % run)
        i = j
    return "+".join(out)


def print_chain(rows):
    return "(" + ",".join(
        "(" + ",".join(print_term(x) for x in row) + ")" for row in rows) + ")"


def parse_chain(s):
    sc = _Scanner(s)
    sc.expect("(")
    rows = []
    while True:
        sc.expect("(")
        row = [_sum(sc)]
        while sc.take(","):
            row.append(_sum(sc))
        sc.expect(")")
        rows.append(tuple(row))
        if not sc.take(","):
            break
    sc.expect(")")
    sc.skip_ws()
    if sc.i != len(sc.s):
        raise ParseError("trailing input", sc.i)
    return tuple(rows)
