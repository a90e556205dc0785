"""Tracking chains: validation (conditions 1-7), units and critical
indices, cml, maximal extensions, reference sequences, evaluation,
the linear order <_TC, the inverse assignment tc, relative tracking
sequences, and closure of finite chain sets."""

from .terms import (
    ZERO, ONE, OMEGA, add, add_all, lsub, mul, cmp, upsilon, from_nat,
    parts, anf, end, log, logend, mnf, is_principal, is_zero, is_eps,
    is_ups_term, left_div, UndefinedOperator, DomainError, NoLeftQuotient,
)
from .upsilon import upsilon_seg, seg_pair_of_index, seg_kappa
from .fine import mu, lambda_op, chi, varrho, minus_one, is_limit
from .trackseq import lambda_ts, ts_rel, o_ts, InvariantError, seg_sup_of
from .kappanu import context, kappa, nu, dp
from . import _kernel as K


class ChainError(DomainError):
    def __init__(self, condition, msg):
        super().__init__("%s: %s" % (condition, msg))
        self.condition = condition


def _seg_lt(a, b):
    c = cmp(a[0], b[0])
    if c != 0:
        return c < 0
    return a[1] < b[1]


def _seg_le(a, b):
    return a == (b[0], b[1]) or _seg_lt(a, b)


def _one_plus_ups(idx_lam, t):
    """1 + ups_{lam+t} as a term."""
    if is_zero(idx_lam) and t == 0:
        return ONE
    return upsilon(add(idx_lam, from_nat(t)))


_chain_cache = {}


class Chain:
    """A validated tracking chain with its cached derived data."""

    def __init__(self, rows):
        self.rows = rows
        self.n = len(rows)
        self.m = [len(r) for r in rows]
        self.tau = [tuple(x if is_zero(x) else end(x) for x in r)
                    for r in rows]
        self._units = None
        self._rho = None
        self._cml = -1
        self._evals = None
        self._o = None

    def __repr__(self):
        from .grammar import print_chain
        return "<Chain %s>" % print_chain(self.rows)

    def key(self):
        return _rows_key(self.rows)

    def dom(self):
        for i in range(1, self.n + 1):
            for j in range(1, self.m[i - 1] + 1):
                yield (i, j)

    def idx(self, i, j):
        return self.rows[i - 1][j - 1]

    def t_end(self, i, j):
        return self.tau[i - 1][j - 1]

    def initial(self, i, j):
        """The initial chain up to (i, j), j >= 1."""
        rows = self.rows[:i - 1] + (self.rows[i - 1][:j],)
        return validate(rows)

    # ---- upsilon segment markers -------------------------------------
    def seg_data(self):
        r1 = self.rows[0]
        lam, _m = upsilon_seg(r1[0])
        if is_ups_term(r1[0]) and r1[0] is upsilon(lam) and not is_zero(lam):
            seg = (lam, 0)
        else:
            t = 0
            while t < len(r1) and r1[t] is upsilon(add(lam, from_nat(t + 1))):
                t += 1
            seg = (lam, t)
        lam, t = seg
        s_list = []
        segs = []
        ulam = upsilon(lam) if not is_zero(lam) else ZERO
        first = None
        for i in range(1, self.n + 1):
            ti1 = self.t_end(i, 1)
            if cmp(ti1, ulam) < 0:
                first = i
                break
        if first is not None:
            prev = None
            for i in range(first, self.n + 1):
                sg = upsilon_seg(self.t_end(i, 1))
                if prev is None or _seg_lt(sg, prev):
                    s_list.append(i)
                    segs.append(sg)
                    prev = sg
                elif sg == prev:
                    pass
                else:
                    prev = sg
        return lam, t, s_list, segs

    # ---- units, bases, critical indices ------------------------------
    def units(self):
        if self._units is not None:
            return self._units
        lam, t, s_list, segs = self.seg_data()
        out = []
        for i in range(1, self.n + 1):
            ti1 = self.t_end(i, 1)
            found = None
            for l in range(i, 0, -1):
                top = self.m[l - 1] - 1 if l == i else self.m[l - 1] - 1
                if l == i:
                    jmax = 0  # (l, j) <lex (i, 1) forces l < i for j >= 1
                else:
                    jmax = self.m[l - 1] - 1
                for j in range(jmax, 0, -1):
                    if cmp(self.t_end(l, j), ti1) <= 0:
                        found = ((l, j), self.t_end(l, j))
                        break
                if found:
                    break
            if found is None:
                pick = None
                for idx in range(len(s_list) - 1, -1, -1):
                    if s_list[idx] <= i:
                        pick = idx
                        break
                if pick is not None:
                    lj, tj = segs[pick]
                    found = ((s_list[pick], 0), _one_plus_ups(lj, tj))
                else:
                    found = ((1, 0), _one_plus_ups(lam, 0))
            out.append(found)
        self._units = out
        return out

    def unit(self, i):
        return self.units()[i - 1]

    def base(self, i, j):
        """tau'_{i,j}: the base of tau_{i,j}."""
        if j == 1:
            return self.unit(i)[1]
        return self.t_end(i, j - 1)

    def max_base(self, i):
        return self.base(i, self.m[i - 1])

    def rho(self, i):
        if self._rho is None:
            self._rho = [None] * self.n
        r = self._rho[i - 1]
        if r is not None:
            return r
        mi = self.m[i - 1]
        if mi == 1:
            star = self.unit(i)[1]
            r = add(log(left_div(star, self.t_end(i, 1))), ONE)
        else:
            tp = self.max_base(i)
            tau = self.t_end(i, mi)
            mu_tp = mu(tp)
            if cmp(tau, mu_tp) < 0:
                if chi(tp, tau) == 0:
                    r = add(varrho(tp, tau), tp)
                else:
                    r = add(varrho(tp, tau), ONE)
            else:
                r = add(lambda_op(tp), ONE)
        self._rho[i - 1] = r
        return r

    # ---- cml ----------------------------------------------------------
    def cml(self):
        if self._cml != -1:
            return self._cml
        self._cml = self._compute_cml()
        return self._cml

    def _compute_cml(self):
        cand = None
        for i in range(self.n, 0, -1):
            for j in range(self.m[i - 1] - 1, 0, -1):
                try:
                    if cmp(self.idx(i, j + 1), mu(self.t_end(i, j))) < 0:
                        cand = (i, j)
                        break
                except (UndefinedOperator, DomainError):
                    continue
            if cand:
                break
        if cand is None:
            return None
        i, j = cand
        if chi(self.t_end(i, j), self.t_end(i, j + 1)) != 1:
            return None
        if not self._reached_by_me(i, j + 1):
            return None
        return cand

    def _is_initial_of(self, rows):
        if len(rows) > self.n:
            return False
        for k in range(len(rows) - 1):
            if rows[k] != self.rows[k]:
                return False
        last = rows[-1]
        mine = self.rows[len(rows) - 1]
        return last == mine[:len(last)]

    def _reached_by_me(self, i, j):
        cur = self.initial(i, j)
        guard = 0
        while cur.rows != self.rows:
            nxt = ec(cur)
            if nxt is None:
                return False
            if not self._is_initial_of(nxt):
                return False
            cur = validate(nxt)
            guard += 1
            if guard > 10000:
                raise InvariantError("me loop exceeded budget")
        return True

    # ---- reference sequences -------------------------------------------
    def rs(self, i, j):
        sigma = self.tau[i - 1][:j]
        (l, jj), _tval = self.unit(i)
        if jj > 0:
            return self.rs(l, jj) + sigma
        if (l, jj) != (1, 0):
            lam_l, t_l = upsilon_seg(self.t_end(l, 1))
            pre = tuple(upsilon(add(lam_l, from_nat(k)))
                        for k in range(1, t_l + 1))
            return pre + sigma
        return sigma

    def ref_pair(self, i, j):
        if (i, j - 1) == (1, 0) or (j - 1 >= 1):
            return (i, j - 1)
        return self.ref_pair(i - 1, self.m[i - 2])

    def ers(self, i, j):
        if (i, j) == (1, 0):
            return ()
        i0, j0 = self.ref_pair(i, j)
        if (i0, j0) == (1, 0):
            return ()
        return self.rs(i0, j0)

    # ---- evaluation ------------------------------------------------------
    def evals(self):
        if self._evals is not None:
            return self._evals
        tt = {}
        at = {}
        o = {(0, 0): ZERO, (1, 0): ZERO}
        if self.rows == ((ZERO,),):
            self._evals = (tt, at, {(1, 1): ZERO})
            return self._evals
        prev_o = ZERO
        for i in range(1, self.n + 1):
            for j in range(1, self.m[i - 1] + 1):
                ctx = context(self.ers(i, j))
                if j == 1:
                    tt[(i, j)] = kappa(ctx, self.t_end(i, j))
                    at[(i, j)] = kappa(ctx, self.idx(i, j))
                    o[(i, j)] = add(prev_o, at[(i, j)])
                else:
                    tt[(i, j)] = nu(ctx, self.t_end(i, j))
                    at[(i, j)] = nu(ctx, self.idx(i, j))
                    o[(i, j)] = add(o[(i, j - 1)],
                                    lsub(tt[(i, j - 1)], at[(i, j)]))
                prev_o = o[(i, j)]
        self._evals = (tt, at, o)
        return self._evals

    def t_tilde(self, i, j):
        return self.evals()[0][(i, j)]

    def o_at(self, i, j):
        if (i, j) == (1, 0) or (i, j) == (0, 0):
            return ZERO
        if j == 0:
            return self.o_at(i - 1, self.m[i - 2])
        return self.evals()[2][(i, j)]

    def o_value(self):
        if self._o is None:
            self._o = self.o_at(self.n, self.m[self.n - 1])
        return self._o


def _rows_key(rows):
    return tuple(tuple(t.uid for t in r) for r in rows)


def validate(rows):
    """Check conditions 1-7 and return the cached Chain."""
    rows = tuple(tuple(r) for r in rows)
    key = _rows_key(rows)
    got = _chain_cache.get(key)
    if got is not None:
        if isinstance(got, Exception):
            raise got
        return got
    try:
        ch = _validate(rows)
    except ChainError as e:
        _chain_cache[key] = e
        raise
    _chain_cache[key] = ch
    return ch


def is_chain(rows):
    try:
        validate(rows)
        return True
    except (ChainError, DomainError, NoLeftQuotient, UndefinedOperator,
            InvariantError):
        return False


def _validate(rows):
    if not rows or any(not r for r in rows):
        raise ChainError("malformed", "empty rows")
    ch = Chain(rows)
    zero_chain = rows == ((ZERO,),)
    if not zero_chain:
        for r in rows:
            for x in r:
                if is_zero(x):
                    raise ChainError("C2", "zero index in a nonzero chain")
    # C1: proper initial chains are chains
    for i in range(1, ch.n + 1):
        for j in range(1, ch.m[i - 1] + 1):
            if (i, j) != (ch.n, ch.m[ch.n - 1]):
                sub = rows[:i - 1] + (rows[i - 1][:j],)
                validate(sub)
    if zero_chain:
        return ch
    # C2
    a11 = ch.idx(1, 1)
    lam, mseg = upsilon_seg(a11)
    in_window = (mseg == 0) or (mseg == 1 and
                                a11 is upsilon(add(lam, from_nat(1))))
    if not in_window:
        raise ChainError("C2", "first index outside an upsilon window")
    if is_ups_term(a11) and not is_zero(lam) and a11 is upsilon(lam):
        if not (ch.n == 1 and ch.m[0] == 1):
            raise ChainError("C2", "limit upsilon start forces a singleton")
    # C3
    for i in range(1, ch.n + 1):
        if ch.m[i - 1] > 1:
            for j in range(1, ch.m[i - 1]):
                tij = ch.t_end(i, j)
                if not is_eps(tij):
                    raise ChainError("C3", "nu-indexed end not an epsilon")
                try:
                    if cmp(ch.idx(i, j + 1), mu(tij)) > 0:
                        raise ChainError("C3", "nu index above mu")
                except UndefinedOperator:
                    raise ChainError("C3", "mu undefined at this base")
    # C4
    lam0, t0, _s, _g = ch.seg_data()
    bound = (lam0, t0)
    prev_a = prev_t = bound
    for i in range(2, ch.n + 1):
        sa = upsilon_seg(ch.idx(i, 1))
        st = upsilon_seg(ch.t_end(i, 1))
        for sg, prev in ((sa, prev_a), (st, prev_t)):
            if not _seg_le(sg, prev):
                raise ChainError("C4", "upsilon segments increase")
        prev_a, prev_t = sa, st
    # C5
    for i in range(1, ch.n + 1):
        if ch.m[i - 1] > 1:
            star = ch.unit(i)[1]
            seqs = [star] + [ch.t_end(i, j) for j in range(1, ch.m[i - 1])]
            for a, b in zip(seqs, seqs[1:]):
                if cmp(a, b) >= 0:
                    raise ChainError("C5", "bases not strictly increasing")
    # C6
    for i in range(1, ch.n):
        nxt = ch.idx(i + 1, 1)
        if cmp(nxt, ch.rho(i)) >= 0:
            raise ChainError("C6", "kappa index not below the critical index")
        ti = ch.t_end(i, ch.m[i - 1])
        if is_eps(ti) and cmp(ch.max_base(i), ti) < 0 and nxt is ti:
            raise ChainError("C6", "kappa index repeats an epsilon end")
    # C7
    if ch.m[ch.n - 1] == 1 and ch.n > 1:
        c = ch.cml()
        if c is not None and ch.t_end(ch.n, 1) is ch.t_end(c[0], c[1]):
            raise ChainError("C7", "terminal end repeats the cml end")
    return ch


# ---------------------------------------------------------------------------
# extensions

def ec(ch):
    """Extension candidate rows, or None when no candidate exists."""
    n = ch.n
    mn = ch.m[n - 1]
    tau = ch.t_end(n, mn)
    if is_ups_term(tau):
        return None  # case 0
    tp = ch.max_base(n)
    if mn == 1:
        if tp is tau:
            return None  # 1.1
        if is_eps(tau) and cmp(tp, tau) < 0:
            return ch.rows[:-1] + (ch.rows[-1] + (mu(tau),),)  # 1.2
        nxt = log(left_div(tp, tau))  # 1.3
        if is_zero(nxt):
            return None
        return ch.rows + ((nxt,),)
    if tau is ONE:
        return None  # 2.1
    if is_eps(tau) and cmp(tp, tau) < 0:
        mu_tp = mu(tp)
        lam_tp = lambda_op(tp)
        if tau is mu_tp and cmp(mu_tp, lam_tp) < 0:
            return ch.rows + ((lam_tp,),)  # 2.2.1
        return ch.rows[:-1] + (ch.rows[-1] + (mu(tau),),)  # 2.2.2
    if cmp(tau, mu(tp)) < 0:
        v = varrho(tp, tau)  # 2.3.1
        if is_zero(v):
            return None
        return ch.rows + ((v,),)
    return ch.rows + ((lambda_op(tp),),)  # 2.3.2


def me(ch, budget=10000):
    """Maximal extension; returns (chain, steps)."""
    cur = ch
    steps = 0
    while True:
        if is_ups_term(cur.t_end(cur.n, cur.m[cur.n - 1])):
            return cur, steps
        try:
            nxt = ec(cur)
        except (UndefinedOperator, DomainError, NoLeftQuotient):
            return cur, steps
        if nxt is None:
            return cur, steps
        if not is_chain(nxt):
            return cur, steps
        cur = validate(nxt)
        steps += 1
        if steps > budget:
            raise InvariantError("me exceeded its step budget")


def me_plus(ch):
    m, _ = me(ch)
    try:
        nxt = ec(m)
    except (UndefinedOperator, DomainError, NoLeftQuotient):
        return m, False
    if nxt is not None and is_chain(nxt):
        return validate(nxt), True
    return m, False


def modify_last(ch, xi):
    """alpha[xi]; the result may fail validation."""
    rows = ch.rows
    n = len(rows)
    mn = len(rows[-1])
    if not is_zero(xi) or (n, mn) == (1, 1):
        return rows[:-1] + (rows[-1][:-1] + (xi,),)
    if mn > 1:
        return rows[:-1] + (rows[-1][:-1],)
    return rows[:-1]


def is_upsilon_sequence(obj):
    """upsilon-sequence test for a row tuple or a one-row chain."""
    if isinstance(obj, Chain):
        if obj.n != 1:
            return False
        row = obj.rows[0]
    elif obj and isinstance(obj[0], tuple):
        if len(obj) != 1:
            return False
        row = obj[0]
    else:
        row = tuple(obj)
    if not row or not all(is_ups_term(x) for x in row):
        return False
    if len(row) == 1:
        idx = row[0].sub[0]
        if end(idx) is not ONE:
            return True  # (ups_lam), lam limit
    first = row[0].sub[0]
    lam = minus_one(first)
    if lam is first:
        return False
    lam2, m2 = seg_pair_of_index(lam)
    if m2 != 0:
        return False
    for k, x in enumerate(row):
        if x is not upsilon(add(lam, from_nat(k + 1))):
            return False
    return True


# ---------------------------------------------------------------------------
# the order

def cmp_tc(a, b):
    """The linear order <_TC (five-disjunct definition)."""
    ra, rb = a.rows, b.rows
    if ra == rb:
        return 0
    n, l = len(ra), len(rb)
    for i in range(min(n, l)):
        mi, ki = len(ra[i]), len(rb[i])
        for j in range(min(mi, ki)):
            if ra[i][j] is not rb[i][j]:
                return cmp(ra[i][j], rb[i][j])  # disjunct 2
        if mi < ki:
            if i == n - 1:
                return -1  # a is a proper initial chain of b
            c = cmp(ra[i + 1][0], end(ra[i][mi - 1]))  # disjunct 3
            return -1 if c < 0 else 1
        if ki < mi:
            if i == l - 1:
                return 1
            c = cmp(end(rb[i][ki - 1]), rb[i + 1][0])  # disjunct 4
            return -1 if c < 0 else 1
        # whole rows equal: disjunct 5 at the next row head
        if i + 1 < min(n, l) and ra[i + 1][0] is not rb[i + 1][0]:
            return cmp(ra[i + 1][0], rb[i + 1][0])
    return -1 if n < l else 1


# ---------------------------------------------------------------------------
# relative tracking sequences and the tc assignment

def ts_tail(beta):
    """The lambda-ts of beta with the upsilon prefix below its segment
    base dropped (the case-2 relative sequence)."""
    xi, u = upsilon_seg(beta)
    seq = lambda_ts(beta)
    if u >= 1:
        return seq[u - 1:]
    return seq


def ts_chain_rel(ch, i, j, beta):
    """ts[tau restricted to (i,j)](beta)."""
    best = None
    for (k, l) in ch.dom():
        if l < ch.m[k - 1] and (k, l) <= (i, j) and \
                cmp(ch.t_tilde(k, l), beta) <= 0:
            if best is None or best < (k, l):
                best = (k, l)
    if best is not None:
        k, l = best
        arg = mul(ch.t_end(k, l), left_div(ch.t_tilde(k, l), beta))
        return ts_rel(ch.t_end(k, l), arg)
    return ts_tail(beta)


def tc_assign(x):
    """The tracking chain assigned to x."""
    if is_zero(x):
        return validate(((ZERO,),))
    ps = parts(x)
    ch = validate((lambda_ts(ps[0]),))
    for b in ps[1:]:
        ch = _tc_add(ch, b)
    return ch


def _tc_add(ch, beta):
    """tc(o(ch) + beta) for principal beta <= end(o(ch))."""
    n = ch.n
    target = add(ch.o_value(), beta)
    B = {}
    for i in range(1, n + 1):
        for j in range(0, ch.m[i - 1]):
            B[(i, j)] = ts_chain_rel(ch, i, j, beta)
    i0j0 = (1, 0)
    for i in range(1, n + 1):
        for j in range(1, ch.m[i - 1]):
            try:
                if cmp(ch.idx(i, j + 1), mu(ch.t_end(i, j))) < 0:
                    if (i, j) > i0j0:
                        i0j0 = (i, j)
            except (UndefinedOperator, DomainError):
                continue
    k0l0 = _find_k0l0(ch, i0j0, B)
    if k0l0 == i0j0:
        out = _tc_case1(ch, i0j0, beta, B, target)
    else:
        out = _tc_case2(ch, i0j0, k0l0, beta, B, target)
    if out.o_value() is not target:
        raise InvariantError("tc assignment missed its target")
    return out


def _certify(cands, target):
    for rows in cands:
        if rows and is_chain(rows):
            c = validate(rows)
            if c.o_value() is target:
                return c
    return None


def _cond1(ch, k, B):
    nxt = ch.idx(k + 1, 1) if k < ch.n else ZERO
    head = B[(k, ch.m[k - 1] - 1)][0]
    return cmp(add(nxt, head), ch.rho(k)) >= 0


def _cond2(ch, k, l, B):
    head = B[(k, l)][0]
    return cmp(add(ch.t_end(k, l + 1), head), lambda_op(ch.t_end(k, l))) > 0


def _find_k0l0(ch, i0j0, B):
    n = ch.n
    cands = [i0j0] if i0j0 == (1, 0) else []
    for k in range(max(1, i0j0[0]), n + 1):
        for l in range(1, ch.m[k - 1] + 1):
            if (k, l) >= i0j0:
                cands.append((k, l))
    cands.append((n + 1, 1))
    for cand in cands:
        k0, l0 = cand
        ok = True
        for k in range(max(k0, 1), n + 1):
            if not _cond1(ch, k, B):
                ok = False
                break
        if ok:
            for k in range(max(k0, 1), n + 1):
                for l in range(1, ch.m[k - 1] - 1):
                    if cand < (k, l) and not _cond2(ch, k, l, B):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            return cand
    raise InvariantError("tc assignment found no (k0, l0)")


def _trunc_rows(ch, i, j):
    return ch.rows[:i - 1] + (ch.rows[i - 1][:j],)


def _tc_case1(ch, i0j0, beta, B, target):
    i0, j0 = i0j0
    if i0j0 == (1, 0):
        ttil = ZERO
        tval = ONE
    else:
        ttil = ch.t_tilde(i0, j0)
        tval = ch.t_end(i0, j0)
    c = cmp(beta, ttil) if i0j0 != (1, 0) else 1
    if c < 0:
        seq = B[(i0, j0)]
        head = add(varrho(tval, ch.t_end(i0, j0 + 1)), seq[0])
        rows = _trunc_rows(ch, i0, j0 + 1) + ((head,) + seq[1:],)
        return validate(rows)
    if c == 0:
        rows = modify_last(validate(_trunc_rows(ch, i0, j0 + 1)),
                           add(ch.idx(i0, j0 + 1), ONE))
        return validate(rows)
    # case 1.3: rebuild row i0 from a suffix of the relative sequence
    seq = ts_tail(beta)
    tails = []
    if tval is ONE:
        tails.append(seq)
    for r, x in enumerate(seq[:-1]):
        if x is tval:
            tails.append(seq[r + 1:])
    tails.append((beta,))
    cands = []
    for tail in tails:
        if i0j0 == (1, 0):
            bumped = add(ch.idx(1, 1), tail[0]) if ch.rows != ((ZERO,),) \
                else tail[0]
            cands.append(((bumped,) + tail[1:],))
        else:
            bumped = add(ch.idx(i0, j0 + 1), tail[0])
            cands.append(ch.rows[:i0 - 1] +
                         ((ch.rows[i0 - 1][:j0]) + (bumped,) + tail[1:],))
    got = _certify(cands, target)
    if got is None:
        raise InvariantError("tc case 1.3 found no valid candidate")
    return got


def _tc_case2(ch, i0j0, k0l0, beta, B, target):
    n = ch.n
    k0, l0 = k0l0
    if k0 == n + 1:
        head_seq = B[(n, ch.m[n - 1] - 1)]
        if head_seq[0] is ch.t_end(n, ch.m[n - 1]) and \
                is_eps(head_seq[0]) and \
                cmp(ch.max_base(n), head_seq[0]) < 0:
            rows = ch.rows[:-1] + (ch.rows[-1] + (ONE,),)  # 2.1
            return validate(rows)
    if k0 <= n and 1 <= l0 <= ch.m[k0 - 1] - 2:
        seq = B[(k0, l0)]
        if cmp(add(ch.t_end(k0, l0 + 1), seq[0]),
               lambda_op(ch.t_end(k0, l0))) <= 0:
            head = add(ch.t_end(k0, l0 + 1), seq[0])  # 2.2
            rows = _trunc_rows(ch, k0, l0 + 1) + ((head,) + seq[1:],)
            got = _certify([rows], target)
            if got is not None:
                return got
            return _tc_fallback_12(ch, i0j0, beta)
    k = k0 - 1
    first = ch.idx(k0, 1) if k0 <= n else ZERO
    cands = []
    for seq in (B[(k, ch.m[k - 1] - 1)], (beta,), ts_tail(beta)):
        head = add(first, seq[0])  # 2.3
        cands.append(ch.rows[:k] + ((head,) + seq[1:],))
    got = _certify(cands, target)
    if got is not None:
        return got
    return _tc_fallback_12(ch, i0j0, beta)


def _tc_fallback_12(ch, i0j0, beta):
    i0, j0 = i0j0
    if i0j0 == (1, 0):
        raise InvariantError("tc case 2 fallback without a nu position")
    if ch.t_tilde(i0, j0) is not beta:
        raise InvariantError("tc case 2 fallback: beta mismatch")
    rows = modify_last(validate(_trunc_rows(ch, i0, j0 + 1)),
                       add(ch.idx(i0, j0 + 1), ONE))
    return validate(rows)


def eval_o_tc(ch):
    return ch.o_value()


# ---------------------------------------------------------------------------
# closure

def close(chains):
    """Least superset closed under the seven closure clauses."""
    seen = {}
    work = []
    for c in chains:
        ch = c if isinstance(c, Chain) else validate(c)
        if ch.key() not in seen:
            seen[ch.key()] = ch
            work.append(ch)
    guard = 0
    while work:
        guard += 1
        if guard > 100000:
            raise InvariantError("closure failed to stabilize")
        ch = work.pop()
        for new_rows in _closure_steps(ch):
            if new_rows is None or not new_rows:
                continue
            if not is_chain(new_rows):
                continue
            nc = validate(new_rows)
            if nc.key() not in seen:
                seen[nc.key()] = nc
                work.append(nc)
    return sorted(seen.values(), key=lambda c: c.key())


def _closure_steps(ch):
    out = []
    if ch.rows == ((ZERO,),):
        return out
    n = ch.n
    mn = ch.m[n - 1]
    tau = ch.t_end(n, mn)
    tp = ch.max_base(n)
    # 1. initial chains
    for i in range(1, n + 1):
        for j in range(1, ch.m[i - 1] + 1):
            if (i, j) != (n, mn):
                out.append(ch.rows[:i - 1] + (ch.rows[i - 1][:j],))
    # 2. nu-index closure
    if mn > 1:
        xi = anf(ch.idx(n, mn))
        for l in range(1, len(xi) + 1):
            out.append(modify_last(ch, add_all(xi[:l])))
        try:
            mrows = modify_last(ch, mu(tp))
            if not is_upsilon_sequence(mrows):
                out.append(mrows)
        except (UndefinedOperator, DomainError):
            pass
    # 3. unfolding minor <=2 components
    if mn > 1:
        try:
            if cmp(tau, mu(tp)) < 0:
                if is_eps(tau) and cmp(tp, tau) < 0:
                    out.append(ch.rows[:-1] + (ch.rows[-1] + (mu(tau),),))
                else:
                    v = varrho(tp, tau)
                    if not is_zero(v):
                        out.append(ch.rows + ((v,),))
        except (UndefinedOperator, DomainError):
            pass
    # 4. kappa-index closure
    if mn == 1:
        xi = anf(ch.idx(n, 1))
        if xi:
            x1 = xi[0]
            prev_row = ch.rows[n - 2] if n > 1 else None
            did = False
            if n > 1 and len(prev_row) > 1:
                t_prev = end(prev_row[-1])
                t_prev2 = ch.t_end(n - 1, len(prev_row) - 1)
                if x1 is t_prev and is_eps(x1) and cmp(t_prev2, x1) < 0:
                    out.append(ch.rows[:n - 2] +
                               (prev_row + (mu(x1),),))
                    did = True
            if not did:
                out.append(ch.rows[:-1] + ((x1,),))
            for l in range(2, len(xi) + 1):
                out.append(ch.rows[:-1] + (tuple([add_all(xi[:l])]),))
    # 5. me-mu-chains
    if is_eps(tau) and cmp(tp, tau) < 0:
        try:
            if mn == 1:
                rows = ch.rows[:-1] + (ch.rows[-1] + (mu(tau),),)
                if not is_upsilon_sequence(rows):
                    out.append(rows)
            elif tau is mu(tp) and mu(tp) is lambda_op(tp):
                rows = ch.rows[:-1] + (ch.rows[-1] + (mu(tau),),)
                if not is_upsilon_sequence(rows):
                    out.append(rows)
        except (UndefinedOperator, DomainError):
            pass
    # 6. unfolding <=1 components
    out.extend(_clause6(ch, tau, tp, mn))
    # 7. base support
    if mn > 1 and _mu_ok(ch, n, mn):
        base = ch.t_end(n, mn - 1)
        if ch.idx(n, mn) is mu(base):
            b = _bar(base)
            if b is not None and cmp(ch.base(n, mn - 1), b) < 0 and \
                    cmp(b, base) < 0:
                out.append(ch.rows + ((b,),))
    return out


def _mu_ok(ch, n, mn):
    try:
        mu(ch.t_end(n, mn - 1))
        return True
    except (UndefinedOperator, DomainError):
        return False


def _bar(x):
    from .fine import bar
    try:
        return bar(x)
    except (UndefinedOperator, DomainError):
        return None


def _clause6(ch, tau, tp, mn):
    out = []
    xi_parts = None
    if mn == 1 and not (is_eps(tau) and cmp(tp, tau) <= 0):
        try:
            xi_parts = anf(log(left_div(tp, tau)))
        except (NoLeftQuotient, DomainError):
            xi_parts = None
    elif mn > 1:
        try:
            if tau is mu(tp) and (not (is_eps(tau) and cmp(tp, tau) < 0)
                                  or cmp(tau, lambda_op(tp)) < 0):
                xi_parts = anf(lambda_op(tp))
        except (UndefinedOperator, DomainError):
            xi_parts = None
    if not xi_parts:
        return out
    xi = add_all(xi_parts)
    if not is_zero(xi) and not is_chain(ch.rows + ((xi,),)):
        xi = add_all(xi_parts[:-1])  # condition-7 shrink
    if is_zero(xi):
        return out
    if is_chain(ch.rows + ((xi,),)):
        out.append(ch.rows + ((xi,),))
    else:
        try:
            out.append(ch.rows[:-1] + (ch.rows[-1] + (mu(tau),),))
        except (UndefinedOperator, DomainError):
            pass
    return out
