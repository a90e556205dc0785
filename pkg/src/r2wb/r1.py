"""Independent cross-check: the R1 reach recursion below eps_0.

    lh(w^a1 + ... + w^an) = alpha + lh(r_1) + ... + lh(r_m)

where a_n = r_1 + ... + r_m in ANF.  Implemented directly on CNF terms,
with no tracking-chain machinery, so agreement with the R2 pipeline is a
genuine cross-check."""

from .terms import (
    ZERO, ONE, add, add_all, cmp, omega_pow, parts, anf, log, is_zero,
    is_principal, is_eps, largest_eps_leq, DomainError,
)


def is_below_eps0(a):
    return largest_eps_leq(a) is None


def r1_lh(a):
    """The reach recursion, for 0 < a < eps_0."""
    if is_zero(a):
        raise DomainError("r1_lh: argument must be positive")
    if not is_below_eps0(a):
        raise DomainError("r1_lh: argument must lie below eps_0")
    return _lh(a)


def _lh(a):
    if is_zero(a):
        return ZERO
    last_exp = log(parts(a)[-1])
    out = a
    for rho in anf(last_exp):
        out = add(out, _lh(rho))
    return out


def agreement_report(samples, r2_lh):
    """TSV rows term / r1 / r2 / verdict for each sampled term."""
    from .grammar import print_term
    rows = []
    bad = 0
    for a in samples:
        v1 = r1_lh(a)
        v2 = r2_lh(a)
        ok = (not v2.infinite) and v2.value is v1
        if not ok:
            bad += 1
        rows.append("%s\t%s\t%s\t%s" % (
            print_term(a), print_term(v1),
            "inf" if v2.infinite else print_term(v2.value),
            "ok" if ok else "MISMATCH"))
    return rows, bad
