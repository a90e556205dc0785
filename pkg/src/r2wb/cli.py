"""Command-line surface: parse/print terms and chains, run the structure
queries, and drive the verification suites.

Exit codes: 0 ok, 2 parse error, 3 domain error, 4 internal invariant
failure."""

import argparse
import json
import os
import random
import sys

from .terms import (
    ZERO, ONE, cmp, add, UndefinedOperator, DomainError, NoLeftQuotient,
)
from .grammar import parse, print_term, parse_chain, print_chain, ParseError
from .upsilon import upsilon_seg, term_length, TermUniverse, enumerate_terms
from .trackseq import lambda_ts, o_ts, InvariantError
from .chains import (
    validate, tc_assign, eval_o_tc, ec, me, close, cmp_tc, ChainError,
    is_chain,
)
from .queries import (
    pred1, pred2, le1, le2, lh, lh2, succ2_enum, substructure,
)
from .r1 import r1_lh, agreement_report, is_below_eps0
from . import _kernel


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _pred_payload(r):
    if r.kind == "greatest":
        return {"kind": "greatest", "value": print_term(r.value)}
    return {"kind": r.kind}


def _reach_payload(v):
    if v.infinite:
        return {"infinity": True}
    return {"value": print_term(v.value)}


def main(argv=None):
    p = argparse.ArgumentParser(prog="r2wb")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="verb", required=True)

    for verb in ("norm", "tc", "ts", "pred1", "pred2", "lh", "lh2", "seg",
                 "r1lh"):
        q = sub.add_parser(verb)
        q.add_argument("term")
    q = sub.add_parser("cmp")
    q.add_argument("term1")
    q.add_argument("term2")
    q = sub.add_parser("succ2")
    q.add_argument("term")
    q.add_argument("-n", type=int, default=3)
    for verb in ("me", "ec", "o"):
        q = sub.add_parser(verb)
        q.add_argument("chain")
    q = sub.add_parser("close")
    q.add_argument("chains", nargs="+")
    q = sub.add_parser("substructure")
    q.add_argument("terms", nargs="+")
    q = sub.add_parser("verify")
    q.add_argument("suite", choices=["isomorphism", "roundtrip", "r1",
                                     "closure"])
    q.add_argument("--bound", default=None)
    q.add_argument("--samples", type=int, default=1000)

    args = p.parse_args(argv)
    try:
        return _run(args)
    except ParseError as e:
        print("parse error: %s" % e, file=sys.stderr)
        return 2
    except (DomainError, NoLeftQuotient, UndefinedOperator, ChainError) as e:
        print("domain error: %s" % e, file=sys.stderr)
        return 3
    except InvariantError as e:
        print("invariant failure: %s" % e, file=sys.stderr)
        return 4


def _run(args):
    v = args.verb
    if v == "norm":
        t = parse(args.term)
        _emit(args, {"query": "norm", "input": args.term,
                     "value": print_term(t)}, print_term(t))
    elif v == "cmp":
        c = cmp(parse(args.term1), parse(args.term2))
        sym = "<" if c < 0 else (">" if c > 0 else "=")
        _emit(args, {"query": "cmp", "value": sym}, sym)
    elif v == "seg":
        lam, m = upsilon_seg(parse(args.term))
        _emit(args, {"query": "seg", "lambda": print_term(lam), "m": m},
              "(%s,%d)" % (print_term(lam), m))
    elif v == "tc":
        ch = tc_assign(parse(args.term))
        _emit(args, {"query": "tc", "input": args.term,
                     "chain": [[print_term(x) for x in r]
                               for r in ch.rows]},
              print_chain(ch.rows))
    elif v == "ts":
        s = lambda_ts(parse(args.term))
        txt = "(" + ",".join(print_term(x) for x in s) + ")"
        _emit(args, {"query": "ts", "values": [print_term(x) for x in s]},
              txt)
    elif v == "o":
        ch = validate(parse_chain(args.chain))
        val = eval_o_tc(ch)
        _emit(args, {"query": "o", "value": print_term(val)},
              print_term(val))
    elif v == "pred1" or v == "pred2":
        f = pred1 if v == "pred1" else pred2
        r = f(parse(args.term))
        payload = dict(_pred_payload(r), query=v, input=args.term)
        if r.kind == "greatest":
            _emit(args, payload, print_term(r.value))
        else:
            _emit(args, payload, r.kind)
    elif v == "lh" or v == "lh2":
        f = lh if v == "lh" else lh2
        r = f(parse(args.term))
        payload = dict(_reach_payload(r), query=v, input=args.term)
        _emit(args, payload, "inf" if r.infinite else print_term(r.value))
    elif v == "succ2":
        vals = succ2_enum(parse(args.term), args.n)
        payload = {"query": "succ2", "input": args.term,
                   "values": [print_term(x) for x in vals]}
        _emit(args, payload, ", ".join(print_term(x) for x in vals))
    elif v == "ec":
        ch = validate(parse_chain(args.chain))
        nxt = ec(ch)
        if nxt is None:
            _emit(args, {"query": "ec", "kind": "none"}, "none")
        else:
            _emit(args, {"query": "ec",
                         "chain": [[print_term(x) for x in r] for r in nxt]},
                  print_chain(nxt))
    elif v == "me":
        ch = validate(parse_chain(args.chain))
        m, steps = me(ch)
        _emit(args, {"query": "me", "steps": steps,
                     "chain": [[print_term(x) for x in r] for r in m.rows]},
              print_chain(m.rows))
    elif v == "close":
        chains = [validate(parse_chain(s)) for s in args.chains]
        out = close(chains)
        txt = "\n".join(print_chain(c.rows) for c in out)
        _emit(args, {"query": "close",
                     "chains": [[[print_term(x) for x in r] for r in c.rows]
                                for c in out]}, txt)
    elif v == "substructure":
        pts = [parse(s) for s in args.terms]
        st = substructure(pts)
        lines = []
        n = len(st.points)
        for i in range(n):
            for j in range(i + 1, n):
                if st.r2[i][j]:
                    rel = "<2"
                elif st.r1[i][j]:
                    rel = "<1"
                else:
                    continue
                lines.append("%s %s %s" % (print_term(st.points[i]), rel,
                                           print_term(st.points[j])))
        _emit(args, {"query": "substructure",
                     "points": [print_term(x) for x in st.points],
                     "edges": lines}, "\n".join(lines) if lines else "(none)")
    elif v == "verify":
        return _verify(args)
    return 0


def _verify(args):
    rng = random.Random(args.seed)
    if args.suite == "r1":
        univ = TermUniverse(bound=None, max_length=9, width=3,
                            ups_indices=[], theta_levels=1)
        pool = [t for t in enumerate_terms(univ)
                if not t.kind == 0 and is_below_eps0(t)]
        samples = pool if len(pool) <= args.samples else \
            rng.sample(pool, args.samples)
        rows, bad = agreement_report(samples, lh)
        for r in rows:
            print(r)
        print("# mismatches: %d / %d" % (bad, len(rows)))
        return 0 if bad == 0 else 4
    if args.suite in ("isomorphism", "roundtrip"):
        bound = parse(args.bound) if args.bound else None
        univ = TermUniverse(bound=bound, max_length=10, width=3)
        terms = enumerate_terms(univ)
        bad = 0
        for t in terms[:args.samples]:
            ch = tc_assign(t)
            if eval_o_tc(ch) is not t:
                bad += 1
                print("MISMATCH %s" % print_term(t))
        print("# failures: %d / %d" % (bad, min(len(terms), args.samples)))
        return 0 if bad == 0 else 4
    if args.suite == "closure":
        univ = TermUniverse(max_length=8, width=2)
        terms = enumerate_terms(univ)
        rng.shuffle(terms)
        bad = 0
        for t in terms[:args.samples]:
            ch = tc_assign(t)
            cl = close([ch])
            cl2 = close(cl)
            if len(cl2) != len(cl):
                bad += 1
        print("# failures: %d" % bad)
        return 0 if bad == 0 else 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
