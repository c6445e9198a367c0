#!/usr/bin/env python3
"""Independent oracle for frozen expected values used by the C++ test suite.

Everything here is computed from first principles with deliberately different
algorithms than the library (bottom-up fact saturation instead of goal-directed
entailment, brute-force tree enumeration instead of level recurrences) so the
two routes can disagree if either is wrong.  Output goes to tests/golden/oracle.txt
as key=value lines; regenerate with  python3 scripts/oracle.py.
"""

import itertools
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "golden", "oracle.txt")

# ---------- types ----------

def con(name):
    return ("con", name)

def arr(a, b):
    return ("arr", a, b)

def depth(t):
    if t[0] == "con":
        return 0
    return 1 + max(depth(t[1]), depth(t[2]))

def show(t):
    if t[0] == "con":
        return t[1]
    dom = show(t[1])
    if t[1][0] == "arr":
        dom = "(" + dom + ")"
    return dom + " -> " + show(t[2])

def types_upto(base, d):
    # brute force closure, then filter by depth
    cur = {con(b) for b in base}
    for _ in range(d):
        cur = cur | {arr(a, b) for a in cur for b in cur}
    members = sorted((t for t in cur if depth(t) <= d), key=lambda t: (depth(t), show(t)))
    return members

# ---------- Id2 / Elems ground entailment by fact saturation ----------

def id2_facts(types):
    facts = set()
    changed = True
    while changed:
        changed = False
        for t in types:
            if t in facts:
                continue
            ok = t == con("Int") or (t[0] == "arr" and t[1] in facts and t[2] in facts)
            if ok:
                facts.add(t)
                changed = True
    return facts

def id2_witness(t):
    if t == con("Int"):
        return "dInt"
    return "dArr(" + id2_witness(t[1]) + ", " + id2_witness(t[2]) + ")"

def elems_facts(types):
    # dIntInt: Elems Int Int;  dFun: Elems (t->u) u  <=  Elems t u
    facts = set()
    changed = True
    while changed:
        changed = False
        for c in types:
            for e in types:
                if (c, e) in facts:
                    continue
                ok = (c == con("Int") and e == con("Int")) or (
                    c[0] == "arr" and c[2] == e and (c[1], c[2]) in facts
                )
                if ok:
                    facts.add((c, e))
                    changed = True
    return facts

# ---------- fd closure ----------

def fd_closure(j, deps):
    j = set(j)
    changed = True
    while changed:
        changed = False
        for xs, ys in deps:
            if set(xs) <= j and not set(ys) <= j:
                j |= set(ys)
                changed = True
    return sorted(j)

# ---------- carriers ----------

def carrier_size(t, n):
    if t == con("Int"):
        return n + 1
    if t == con("Bool"):
        return 3
    return carrier_size(t[2], n) ** carrier_size(t[1], n)

def int_elems(n):
    # carrier order: bottom first, then 0..n-1; printing lists non-bottom first
    return ["bot"] + [str(i) for i in range(n)]

def show_table(entries):
    # entries: list of (domain label, value label) in carrier order (bottom first);
    # printed with the bottom entry last
    items = entries[1:] + entries[:1]
    return "{" + ", ".join(k + "↦" + v for k, v in items) + "}"

def main():
    lines = []
    put = lambda k, v: lines.append(f"{k}={v}")

    u_int_1 = types_upto(["Int"], 1)
    u_int_2 = types_upto(["Int"], 2)
    u_ib_1 = types_upto(["Int", "Bool"], 1)
    u_ib_2 = types_upto(["Int", "Bool"], 2)
    put("universe.Int.1.size", len(u_int_1))
    put("universe.Int.1.members", "; ".join(show(t) for t in u_int_1))
    put("universe.Int.2.size", len(u_int_2))
    put("universe.Int.2.members", "; ".join(show(t) for t in u_int_2))
    put("universe.IntBool.1.size", len(u_ib_1))
    put("universe.IntBool.1.members", "; ".join(show(t) for t in u_ib_1))
    put("universe.IntBool.2.size", len(u_ib_2))

    facts1 = id2_facts(u_int_1)
    facts2 = id2_facts(u_int_2)
    gr1 = [arr(t, t) for t in u_int_1 if t in facts1]
    put("gr.id2.depth1", "; ".join(show(t) for t in gr1))
    put("witness.Id2.IntInt", id2_witness(arr(con("Int"), con("Int"))))

    # scheme-level ground instances decompose into the per-instance
    # contributions under universe restriction: id2 at depths 1 and 2
    for d, u, facts in ((1, u_int_1, facts1), (2, u_int_2, facts2)):
        uset = set(u)
        lhs = {arr(t, t) for t in u if t in facts} & uset
        rhs = {arr(con("Int"), con("Int"))} & uset
        rhs |= {
            arr(arr(t, s), arr(t, s))
            for t in u
            for s in u
            if t in facts and s in facts
        } & uset
        assert lhs == rhs, (d, lhs, rhs)
        put(
            f"decompose.id2.depth{d}",
            "; ".join(show(t) for t in sorted(lhs, key=lambda t: (depth(t), show(t)))),
        )

    # same decomposition for elems (method shape c), base {Int,Bool}
    for d, u in ((1, u_ib_1), (2, u_ib_2)):
        uset = set(u)
        ef = elems_facts(u)
        lhs = {c for c in u if any((c, e) in ef for e in u)}
        rhs = ({con("Int")} | {arr(t, s) for t in u for s in u if (t, s) in ef}) & uset
        assert lhs == rhs, (d, lhs, rhs)
        put(
            f"decompose.elems.empty.depth{d}",
            "; ".join(show(t) for t in sorted(lhs, key=lambda t: (depth(t), show(t)))),
        )

    put("fdclosure.c.under.c_to_e", ",".join(fd_closure({"c"}, [(["c"], ["e"])])))
    put(
        "fdclosure.a.under.chain",
        ",".join(fd_closure({"a"}, [(["a"], ["b"]), (["b"], ["c"])])),
    )

    put("carrier.Int.n2", carrier_size(con("Int"), 2))
    put("carrier.Bool.n2", carrier_size(con("Bool"), 2))
    ii = arr(con("Int"), con("Int"))
    put("carrier.IntInt.n2", carrier_size(ii, 2))
    put("carrier.Int_IntInt.n2", carrier_size(arr(con("Int"), ii), 2))
    put("carrier.IntInt_IntInt.n2", carrier_size(arr(ii, ii), 2))
    # literal enumeration sanity: all total tables {bot,0,1} -> {bot,0,1}
    tables = list(itertools.product(int_elems(2), repeat=3))
    assert len(tables) == 27
    put("carrier.IntInt.n2.enumerated", len(tables))

    # value printing freezes (bottom printed last)
    bot = "⊥"
    put("print.succ.n2", show_table([(bot, bot), ("0", "1"), ("1", "0")]))
    put("print.id.IntInt.n2", show_table([(bot, bot), ("0", "0"), ("1", "1")]))

    # improvement example: Elems c e, Elems c e2 agree at {0}; unify later onto earlier
    put("improve.elems.pair", "e2:=e")

    # unify_at_indices on Elems K1 Int vs Elems K1 Bool
    put("unify_at.K1.heads.idx0", "ok-empty")
    put("unify_at.K1.heads.idx1", "clash")

    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} oracle lines to {os.path.normpath(OUT)}")

if __name__ == "__main__":
    main()
