#!/usr/bin/env python3
"""Regenerate the bundled weight-2 newform snapshot with PARI/GP (cypari2).

Each level is written in the newform cache format used by the library:

    {"level": N, "weight": 2, "forms": [{"label", "dimension", "field_poly",
     "an", "cm_discriminant"}]}

Hecke fields are reduced with polredabs and coefficients are expressed in
the power basis of the reduced polynomial. Forms are ordered by dimension
and then by the trace sequence tr(a_1), tr(a_2), ... and labelled
N.2.a.<letters> in that order.

Usage: build_snapshot.py OUT_DIR [LEVEL ...]
"""

import json
import sys

import cypari2

DEFAULT_LEVELS = [32, 544, 2336, 2848, 3616]
NUM_AN = 600

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9)


def letters(i):
    s = ""
    while True:
        s = chr(ord("a") + i % 26) + s
        i //= 26
        if i == 0:
            return s


def rat_pair(c):
    c = pari(c)
    return [int(pari.numerator(c)), int(pari.denominator(c))]


def cm_discriminant(level, an):
    """Negative fundamental discriminant D dividing the level with a_p = 0 at every prime
    p <= NUM_AN, p not dividing the level, that is inert in Q(sqrt D)."""
    primes = [int(p) for p in pari(f"primes([3,{NUM_AN}])") if level % int(p) != 0]
    for d in range(3, level + 1):
        disc = -d
        if level % d != 0 or not int(pari(f"isfundamental({disc})")):
            continue
        inert = [p for p in primes if int(pari(f"kronecker({disc},{p})")) == -1]
        if inert and all(all(c[0] == 0 for c in an[p - 1]) for p in inert):
            return disc
    return None


def level_forms(level):
    pari(f"mf=mfinit([{level},2],0); L=mfeigenbasis(mf); F=mffields(mf)")
    count = int(pari("#L"))
    forms = []
    for j in range(1, count + 1):
        pari(f"P=F[{j}]; co=mfcoefs(L[{j}],{NUM_AN})")
        if int(pari("poldegree(P)")) == 1:
            pari("Q=y-0; al=Mod(0,Q)")
        else:
            pari("R=polredabs(P,1); Q=R[1]; al=lift(R[2])")
        dim = int(pari("poldegree(Q)"))
        poly = [int(pari(f"polcoef(Q,{k},y)")) for k in range(dim + 1)]
        pari(
            f"A=vector({NUM_AN},n,my(c=lift(co[n+1])); "
            "if(type(c)==\"t_POL\", c=lift(Mod(subst(c,y,al),Q)), c); "
            "my(v=vector(poldegree(Q),k,polcoef(c,k-1,y))); v)"
        )
        pari("T=vector(#A,n,my(v=A[n]); trace(Mod(sum(k=1,#v,v[k]*y^(k-1)),Q)))")
        an = [[rat_pair(x) for x in row] for row in pari("A")]
        traces = [int(x) for x in pari("T")]
        cm = cm_discriminant(level, an)
        forms.append(
            {
                "dimension": dim,
                "field_poly": poly,
                "an": an,
                "cm_discriminant": cm if cm != 0 else None,
                "_key": (dim, traces),
            }
        )
    forms.sort(key=lambda f: f["_key"])
    out = []
    for i, f in enumerate(forms):
        out.append(
            {
                "label": f"{level}.2.a.{letters(i)}",
                "dimension": f["dimension"],
                "field_poly": f["field_poly"],
                "an": f["an"],
                "cm_discriminant": f["cm_discriminant"],
            }
        )
    return {"level": level, "weight": 2, "forms": out}


def main():
    out_dir = sys.argv[1]
    levels = [int(a) for a in sys.argv[2:]] or DEFAULT_LEVELS
    for level in levels:
        doc = level_forms(level)
        path = f"{out_dir}/level_{level}.json"
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, separators=(",", ":"))
        print(f"{path}: {len(doc['forms'])} forms")


if __name__ == "__main__":
    main()
