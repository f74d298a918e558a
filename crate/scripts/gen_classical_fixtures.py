"""Export classical weight-2 newforms of trivial character from PARI/GP into
the newform JSON schema used by the `frey` tool.

Usage: python3 scripts/gen_classical_fixtures.py OUTDIR LEVEL [LEVEL ...]

Requires cypari2.  Eigenvalues are exported for every prime below BOUND.
"""
import json
import sys
from fractions import Fraction

import cypari2

BOUND = 200

pari = cypari2.Pari()


def primes_below(n):
    return [int(p) for p in pari.primes([2, n - 1])]


def coords(c, deg):
    """Coordinates of a Hecke eigenvalue on the power basis 1, y, ..., y^(deg-1)."""
    if deg == 1:
        v = Fraction(str(pari.lift(c))) if pari.type(c) == "t_POLMOD" else Fraction(str(c))
        return [[v.numerator, v.denominator]]
    lifted = pari.lift(c)
    out = []
    for i in range(deg):
        v = Fraction(str(pari.polcoef(lifted, i, "y")))
        out.append([v.numerator, v.denominator])
    return out


def export(level, outdir):
    mf = pari(f"mfinit([{level},2],0)")
    forms = pari.mfeigenbasis(mf)
    fields = pari.mffields(mf)
    ps = primes_below(BOUND)
    records = []
    for idx, (form, poly) in enumerate(zip(forms, fields)):
        poly = pari(poly)
        deg = int(pari.poldegree(poly, "y"))
        hecke_poly = [int(pari.polcoef(poly, i, "y")) for i in range(deg + 1)]
        assert hecke_poly[-1] == 1, "non-monic Hecke polynomial"
        coeffs = pari.mfcoefs(form, BOUND)
        eig = [{"q": p, "f": 1, "root": None, "ap": coords(coeffs[p], deg)} for p in ps]
        records.append({
            "label": f"{level}.2.a.pari{idx}",
            "hecke_poly": hecke_poly,
            "eigenvalues": eig,
            "complete_below_norm": BOUND,
        })
    doc = {"field": "Q", "level": {"N": level}, "weight": [2], "forms": records}
    path = f"{outdir}/S2_N{level}.json"
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    print(path, len(records), "forms")


if __name__ == "__main__":
    out = sys.argv[1]
    for lvl in sys.argv[2:]:
        export(int(lvl), out)
