"""Where the stated q-expansion templates differ from the computed ones.

Runs the template comparison with and without the q^2 cross term
-2(d-l)(-W* - W + T* + T), and the exp(l G2 u^2) coefficient check.

    python3 scripts/template_audit.py
"""
from e8genus import genus as G

INSTANCES = [(2, 2, "e8"), (3, 2, "e8"), (4, 2, "e8"), (2, 0, "e8"), (3, 4, "e8"),
             (1, 2, "e8xe8"), (2, 2, "e8xe8"), (4, 2, "e8xe8")]


def main():
    for d, l, g in INSTANCES:
        inst = G.GenusInstance(d, l, g)
        plain = G.verify_prop_expansions(inst)
        fixed = G.verify_prop_expansions(inst, fixed_A2=True)
        print(f"{g:6} (d,l)=({d},{l})  stated: {plain.status:4}  with cross term: {fixed.status:4}"
              + (f"  first mismatch {plain.witness}" if plain.witness else ""))
    for l in (1, 2, 3):
        rep = G.verify_c_series(G.GenusInstance(2, l, "e8"))
        print(f"exp(l G2 u^2), l={l}: {rep.status}  {rep.witness or ''}")


if __name__ == "__main__":
    main()
