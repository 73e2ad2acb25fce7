"""How the band parameter changes when a cyclic word is rotated or reversed.

For each rotation k (and its reversal) the script finds the exponent e with
band(w, pi) isomorphic to band(shifted w, pi**e) by testing both signs, then
compares it with the count-the-ties rule in predicted_exponent.

Run: python3 demos/band_signs.py
"""
from gentle.bunch import (FullWord, acadac_word, chessboard, observed_exponent,
                          predicted_exponent, two_index_chains)

CASES = [
    ("two-index bunch, word a c a d a c", two_index_chains(), acadac_word(), 3),
    ("chessboard(2), word x1 y1 x2 y2", chessboard(2), FullWord(("x1", "y1", "x2", "y2"), ("~", "-", "~"), True), 2),
]


def main():
    for title, B, w, shifts in CASES:
        print(title)
        for rev in (False, True):
            for k in range(shifts):
                seen = observed_exponent(B, w, k, rev)
                rule = predicted_exponent(B, w, k, rev)
                flag = "" if seen == rule else "   <- rule disagrees"
                print(f"  shift {k} {'reversed' if rev else 'forward '}: observed {seen:+d}, rule {rule:+d}{flag}")


if __name__ == "__main__":
    main()
