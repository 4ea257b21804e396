"""normforge: a desk-scale workbench for definability machinery over Q.

Prime splitting in number fields and radical towers, local/global norm
equation verdicts, factor-tree boundedness certificates, compilation of the
defining formulas into polynomial systems over Z, and the elliptic curve
denominator lemmas, all in exact arithmetic.
"""

__version__ = "0.1.0"
