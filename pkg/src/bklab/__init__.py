"""bklab: mod-p Milnor K-theory of p-adic fields against Kähler-form models.

Modules:
  residue   finite fields and F_q(t_1, ..., t_r)
  forms     differential forms, the Cartier operator and graded models G_m^q
  padic     precision-tracked arithmetic in finite extensions of Q_p
  milnor    symbols in k_1, k_2 and their filtration
  oracle    Hilbert symbol by norm enumeration, norms, Bockstein check
  harness   check suites and reports (``bklab`` on the command line)
"""

__version__ = "0.1.0"
