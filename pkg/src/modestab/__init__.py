"""Mode stability of self-similar co-rotational wave maps.

Exact certificates (``ratpoly``, ``recurrence``, ``certify``), the mode
equation and its supersymmetric partner (``model``), floating-point cross
checks (``scanner``) and quasi-solution construction (``quasifit``).
"""

from .certify import prove_all, run_full_proof
from .ratpoly import MultiPoly, RationalFunction
from .recurrence import CASES, QuasiSolution, case_spec, default_quasi, ratio_seq
from .report import Certificate, ProofReport

__version__ = "0.1.0"

__all__ = [
    "CASES",
    "Certificate",
    "MultiPoly",
    "ProofReport",
    "QuasiSolution",
    "RationalFunction",
    "case_spec",
    "default_quasi",
    "prove_all",
    "ratio_seq",
    "run_full_proof",
]
