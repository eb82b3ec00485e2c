"""Numerical generator of approximate Positivstellensatz certificates.

Consumes ConstraintSystem JSON files exported by optpack (`optpack systems`)
and emits raw certificate JSON in the format optpack's verifier reads.  All
soundness checking lives on the optpack side; this package only searches for
numeric certificates and reports residuals.
"""

from .core import RawCertificate, batch, generate

__all__ = ["RawCertificate", "batch", "generate"]
