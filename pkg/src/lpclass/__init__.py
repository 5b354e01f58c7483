"""Certified classification of two-quotient power series in the Laguerre-Polya class.

The family is f(x) = sum a_k x^k with second quotients alternating between
a and b.  Membership in the type I class is decided by a witness on (1, a]
or a certified positivity cover, with rigorous interval arithmetic throughout.
"""

from .certificates import (SignChainCertificate, UsageError, dominance_inequality, gblock_minimum,
                           min_modulus_gblock, nu_inequality, proof_checks, quartic, quartic_unit_disk_count,
                           rho, r_radius, sign_chain, winding_zero_count)
from .membership import (GateFlags, MembershipVerdict, Status, classify, default_qinf, find_witness, gate_flags,
                         lemma_f_check, necessary_bound_I, positivity_cover, qinf_gate, sufficient_bound_H)
from .quotient import CoefficientStream, ParameterError, QuotientSpec, coefficient, coefficient_exact
from .realroot import (InconsistencyError, Polynomial, all_real, nonreal_count, real_root_count, sturm_count,
                       unit_disk_count)
from .rigor import (ConfigurationError, DomainError, Inconclusive, RigorousValue, SignVerdict, rv, sign_of)
from .scan import (BoundaryPoint, BracketError, ScanRecord, critical_b, monotonicity_audit, records_csv,
                   records_json, scan_grid)
from .sequences import (GammaSequence, Provenance, czds_sequence, jensen_polynomial, multiplier_sequence,
                        verify_czds, verify_ms)
from .series import eval_f, eval_phi, eval_phi_complex, eval_phi_mvf, eval_phi_prime, tail_bound
from .theta import ThetaSpec, compute_cn, compute_qinf, eval_g, section_member, theta_member

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
