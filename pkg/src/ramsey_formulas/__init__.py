"""Exact evaluators for formulas whose vanishing decides diagonal Ramsey numbers.

Every formula is computed in exact arithmetic (integers, rationals, integer
polynomials, cyclotomic integers) and cross-checked against brute-force
enumeration of labeled graphs.
"""

from .combinatorics import (Graph, IncidenceMatrix, SubsetFamily, build_incidence, complement,
                            count_ramsey_graphs, divisibility_check, edge_index, incidence_number,
                            is_k_ramsey, ksubset_rank, ksubset_unrank, multiplicity)
from .errors import (BudgetExceeded, ConsistencyError, DivisibilityViolated, IrrationalQInExactMode,
                     NotInDomain, OrderMismatch, ParameterError, PreconditionError, RamseyFormulaError,
                     SamplerExhausted, WrongResidueClass)
from .exact import (BivariatePolynomial, CyclotomicInteger, IntPolynomial, ScaledCyclotomic,
                    cos_pi_rational, cyclotomic_polynomial, sin_pi_rational)
from .pnk import (AssignmentMatrix, PnkReport, compute_P_fast, compute_P_naive, lucas_odd_binomial,
                  phi_abG, phi_direct, phi_formula, ramsey_probability_via_P, sample_E_circ,
                  sigma_involution, turan_vanishing_check)
from .qnk import (ParityConstraintSystem, ParityKernel, QnkReport, build_parity_system, compute_Q,
                  compute_Q_naive, kernel_basis, ramsey_probability_via_Q)
from .trig import (FormulaResult, compute_B, eval_general_incidence, eval_general_mult, eval_thm21,
                   eval_thm22, sin_product_sum)

__version__ = "0.1.0"
