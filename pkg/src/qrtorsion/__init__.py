"""Exact-arithmetic torsion invariants of twisted pearl complexes.

Everything is computed over the rationals or a prime field of odd
characteristic; torsion values live in the multiplicative group modulo
sign.  The package covers graded and 2-periodic Milnor torsion, the
degree spectral sequence with its page-2 and page-3 collapse patterns,
the triple-intersection-form dichotomy, seeded instance generators, a
superpotential toolkit, and a verifier tying the computation paths
together.
"""

from .fields import QQ, GF, Field, FieldError, SignClass
from .complexes import (BasedChainComplex, TwistedPearlComplex,
                        PeriodicComplex, fold_periodic, integral_homology)
from .torsion import (milnor_torsion, periodic_torsion, quantum_torsion,
                      NotNarrowError)
from .spectral import (page1, page2_rate, closed_form_r, collapsing_page,
                       minimal_model, PAGE2, PAGE3, NOT_NARROW)
from .threefold import ThreefoldHomology, TripleForm, dichotomy_class
from .models import (Page2Spec, Page3Spec, realize_morse, homology_bases,
                     lift_derivation_page2, lift_derivation_page3,
                     random_pearl)
from .superpotential import (DiscSystem, Representation, build_potential,
                             log_gradient, discriminant, d1_from_discs)
from .verifier import Instance, VerificationReport, verify_main_theorem
from .generate import generate_instance, mutate_d2

__version__ = "0.1.0"

__all__ = [
    "QQ", "GF", "Field", "FieldError", "SignClass",
    "BasedChainComplex", "TwistedPearlComplex", "PeriodicComplex",
    "fold_periodic", "integral_homology",
    "milnor_torsion", "periodic_torsion", "quantum_torsion",
    "NotNarrowError",
    "page1", "page2_rate", "closed_form_r", "collapsing_page",
    "minimal_model", "PAGE2", "PAGE3", "NOT_NARROW",
    "ThreefoldHomology", "TripleForm", "dichotomy_class",
    "Page2Spec", "Page3Spec", "realize_morse", "homology_bases",
    "lift_derivation_page2", "lift_derivation_page3", "random_pearl",
    "DiscSystem", "Representation", "build_potential", "log_gradient",
    "discriminant", "d1_from_discs",
    "Instance", "VerificationReport", "verify_main_theorem",
    "generate_instance", "mutate_d2",
    "__version__",
]
