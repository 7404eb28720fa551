"""Point counts, Weil zeta functions and p-adic measures for desk-scale varieties."""
from .errors import (BudgetExceeded, FitError, InputError, ReconstructionError,
                     SingularClassError, WeightError, ZetaforgeError)
from .fields import ExtensionField, FieldElement, PrimeField, enumerate_field, make_extension
from .polynomials import FieldPolynomial, IntPolynomial, RationalFunction, jacobian, reduce_mod_p
from .schemes import (BirationalPairSpec, Chart, ChartAtlas, GaugeDensity, VarietySpec,
                      dumps_spec, load_spec, loads_spec, validate_spec)
from .counting import (CountTable, count_affine, count_atlas, count_points, count_projective,
                       count_sequence, smoothness_check)
from .zeta import (ZetaFunction, auto_reconstruct, compare_zeta, count_polynomial_fit,
                   euler_from_zeta, pade_reconstruct, weight_split, zeta_series)
from .padic import (PadicContext, canonical_measure, haar_box, padic_norm, tube_measure,
                    valuation, weil_measure)
from .mckay import an_case, mckay_check
from .gallery import builtin_gallery, gallery_get

__version__ = "0.1.0"
