"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the CLI
reports as ``{"error": code, "detail": ...}``.
"""


class OrbextError(Exception):
    code = "error"
    #: CLI exit status for this family of failures.
    exit_status = 2


class InputError(OrbextError):
    code = "input_error"


class NonPositiveOrder(InputError):
    code = "non_positive_order"


class NegativeGenus(InputError):
    code = "negative_genus"


class Unsupported(InputError):
    code = "unsupported"


class FiniteOrbifold(InputError):
    code = "finite_orbifold"


class WrongSignature(InputError):
    code = "wrong_signature"


class SignatureMismatch(InputError):
    code = "signature_mismatch"


class ModulusMismatch(InputError):
    code = "modulus_mismatch"


class ShapeError(InputError):
    code = "shape_error"


class NotUnimodular(InputError):
    code = "not_unimodular"


class PermutationNotInSigma(InputError):
    code = "permutation_not_in_sigma"


class NotInvertible(InputError):
    code = "not_invertible"


class NotLiftable(InputError):
    code = "not_liftable"


class NotNonRigid(InputError):
    code = "not_nonrigid"


class WitnessInvalid(InputError):
    code = "witness_invalid"


class BudgetExceeded(OrbextError):
    code = "budget_exceeded"
    exit_status = 3


class InternalVerificationFailed(OrbextError):
    """A constructed object failed its own certificate check."""

    code = "internal_verification_failed"
    exit_status = 1
