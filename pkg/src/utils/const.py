from enum import Enum


class ShapeClass(str, Enum):
    """Moment class V(mu, sigma) with an optional shape constraint."""

    GENERAL = "general"
    SYMMETRIC = "symmetric"
    UNIMODAL = "unimodal"
    UNIMODAL_SYMMETRIC = "us"


class Side(str, Enum):
    SUP = "sup"
    INF = "inf"


class SideSelection(str, Enum):
    SUP = "sup"
    INF = "inf"
    BOTH = "both"


class VaRKind(str, Enum):
    """Left-continuous (VaR-) or right-continuous (VaR+) quantile at a level."""

    LEFT = "var-"
    RIGHT = "var+"


class Method(str, Enum):
    CLOSED_FORM = "closed-form"
    ENVELOPE_INTEGRAL = "envelope-integral"
    BRACKET = "bracket"


class DistortionKind(str, Enum):
    IDENTITY = "identity"
    VAR = "var"
    VAR_PLUS = "var+"
    TVAR = "tvar"
    RVAR = "rvar"
    PH = "ph"
    PIECEWISE_LINEAR = "pwl"
    PIECEWISE_CONSTANT = "steps"


class JumpSide(str, Enum):
    """Which one-sided limit a function takes at a jump."""

    LEFT = "l"
    RIGHT = "r"


class Anchor(str, Enum):
    """Endpoint a power-law density is measured from."""

    LO = "lo"
    HI = "hi"


class KernelName(str, Enum):
    ONE = "one"
    IDENTITY = "p"
    SQRT_P = "sqrt_p"
    SQRT_ONE_MINUS_P = "sqrt_1mp"
    UNIMODAL_LEFT = "sqrt_p_8m9p"
    UNIMODAL_RIGHT = "sqrt_1mp_9pm1"
    P_ONE_MINUS_P = "p_1mp"


class BracketBranch(str, Enum):
    RIGHT = "R"
    LEFT = "L"
    THETA = "theta"


class CandidateFamily(str, Enum):
    TWO_POINT = "two-point"
    THREE_POINT = "three-point"
    LOWER_ATOM_UNIFORM = "lower-atom-uniform"
    UPPER_ATOM_UNIFORM = "upper-atom-uniform"
    CENTRED_UNIFORM = "centred-uniform"


class Command(str, Enum):
    BOUND = "bound"
    EXTREMAL = "extremal"
    VERIFY = "verify"
    SWEEP = "sweep"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class MCPToolsTags(Enum):
    BOUNDS = "BOUNDS"
    EXTREMAL = "EXTREMAL"
    ORACLE = "ORACLE"
