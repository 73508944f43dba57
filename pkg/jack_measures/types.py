from typing import Dict, List, Optional, TypedDict, Union

RationalOrFloat = Union[str, float]


class DecayDict(TypedDict):
    A: float
    r: float


class SpecializationDict(TypedDict):
    coeffs: Dict[str, List[RationalOrFloat]]
    decay: Optional[DecayDict]


class BiPolynomialTerm(TypedDict):
    q: int
    m: int
    re: RationalOrFloat
    im: RationalOrFloat


class JackVectorDict(TypedDict):
    partition: List[int]
    norm: float
    eigenvalues: List[float]
    coefficients: Dict[str, List[float]]


class GoldenDict(TypedDict):
    catalan: List[int]
    central_binomials: List[int]
    covariance_22: float
    chebyshev_variances: List[float]
