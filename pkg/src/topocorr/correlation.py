"""Topological difference and topological correlation of bifunctions."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .core import Bifunction, SimplicialComplex
from .matching import GridSpec, MatchingResult, foliation_search

DEFAULT_DEGENERACY_TOL = 1e-9
_CLAMP = 1e-12


class EmptyCollectionError(ValueError):
    pass


class Branch(str, Enum):
    FORMULA = "formula"
    DEGENERATE = "degenerate"


def _difference(result: MatchingResult) -> float:
    # the search never returns less than the component distance, so this is >= 0
    return result.value - result.component_distance


def topological_difference(phi1: Bifunction, phi2: Bifunction, K: SimplicialComplex,
                           grid: GridSpec | None = None, degree: int = 0,
                           threads: int | None = 1) -> float:
    """Surplus of the matching distance over the larger component bottleneck distance."""
    (result,) = foliation_search(K, [(phi1, phi2)], grid, degree, threads)
    return _difference(result)


def correlation_from_differences(a: float, b: float,
                                 degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> tuple[float, Branch]:
    """``2 max(a, b) / (a + b) - 1``, or 1 when ``a + b`` is within tolerance of 0."""
    if a < 0 or b < 0:
        raise ValueError("topological differences are non-negative")
    total = a + b
    if total <= degeneracy_tol:
        return 1.0, Branch.DEGENERATE
    value = 2 * max(a, b) / total - 1
    if -_CLAMP <= value < 0:
        value = 0.0
    elif 1 < value <= 1 + _CLAMP:
        value = 1.0
    return value, Branch.FORMULA


@dataclass(frozen=True)
class CorrelationReport:
    """Topological correlation of ``(f, g)``.

    ``delta_phi_f`` and ``delta_phi_g`` are the differences against
    ``(f, f)`` and ``(g, g)``, both computed on one shared grid.
    """

    delta_phi_f: float
    delta_phi_g: float
    correlation: float
    branch: Branch
    grid: GridSpec
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL
    matching_phi_f: MatchingResult | None = None
    matching_phi_g: MatchingResult | None = None

    def to_dict(self) -> dict:
        doc = {
            "delta_phi_f": self.delta_phi_f,
            "delta_phi_g": self.delta_phi_g,
            "correlation": self.correlation,
            "branch": self.branch.value,
        }
        if self.matching_phi_f is not None:
            doc["matching_phi_f"] = self.matching_phi_f.to_dict()
        if self.matching_phi_g is not None:
            doc["matching_phi_g"] = self.matching_phi_g.to_dict()
        return doc


def topological_correlation(phi: Bifunction, K: SimplicialComplex, grid: GridSpec | None = None,
                            degree: int = 0, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
                            threads: int | None = 1) -> CorrelationReport:
    grid = grid or GridSpec()
    F = Bifunction.diagonal(phi.first)
    G = Bifunction.diagonal(phi.second)
    with_f, with_g = foliation_search(K, [(phi, F), (phi, G)], grid, degree, threads)
    a, b = _difference(with_f), _difference(with_g)
    value, branch = correlation_from_differences(a, b, degeneracy_tol)
    return CorrelationReport(a, b, value, branch, grid, degeneracy_tol, with_f, with_g)


def mean_correlation(values: Sequence[float]) -> float:
    if not values:
        raise EmptyCollectionError("collection is empty")
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def collection_reports(pairs: Sequence[tuple[SimplicialComplex, Bifunction]],
                       grid: GridSpec | None = None, degree: int = 0,
                       degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
                       threads: int | None = 1) -> list[CorrelationReport]:
    if not pairs:
        raise EmptyCollectionError("collection is empty")
    return [topological_correlation(phi, K, grid, degree, degeneracy_tol, threads) for K, phi in pairs]


def collection_correlation(pairs: Sequence[tuple[SimplicialComplex, Bifunction]],
                           grid: GridSpec | None = None, degree: int = 0,
                           degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
                           threads: int | None = 1) -> float:
    """Unweighted mean of the topological correlations over the collection, summed in order."""
    reports = collection_reports(pairs, grid, degree, degeneracy_tol, threads)
    return mean_correlation([r.correlation for r in reports])


