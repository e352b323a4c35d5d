"""Everything computed for one couplings tuple on one rational lattice."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from . import elliptic as ell
from .finitegap import Covering, HeunSet, covering_map, heun_set
from .polyalg import Poly
from .xi import Couplings, XiData, build_Q, build_xi, exact_branch_points


@dataclass(frozen=True)
class Case:
    couplings: Couplings
    e: tuple

    @cached_property
    def xi(self) -> XiData:
        return build_xi(self.couplings, self.e)

    @cached_property
    def Q(self) -> Poly:
        return build_Q(self.xi).Q

    @cached_property
    def heun(self) -> HeunSet:
        return heun_set(self.couplings, self.e)

    @cached_property
    def covering(self) -> Covering:
        return covering_map(self.heun, self.couplings)

    @cached_property
    def lattice(self) -> ell.Lattice:
        return lattice_for(self.e)

    @property
    def genus(self):
        return self.xi.genus


@lru_cache(maxsize=32)
def lattice_for(e):
    return ell.lattice_from_branch_points(*e)


@lru_cache(maxsize=128)
def get_case(C, e) -> Case:
    return Case(Couplings.of(C), exact_branch_points(e))
