"""
correlators/targets.py
Named exact series for `cli.py series --target`.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from correlators.builders import (
    corrected_onepoint,
    normal_ordered_npoint,
    onepoint_profile,
)
from correlators.identities import (
    closed_form_onepoint,
    euler_identity,
    theta_logderiv_form,
)
from partitions.strict import PartitionKind
from ring.expansions import MINUS, PLUS
from ring.series import Series, TruncationProfile

logger = logging.getLogger(__name__)

STRICT = PartitionKind.STRICT
ODD = PartitionKind.ODD_STRICT


@dataclass(frozen=True)
class SeriesTarget:
    """A registered series: its builder and which gradings its window carries."""
    name: str
    description: str
    builder: Callable[[TruncationProfile], Series]
    uses_t: bool = True
    uses_z: bool = False

    def profile(self, q_order: int, t_band: Optional[int] = None,
                z_order: int = 0) -> TruncationProfile:
        z_max = z_order if self.uses_z else 0
        if not self.uses_t:
            return TruncationProfile.build(q_order, {}, z_max)
        return onepoint_profile(q_order, t_band, z_max=z_max)

    def build(self, q_order: int, t_band: Optional[int] = None, z_order: int = 0) -> Series:
        profile = self.profile(q_order, t_band, z_order)
        logger.info("building target %s on %s", self.name, profile.describe())
        return self.builder(profile)


def _normal(kind):
    return lambda p: normal_ordered_npoint(kind, ("t",), p)


def _corrected(kind, convention, z_weighted=False):
    return lambda p: corrected_onepoint(kind, convention, p, z_weighted=z_weighted)


TARGETS: Dict[str, SeriesTarget] = {
    t.name: t for t in (
        SeriesTarget("nr", "normal-ordered strict one-point function", _normal(STRICT)),
        SeriesTarget("ns", "normal-ordered odd strict one-point function (hat variables)", _normal(ODD)),
        SeriesTarget("r-minus-conv", "strict one-point function, |t|<1 expansion", _corrected(STRICT, MINUS)),
        SeriesTarget("r-plus-conv", "strict one-point function, |t|>1 expansion", _corrected(STRICT, PLUS)),
        SeriesTarget("s-minus-conv", "odd strict one-point function, |t|<1 expansion", _corrected(ODD, MINUS)),
        SeriesTarget("s-plus-conv", "odd strict one-point function, |t|>1 expansion", _corrected(ODD, PLUS)),
        SeriesTarget("r-super", "z-weighted strict one-point function, |t|<1 expansion",
                     _corrected(STRICT, MINUS, z_weighted=True), uses_z=True),
        SeriesTarget("closed-r", "divisor-sum closed form, strict",
                     lambda p: closed_form_onepoint(STRICT, p)),
        SeriesTarget("closed-s", "divisor-sum closed form, odd strict",
                     lambda p: closed_form_onepoint(ODD, p)),
        SeriesTarget("theta-logderiv-r", "theta log-derivative form, strict",
                     lambda p: theta_logderiv_form(STRICT, p)),
        SeriesTarget("theta-logderiv-s", "theta log-derivative form, odd strict",
                     lambda p: theta_logderiv_form(ODD, p)),
        SeriesTarget("euler-lhs", "Euler sum side", lambda p: euler_identity(p)[0],
                     uses_t=False, uses_z=True),
        SeriesTarget("euler-rhs", "Euler product side", lambda p: euler_identity(p)[1],
                     uses_t=False, uses_z=True),
    )
}


def get_target(name: str) -> SeriesTarget:
    try:
        return TARGETS[name]
    except KeyError:
        raise KeyError(f"unknown target {name!r}; known: {', '.join(TARGETS)}")
